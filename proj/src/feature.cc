/*!
 *  Copyright (c) 2026 by Contributors
 * \file feature.cc
 * \brief FeatureMatrix, FeatureDict and dense primitives.
 */
#include <mpgraph/feature.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>

#include "io_util.h"

namespace mpg {

FeatureMatrix::FeatureMatrix(size_t rows, size_t cols, std::span<const double> values)
    : rows_(rows), cols_(cols), data_(values.begin(), values.end()) {
  MPG_CHECK_SHAPE(values.size() == rows * cols,
                  values.size() << " values cannot fill a " << rows << "x" << cols
                                << " matrix");
}

FeatureMatrix FeatureMatrix::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const size_t cols = rows.size() ? rows.begin()->size() : 0;
  FeatureMatrix m(rows.size(), cols);
  size_t r = 0;
  for (const auto& row : rows) {
    MPG_CHECK_SHAPE(row.size() == cols, "ragged row " << r << " in FromRows");
    std::copy(row.begin(), row.end(), m.row(r).begin());
    ++r;
  }
  return m;
}

FeatureMatrix FeatureMatrix::Identity(size_t n) {
  FeatureMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string FeatureMatrix::ShapeString() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

// ---------------------------------------------------------------------------

void FeatureDict::Set(const std::string& name, FeatureMatrix value) {
  Set(name, std::make_shared<const FeatureMatrix>(std::move(value)));
}

void FeatureDict::Set(const std::string& name, std::shared_ptr<const FeatureMatrix> value) {
  MPG_CHECK_ARG(value != nullptr, "null feature '" << name << "'");
  MPG_CHECK_SHAPE(value->rows() == row_count_,
                  "feature '" << name << "' has " << value->rows()
                              << " rows, dictionary requires " << row_count_);
  entries_[name] = std::move(value);
}

const FeatureMatrix& FeatureDict::Get(const std::string& name) const {
  return *GetShared(name);
}

std::shared_ptr<const FeatureMatrix> FeatureDict::GetShared(const std::string& name) const {
  auto it = entries_.find(name);
  MPG_CHECK(it != entries_.end(), ErrorCode::kLookup, "no feature named '" << name << "'");
  return it->second;
}

std::vector<std::string> FeatureDict::Names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

FeatureMatrix SliceRows(const FeatureMatrix& m, std::span<const uint32_t> ids) {
  FeatureMatrix out(ids.size(), m.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    MPG_CHECK_RANGE(ids[i] < m.rows(),
                    "row id " << ids[i] << " out of range for " << m.rows() << " rows");
    std::copy_n(m.data() + static_cast<size_t>(ids[i]) * m.cols(), m.cols(),
                out.data() + i * m.cols());
  }
  return out;
}

FeatureDict SliceDict(const FeatureDict& dict, std::span<const uint32_t> ids) {
  FeatureDict out(ids.size());
  for (const auto& name : dict.Names()) out.Set(name, SliceRows(dict.Get(name), ids));
  return out;
}

// ---------------------------------------------------------------------------

FeatureMatrix MatMul(const FeatureMatrix& a, const FeatureMatrix& b) {
  MPG_CHECK_SHAPE(a.cols() == b.rows(),
                  "matmul of " << a.ShapeString() << " and " << b.ShapeString());
  FeatureMatrix out(a.rows(), b.cols());
  const size_t n = b.cols();
  for (size_t i = 0; i < a.rows(); ++i) {
    double* o = out.data() + i * n;
    for (size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* br = b.data() + k * n;
      for (size_t j = 0; j < n; ++j) o[j] += aik * br[j];
    }
  }
  return out;
}

FeatureMatrix MatMulTN(const FeatureMatrix& a, const FeatureMatrix& b) {
  MPG_CHECK_SHAPE(a.rows() == b.rows(),
                  "matmul_tn of " << a.ShapeString() << " and " << b.ShapeString());
  FeatureMatrix out(a.cols(), b.cols());
  const size_t n = b.cols();
  for (size_t r = 0; r < a.rows(); ++r) {
    const double* br = b.data() + r * n;
    for (size_t i = 0; i < a.cols(); ++i) {
      const double ari = a(r, i);
      if (ari == 0.0) continue;
      double* o = out.data() + i * n;
      for (size_t j = 0; j < n; ++j) o[j] += ari * br[j];
    }
  }
  return out;
}

FeatureMatrix MatMulNT(const FeatureMatrix& a, const FeatureMatrix& b) {
  MPG_CHECK_SHAPE(a.cols() == b.cols(),
                  "matmul_nt of " << a.ShapeString() << " and " << b.ShapeString());
  FeatureMatrix out(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    const double* ar = a.data() + i * a.cols();
    for (size_t j = 0; j < b.rows(); ++j) {
      const double* br = b.data() + j * b.cols();
      double s = 0.0;
      for (size_t k = 0; k < a.cols(); ++k) s += ar[k] * br[k];
      out(i, j) = s;
    }
  }
  return out;
}

FeatureMatrix Transpose(const FeatureMatrix& a) {
  FeatureMatrix out(a.cols(), a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

namespace {
template <typename F>
FeatureMatrix Zip(const FeatureMatrix& a, const FeatureMatrix& b, const char* what, F f) {
  MPG_CHECK_SHAPE(a.SameShape(b),
                  what << " of " << a.ShapeString() << " and " << b.ShapeString());
  FeatureMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.size(); ++i) out.data()[i] = f(a.data()[i], b.data()[i]);
  return out;
}

template <typename F>
FeatureMatrix Map(const FeatureMatrix& a, F f) {
  FeatureMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.size(); ++i) out.data()[i] = f(a.data()[i]);
  return out;
}
}  // namespace

FeatureMatrix Add(const FeatureMatrix& a, const FeatureMatrix& b) {
  return Zip(a, b, "add", [](double x, double y) { return x + y; });
}

FeatureMatrix Sub(const FeatureMatrix& a, const FeatureMatrix& b) {
  return Zip(a, b, "sub", [](double x, double y) { return x - y; });
}

FeatureMatrix Hadamard(const FeatureMatrix& a, const FeatureMatrix& b) {
  return Zip(a, b, "hadamard", [](double x, double y) { return x * y; });
}

FeatureMatrix Scale(const FeatureMatrix& a, double s) {
  return Map(a, [s](double x) { return x * s; });
}

void AddInPlace(FeatureMatrix* acc, const FeatureMatrix& b) {
  MPG_CHECK_SHAPE(acc->SameShape(b),
                  "accumulate " << b.ShapeString() << " into " << acc->ShapeString());
  double* o = acc->data();
  const double* x = b.data();
  for (size_t i = 0; i < b.size(); ++i) o[i] += x[i];
}

FeatureMatrix Relu(const FeatureMatrix& a) {
  return Map(a, [](double x) { return x > 0.0 ? x : 0.0; });
}

FeatureMatrix Exp(const FeatureMatrix& a) {
  return Map(a, [](double x) { return std::exp(x); });
}

FeatureMatrix SoftmaxRows(const FeatureMatrix& a) {
  FeatureMatrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    auto in = a.row(i);
    auto o = out.row(i);
    if (in.empty()) continue;
    const double mx = *std::max_element(in.begin(), in.end());
    double sum = 0.0;
    for (size_t j = 0; j < in.size(); ++j) sum += (o[j] = std::exp(in[j] - mx));
    for (double& x : o) x /= sum;
  }
  return out;
}

double XentLoss(const FeatureMatrix& logits, std::span<const int32_t> labels) {
  MPG_CHECK_SHAPE(labels.size() == logits.rows(),
                  labels.size() << " labels for " << logits.rows() << " rows");
  double total = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < logits.rows(); ++i) {
    if (labels[i] < 0) continue;
    MPG_CHECK_RANGE(static_cast<size_t>(labels[i]) < logits.cols(),
                    "label " << labels[i] << " at row " << i << " outside [0, "
                             << logits.cols() << ")");
    auto row = logits.row(i);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double x : row) sum += std::exp(x - mx);
    total += std::log(sum) + mx - row[labels[i]];
    ++count;
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

double MaxRelDiff(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (!a.SameShape(b)) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double x = a.data()[i], y = b.data()[i];
    if (x == y) continue;
    worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(y)));
  }
  return worst;
}

// ---------------------------------------------------------------------------

FeatureMatrix ReadCsv(std::istream& is) {
  std::vector<double> values;
  size_t rows = 0, cols = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t count = 0;
    size_t start = 0;
    while (true) {
      const size_t comma = line.find(',', start);
      const std::string cell = line.substr(start, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - start);
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      MPG_CHECK(used > 0, ErrorCode::kIo,
                "row " << rows << ": cannot parse '" << cell << "' as a number");
      values.push_back(v);
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (rows == 0) cols = count;
    MPG_CHECK(count == cols, ErrorCode::kIo,
              "row " << rows << " has " << count << " columns, expected " << cols);
    ++rows;
  }
  return FeatureMatrix(rows, cols, values);
}

FeatureMatrix LoadCsv(const std::string& path) {
  auto is = io::OpenIn(path, false);
  return ReadCsv(is);
}

void WriteCsv(const FeatureMatrix& m, std::ostream& os) {
  os << std::setprecision(17);
  for (size_t i = 0; i < m.rows(); ++i) {
    for (size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
}

void SaveCsv(const FeatureMatrix& m, const std::string& path) {
  auto os = io::OpenOut(path, false);
  WriteCsv(m, os);
  MPG_CHECK(os.good(), ErrorCode::kIo, "write failed for " << path);
}

FeatureMatrix ReadFeatureBinary(std::istream& is) {
  io::ExpectMagic(is, "FMX1");
  const uint64_t rows = io::ReadLE<uint64_t>(is, "rows");
  const uint64_t cols = io::ReadLE<uint64_t>(is, "cols");
  FeatureMatrix m(rows, cols);
  for (double& x : m.values()) x = io::ReadLE<double>(is, "data");
  return m;
}

FeatureMatrix LoadFeatureBinary(const std::string& path) {
  auto is = io::OpenIn(path, true);
  return ReadFeatureBinary(is);
}

void WriteFeatureBinary(const FeatureMatrix& m, std::ostream& os) {
  os.write("FMX1", 4);
  io::WriteLE<uint64_t>(os, m.rows());
  io::WriteLE<uint64_t>(os, m.cols());
  for (double x : m.values()) io::WriteLE<double>(os, x);
}

void SaveFeatureBinary(const FeatureMatrix& m, const std::string& path) {
  auto os = io::OpenOut(path, true);
  WriteFeatureBinary(m, os);
  MPG_CHECK(os.good(), ErrorCode::kIo, "write failed for " << path);
}

}  // namespace mpg
