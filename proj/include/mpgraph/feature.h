/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/feature.h
 * \brief Dense row-major feature matrices, named feature dictionaries and the
 *  untaped dense primitives used by the layers.
 */
#ifndef MPGRAPH_FEATURE_H_
#define MPGRAPH_FEATURE_H_

#include <mpgraph/base.h>
#include <mpgraph/memory.h>

#include <cstdint>
#include <initializer_list>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace mpg {

/*! \brief rows x cols doubles, row-major, tracked by the allocation hook. */
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  FeatureMatrix(size_t rows, size_t cols, std::span<const double> values);

  /*! \brief Build from nested rows; all rows must have equal length. */
  static FeatureMatrix FromRows(std::initializer_list<std::initializer_list<double>> rows);
  static FeatureMatrix Identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return {data_.data(), data_.size()}; }
  std::span<const double> values() const { return {data_.data(), data_.size()}; }

  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  bool SameShape(const FeatureMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string ShapeString() const;

  friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  memory::TrackedVector<double> data_;
};

/*!
 * \brief Named matrices that all share one row count (node count or edge
 *  count of the owning graph). Setting an existing name overwrites it.
 */
class FeatureDict {
 public:
  explicit FeatureDict(size_t row_count = 0) : row_count_(row_count) {}

  size_t row_count() const { return row_count_; }

  void Set(const std::string& name, FeatureMatrix value);
  void Set(const std::string& name, std::shared_ptr<const FeatureMatrix> value);
  /*! \brief Throws kLookup for a missing name. */
  const FeatureMatrix& Get(const std::string& name) const;
  std::shared_ptr<const FeatureMatrix> GetShared(const std::string& name) const;
  bool Contains(const std::string& name) const { return entries_.count(name) != 0; }
  void Erase(const std::string& name) { entries_.erase(name); }
  std::vector<std::string> Names() const;
  size_t size() const { return entries_.size(); }

 private:
  size_t row_count_;
  std::map<std::string, std::shared_ptr<const FeatureMatrix>> entries_;
};

/*! \brief out.row(i) = m.row(ids[i]); repeats allowed. */
FeatureMatrix SliceRows(const FeatureMatrix& m, std::span<const uint32_t> ids);

/*! \brief Gather every named matrix of `dict` at `ids`. */
FeatureDict SliceDict(const FeatureDict& dict, std::span<const uint32_t> ids);

// ---------------------------------------------------------------------------
// Dense primitives (no taping). Shape mismatches throw kShape.

FeatureMatrix MatMul(const FeatureMatrix& a, const FeatureMatrix& b);
/*! \brief a^T b without materializing a^T. */
FeatureMatrix MatMulTN(const FeatureMatrix& a, const FeatureMatrix& b);
/*! \brief a b^T without materializing b^T. */
FeatureMatrix MatMulNT(const FeatureMatrix& a, const FeatureMatrix& b);
FeatureMatrix Transpose(const FeatureMatrix& a);
FeatureMatrix Add(const FeatureMatrix& a, const FeatureMatrix& b);
FeatureMatrix Sub(const FeatureMatrix& a, const FeatureMatrix& b);
FeatureMatrix Hadamard(const FeatureMatrix& a, const FeatureMatrix& b);
FeatureMatrix Scale(const FeatureMatrix& a, double s);
void AddInPlace(FeatureMatrix* acc, const FeatureMatrix& b);
FeatureMatrix Relu(const FeatureMatrix& a);
FeatureMatrix Exp(const FeatureMatrix& a);
/*! \brief Row-wise softmax with max subtraction. */
FeatureMatrix SoftmaxRows(const FeatureMatrix& a);
/*!
 * \brief Mean softmax cross entropy over rows with a label in
 *  [0, cols). Rows whose label is negative are ignored.
 */
double XentLoss(const FeatureMatrix& logits, std::span<const int32_t> labels);

/*! \brief Largest |a-b| / max(1, |b|) over entries. */
double MaxRelDiff(const FeatureMatrix& a, const FeatureMatrix& b);

// ---------------------------------------------------------------------------
// Serialization: CSV (one row per line) and FMX1 binary
// (`FMX1`, u64 rows, u64 cols, f64 data, little endian).

FeatureMatrix ReadCsv(std::istream& is);
FeatureMatrix LoadCsv(const std::string& path);
void WriteCsv(const FeatureMatrix& m, std::ostream& os);
void SaveCsv(const FeatureMatrix& m, const std::string& path);

FeatureMatrix ReadFeatureBinary(std::istream& is);
FeatureMatrix LoadFeatureBinary(const std::string& path);
void WriteFeatureBinary(const FeatureMatrix& m, std::ostream& os);
void SaveFeatureBinary(const FeatureMatrix& m, const std::string& path);

}  // namespace mpg

#endif  // MPGRAPH_FEATURE_H_
