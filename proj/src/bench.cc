/*!
 *  Copyright (c) 2026 by Contributors
 * \file bench.cc
 */
#include <mpgraph/bench.h>
#include <mpgraph/layers.h>
#include <mpgraph/memory.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <random>

namespace mpg {
namespace bench {

const char* const kCsvHeader =
    "kernel,phi,rho,strategy,format,graph,num_nodes,num_edges,feat_size,heads,repeats,"
    "median_seconds,gflops,peak_aux_bytes,status";

namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

void Report::WriteCsv(std::ostream& os) const {
  os << kCsvHeader << "\n";
  for (const Row& r : rows) {
    os << r.kernel << "," << r.phi << "," << r.rho << "," << r.strategy << "," << r.format << ","
       << CsvField(r.graph) << "," << r.num_nodes << "," << r.num_edges << "," << r.feat_size << ","
       << r.heads << "," << r.repeats << ",";
    if (r.status == "ok") {
      os << std::setprecision(6) << r.median_seconds << "," << r.gflops << ",";
    } else {
      os << ",,";
    }
    os << r.peak_aux_bytes << "," << r.status << "\n";
  }
}

void Report::SaveCsv(const std::string& path) const {
  std::ofstream out(path);
  MPG_CHECK(out.good(), ErrorCode::kIo, "cannot write " << path);
  WriteCsv(out);
  MPG_CHECK(out.good(), ErrorCode::kIo, "error writing " << path);
}

StrategyChoice StrategyChoice::Parse(const std::string& s) {
  if (s == "ep_atomic") return {Strategy::kEdgeParallel, Aggregation::kAtomic, s};
  const Strategy st = ParseStrategy(s);
  MPG_CHECK_ARG(st != Strategy::kAuto, "benchmarks need an explicit strategy, got '" << s << "'");
  static const char* const kShort[] = {"auto", "serial", "np", "ep", "fp"};
  return {st, Aggregation::kBuffered, kShort[static_cast<int>(st)]};
}

const char* MemoryModelName(MemoryModel m) {
  return m == MemoryModel::kFusedGat ? "gat_fused" : "gat_unfused";
}

namespace {

using Clock = std::chrono::steady_clock;

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename F>
double TimeOnce(F&& f) {
  const auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

FeatureMatrix Uniform(std::mt19937_64& rng, size_t rows, size_t cols, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  FeatureMatrix m(rows, cols);
  for (double& v : m.values()) v = d(rng);
  return m;
}

}  // namespace

Report BenchKernels(const KernelConfig& config) {
  MPG_CHECK_ARG(config.repeats >= 5, "repeats must be at least 5, got " << config.repeats);
  MPG_CHECK_ARG(config.heads >= 1, "heads must be at least 1");
  MPG_CHECK_ARG(!config.feat_sizes.empty(), "no feature sizes given");
  std::vector<StrategyChoice> strategies = config.strategies;
  if (strategies.empty())
    for (const char* s : {"np", "ep", "fp"}) strategies.push_back(StrategyChoice::Parse(s));

  const Graph g = Generate(config.graph);
  g.Csr();
  g.Csc();
  const std::string graph_name = config.graph.ToString();
  const uint32_t heads = config.heads;
  std::mt19937_64 rng(config.graph.seed + 1);

  const MessageFunc mul = MessageFunc::Binary(BinaryOp::kMul, Target::kSrc, Target::kEdge);
  const MessageFunc dot = MessageFunc::Dot(Target::kSrc, Target::kDst, heads);
  Report report;
  for (size_t d : config.feat_sizes) {
    MPG_CHECK_ARG(d > 0, "feature sizes must be positive");
    const size_t width = heads * d;
    const FeatureMatrix x = Uniform(rng, g.NumNodes(), width, -1, 1);
    const FeatureMatrix y = Uniform(rng, g.NumNodes(), width, -1, 1);
    const FeatureMatrix w = Uniform(rng, g.NumEdges(), heads, 0, 1);
    const KernelOptions serial{Strategy::kSerialReference, Format::kCoo, 1};
    const FeatureMatrix spmm_ref = GSpMM(g, mul, ReduceOp::kSum, x, w, serial).out;
    const FeatureMatrix sddmm_ref = GSDDMM(g, dot, x, y, serial);
    const double flops = 2.0 * static_cast<double>(g.NumEdges()) * static_cast<double>(width);

    for (KernelKind kernel : {KernelKind::kGSpMM, KernelKind::kGSDDMM}) {
      const bool spmm = kernel == KernelKind::kGSpMM;
      for (const StrategyChoice& sc : strategies) {
        for (Format fmt : config.formats) {
          Row row;
          row.kernel = KernelName(kernel);
          row.phi = spmm ? mul.Name() : dot.Name();
          row.rho = spmm ? ReduceName(ReduceOp::kSum) : "-";
          row.strategy = sc.label;
          row.format = FormatName(fmt);
          row.graph = graph_name;
          row.num_nodes = g.NumNodes();
          row.num_edges = g.NumEdges();
          row.feat_size = d;
          row.heads = heads;
          row.repeats = config.repeats;
          if (!StrategySupports(kernel, sc.strategy, fmt)) {
            row.status = "skipped";
            report.rows.push_back(row);
            continue;
          }
          const KernelOptions opts{sc.strategy, fmt, config.threads, sc.aggregation};
          auto run = [&]() -> FeatureMatrix {
            return spmm ? GSpMM(g, mul, ReduceOp::kSum, x, w, opts).out : GSDDMM(g, dot, x, y, opts);
          };
          FeatureMatrix warm;
          {
            memory::PeakProbe probe;
            warm = run();
            row.peak_aux_bytes = probe.PeakAuxBytes();
          }
          const double err = MaxRelDiff(warm, spmm ? spmm_ref : sddmm_ref);
          MPG_CHECK(err <= config.tolerance, ErrorCode::kCorrectness,
                    row.kernel << " " << row.strategy << "/" << row.format << " d=" << d
                               << " on " << graph_name << " differs from the serial kernel by "
                               << err);
          std::vector<double> times;
          for (int i = 0; i < config.repeats; ++i) times.push_back(TimeOnce(run));
          row.median_seconds = Median(times);
          row.gflops = row.median_seconds > 0 ? flops / row.median_seconds / 1e9 : 0.0;
          report.rows.push_back(row);
        }
      }
    }
  }
  return report;
}

Report BenchMemory(const MemoryConfig& config) {
  MPG_CHECK(memory::HookAvailable(), ErrorCode::kState,
            "memory benchmark needs the allocation accounting hook");
  MPG_CHECK_ARG(std::is_sorted(config.sizes.begin(), config.sizes.end()),
                "memory benchmark sizes must be ascending");
  MPG_CHECK_ARG(config.heads >= 1, "heads must be at least 1");
  MPG_CHECK_ARG(config.graph == GraphKind::kPowerLaw || config.graph == GraphKind::kChain ||
                    config.graph == GraphKind::kConstantIndegree,
                "memory benchmark runs on power_law, constant_indegree or chain graphs");
  Report report;
  const KernelOptions opts{Strategy::kAuto, Format::kAuto, config.threads};
  for (MemoryModel model : config.models) {
    for (size_t d : config.feat_sizes) {
      for (uint64_t n : config.sizes) {
        GenSpec spec;
        spec.kind = config.graph;
        spec.num_nodes = n;
        spec.degree = config.degree;
        spec.k = config.degree;
        spec.seed = config.seed;
        const Graph g = Generate(spec);
        g.Csr();
        g.Csc();
        std::mt19937_64 rng(config.seed + n);
        const size_t width = config.heads * d;
        auto x = std::make_shared<const FeatureMatrix>(Uniform(rng, n, d, -1, 1));
        auto w = std::make_shared<const FeatureMatrix>(Uniform(rng, d, width, -0.3, 0.3));
        auto al = std::make_shared<const FeatureMatrix>(Uniform(rng, 1, width, -0.3, 0.3));
        auto ar = std::make_shared<const FeatureMatrix>(Uniform(rng, 1, width, -0.3, 0.3));
        const FeatureMatrix probe_weights = Uniform(rng, n, width, -1, 1);

        Row row;
        row.kernel = MemoryModelName(model);
        row.phi = "u_mul_e";
        row.rho = "sum";
        row.strategy = "auto";
        row.format = "auto";
        row.graph = spec.ToString();
        row.num_nodes = g.NumNodes();
        row.num_edges = g.NumEdges();
        row.feat_size = d;
        row.heads = config.heads;
        row.repeats = 1;

        Tape t;
        Var xv = t.Leaf(x, true), wv = t.Leaf(w, true);
        Var alv = t.Leaf(al, true), arv = t.Leaf(ar, true);
        memory::PeakProbe probe;
        try {
          memory::ScopedCap cap(config.cap_bytes ? memory::CurrentBytes() + config.cap_bytes : 0);
          row.median_seconds = TimeOnce([&] {
            Var h = model == MemoryModel::kFusedGat
                        ? GatLayer(t, g, xv, wv, alv, arv, config.heads, opts)
                        : GatLayerUnfused(t, g, xv, wv, alv, arv, config.heads, opts);
            t.Backward(ops::SumProduct(t, h, probe_weights));
          });
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kCapExceeded) throw;
          row.status = "cap_exceeded";
        }
        row.peak_aux_bytes = probe.PeakAuxBytes();
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

Report BenchOverhead(const OverheadConfig& config) {
  MPG_CHECK_ARG(config.repeats >= 1, "repeats must be positive");
  Report report;
  const KernelOptions opts{Strategy::kAuto, Format::kAuto, config.threads};
  for (uint64_t n : config.sizes) {
    GenSpec spec;
    spec.kind = GraphKind::kChain;
    spec.num_nodes = n;
    const Graph g = Generate(spec);
    g.Csr();
    g.Csc();
    std::mt19937_64 rng(config.seed + n);
    const size_t d = config.feat_size;
    auto x = std::make_shared<const FeatureMatrix>(Uniform(rng, n, d, -1, 1));
    auto w = std::make_shared<const FeatureMatrix>(Uniform(rng, d, d, -0.5, 0.5));
    auto b = std::make_shared<const FeatureMatrix>(Uniform(rng, 1, d, -0.5, 0.5));
    const FeatureMatrix probe_weights = Uniform(rng, n, d, -1, 1);
    auto step = [&] {
      Tape t;
      Var h = GcnLayer(t, g, t.Leaf(x, true), t.Leaf(w, true), t.Leaf(b, true), true, opts);
      t.Backward(ops::SumProduct(t, h, probe_weights));
    };
    step();
    std::vector<double> times;
    for (int i = 0; i < config.repeats; ++i) times.push_back(TimeOnce(step));
    Row row;
    row.kernel = "gcn_layer";
    row.phi = "copy_lhs_u";
    row.rho = "mean";
    row.strategy = "auto";
    row.format = "auto";
    row.graph = spec.ToString();
    row.num_nodes = n;
    row.num_edges = g.NumEdges();
    row.feat_size = d;
    row.repeats = config.repeats;
    row.median_seconds = Median(times);
    // Forward and backward each run one g-SpMM with |E|*d adds.
    row.gflops = row.median_seconds > 0 ? 2.0 * g.NumEdges() * d / row.median_seconds / 1e9 : 0;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace bench
}  // namespace mpg
