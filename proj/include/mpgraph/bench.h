/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/bench.h
 * \brief Kernel throughput, memory and dispatch-overhead benchmarks that emit
 *  CSV reports.
 *
 *  CSV columns, in order:
 *    kernel,phi,rho,strategy,format,graph,num_nodes,num_edges,feat_size,heads,
 *    repeats,median_seconds,gflops,peak_aux_bytes,status
 *  status is ok, skipped (strategy cannot run on that format) or
 *  cap_exceeded. Timing columns are empty unless status is ok.
 */
#ifndef MPGRAPH_BENCH_H_
#define MPGRAPH_BENCH_H_

#include <mpgraph/kernel.h>
#include <mpgraph/synth.h>

#include <ostream>
#include <string>
#include <vector>

namespace mpg {
namespace bench {

struct Row {
  std::string kernel;
  std::string phi;
  std::string rho;
  std::string strategy;
  std::string format;
  std::string graph;
  uint64_t num_nodes = 0;
  uint64_t num_edges = 0;
  size_t feat_size = 0;
  uint32_t heads = 1;
  int repeats = 0;
  double median_seconds = 0.0;
  double gflops = 0.0;
  size_t peak_aux_bytes = 0;
  std::string status = "ok";
};

struct Report {
  std::vector<Row> rows;

  void WriteCsv(std::ostream& os) const;
  void SaveCsv(const std::string& path) const;
};

extern const char* const kCsvHeader;

/*! \brief A strategy as spelled on the command line; "ep_atomic" selects atomic aggregation. */
struct StrategyChoice {
  Strategy strategy = Strategy::kNodeParallel;
  Aggregation aggregation = Aggregation::kBuffered;
  std::string label;

  /*! \brief serial|np|ep|ep_atomic|fp. */
  static StrategyChoice Parse(const std::string& s);
};

struct KernelConfig {
  GenSpec graph;
  /*! \brief Width of each head. */
  std::vector<size_t> feat_sizes = {1, 2, 4, 8, 16, 32, 64, 128};
  uint32_t heads = 8;
  std::vector<StrategyChoice> strategies;
  std::vector<Format> formats = {Format::kCsr, Format::kCsc, Format::kCoo};
  int repeats = 5;
  int threads = 0;
  /*! \brief Relative tolerance of the pre-timing check against the serial kernel. */
  double tolerance = 1e-9;
};

/*!
 * \brief The attention pair: u_mul_e/sum g-SpMM (source rows of heads*d
 *  scaled by one weight per head and edge) and u_dot_v/heads g-SDDMM. Every
 *  strategy x format x size cell is first run untimed and compared with the
 *  serial kernel; a mismatch throws kCorrectness. Cells the strategy cannot
 *  run on are reported as skipped. Flops are 2*|E|*heads*d for both kernels.
 */
Report BenchKernels(const KernelConfig& config);

enum class MemoryModel { kFusedGat, kUnfusedGat };

const char* MemoryModelName(MemoryModel m);

struct MemoryConfig {
  std::vector<MemoryModel> models = {MemoryModel::kFusedGat, MemoryModel::kUnfusedGat};
  /*! \brief Node counts, ascending. */
  std::vector<uint64_t> sizes = {5000, 10000, 20000};
  /*! \brief `degree` is the power_law out-degree or the constant in-degree; chain ignores it. */
  GraphKind graph = GraphKind::kPowerLaw;
  uint64_t degree = 20;
  std::vector<size_t> feat_sizes = {64};
  uint32_t heads = 1;
  /*! \brief Limit on tracked bytes allocated by a run beyond its inputs; 0 for none. */
  size_t cap_bytes = 0;
  uint64_t seed = 0;
  int threads = 1;
};

/*!
 * \brief Peak tracked bytes of one GAT layer forward and backward, above the
 *  inputs and parameters. Requires the allocation hook.
 */
Report BenchMemory(const MemoryConfig& config);

struct OverheadConfig {
  std::vector<uint64_t> sizes = {100, 1000, 10000, 100000};
  size_t feat_size = 16;
  int repeats = 5;
  uint64_t seed = 0;
  int threads = 0;
};

/*! \brief Median forward+backward time of one GCN layer on chain graphs. */
Report BenchOverhead(const OverheadConfig& config);

}  // namespace bench
}  // namespace mpg

#endif  // MPGRAPH_BENCH_H_
