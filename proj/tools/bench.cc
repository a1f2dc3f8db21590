/*!
 *  Copyright (c) 2026 by Contributors
 * \file bench.cc
 * \brief `bench kernels|memory|overhead`: CSV benchmark reports.
 *
 *  Exit status: 0 on success, 2 when a kernel disagrees with the serial
 *  reference before timing, 1 on any other error.
 */
#include <mpgraph/c_api.h>

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

// "power_law:deg=20" -> kind and degree; sizes come from --sizes.
bool SplitMemoryGraph(const std::string& text, std::string* kind, uint64_t* degree) {
  const auto colon = text.find(':');
  *kind = text.substr(0, colon);
  if (colon == std::string::npos) return true;
  const std::string rest = text.substr(colon + 1);
  const auto eq = rest.find('=');
  if (eq == std::string::npos) return false;
  const std::string key = rest.substr(0, eq);
  if (key != "deg" && key != "k") return false;
  try {
    *degree = std::stoull(rest.substr(eq + 1));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

int Finish(MPGStatus status, const std::string& out) {
  if (status == MPG_OK) {
    std::printf("wrote %s\n", out.c_str());
    return 0;
  }
  std::fprintf(stderr, "bench: %s: %s\n", MPGStatusName(status), MPGGetLastError());
  return status == MPG_ERR_CORRECTNESS ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph kernel benchmarks"};
  app.require_subcommand(1);

  std::string graph, out;
  std::vector<uint64_t> feats{1, 2, 4, 8, 16, 32, 64, 128};
  std::vector<uint64_t> sizes;
  std::vector<std::string> strategies{"np", "ep", "fp"};
  std::vector<std::string> formats{"csr", "csc", "coo"};
  uint32_t heads = 8;
  int repeats = 5, threads = 0;
  uint64_t seed = 0, cap_bytes = 0;
  double tolerance = 1e-9;

  auto* kernels = app.add_subcommand("kernels", "g-SpMM / g-SDDMM throughput grid");
  kernels->add_option("--graph", graph, "generator spec, e.g. power_law:n=10000,deg=20")
      ->required();
  kernels->add_option("--feats", feats, "per-head feature sizes")->delimiter(',');
  kernels->add_option("--heads", heads, "attention heads")->check(CLI::PositiveNumber);
  kernels->add_option("--strategies", strategies, "serial,np,ep,ep_atomic,fp")->delimiter(',');
  kernels->add_option("--formats", formats, "csr,csc,coo")->delimiter(',');
  kernels->add_option("--repeats", repeats, "timed runs per cell (>= 5)");
  kernels->add_option("--threads", threads, "workers, 0 for the default");
  kernels->add_option("--seed", seed);
  kernels->add_option("--tolerance", tolerance, "allowed relative difference from serial");
  kernels->add_option("--out", out, "CSV path")->required();

  auto* memory = app.add_subcommand("memory", "fused vs unfused GAT peak bytes");
  std::string mem_graph = "power_law:deg=20";
  std::vector<uint64_t> mem_sizes{5000, 10000, 20000};
  std::vector<uint64_t> mem_feats{64};
  uint32_t mem_heads = 1;
  int mem_threads = 1;
  memory->add_option("--graph", mem_graph, "power_law:deg=D, constant_indegree:k=K or chain");
  memory->add_option("--sizes", mem_sizes, "node counts, ascending")->delimiter(',');
  memory->add_option("--feats", mem_feats, "feature sizes")->delimiter(',');
  memory->add_option("--heads", mem_heads)->check(CLI::PositiveNumber);
  memory->add_option("--cap-bytes", cap_bytes, "per-run byte cap, 0 for none");
  memory->add_option("--threads", mem_threads);
  memory->add_option("--seed", seed);
  memory->add_option("--out", out, "CSV path")->required();

  auto* overhead = app.add_subcommand("overhead", "one GCN layer on chain graphs");
  std::vector<uint64_t> ovh_sizes{100, 1000, 10000, 100000};
  uint64_t ovh_feat = 16;
  overhead->add_option("--sizes", ovh_sizes, "chain lengths")->delimiter(',');
  overhead->add_option("--feats", ovh_feat, "feature size");
  overhead->add_option("--repeats", repeats);
  overhead->add_option("--threads", threads);
  overhead->add_option("--seed", seed);
  overhead->add_option("--out", out, "CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  if (kernels->parsed()) {
    const std::string strategy_list = Join(strategies), format_list = Join(formats);
    MPGKernelBenchArgs args{graph.c_str(),         seed,
                            feats.data(),          feats.size(),
                            heads,                 strategy_list.c_str(),
                            format_list.c_str(),   repeats,
                            threads,               tolerance};
    return Finish(MPGBenchKernels(&args, out.c_str()), out);
  }
  if (memory->parsed()) {
    std::string kind;
    uint64_t degree = 20;
    if (!SplitMemoryGraph(mem_graph, &kind, &degree)) {
      std::fprintf(stderr, "bench: cannot parse --graph '%s'\n", mem_graph.c_str());
      return 1;
    }
    MPGMemoryBenchArgs args{kind.c_str(),     degree,           mem_sizes.data(),
                            mem_sizes.size(), mem_feats.data(), mem_feats.size(),
                            mem_heads,        cap_bytes,        seed,
                            mem_threads};
    return Finish(MPGBenchMemory(&args, out.c_str()), out);
  }
  return Finish(MPGBenchOverhead(ovh_sizes.data(), ovh_sizes.size(), ovh_feat, repeats, threads,
                                 seed, out.c_str()),
                out);
}
