/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_bench.cc
 */
#include <gtest/gtest.h>
#include <mpgraph/bench.h>

#include <map>
#include <sstream>

namespace mpg {
namespace {

using bench::Report;
using bench::Row;

bench::KernelConfig SmallKernelConfig() {
  bench::KernelConfig c;
  c.graph = GenSpec::Parse("power_law:n=300,deg=4", 3);
  c.feat_sizes = {1, 4};
  c.heads = 2;
  c.threads = 2;
  return c;
}

TEST(BenchKernels, FullGridWithSkippedCells) {
  Report r = bench::BenchKernels(SmallKernelConfig());
  ASSERT_EQ(r.rows.size(), 2u * 2u * 3u * 3u);
  std::map<std::string, int> status;
  for (const Row& row : r.rows) {
    ++status[row.status];
    EXPECT_EQ(row.heads, 2u);
    EXPECT_EQ(row.num_edges, 299u * 4u);
    EXPECT_EQ(row.repeats, 5);
    if (row.status == "ok") {
      EXPECT_GT(row.median_seconds, 0.0);
      EXPECT_GT(row.gflops, 0.0);
    }
    if (row.strategy == "np") {
      const bool runs = row.kernel == "gspmm" ? row.format == "csc" : row.format != "coo";
      EXPECT_EQ(row.status, runs ? "ok" : "skipped") << row.kernel << " " << row.format;
    }
  }
  EXPECT_EQ(status["skipped"], 6);
  EXPECT_EQ(status["ok"], 30);
}

TEST(BenchKernels, MismatchAborts) {
  auto c = SmallKernelConfig();
  c.tolerance = -1.0;  // nothing can pass
  try {
    bench::BenchKernels(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorrectness);
  }
  c = SmallKernelConfig();
  c.repeats = 4;
  EXPECT_THROW(bench::BenchKernels(c), Error);
}

TEST(BenchKernels, AtomicStrategyAndRerunColumns) {
  auto c = SmallKernelConfig();
  c.strategies = {bench::StrategyChoice::Parse("ep_atomic")};
  c.formats = {Format::kCoo};
  Report a = bench::BenchKernels(c), b = bench::BenchKernels(c);
  ASSERT_EQ(a.rows.size(), 4u);
  for (size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].strategy, "ep_atomic");
    EXPECT_EQ(a.rows[i].kernel, b.rows[i].kernel);
    EXPECT_EQ(a.rows[i].feat_size, b.rows[i].feat_size);
    EXPECT_EQ(a.rows[i].peak_aux_bytes, b.rows[i].peak_aux_bytes);
  }
  EXPECT_THROW(bench::StrategyChoice::Parse("warp"), Error);
}

TEST(BenchReport, CsvLayout) {
  Report r;
  Row ok;
  ok.kernel = "gspmm";
  ok.phi = "u_mul_e";
  ok.rho = "sum";
  ok.strategy = "np";
  ok.format = "csc";
  ok.graph = "power_law:n=10,deg=2";
  ok.num_nodes = 10;
  ok.num_edges = 18;
  ok.feat_size = 4;
  ok.heads = 8;
  ok.repeats = 5;
  ok.median_seconds = 0.5;
  ok.gflops = 2;
  ok.peak_aux_bytes = 64;
  Row skip = ok;
  skip.status = "skipped";
  r.rows = {ok, skip};
  std::ostringstream os;
  r.WriteCsv(os);
  EXPECT_EQ(os.str(),
            std::string(bench::kCsvHeader) +
                "\ngspmm,u_mul_e,sum,np,csc,\"power_law:n=10,deg=2\",10,18,4,8,5,0.5,2,64,ok\n"
                "gspmm,u_mul_e,sum,np,csc,\"power_law:n=10,deg=2\",10,18,4,8,5,,,64,skipped\n");
}

TEST(BenchMemory, UnfusedGrowsWithEdges) {
  bench::MemoryConfig c;
  c.sizes = {400, 800};
  c.degree = 10;
  c.feat_sizes = {16};
  Report r = bench::BenchMemory(c);
  ASSERT_EQ(r.rows.size(), 4u);
  const Row& fused = r.rows[1];
  const Row& unfused = r.rows[3];
  EXPECT_EQ(fused.kernel, "gat_fused");
  EXPECT_EQ(unfused.kernel, "gat_unfused");
  EXPECT_GT(unfused.peak_aux_bytes, 3 * fused.peak_aux_bytes);
  // At least one edges x d tensor is live in the unfused run.
  EXPECT_GE(unfused.peak_aux_bytes, unfused.num_edges * 16 * sizeof(double));
  EXPECT_NEAR(static_cast<double>(r.rows[1].peak_aux_bytes) / r.rows[0].peak_aux_bytes, 2.0, 0.2);
}

TEST(BenchMemory, ChainWidthOneIsBalanced) {
  bench::MemoryConfig c;
  c.graph = GraphKind::kChain;
  c.sizes = {2000};
  c.feat_sizes = {1};
  Report r = bench::BenchMemory(c);
  const double ratio = static_cast<double>(r.rows[1].peak_aux_bytes) / r.rows[0].peak_aux_bytes;
  EXPECT_GT(ratio, 0.5);
  EXPECT_LT(ratio, 2.0);
}

TEST(BenchMemory, CapExceeded) {
  bench::MemoryConfig c;
  c.sizes = {1000};
  c.degree = 10;
  c.feat_sizes = {16};
  Report free_run = bench::BenchMemory(c);
  const size_t fused_peak = free_run.rows[0].peak_aux_bytes;
  const size_t unfused_peak = free_run.rows[1].peak_aux_bytes;
  ASSERT_LT(fused_peak, unfused_peak);
  c.cap_bytes = (fused_peak + unfused_peak) / 2;
  Report capped = bench::BenchMemory(c);
  EXPECT_EQ(capped.rows[0].status, "ok");
  EXPECT_EQ(capped.rows[1].status, "cap_exceeded");
  EXPECT_LE(capped.rows[1].peak_aux_bytes, c.cap_bytes);
  EXPECT_EQ(memory::Cap(), 0u);

  c.sizes = {100, 50};
  EXPECT_THROW(bench::BenchMemory(c), Error);
}

TEST(BenchOverhead, OneRowPerSize) {
  bench::OverheadConfig c;
  c.sizes = {10, 100, 1000};
  Report r = bench::BenchOverhead(c);
  ASSERT_EQ(r.rows.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.rows[i].num_nodes, c.sizes[i]);
    EXPECT_EQ(r.rows[i].num_edges, c.sizes[i] - 1);
    EXPECT_GT(r.rows[i].median_seconds, 0.0);
  }
}

}  // namespace
}  // namespace mpg
