/*!
 *  Copyright (c) 2026 by Contributors
 * \file test_c_api.cc
 */
#include <gtest/gtest.h>
#include <mpgraph/c_api.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace {

struct GraphPtr {
  MPGGraphHandle h = nullptr;
  ~GraphPtr() { MPGGraphFree(h); }
};
struct FeatPtr {
  MPGFeaturesHandle h = nullptr;
  ~FeatPtr() { MPGFeaturesFree(h); }
};

std::vector<double> Values(MPGFeaturesHandle f) {
  uint64_t r = 0, c = 0;
  EXPECT_EQ(MPGFeaturesShape(f, &r, &c), MPG_OK);
  std::vector<double> v(r * c);
  EXPECT_EQ(MPGFeaturesCopyTo(f, v.data()), MPG_OK);
  return v;
}

TEST(CApi, GraphLifecycle) {
  const uint32_t src[] = {0, 1, 2}, dst[] = {2, 2, 0};
  GraphPtr g;
  ASSERT_EQ(MPGGraphCreate(3, src, dst, 3, &g.h), MPG_OK);
  uint64_t n = 0, m = 0;
  MPGGraphNumNodes(g.h, &n);
  MPGGraphNumEdges(g.h, &m);
  EXPECT_EQ(n, 3u);
  EXPECT_EQ(m, 3u);
  std::vector<uint64_t> deg(3);
  ASSERT_EQ(MPGGraphInDegrees(g.h, deg.data()), MPG_OK);
  EXPECT_EQ(deg, (std::vector<uint64_t>{1, 0, 2}));

  GraphPtr r;
  ASSERT_EQ(MPGGraphReverse(g.h, &r.h), MPG_OK);
  std::vector<uint32_t> rs(3), rd(3);
  MPGGraphEdges(r.h, rs.data(), rd.data());
  EXPECT_EQ(rs, (std::vector<uint32_t>{2, 2, 0}));
  EXPECT_EQ(rd, (std::vector<uint32_t>{0, 1, 2}));
}

TEST(CApi, ErrorsCarryCodeAndMessage) {
  const uint32_t src[] = {0, 7}, dst[] = {1, 1};
  MPGGraphHandle g = nullptr;
  EXPECT_EQ(MPGGraphCreate(3, src, dst, 2, &g), MPG_ERR_RANGE);
  EXPECT_EQ(g, nullptr);
  EXPECT_NE(std::string(MPGGetLastError()).find("7"), std::string::npos);
  EXPECT_EQ(MPGGraphNumNodes(nullptr, nullptr), MPG_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(MPGGraphLoad("/nonexistent/graph.tsv", &g), MPG_ERR_IO);
  EXPECT_EQ(MPGGraphGenerate("constant_indegree:n=4,k=9", 0, &g), MPG_ERR_INVALID_ARGUMENT);
  EXPECT_STREQ(MPGStatusName(MPG_ERR_CORRECTNESS), "correctness");
  GraphPtr ok;
  ASSERT_EQ(MPGGraphGenerate("chain:n=3", 0, &ok.h), MPG_OK);
  EXPECT_STREQ(MPGGetLastError(), "");
}

TEST(CApi, KernelsOnG3) {
  const uint32_t src[] = {0, 1, 2}, dst[] = {2, 2, 0};
  GraphPtr g;
  ASSERT_EQ(MPGGraphCreate(3, src, dst, 3, &g.h), MPG_OK);
  const double xv[] = {1, 2, 3};
  FeatPtr x, z, s;
  ASSERT_EQ(MPGFeaturesCreate(3, 1, xv, &x.h), MPG_OK);
  ASSERT_EQ(MPGGSpMM(g.h, "copy_u", "sum", x.h, nullptr, "np", "csc", 1, &z.h), MPG_OK);
  EXPECT_EQ(Values(z.h), (std::vector<double>{3, 0, 3}));
  ASSERT_EQ(MPGGSDDMM(g.h, "u_add_v", x.h, x.h, "ep", "coo", 0, &s.h), MPG_OK);
  EXPECT_EQ(Values(s.h), (std::vector<double>{4, 5, 4}));

  MPGFeaturesHandle bad = nullptr;
  EXPECT_EQ(MPGGSpMM(g.h, "copy_u", "sum", x.h, nullptr, "np", "csr", 1, &bad),
            MPG_ERR_INVALID_STRATEGY);
  EXPECT_EQ(MPGGSpMM(g.h, "u_mul_e", "sum", x.h, nullptr, nullptr, nullptr, 0, &bad),
            MPG_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(bad, nullptr);
}

TEST(CApi, TrainKarate) {
  GraphPtr g;
  ASSERT_EQ(MPGGraphLoad(MPG_TEST_DATA_DIR "/karate_club.tsv", &g.h), MPG_OK);
  std::vector<uint64_t> deg(34);
  MPGGraphInDegrees(g.h, deg.data());
  uint64_t top = 0;
  for (uint64_t d : deg) top = std::max(top, d);
  std::vector<double> x(34 * (top + 1), 0.0);
  for (size_t v = 0; v < 34; ++v) x[v * (top + 1) + deg[v]] = 1.0;
  FeatPtr f;
  ASSERT_EQ(MPGFeaturesCreate(34, top + 1, x.data(), &f.h), MPG_OK);
  std::vector<int32_t> labels(34);
  std::ifstream in(MPG_TEST_DATA_DIR "/karate_club_labels.txt");
  std::string line;
  while (std::getline(in, line)) {
    int node, label;
    if (std::sscanf(line.c_str(), "%d %d", &node, &label) == 2) labels[node] = label;
  }
  std::vector<double> losses(50);
  ASSERT_EQ(MPGTrain(g.h, f.h, labels.data(), "gcn", 16, 2, 1, 50, 0.05, 0, losses.data()),
            MPG_OK)
      << MPGGetLastError();
  for (size_t i = 1; i < losses.size(); ++i) EXPECT_LT(losses[i], losses[i - 1]);
  labels[0] = 5;
  EXPECT_EQ(MPGTrain(g.h, f.h, labels.data(), "gcn", 16, 2, 1, 5, 0.05, 0, losses.data()),
            MPG_ERR_RANGE);
}

TEST(CApi, BenchWritesCsv) {
  const std::string out = ::testing::TempDir() + "c_api_kernels.csv";
  const uint64_t feats[] = {2};
  MPGKernelBenchArgs args{"power_law:n=200,deg=3", 1, feats, 1, 2, "np,ep", "csr,coo", 5, 1, 1e-9};
  ASSERT_EQ(MPGBenchKernels(&args, out.c_str()), MPG_OK) << MPGGetLastError();
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("kernel,phi,rho,strategy,format", 0), 0u);
  size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 2u * 2u * 2u);

  MPGKernelBenchArgs bad = args;
  bad.strategies = "gpu";
  EXPECT_EQ(MPGBenchKernels(&bad, out.c_str()), MPG_ERR_INVALID_STRATEGY);
  bad = args;
  bad.tolerance = -1;
  EXPECT_EQ(MPGBenchKernels(&bad, out.c_str()), MPG_ERR_CORRECTNESS);

  const uint64_t sizes[] = {300};
  MPGMemoryBenchArgs mem{"power_law", 5, sizes, 1, feats, 1, 1, 0, 0, 1};
  EXPECT_EQ(MPGBenchMemory(&mem, out.c_str()), MPG_OK) << MPGGetLastError();
  EXPECT_EQ(MPGBenchOverhead(sizes, 1, 4, 5, 1, 0, out.c_str()), MPG_OK);
}

}  // namespace
