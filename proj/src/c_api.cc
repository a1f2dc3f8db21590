/*!
 *  Copyright (c) 2026 by Contributors
 * \file c_api.cc
 */
#include <mpgraph/bench.h>
#include <mpgraph/c_api.h>
#include <mpgraph/kernel.h>
#include <mpgraph/layers.h>
#include <mpgraph/synth.h>

#include <algorithm>
#include <new>
#include <sstream>
#include <string>
#include <vector>

struct MPGGraph_ {
  mpg::Graph graph;
};

struct MPGFeatures_ {
  mpg::FeatureMatrix value;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
MPGStatus Guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return MPG_OK;
  } catch (const mpg::Error& e) {
    g_last_error = e.what();
    return static_cast<MPGStatus>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MPG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MPG_ERR_INTERNAL;
  }
}

template <typename T>
void NotNull(const T* p, const char* what) {
  MPG_CHECK_ARG(p != nullptr, what << " must not be NULL");
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> SplitList(const char* text) {
  std::vector<std::string> out;
  if (!text) return out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

mpg::KernelOptions Options(const char* strategy, const char* format, int threads) {
  mpg::KernelOptions o;
  o.strategy = strategy ? mpg::ParseStrategy(strategy) : mpg::Strategy::kAuto;
  o.format = format ? mpg::ParseFormat(format) : mpg::Format::kAuto;
  o.num_threads = threads;
  return o;
}

const mpg::FeatureMatrix* Value(MPGFeaturesHandle f) { return f ? &f->value : nullptr; }

}  // namespace

extern "C" {

const char* MPGGetLastError(void) { return g_last_error.c_str(); }

const char* MPGStatusName(MPGStatus status) {
  return mpg::ErrorCodeName(static_cast<mpg::ErrorCode>(status));
}

MPGStatus MPGGraphCreate(uint64_t num_nodes, const uint32_t* src, const uint32_t* dst,
                         uint64_t num_edges, MPGGraphHandle* out) {
  return Guard([&] {
    NotNull(out, "out");
    MPG_CHECK_ARG(num_edges == 0 || (src && dst), "edge arrays must not be NULL");
    std::vector<mpg::NodeId> s(src, src + num_edges), d(dst, dst + num_edges);
    *out = new MPGGraph_{mpg::Graph(num_nodes, std::move(s), std::move(d))};
  });
}

MPGStatus MPGGraphLoad(const char* path, MPGGraphHandle* out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    const std::string p(path);
    *out = new MPGGraph_{EndsWith(p, ".bin") ? mpg::LoadBinary(p) : mpg::LoadEdgeList(p)};
  });
}

MPGStatus MPGGraphSave(MPGGraphHandle g, const char* path) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(path, "path");
    const std::string p(path);
    if (EndsWith(p, ".bin")) {
      mpg::SaveBinary(g->graph, p);
    } else {
      mpg::SaveEdgeList(g->graph, p);
    }
  });
}

MPGStatus MPGGraphGenerate(const char* spec, uint64_t seed, MPGGraphHandle* out) {
  return Guard([&] {
    NotNull(spec, "spec");
    NotNull(out, "out");
    *out = new MPGGraph_{mpg::Generate(mpg::GenSpec::Parse(spec, seed))};
  });
}

MPGStatus MPGGraphReverse(MPGGraphHandle g, MPGGraphHandle* out) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(out, "out");
    *out = new MPGGraph_{g->graph.Reverse()};
  });
}

MPGStatus MPGGraphNumNodes(MPGGraphHandle g, uint64_t* out) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(out, "out");
    *out = g->graph.NumNodes();
  });
}

MPGStatus MPGGraphNumEdges(MPGGraphHandle g, uint64_t* out) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(out, "out");
    *out = g->graph.NumEdges();
  });
}

MPGStatus MPGGraphEdges(MPGGraphHandle g, uint32_t* src, uint32_t* dst) {
  return Guard([&] {
    NotNull(g, "graph");
    if (src) std::copy(g->graph.Src().begin(), g->graph.Src().end(), src);
    if (dst) std::copy(g->graph.Dst().begin(), g->graph.Dst().end(), dst);
  });
}

MPGStatus MPGGraphInDegrees(MPGGraphHandle g, uint64_t* out) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(out, "out");
    const auto deg = g->graph.InDegrees();
    std::copy(deg.begin(), deg.end(), out);
  });
}

MPGStatus MPGGraphFree(MPGGraphHandle g) {
  delete g;
  return MPG_OK;
}

MPGStatus MPGFeaturesCreate(uint64_t rows, uint64_t cols, const double* values,
                            MPGFeaturesHandle* out) {
  return Guard([&] {
    NotNull(out, "out");
    MPG_CHECK_ARG(rows * cols == 0 || values, "values must not be NULL");
    *out = new MPGFeatures_{
        mpg::FeatureMatrix(rows, cols, std::span<const double>(values, rows * cols))};
  });
}

MPGStatus MPGFeaturesLoad(const char* path, MPGFeaturesHandle* out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    const std::string p(path);
    *out = new MPGFeatures_{EndsWith(p, ".bin") ? mpg::LoadFeatureBinary(p) : mpg::LoadCsv(p)};
  });
}

MPGStatus MPGFeaturesShape(MPGFeaturesHandle f, uint64_t* rows, uint64_t* cols) {
  return Guard([&] {
    NotNull(f, "features");
    if (rows) *rows = f->value.rows();
    if (cols) *cols = f->value.cols();
  });
}

MPGStatus MPGFeaturesCopyTo(MPGFeaturesHandle f, double* out) {
  return Guard([&] {
    NotNull(f, "features");
    NotNull(out, "out");
    std::copy(f->value.values().begin(), f->value.values().end(), out);
  });
}

MPGStatus MPGFeaturesFree(MPGFeaturesHandle f) {
  delete f;
  return MPG_OK;
}

MPGStatus MPGGSpMM(MPGGraphHandle g, const char* phi, const char* rho, MPGFeaturesHandle lhs,
                   MPGFeaturesHandle rhs, const char* strategy, const char* format, int threads,
                   MPGFeaturesHandle* out) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(phi, "phi");
    NotNull(rho, "rho");
    NotNull(out, "out");
    auto r = mpg::GSpMM(g->graph, mpg::MessageFunc::Parse(phi), mpg::ParseReduce(rho),
                        mpg::Operand(Value(lhs)), mpg::Operand(Value(rhs)),
                        Options(strategy, format, threads));
    *out = new MPGFeatures_{std::move(r.out)};
  });
}

MPGStatus MPGGSDDMM(MPGGraphHandle g, const char* phi, MPGFeaturesHandle lhs,
                    MPGFeaturesHandle rhs, const char* strategy, const char* format, int threads,
                    MPGFeaturesHandle* out) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(phi, "phi");
    NotNull(out, "out");
    auto m = mpg::GSDDMM(g->graph, mpg::MessageFunc::Parse(phi), mpg::Operand(Value(lhs)),
                         mpg::Operand(Value(rhs)), Options(strategy, format, threads));
    *out = new MPGFeatures_{std::move(m)};
  });
}

MPGStatus MPGTrain(MPGGraphHandle g, MPGFeaturesHandle features, const int32_t* labels,
                   const char* model, uint64_t hidden, uint64_t num_classes, uint32_t heads,
                   int epochs, double lr, uint64_t seed, double* losses_out) {
  return Guard([&] {
    NotNull(g, "graph");
    NotNull(features, "features");
    NotNull(labels, "labels");
    NotNull(model, "model");
    MPG_CHECK_ARG(epochs == 0 || losses_out, "losses_out must not be NULL");
    const auto& x = features->value;
    mpg::ModelSpec spec;
    spec.kind = mpg::ParseModelKind(model);
    spec.dims = {x.cols(), hidden, num_classes};
    spec.heads = heads;
    mpg::Model m(spec, seed);
    mpg::TrainConfig cfg;
    cfg.lr = lr;
    cfg.epochs = epochs;
    cfg.seed = seed;
    std::vector<int32_t> y(labels, labels + g->graph.NumNodes());
    const auto losses = mpg::Train(g->graph, x, y, m, cfg);
    std::copy(losses.begin(), losses.end(), losses_out);
  });
}

MPGStatus MPGBenchKernels(const MPGKernelBenchArgs* args, const char* out_path) {
  return Guard([&] {
    NotNull(args, "args");
    NotNull(args->graph, "graph spec");
    NotNull(out_path, "out_path");
    mpg::bench::KernelConfig c;
    c.graph = mpg::GenSpec::Parse(args->graph, args->seed);
    if (args->num_feat_sizes) {
      NotNull(args->feat_sizes, "feat_sizes");
      c.feat_sizes.assign(args->feat_sizes, args->feat_sizes + args->num_feat_sizes);
    }
    c.heads = args->heads;
    for (const auto& s : SplitList(args->strategies))
      c.strategies.push_back(mpg::bench::StrategyChoice::Parse(s));
    const auto formats = SplitList(args->formats);
    if (!formats.empty()) {
      c.formats.clear();
      for (const auto& f : formats) {
        const mpg::Format fmt = mpg::ParseFormat(f);
        MPG_CHECK_ARG(fmt != mpg::Format::kAuto, "benchmarks need explicit formats");
        c.formats.push_back(fmt);
      }
    }
    c.repeats = args->repeats;
    c.threads = args->threads;
    c.tolerance = args->tolerance;
    mpg::bench::BenchKernels(c).SaveCsv(out_path);
  });
}

MPGStatus MPGBenchMemory(const MPGMemoryBenchArgs* args, const char* out_path) {
  return Guard([&] {
    NotNull(args, "args");
    NotNull(out_path, "out_path");
    mpg::bench::MemoryConfig c;
    if (args->graph_kind) c.graph = mpg::ParseGraphKind(args->graph_kind);
    c.degree = args->degree;
    if (args->num_sizes) {
      NotNull(args->sizes, "sizes");
      c.sizes.assign(args->sizes, args->sizes + args->num_sizes);
    }
    if (args->num_feat_sizes) {
      NotNull(args->feat_sizes, "feat_sizes");
      c.feat_sizes.assign(args->feat_sizes, args->feat_sizes + args->num_feat_sizes);
    }
    c.heads = args->heads;
    c.cap_bytes = args->cap_bytes;
    c.seed = args->seed;
    c.threads = args->threads;
    mpg::bench::BenchMemory(c).SaveCsv(out_path);
  });
}

MPGStatus MPGBenchOverhead(const uint64_t* sizes, size_t num_sizes, uint64_t feat_size,
                           int repeats, int threads, uint64_t seed, const char* out_path) {
  return Guard([&] {
    NotNull(out_path, "out_path");
    mpg::bench::OverheadConfig c;
    if (num_sizes) {
      NotNull(sizes, "sizes");
      c.sizes.assign(sizes, sizes + num_sizes);
    }
    c.feat_size = feat_size;
    c.repeats = repeats;
    c.threads = threads;
    c.seed = seed;
    mpg::bench::BenchOverhead(c).SaveCsv(out_path);
  });
}

}  // extern "C"
