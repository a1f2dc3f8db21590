/*!
 *  Copyright (c) 2026 by Contributors
 * \file kernel/sddmm.cc
 * \brief Fused g-SDDMM. Every edge writes its own output row, so all
 *  schedules are conflict-free.
 */
#include <mpgraph/dispatch_log.h>
#include <omp.h>

#include <atomic>
#include <vector>

#include "kernel_impl.h"

namespace mpg {
namespace kernel {
namespace {

struct SddmmState {
  const MessageCtx* ctx;
  size_t dim;
  double* m;
  std::atomic<EdgeId>* div_zero;
};

template <bool kGated>
void RunSerial(const Graph& g, const SddmmState& s) {
  const auto src = g.Src();
  const auto dst = g.Dst();
  for (size_t e = 0; e < src.size(); ++e) {
    EvalMessage<kGated>(*s.ctx, src[e], dst[e], static_cast<EdgeId>(e), 0, s.dim,
                        s.m + e * s.dim, s.div_zero);
  }
}

template <bool kGated>
void RunNodeParallel(const Graph& g, const SddmmState& s, Format format, int threads) {
  const CompactAdjacency& adj = format == Format::kCsr ? g.Csr() : g.Csc();
  const bool by_src = format == Format::kCsr;
  const int64_t n = static_cast<int64_t>(g.NumNodes());
#pragma omp parallel for num_threads(threads) schedule(dynamic, 64)
  for (int64_t r = 0; r < n; ++r) {
    for (uint64_t p = adj.indptr[r]; p < adj.indptr[r + 1]; ++p) {
      const EdgeId e = adj.edge_ids[p];
      const NodeId row = static_cast<NodeId>(r), col = adj.indices[p];
      EvalMessage<kGated>(*s.ctx, by_src ? row : col, by_src ? col : row, e, 0, s.dim,
                          s.m + static_cast<size_t>(e) * s.dim, s.div_zero);
    }
  }
}

template <bool kGated>
void RunEdgeParallel(const Graph& g, const SddmmState& s, Format format, int threads) {
  const EdgeSource source = EdgeSource::Make(g, format);
#pragma omp parallel num_threads(threads)
  {
    const auto [p0, p1] = Chunk(source.num_edges, threads, omp_get_thread_num());
    source.ForRange(p0, p1, [&](NodeId u, NodeId v, EdgeId e) {
      EvalMessage<kGated>(*s.ctx, u, v, e, 0, s.dim, s.m + static_cast<size_t>(e) * s.dim,
                          s.div_zero);
    });
  }
}

template <bool kGated>
void RunFeatureParallel(const Graph& g, const SddmmState& s, Format format, int threads) {
  const int parts = static_cast<int>(std::max<size_t>(1, std::min<size_t>(threads, s.dim)));
  const EdgeSource source = EdgeSource::Make(g, format);
#pragma omp parallel num_threads(parts)
  {
    const auto [c0, c1] = Chunk(s.dim, parts, omp_get_thread_num());
    if (c1 > c0) {
      std::vector<double> msg(c1 - c0);
      source.ForRange(0, source.num_edges, [&](NodeId u, NodeId v, EdgeId e) {
        EvalMessage<kGated>(*s.ctx, u, v, e, c0, c1, msg.data(), s.div_zero);
        std::copy(msg.begin(), msg.end(), s.m + static_cast<size_t>(e) * s.dim + c0);
      });
    }
  }
}

template <bool kGated>
void Dispatch(const Graph& g, const SddmmState& s, Strategy strategy, Format format,
              int threads) {
  switch (strategy) {
    case Strategy::kSerialReference: RunSerial<kGated>(g, s); break;
    case Strategy::kNodeParallel: RunNodeParallel<kGated>(g, s, format, threads); break;
    case Strategy::kEdgeParallel: RunEdgeParallel<kGated>(g, s, format, threads); break;
    case Strategy::kFeatureParallel: RunFeatureParallel<kGated>(g, s, format, threads); break;
    case Strategy::kAuto: MPG_FAIL(ErrorCode::kInternal, "unresolved strategy");
  }
}

}  // namespace
}  // namespace kernel

FeatureMatrix GSDDMM(const Graph& g, const MessageFunc& phi, const Operand& lhs,
                     const Operand& rhs, const KernelOptions& opts) {
  using namespace kernel;  // NOLINT(build/namespaces)
  const MessageCtx ctx = BuildContext(g, phi, lhs, rhs);
  const Strategy strategy =
      opts.strategy == Strategy::kAuto ? DefaultStrategy(KernelKind::kGSDDMM) : opts.strategy;
  const Format format =
      opts.format == Format::kAuto ? NativeFormat(KernelKind::kGSDDMM, strategy) : opts.format;
  MPG_CHECK(StrategySupports(KernelKind::kGSDDMM, strategy, format),
            ErrorCode::kInvalidStrategy,
            "g-SDDMM cannot run " << StrategyName(strategy) << " on " << FormatName(format));
  const int threads = ResolveThreads(opts);
  const size_t dim = ctx.out_dim;

  FeatureMatrix out(g.NumEdges(), dim);
  std::atomic<EdgeId> div_zero{kInvalidId};
  SddmmState state{&ctx, dim, out.data(), &div_zero};
  if (dim > 0 && g.NumEdges() > 0) {
    if (ctx.gated) {
      Dispatch<true>(g, state, strategy, format, threads);
    } else {
      Dispatch<false>(g, state, strategy, format, threads);
    }
  }
  MPG_CHECK(div_zero.load() == kInvalidId, ErrorCode::kDivideByZero,
            phi.Name() << ": division by zero on edge " << div_zero.load());
  LogDispatch({"gsddmm", g.Id(), DescribeMessage(phi, lhs, rhs), "-",
               std::string(StrategyName(strategy)) + ":" + FormatName(format), g.NumEdges(),
               dim});
  return out;
}

FeatureMatrix GSDDMM(const Graph& g, const MessageFunc& phi, const NodeEdgeData& data,
                     const KernelOptions& opts) {
  return GSDDMM(g, phi, Operand(data.ForTarget(phi.lhs)), Operand(data.ForTarget(phi.rhs)),
                opts);
}

}  // namespace mpg
