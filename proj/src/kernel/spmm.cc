/*!
 *  Copyright (c) 2026 by Contributors
 * \file kernel/spmm.cc
 * \brief Fused g-SpMM under serial, node-, edge- and feature-parallel
 *  schedules.
 */
#include <mpgraph/dispatch_log.h>
#include <omp.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "kernel_impl.h"

namespace mpg {
namespace kernel {
namespace {

using memory::TrackedVector;

bool IsExtremum(ReduceOp r) { return r == ReduceOp::kMax || r == ReduceOp::kMin; }

double Identity(ReduceOp r) {
  if (r == ReduceOp::kMax) return -std::numeric_limits<double>::infinity();
  if (r == ReduceOp::kMin) return std::numeric_limits<double>::infinity();
  return 0.0;
}

/*! \brief Strictly better candidate; ties go to the smaller edge id. */
inline bool Better(ReduceOp r, double cand, EdgeId cand_e, double cur, EdgeId cur_e) {
  if (cand == cur) return cand_e < cur_e;
  return r == ReduceOp::kMax ? cand > cur : cand < cur;
}

/*! \brief Folds one message (columns [c0, c0+n)) into an output row. */
inline void Fold(ReduceOp r, const double* msg, size_t n, EdgeId e, double* zrow,
                 EdgeId* arow) {
  if (!IsExtremum(r)) {
    for (size_t k = 0; k < n; ++k) zrow[k] += msg[k];
    return;
  }
  for (size_t k = 0; k < n; ++k) {
    if (Better(r, msg[k], e, zrow[k], arow[k])) {
      zrow[k] = msg[k];
      arow[k] = e;
    }
  }
}

struct SpmmState {
  const MessageCtx* ctx;
  ReduceOp rho;
  size_t dim;
  double* z;
  EdgeId* arg;  // null for sum/mean
  std::atomic<EdgeId>* div_zero;
};

template <bool kGated>
void RunSerial(const Graph& g, const SpmmState& s) {
  const auto src = g.Src();
  const auto dst = g.Dst();
  std::vector<double> msg(s.dim);
  for (size_t e = 0; e < src.size(); ++e) {
    EvalMessage<kGated>(*s.ctx, src[e], dst[e], static_cast<EdgeId>(e), 0, s.dim,
                        msg.data(), s.div_zero);
    const size_t off = static_cast<size_t>(dst[e]) * s.dim;
    Fold(s.rho, msg.data(), s.dim, static_cast<EdgeId>(e), s.z + off,
         s.arg ? s.arg + off : nullptr);
  }
}

template <bool kGated>
void RunNodeParallel(const Graph& g, const SpmmState& s, int threads) {
  const auto& csc = g.Csc();
  const int64_t n = static_cast<int64_t>(g.NumNodes());
#pragma omp parallel num_threads(threads)
  {
    std::vector<double> msg(s.dim);
#pragma omp for schedule(dynamic, 64)
    for (int64_t v = 0; v < n; ++v) {
      const size_t off = static_cast<size_t>(v) * s.dim;
      for (uint64_t p = csc.indptr[v]; p < csc.indptr[v + 1]; ++p) {
        const EdgeId e = csc.edge_ids[p];
        EvalMessage<kGated>(*s.ctx, csc.indices[p], static_cast<NodeId>(v), e, 0, s.dim,
                            msg.data(), s.div_zero);
        Fold(s.rho, msg.data(), s.dim, e, s.z + off, s.arg ? s.arg + off : nullptr);
      }
    }
  }
}

template <bool kGated>
void RunFeatureParallel(const Graph& g, const SpmmState& s, Format format, int threads) {
  const int parts = static_cast<int>(std::max<size_t>(1, std::min<size_t>(threads, s.dim)));
  const EdgeSource source = EdgeSource::Make(g, format);
#pragma omp parallel num_threads(parts)
  {
    const auto [c0, c1] = Chunk(s.dim, parts, omp_get_thread_num());
    const size_t width = c1 - c0;
    std::vector<double> msg(width);
    if (width > 0) {
      source.ForRange(0, source.num_edges, [&](NodeId u, NodeId v, EdgeId e) {
        EvalMessage<kGated>(*s.ctx, u, v, e, c0, c1, msg.data(), s.div_zero);
        const size_t off = static_cast<size_t>(v) * s.dim + c0;
        Fold(s.rho, msg.data(), width, e, s.z + off, s.arg ? s.arg + off : nullptr);
      });
    }
  }
}

constexpr size_t kLockStripes = 1024;

template <bool kGated>
void RunEdgeParallelAtomic(const Graph& g, const SpmmState& s, Format format, int threads) {
  const EdgeSource source = EdgeSource::Make(g, format);
  std::unique_ptr<std::atomic_flag[]> locks;
  if (IsExtremum(s.rho)) {
    locks.reset(new std::atomic_flag[kLockStripes]);
    for (size_t i = 0; i < kLockStripes; ++i) locks[i].clear();
  }
#pragma omp parallel num_threads(threads)
  {
    const auto [p0, p1] = Chunk(source.num_edges, threads, omp_get_thread_num());
    std::vector<double> msg(s.dim);
    source.ForRange(p0, p1, [&](NodeId u, NodeId v, EdgeId e) {
      EvalMessage<kGated>(*s.ctx, u, v, e, 0, s.dim, msg.data(), s.div_zero);
      const size_t off = static_cast<size_t>(v) * s.dim;
      if (!IsExtremum(s.rho)) {
        for (size_t k = 0; k < s.dim; ++k)
          std::atomic_ref<double>(s.z[off + k]).fetch_add(msg[k], std::memory_order_relaxed);
      } else {
        std::atomic_flag& lock = locks[v % kLockStripes];
        while (lock.test_and_set(std::memory_order_acquire)) {
        }
        Fold(s.rho, msg.data(), s.dim, e, s.z + off, s.arg + off);
        lock.clear(std::memory_order_release);
      }
    });
  }
}

/*!
 * Each thread folds its contiguous slice of edges into a private buffer that
 * spans only the destination rows the slice touches; buffers are merged per
 * row in thread order.
 */
template <bool kGated>
void RunEdgeParallelBuffered(const Graph& g, const SpmmState& s, Format format,
                             int threads) {
  const EdgeSource source = EdgeSource::Make(g, format);
  if (threads == 1) {
    std::vector<double> msg(s.dim);
    source.ForRange(0, source.num_edges, [&](NodeId u, NodeId v, EdgeId e) {
      EvalMessage<kGated>(*s.ctx, u, v, e, 0, s.dim, msg.data(), s.div_zero);
      const size_t off = static_cast<size_t>(v) * s.dim;
      Fold(s.rho, msg.data(), s.dim, e, s.z + off, s.arg ? s.arg + off : nullptr);
    });
    return;
  }
  const bool extremum = IsExtremum(s.rho);
  const double init = Identity(s.rho);
  std::vector<NodeId> lo(threads), hi(threads);
  std::vector<TrackedVector<double>> vals(threads);
  std::vector<TrackedVector<EdgeId>> args(threads);
#pragma omp parallel num_threads(threads)
  {
    const int t = omp_get_thread_num();
    const auto [p0, p1] = Chunk(source.num_edges, threads, t);
    NodeId mn = std::numeric_limits<NodeId>::max(), mx = 0;
    source.ForRange(p0, p1, [&](NodeId, NodeId v, EdgeId) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    });
    lo[t] = mn;
    hi[t] = mx;
    if (p0 < p1) {
      const size_t rows = static_cast<size_t>(mx - mn) + 1;
      vals[t].assign(rows * s.dim, init);
      if (extremum) args[t].assign(rows * s.dim, kInvalidId);
      std::vector<double> msg(s.dim);
      double* buf = vals[t].data();
      EdgeId* abuf = extremum ? args[t].data() : nullptr;
      source.ForRange(p0, p1, [&](NodeId u, NodeId v, EdgeId e) {
        EvalMessage<kGated>(*s.ctx, u, v, e, 0, s.dim, msg.data(), s.div_zero);
        const size_t off = static_cast<size_t>(v - mn) * s.dim;
        Fold(s.rho, msg.data(), s.dim, e, buf + off, abuf ? abuf + off : nullptr);
      });
    }
  }
  const int64_t n = static_cast<int64_t>(g.NumNodes());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int64_t v = 0; v < n; ++v) {
    const size_t off = static_cast<size_t>(v) * s.dim;
    for (int t = 0; t < threads; ++t) {
      if (vals[t].empty() || v < lo[t] || v > hi[t]) continue;
      const size_t boff = static_cast<size_t>(v - lo[t]) * s.dim;
      if (!extremum) {
        for (size_t k = 0; k < s.dim; ++k) s.z[off + k] += vals[t][boff + k];
      } else {
        for (size_t k = 0; k < s.dim; ++k) {
          const EdgeId e = args[t][boff + k];
          if (e == kInvalidId) continue;
          if (Better(s.rho, vals[t][boff + k], e, s.z[off + k], s.arg[off + k])) {
            s.z[off + k] = vals[t][boff + k];
            s.arg[off + k] = e;
          }
        }
      }
    }
  }
}

template <bool kGated>
void Dispatch(const Graph& g, const SpmmState& s, Strategy strategy, Format format,
              int threads, Aggregation agg) {
  switch (strategy) {
    case Strategy::kSerialReference: RunSerial<kGated>(g, s); break;
    case Strategy::kNodeParallel: RunNodeParallel<kGated>(g, s, threads); break;
    case Strategy::kFeatureParallel: RunFeatureParallel<kGated>(g, s, format, threads); break;
    case Strategy::kEdgeParallel:
      if (agg == Aggregation::kAtomic) {
        RunEdgeParallelAtomic<kGated>(g, s, format, threads);
      } else {
        RunEdgeParallelBuffered<kGated>(g, s, format, threads);
      }
      break;
    case Strategy::kAuto: MPG_FAIL(ErrorCode::kInternal, "unresolved strategy");
  }
}

}  // namespace
}  // namespace kernel

SpmmResult GSpMM(const Graph& g, const MessageFunc& phi, ReduceOp rho, const Operand& lhs,
                 const Operand& rhs, const KernelOptions& opts) {
  using namespace kernel;  // NOLINT(build/namespaces)
  const MessageCtx ctx = BuildContext(g, phi, lhs, rhs);
  const Strategy strategy =
      opts.strategy == Strategy::kAuto ? DefaultStrategy(KernelKind::kGSpMM) : opts.strategy;
  const Format format =
      opts.format == Format::kAuto ? NativeFormat(KernelKind::kGSpMM, strategy) : opts.format;
  MPG_CHECK(StrategySupports(KernelKind::kGSpMM, strategy, format),
            ErrorCode::kInvalidStrategy,
            "g-SpMM cannot run " << StrategyName(strategy) << " on " << FormatName(format));
  const int threads = ResolveThreads(opts);
  const size_t dim = ctx.out_dim;
  const size_t n = g.NumNodes();

  SpmmResult result;
  result.out = FeatureMatrix(n, dim, Identity(rho));
  if (IsExtremum(rho)) {
    ArgExtrema ax;
    ax.rows = n;
    ax.cols = dim;
    ax.arg.assign(n * dim, kInvalidId);
    result.arg_extrema = std::move(ax);
  }
  std::atomic<EdgeId> div_zero{kInvalidId};
  SpmmState state{&ctx, rho, dim, result.out.data(),
                  result.arg_extrema ? result.arg_extrema->arg.data() : nullptr, &div_zero};
  if (dim > 0) {
    if (ctx.gated) {
      Dispatch<true>(g, state, strategy, format, threads, opts.aggregation);
    } else {
      Dispatch<false>(g, state, strategy, format, threads, opts.aggregation);
    }
  }
  MPG_CHECK(div_zero.load() == kInvalidId, ErrorCode::kDivideByZero,
            phi.Name() << ": division by zero on edge " << div_zero.load());

  if (IsExtremum(rho)) {
    const auto& arg = result.arg_extrema->arg;
    double* z = result.out.data();
    for (size_t i = 0; i < n * dim; ++i)
      if (arg[i] == kInvalidId) z[i] = 0.0;
  } else if (rho == ReduceOp::kMean) {
    result.in_degrees = g.InDegrees();
    for (size_t v = 0; v < n; ++v) {
      const uint64_t d = result.in_degrees[v];
      if (d == 0) continue;
      for (double& x : result.out.row(v)) x /= static_cast<double>(d);
    }
  }

  LogDispatch({"gspmm", g.Id(), DescribeMessage(phi, lhs, rhs), ReduceName(rho),
               std::string(StrategyName(strategy)) + ":" + FormatName(format), n, dim});
  return result;
}

SpmmResult GSpMM(const Graph& g, const MessageFunc& phi, ReduceOp rho,
                 const NodeEdgeData& data, const KernelOptions& opts) {
  return GSpMM(g, phi, rho, Operand(data.ForTarget(phi.lhs)), Operand(data.ForTarget(phi.rhs)),
               opts);
}

}  // namespace mpg
