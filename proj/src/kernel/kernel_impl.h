/*!
 *  Copyright (c) 2026 by Contributors
 * \file kernel/kernel_impl.h
 * \brief Message evaluation and edge traversal shared by the g-SpMM and
 *  g-SDDMM implementations.
 */
#ifndef MPGRAPH_SRC_KERNEL_KERNEL_IMPL_H_
#define MPGRAPH_SRC_KERNEL_KERNEL_IMPL_H_

#include <mpgraph/kernel.h>

#include <algorithm>
#include <atomic>
#include <string>

namespace mpg {
namespace kernel {

/*! \brief An operand resolved to raw rows plus its gate. */
struct OperandView {
  const double* data = nullptr;
  size_t dim = 0;
  Target target = Target::kSrc;
  double scale = 1.0;
  const uint64_t* degrees = nullptr;
  const EdgeId* arg = nullptr;
  bool gated = false;

  const double* Row(NodeId u, NodeId v, EdgeId e) const {
    const size_t idx = target == Target::kSrc ? u : target == Target::kDst ? v : e;
    return data + idx * dim;
  }
  NodeId GateNode(NodeId u, NodeId v) const { return target == Target::kSrc ? u : v; }
  double RowFactor(NodeId node) const {
    double f = scale;
    if (degrees) f = degrees[node] ? f / static_cast<double>(degrees[node]) : 0.0;
    return f;
  }
};

struct MessageCtx {
  BinaryOp op = BinaryOp::kCopyLhs;
  OperandView lhs;
  OperandView rhs;
  size_t out_dim = 0;
  // Output column c reads lhs[c / lhs_block] and rhs[c / rhs_block].
  size_t lhs_block = 1;
  size_t rhs_block = 1;
  // dot: component width per head.
  size_t dot_width = 0;
  bool gated = false;
};

/*! \brief Records the smallest edge id that divided by zero. */
inline void NoteDivZero(std::atomic<EdgeId>* slot, EdgeId e) {
  EdgeId cur = slot->load(std::memory_order_relaxed);
  while (e < cur && !slot->compare_exchange_weak(cur, e)) {
  }
}

/*!
 * \brief Writes message columns [c0, c1) of edge (u, e, v) to out[0 .. c1-c0).
 */
template <bool kGated>
inline void EvalMessage(const MessageCtx& m, NodeId u, NodeId v, EdgeId e, size_t c0,
                        size_t c1, double* out, std::atomic<EdgeId>* div_zero) {
  const double* lrow = m.op != BinaryOp::kCopyRhs ? m.lhs.Row(u, v, e) : nullptr;
  const double* rrow = m.op != BinaryOp::kCopyLhs ? m.rhs.Row(u, v, e) : nullptr;
  double lf = 1.0, rf = 1.0;
  NodeId ln = 0, rn = 0;
  if constexpr (kGated) {
    if (lrow && m.lhs.gated) {
      ln = m.lhs.GateNode(u, v);
      lf = m.lhs.RowFactor(ln);
    }
    if (rrow && m.rhs.gated) {
      rn = m.rhs.GateNode(u, v);
      rf = m.rhs.RowFactor(rn);
    }
  }
  auto L = [&](size_t k) -> double {
    if constexpr (kGated) {
      if (!m.lhs.gated) return lrow[k];
      if (m.lhs.arg && m.lhs.arg[static_cast<size_t>(ln) * m.lhs.dim + k] != e) return 0.0;
      return lrow[k] * lf;
    } else {
      return lrow[k];
    }
  };
  auto R = [&](size_t k) -> double {
    if constexpr (kGated) {
      if (!m.rhs.gated) return rrow[k];
      if (m.rhs.arg && m.rhs.arg[static_cast<size_t>(rn) * m.rhs.dim + k] != e) return 0.0;
      return rrow[k] * rf;
    } else {
      return rrow[k];
    }
  };
  const size_t lb = m.lhs_block, rb = m.rhs_block;
  // At most one side broadcasts; read it once per block.
  auto each = [&](auto op) {
    if (lb == 1 && rb == 1) {
      for (size_t c = c0; c < c1; ++c) out[c - c0] = op(L(c), R(c));
    } else if (lb != 1 && rb != 1) {
      for (size_t c = c0; c < c1; ++c) out[c - c0] = op(L(c / lb), R(c / rb));
    } else {
      const size_t b = lb == 1 ? rb : lb;
      for (size_t c = c0; c < c1;) {
        const size_t blk = c / b;
        const size_t end = std::min(c1, (blk + 1) * b);
        if (lb == 1) {
          const double r = R(blk);
          for (; c < end; ++c) out[c - c0] = op(L(c), r);
        } else {
          const double l = L(blk);
          for (; c < end; ++c) out[c - c0] = op(l, R(c));
        }
      }
    }
  };
  switch (m.op) {
    case BinaryOp::kCopyLhs:
      for (size_t c = c0; c < c1; ++c) out[c - c0] = L(c);
      break;
    case BinaryOp::kCopyRhs:
      for (size_t c = c0; c < c1; ++c) out[c - c0] = R(c);
      break;
    case BinaryOp::kAdd:
      each([](double a, double b) { return a + b; });
      break;
    case BinaryOp::kSub:
      each([](double a, double b) { return a - b; });
      break;
    case BinaryOp::kMul:
      each([](double a, double b) { return a * b; });
      break;
    case BinaryOp::kDiv:
      each([&](double a, double b) {
        if (b == 0.0) {
          NoteDivZero(div_zero, e);
          return 0.0;
        }
        return a / b;
      });
      break;
    case BinaryOp::kDot: {
      const size_t w = m.dot_width;
      for (size_t h = c0; h < c1; ++h) {
        double s = 0.0;
        for (size_t j = h * w; j < (h + 1) * w; ++j) s += L(j) * R(j);
        out[h - c0] = s;
      }
      break;
    }
  }
}

/*! \brief Edge enumeration in the order of a sparse layout. */
struct EdgeSource {
  Format format = Format::kCoo;
  uint64_t num_edges = 0;
  const NodeId* src = nullptr;
  const NodeId* dst = nullptr;
  const CompactAdjacency* adj = nullptr;

  static EdgeSource Make(const Graph& g, Format f) {
    EdgeSource s;
    s.format = f;
    s.num_edges = g.NumEdges();
    s.src = g.Src().data();
    s.dst = g.Dst().data();
    if (f == Format::kCsr) s.adj = &g.Csr();
    if (f == Format::kCsc) s.adj = &g.Csc();
    return s;
  }

  /*! \brief Calls f(u, v, e) for positions [p0, p1) of this layout. */
  template <typename F>
  void ForRange(uint64_t p0, uint64_t p1, F&& f) const {
    if (p0 >= p1) return;
    if (format == Format::kCoo) {
      for (uint64_t p = p0; p < p1; ++p) f(src[p], dst[p], static_cast<EdgeId>(p));
      return;
    }
    const auto& ip = adj->indptr;
    uint64_t r = std::upper_bound(ip.begin(), ip.end(), p0) - ip.begin() - 1;
    for (uint64_t p = p0; p < p1; ++p) {
      while (ip[r + 1] <= p) ++r;
      const NodeId row = static_cast<NodeId>(r);
      const NodeId col = adj->indices[p];
      if (format == Format::kCsr) {
        f(row, col, adj->edge_ids[p]);
      } else {
        f(col, row, adj->edge_ids[p]);
      }
    }
  }
};

inline std::pair<uint64_t, uint64_t> Chunk(uint64_t total, int parts, int index) {
  const uint64_t base = total / parts, extra = total % parts;
  const uint64_t b = index * base + std::min<uint64_t>(index, extra);
  return {b, b + base + (static_cast<uint64_t>(index) < extra ? 1 : 0)};
}

/*! \brief Validates operands and fills the message context. */
MessageCtx BuildContext(const Graph& g, const MessageFunc& phi, const Operand& lhs,
                        const Operand& rhs);

int ResolveThreads(const KernelOptions& opts);

/*! \brief phi name plus gate marks, for the dispatch log. */
std::string DescribeMessage(const MessageFunc& phi, const Operand& lhs, const Operand& rhs);

}  // namespace kernel
}  // namespace mpg

#endif  // MPGRAPH_SRC_KERNEL_KERNEL_IMPL_H_
