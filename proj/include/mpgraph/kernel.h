/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/kernel.h
 * \brief Fused generalized SpMM / SDDMM kernels over built-in message and
 *  reduce functions.
 *
 *  g-SpMM:  z_v = rho({ phi(lhs, rhs) on (u, e, v) : every in-edge of v })
 *  g-SDDMM: m_e = phi(lhs, rhs) on (u, e, v)
 *
 *  An operand's Target says which row it is read from for edge (u, e, v):
 *  row u (kSrc), row v (kDst) or row e (kEdge). Neither kernel materializes a
 *  per-edge message tensor for g-SpMM; the only scratch is per-thread.
 *
 *  Broadcasting: for add/sub/mul/div, when one operand dimension divides the
 *  other, component j of the smaller operand applies to the j-th contiguous
 *  block of the larger one (per-head scalars against per-head vectors; a
 *  width-1 operand is the single-head case). dot with `heads` H splits both
 *  operands into H blocks and yields H outputs.
 */
#ifndef MPGRAPH_KERNEL_H_
#define MPGRAPH_KERNEL_H_

#include <mpgraph/feature.h>
#include <mpgraph/graph.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpg {

enum class Target : uint8_t { kSrc, kDst, kEdge };
enum class BinaryOp : uint8_t { kCopyLhs, kCopyRhs, kAdd, kSub, kMul, kDiv, kDot };
enum class ReduceOp : uint8_t { kSum, kMax, kMin, kMean };
enum class Strategy : uint8_t {
  kAuto,
  kSerialReference,
  kNodeParallel,
  kEdgeParallel,
  kFeatureParallel,
};
enum class Format : uint8_t { kAuto, kCoo, kCsr, kCsc };
/*! \brief How edge-parallel g-SpMM resolves write conflicts on output rows. */
enum class Aggregation : uint8_t { kBuffered, kAtomic };
enum class KernelKind : uint8_t { kGSpMM, kGSDDMM };
enum class Direction : uint8_t { kForward, kBackward };

const char* TargetName(Target t);
const char* ReduceName(ReduceOp r);
const char* StrategyName(Strategy s);
const char* FormatName(Format f);
const char* KernelName(KernelKind k);

/*! \brief Accepts sum|max|min|mean. */
ReduceOp ParseReduce(std::string_view s);
/*! \brief Accepts serial|np|ep|fp and the long snake_case names. */
Strategy ParseStrategy(std::string_view s);
Format ParseFormat(std::string_view s);

struct MessageFunc {
  BinaryOp op = BinaryOp::kCopyLhs;
  Target lhs = Target::kSrc;
  Target rhs = Target::kEdge;
  uint32_t heads = 1;

  static MessageFunc CopyLhs(Target t) { return {BinaryOp::kCopyLhs, t, t, 1}; }
  static MessageFunc CopyRhs(Target t) { return {BinaryOp::kCopyRhs, t, t, 1}; }
  static MessageFunc Binary(BinaryOp op, Target l, Target r) { return {op, l, r, 1}; }
  static MessageFunc Dot(Target l, Target r, uint32_t heads = 1) {
    return {BinaryOp::kDot, l, r, heads};
  }

  bool UsesLhs() const { return op != BinaryOp::kCopyRhs; }
  bool UsesRhs() const { return op != BinaryOp::kCopyLhs; }

  /*! \brief e.g. "u_mul_e", "copy_lhs_u", "u_dot_v/8". */
  std::string Name() const;
  /*!
   * \brief Inverse of Name(). Also accepts copy_u, copy_v (lhs copies) and
   *  copy_e (rhs copy). Targets are u, v, e.
   */
  static MessageFunc Parse(std::string_view name);
};

/*!
 * \brief Output dimension of `phi` for the given operand dimensions; throws
 *  kShape if they are incompatible.
 */
size_t MessageDim(const MessageFunc& phi, size_t lhs_dim, size_t rhs_dim);

/*!
 * \brief Per-edge extremum witness for max/min g-SpMM: arg(v, k) is the edge
 *  that produced z(v, k), or kInvalidId for a node without in-edges.
 */
struct ArgExtrema {
  size_t rows = 0;
  size_t cols = 0;
  memory::TrackedVector<EdgeId> arg;

  EdgeId At(size_t r, size_t c) const { return arg[r * cols + c]; }
  bool Empty(size_t r, size_t c) const { return At(r, c) == kInvalidId; }
};

/*!
 * \brief Reduce-gradient applied to an operand as it is read. Degree and arg
 *  gates need a node-keyed operand; a plain scale works on any target.
 *
 *  Reading component k of node n on edge e yields
 *    value * scale * (1/deg(n) if mean_degrees) * [arg(n, k) == e if arg].
 *  This is d rho / d m_e folded into the message of a backward kernel, so
 *  mean/max/min backward stays a single fused g-SpMM/g-SDDMM.
 */
struct GradientGate {
  double scale = 1.0;
  const std::vector<uint64_t>* mean_degrees = nullptr;
  const ArgExtrema* arg = nullptr;

  bool Active() const { return scale != 1.0 || mean_degrees || arg; }
};

struct Operand {
  const FeatureMatrix* data = nullptr;
  GradientGate gate;

  Operand() = default;
  Operand(const FeatureMatrix& m) : data(&m) {}  // NOLINT(runtime/explicit)
  Operand(const FeatureMatrix* m) : data(m) {}   // NOLINT(runtime/explicit)
  Operand(const FeatureMatrix& m, GradientGate g) : data(&m), gate(g) {}
};

/*! \brief The X (src-keyed), Y (dst-keyed), W (edge-keyed) operand triple. */
struct NodeEdgeData {
  const FeatureMatrix* x = nullptr;
  const FeatureMatrix* y = nullptr;
  const FeatureMatrix* w = nullptr;

  const FeatureMatrix* ForTarget(Target t) const {
    return t == Target::kSrc ? x : t == Target::kDst ? y : w;
  }
};

struct KernelOptions {
  Strategy strategy = Strategy::kAuto;
  Format format = Format::kAuto;
  /*! \brief 0 selects DefaultNumThreads(). */
  int num_threads = 0;
  Aggregation aggregation = Aggregation::kBuffered;
};

struct SpmmResult {
  FeatureMatrix out;
  /*! \brief Present for max/min. */
  std::optional<ArgExtrema> arg_extrema;
  /*! \brief In-degree per node; filled for mean. */
  std::vector<uint64_t> in_degrees;
};

void SetDefaultNumThreads(int n);
int DefaultNumThreads();

/*!
 * \brief Preferred sparse layout. g-SpMM walks in-edges of each destination
 *  (CSC) forward; its backward runs on the reverse graph, whose CSC is the
 *  forward graph's CSR. g-SDDMM uses COO.
 */
Format SelectFormat(KernelKind kernel, Direction direction);

/*! \brief Node parallel for g-SpMM, edge parallel for g-SDDMM. */
Strategy DefaultStrategy(KernelKind kernel);

/*! \brief The layout a strategy uses when the caller leaves format on kAuto. */
Format NativeFormat(KernelKind kernel, Strategy strategy);

/*!
 * \brief Whether `strategy` can run on `format` without extra
 *  synchronization. Node-parallel g-SpMM needs destination rows (CSC);
 *  node-parallel g-SDDMM needs some row grouping (CSR or CSC).
 */
bool StrategySupports(KernelKind kernel, Strategy strategy, Format format);

SpmmResult GSpMM(const Graph& g, const MessageFunc& phi, ReduceOp rho,
                 const Operand& lhs, const Operand& rhs,
                 const KernelOptions& opts = {});

SpmmResult GSpMM(const Graph& g, const MessageFunc& phi, ReduceOp rho,
                 const NodeEdgeData& data, const KernelOptions& opts = {});

FeatureMatrix GSDDMM(const Graph& g, const MessageFunc& phi, const Operand& lhs,
                     const Operand& rhs, const KernelOptions& opts = {});

FeatureMatrix GSDDMM(const Graph& g, const MessageFunc& phi, const NodeEdgeData& data,
                     const KernelOptions& opts = {});

}  // namespace mpg

#endif  // MPGRAPH_KERNEL_H_
