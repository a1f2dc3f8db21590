/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/autodiff.h
 * \brief Backward of the fused kernels, written as fused kernels, and the
 *  tape that chains them with dense ops.
 *
 *  The gradient of an operand keyed by the source node comes from a g-SpMM
 *  on the reverse graph; one keyed by the destination from a g-SpMM on the
 *  graph itself; an edge-keyed one from a g-SDDMM on the graph.
 */
#ifndef MPGRAPH_AUTODIFF_H_
#define MPGRAPH_AUTODIFF_H_

#include <mpgraph/kernel.h>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mpg {

/*! \brief Gradients keyed by operand role. Absent when not requested. */
struct OperandGrads {
  std::optional<FeatureMatrix> lhs;
  std::optional<FeatureMatrix> rhs;
};

/*! \brief Gradients keyed by target: X (src), Y (dst), W (edge). */
struct GradBundle {
  std::optional<FeatureMatrix> dx;
  std::optional<FeatureMatrix> dy;
  std::optional<FeatureMatrix> dw;
};

struct GradRequest {
  bool lhs = true;
  bool rhs = true;
};

OperandGrads GSDDMMBackward(const Graph& g, const MessageFunc& phi, const FeatureMatrix* lhs,
                            const FeatureMatrix* rhs, const FeatureMatrix& d_out,
                            GradRequest want = {}, const KernelOptions& opts = {});

/*!
 * \brief `forward` is the result of the matching GSpMM call; its arg table
 *  (max/min) or degree vector (mean) supplies the reduce gradient.
 */
OperandGrads GSpMMBackward(const Graph& g, const MessageFunc& phi, ReduceOp rho,
                           const FeatureMatrix* lhs, const FeatureMatrix* rhs,
                           const SpmmResult& forward, const FeatureMatrix& d_out,
                           GradRequest want = {}, const KernelOptions& opts = {});

/*! \brief X/Y/W form; a target used by both operands gets the sum. */
GradBundle GSDDMMBackward(const Graph& g, const MessageFunc& phi, const NodeEdgeData& data,
                          const FeatureMatrix& d_out, const KernelOptions& opts = {});
GradBundle GSpMMBackward(const Graph& g, const MessageFunc& phi, ReduceOp rho,
                         const NodeEdgeData& data, const SpmmResult& forward,
                         const FeatureMatrix& d_out, const KernelOptions& opts = {});

// ---------------------------------------------------------------------------

/*! \brief Handle to a value recorded on a Tape. */
struct Var {
  int64_t index = -1;
  bool valid() const { return index >= 0; }
  friend bool operator==(Var a, Var b) { return a.index == b.index; }
};

/*!
 * \brief Linear record of executed ops. Values are saved, not recomputed.
 *  Backward walks the record in reverse and accumulates gradients additively
 *  into every leaf created with requires_grad.
 */
class Tape {
 public:
  /*!
   * \brief Gradient of each input given the output gradient; entry i may be
   *  left empty when needs[i] is false.
   */
  using BackwardFn = std::function<std::vector<std::optional<FeatureMatrix>>(
      const FeatureMatrix& d_out, const std::vector<bool>& needs)>;

  Var Leaf(FeatureMatrix value, bool requires_grad = false);
  Var Leaf(std::shared_ptr<const FeatureMatrix> value, bool requires_grad = false);

  /*! \brief Appends an op. `backward` is dropped when no input needs a gradient. */
  Var Record(std::string op, FeatureMatrix value, std::vector<Var> inputs,
             BackwardFn backward);

  const FeatureMatrix& Value(Var v) const;
  std::shared_ptr<const FeatureMatrix> Shared(Var v) const;
  bool RequiresGrad(Var v) const;
  const std::string& OpName(Var v) const;
  size_t size() const { return entries_.size(); }

  /*!
   * \brief Reverse pass from a 1x1 `loss`. Replaces gradients from any
   *  earlier call. Throws kState on an empty tape or foreign handle and kShape
   *  on a non-scalar loss.
   */
  void Backward(Var loss);

  /*! \brief Gradient of a requires_grad leaf after Backward; null if none reached it. */
  const FeatureMatrix* Grad(Var leaf) const;

  /*! \brief Drop every entry and gradient. */
  void Clear();

 private:
  struct Entry {
    std::string op;
    std::shared_ptr<const FeatureMatrix> value;
    std::vector<Var> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    bool leaf = false;
  };
  const Entry& At(Var v) const;

  std::vector<Entry> entries_;
  std::vector<std::optional<FeatureMatrix>> leaf_grads_;
};

// ---------------------------------------------------------------------------

struct GradCheckFailure {
  size_t leaf = 0;
  size_t row = 0;
  size_t col = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  size_t checked = 0;
  std::vector<GradCheckFailure> failures;
  bool passed() const { return failures.empty(); }
};

/*!
 * \brief Builds the computation on a fresh tape from leaf values and returns
 *  the scalar loss var. Leaves are registered in order with requires_grad.
 */
using TapedFunction = std::function<Var(Tape& tape, const std::vector<Var>& leaves)>;

/*!
 * \brief Central differences on every entry of every leaf. The error of an
 *  entry is |a - n| / max(|a|, |n|, 1e-3); entries above `tol` are failures.
 */
GradCheckReport GradCheck(const TapedFunction& f, const std::vector<FeatureMatrix>& leaves,
                          double h = 1e-6, double tol = 1e-5);

}  // namespace mpg

#endif  // MPGRAPH_AUTODIFF_H_
