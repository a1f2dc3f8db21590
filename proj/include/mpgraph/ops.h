/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/ops.h
 * \brief Taped operations. Each call computes its value now and records a
 *  closed-form backward on the tape.
 */
#ifndef MPGRAPH_OPS_H_
#define MPGRAPH_OPS_H_

#include <mpgraph/autodiff.h>

#include <memory>
#include <vector>

namespace mpg {
namespace ops {

// dense
Var MatMul(Tape& t, Var a, Var b);
Var Add(Tape& t, Var a, Var b);
/*! \brief x + bias, bias is 1 x cols and added to every row. */
Var AddBias(Tape& t, Var x, Var bias);
Var Scale(Tape& t, Var a, double s);
Var Relu(Tape& t, Var a);
Var Exp(Tape& t, Var a);
Var SoftmaxRows(Tape& t, Var a);
/*! \brief 1x1 mean cross entropy; rows with a negative label are ignored. */
Var XentLoss(Tape& t, Var logits, std::vector<int32_t> labels);
/*! \brief 1x1 sum of x .* weights; a linear probe used as a test loss. */
Var SumProduct(Tape& t, Var x, FeatureMatrix weights);
/*!
 * \brief feat is rows x (heads*w), vec is 1 x (heads*w). Output rows x heads,
 *  column h the dot of block h of a row with block h of vec.
 */
Var HeadDot(Tape& t, Var feat, Var vec, uint32_t heads);

// fused graph kernels; pass Var{} for an operand phi does not read
Var GSpMM(Tape& t, const Graph& g, const MessageFunc& phi, ReduceOp rho, Var lhs, Var rhs,
          const KernelOptions& opts = {});
Var GSDDMM(Tape& t, const Graph& g, const MessageFunc& phi, Var lhs, Var rhs,
           const KernelOptions& opts = {});

/*!
 * \brief Softmax of edge scores over the in-edges of each destination, per
 *  column. Built from max g-SpMM, a subtracting g-SDDMM, exp, sum g-SpMM
 *  and a dividing g-SDDMM.
 */
Var EdgeSoftmax(Tape& t, const Graph& g, Var scores, const KernelOptions& opts = {});

// unfused message passing: materializes one row per edge
/*! \brief out.row(i) = x.row(ids[i]). */
Var GatherRows(Tape& t, Var x, std::shared_ptr<const std::vector<NodeId>> ids);
/*! \brief out.row(ids[i]) += m.row(i), out has `rows` rows. */
Var ScatterAddRows(Tape& t, Var m, std::shared_ptr<const std::vector<NodeId>> ids,
                   size_t rows);
/*! \brief msg is E x (heads*w), w is E x heads; scales block h of row e by w(e, h). */
Var MulHeadBroadcast(Tape& t, Var msg, Var w);

}  // namespace ops
}  // namespace mpg

#endif  // MPGRAPH_OPS_H_
