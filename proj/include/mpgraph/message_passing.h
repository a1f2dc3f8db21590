/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/message_passing.h
 * \brief Graph-centric API: named node/edge features, update_all and
 *  apply_edges on built-in functions, and the degree-bucketed path for
 *  user-defined functions.
 */
#ifndef MPGRAPH_MESSAGE_PASSING_H_
#define MPGRAPH_MESSAGE_PASSING_H_

#include <mpgraph/ops.h>

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace mpg {

/*! \brief A built-in message bound to feature names. */
struct MessageSpec {
  MessageFunc phi;
  std::string lhs;
  std::string rhs;
  std::string out;
};

struct ReduceSpec {
  ReduceOp op = ReduceOp::kSum;
  std::string msg;
  std::string out;
};

namespace fn {

MessageSpec CopyU(std::string x, std::string out);
MessageSpec CopyV(std::string y, std::string out);
MessageSpec CopyE(std::string w, std::string out);
/*! \brief Generic form, e.g. Binary(kMul, kSrc, "h", kEdge, "a", "m") for u_mul_e. */
MessageSpec Binary(BinaryOp op, Target lt, std::string lhs, Target rt, std::string rhs,
                   std::string out);
MessageSpec UMulE(std::string x, std::string w, std::string out);
MessageSpec UAddV(std::string x, std::string y, std::string out);
MessageSpec UDotV(std::string x, std::string y, std::string out, uint32_t heads = 1);

ReduceSpec Sum(std::string msg, std::string out);
ReduceSpec Max(std::string msg, std::string out);
ReduceSpec Min(std::string msg, std::string out);
ReduceSpec Mean(std::string msg, std::string out);

}  // namespace fn

/*! \brief Per-edge view handed to a message UDF; rows gathered on first use. */
class EdgeBatch {
 public:
  size_t size() const { return graph_->NumEdges(); }
  const FeatureMatrix& Src(const std::string& name);
  const FeatureMatrix& Dst(const std::string& name);
  const FeatureMatrix& Edge(const std::string& name);

 private:
  friend class GraphFrame;
  EdgeBatch(const Graph* g, const FeatureDict* nodes, const FeatureDict* edges)
      : graph_(g), nodes_(nodes), edges_(edges) {}
  const Graph* graph_;
  const FeatureDict* nodes_;
  const FeatureDict* edges_;
  std::map<std::string, FeatureMatrix> src_, dst_;
};

/*!
 * \brief Nodes of equal in-degree and their messages. Message j of node i is
 *  the j-th in-edge of that node in CSC order.
 */
class NodeBatch {
 public:
  const std::vector<NodeId>& nodes() const { return nodes_; }
  size_t degree() const { return degree_; }
  size_t message_dim() const { return mailbox_.cols(); }
  std::span<const double> Message(size_t i, size_t j) const {
    return mailbox_.row(i * degree_ + j);
  }
  /*! \brief (nodes * degree) x message_dim. */
  const FeatureMatrix& mailbox() const { return mailbox_; }
  /*! \brief Rows of a node feature for this batch's nodes. */
  FeatureMatrix Data(const std::string& name) const;

 private:
  friend class GraphFrame;
  NodeBatch() = default;
  std::vector<NodeId> nodes_;
  size_t degree_ = 0;
  FeatureMatrix mailbox_;
  const FeatureDict* ndata_ = nullptr;
};

using MessageUdf = std::function<FeatureMatrix(EdgeBatch&)>;
using ReduceUdf = std::function<FeatureMatrix(const NodeBatch&)>;

struct DegreeBucket {
  uint64_t degree = 0;
  std::vector<NodeId> nodes;
};

/*! \brief Nodes with at least one in-edge, grouped by in-degree ascending,
 *  ids ascending within a bucket. */
std::vector<DegreeBucket> DegreeBuckets(const Graph& g);

/*! \brief Above this many message entries the UDF path logs a warning. */
inline constexpr size_t kUdfWarnEntries = 1000000;

/*!
 * \brief A graph with named features recorded on a tape. Values set by the
 *  caller become tape leaves; outputs of built-in calls are tape ops, so a
 *  loss built from them differentiates back to the leaves.
 */
class GraphFrame {
 public:
  /*! \brief Uses `tape` when given, otherwise owns one. */
  explicit GraphFrame(Graph g, Tape* tape = nullptr);

  const Graph& graph() const { return graph_; }
  Tape& tape() { return *tape_; }
  const FeatureDict& ndata() const { return ndata_; }
  const FeatureDict& edata() const { return edata_; }

  Var SetNodeData(const std::string& name, FeatureMatrix value, bool requires_grad = false);
  Var SetEdgeData(const std::string& name, FeatureMatrix value, bool requires_grad = false);
  /*! \brief Bind an existing tape value. */
  void BindNodeData(const std::string& name, Var v);
  void BindEdgeData(const std::string& name, Var v);
  Var NodeVar(const std::string& name) const;
  Var EdgeVar(const std::string& name) const;

  /*! \brief One fused g-SpMM; result stored as ndata[reduce.out]. */
  Var UpdateAll(const MessageSpec& msg, const ReduceSpec& reduce, const KernelOptions& opts = {});
  /*! \brief One fused g-SDDMM; result stored as edata[msg.out]. */
  Var ApplyEdges(const MessageSpec& msg, const KernelOptions& opts = {});
  /*! \brief Per-destination softmax of edata[scores], stored as edata[out]. */
  Var EdgeSoftmax(const std::string& scores, const std::string& out,
                  const KernelOptions& opts = {});

  /*!
   * \brief Materializes every message, then runs `reduce` once per degree
   *  bucket. Nodes without in-edges get zero rows. The result is stored as
   *  ndata[out] and is not differentiable.
   */
  void UpdateAllUdf(const MessageUdf& message, const ReduceUdf& reduce, const std::string& out);

 private:
  Var Bind(FeatureDict* dict, std::map<std::string, Var>* vars, const std::string& name, Var v);
  Var Operand(const MessageSpec& msg, bool lhs) const;

  Graph graph_;
  std::unique_ptr<Tape> owned_tape_;
  Tape* tape_;
  FeatureDict ndata_, edata_;
  std::map<std::string, Var> nvars_, evars_;
};

}  // namespace mpg

#endif  // MPGRAPH_MESSAGE_PASSING_H_
