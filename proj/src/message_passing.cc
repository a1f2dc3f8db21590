/*!
 *  Copyright (c) 2026 by Contributors
 * \file message_passing.cc
 */
#include <mpgraph/message_passing.h>

#include <algorithm>
#include <iostream>
#include <utility>

namespace mpg {

namespace fn {

MessageSpec CopyU(std::string x, std::string out) {
  return {MessageFunc::CopyLhs(Target::kSrc), std::move(x), "", std::move(out)};
}
MessageSpec CopyV(std::string y, std::string out) {
  return {MessageFunc::CopyLhs(Target::kDst), std::move(y), "", std::move(out)};
}
MessageSpec CopyE(std::string w, std::string out) {
  return {MessageFunc::CopyRhs(Target::kEdge), "", std::move(w), std::move(out)};
}
MessageSpec Binary(BinaryOp op, Target lt, std::string lhs, Target rt, std::string rhs,
                   std::string out) {
  return {MessageFunc::Binary(op, lt, rt), std::move(lhs), std::move(rhs), std::move(out)};
}
MessageSpec UMulE(std::string x, std::string w, std::string out) {
  return Binary(BinaryOp::kMul, Target::kSrc, std::move(x), Target::kEdge, std::move(w),
                std::move(out));
}
MessageSpec UAddV(std::string x, std::string y, std::string out) {
  return Binary(BinaryOp::kAdd, Target::kSrc, std::move(x), Target::kDst, std::move(y),
                std::move(out));
}
MessageSpec UDotV(std::string x, std::string y, std::string out, uint32_t heads) {
  return {MessageFunc::Dot(Target::kSrc, Target::kDst, heads), std::move(x), std::move(y),
          std::move(out)};
}

ReduceSpec Sum(std::string msg, std::string out) {
  return {ReduceOp::kSum, std::move(msg), std::move(out)};
}
ReduceSpec Max(std::string msg, std::string out) {
  return {ReduceOp::kMax, std::move(msg), std::move(out)};
}
ReduceSpec Min(std::string msg, std::string out) {
  return {ReduceOp::kMin, std::move(msg), std::move(out)};
}
ReduceSpec Mean(std::string msg, std::string out) {
  return {ReduceOp::kMean, std::move(msg), std::move(out)};
}

}  // namespace fn

const FeatureMatrix& EdgeBatch::Src(const std::string& name) {
  auto it = src_.find(name);
  if (it == src_.end())
    it = src_.emplace(name, SliceRows(nodes_->Get(name), graph_->Src())).first;
  return it->second;
}

const FeatureMatrix& EdgeBatch::Dst(const std::string& name) {
  auto it = dst_.find(name);
  if (it == dst_.end())
    it = dst_.emplace(name, SliceRows(nodes_->Get(name), graph_->Dst())).first;
  return it->second;
}

const FeatureMatrix& EdgeBatch::Edge(const std::string& name) { return edges_->Get(name); }

FeatureMatrix NodeBatch::Data(const std::string& name) const {
  return SliceRows(ndata_->Get(name), nodes_);
}

std::vector<DegreeBucket> DegreeBuckets(const Graph& g) {
  std::map<uint64_t, std::vector<NodeId>> by_degree;
  const auto deg = g.InDegrees();
  for (size_t v = 0; v < deg.size(); ++v)
    if (deg[v] > 0) by_degree[deg[v]].push_back(static_cast<NodeId>(v));
  std::vector<DegreeBucket> out;
  for (auto& [d, nodes] : by_degree) out.push_back({d, std::move(nodes)});
  return out;
}

GraphFrame::GraphFrame(Graph g, Tape* tape)
    : graph_(std::move(g)), ndata_(graph_.NumNodes()), edata_(graph_.NumEdges()) {
  if (!tape) {
    owned_tape_ = std::make_unique<Tape>();
    tape = owned_tape_.get();
  }
  tape_ = tape;
}

Var GraphFrame::Bind(FeatureDict* dict, std::map<std::string, Var>* vars,
                     const std::string& name, Var v) {
  dict->Set(name, tape_->Shared(v));
  (*vars)[name] = v;
  return v;
}

Var GraphFrame::SetNodeData(const std::string& name, FeatureMatrix value, bool requires_grad) {
  MPG_CHECK_SHAPE(value.rows() == graph_.NumNodes(),
                  "node feature '" << name << "' has " << value.rows() << " rows for "
                                   << graph_.NumNodes() << " nodes");
  return Bind(&ndata_, &nvars_, name, tape_->Leaf(std::move(value), requires_grad));
}

Var GraphFrame::SetEdgeData(const std::string& name, FeatureMatrix value, bool requires_grad) {
  MPG_CHECK_SHAPE(value.rows() == graph_.NumEdges(),
                  "edge feature '" << name << "' has " << value.rows() << " rows for "
                                   << graph_.NumEdges() << " edges");
  return Bind(&edata_, &evars_, name, tape_->Leaf(std::move(value), requires_grad));
}

void GraphFrame::BindNodeData(const std::string& name, Var v) { Bind(&ndata_, &nvars_, name, v); }
void GraphFrame::BindEdgeData(const std::string& name, Var v) { Bind(&edata_, &evars_, name, v); }

Var GraphFrame::NodeVar(const std::string& name) const {
  auto it = nvars_.find(name);
  MPG_CHECK(it != nvars_.end(), ErrorCode::kLookup, "no node feature named '" << name << "'");
  return it->second;
}

Var GraphFrame::EdgeVar(const std::string& name) const {
  auto it = evars_.find(name);
  MPG_CHECK(it != evars_.end(), ErrorCode::kLookup, "no edge feature named '" << name << "'");
  return it->second;
}

Var GraphFrame::Operand(const MessageSpec& msg, bool lhs) const {
  const bool used = lhs ? msg.phi.UsesLhs() : msg.phi.UsesRhs();
  if (!used) return Var{};
  const Target t = lhs ? msg.phi.lhs : msg.phi.rhs;
  const std::string& name = lhs ? msg.lhs : msg.rhs;
  return t == Target::kEdge ? EdgeVar(name) : NodeVar(name);
}

Var GraphFrame::UpdateAll(const MessageSpec& msg, const ReduceSpec& reduce,
                          const KernelOptions& opts) {
  MPG_CHECK_ARG(reduce.msg == msg.out, "reduce reads message '" << reduce.msg
                                                                << "' but the message is '"
                                                                << msg.out << "'");
  Var out = ops::GSpMM(*tape_, graph_, msg.phi, reduce.op, Operand(msg, true),
                       Operand(msg, false), opts);
  return Bind(&ndata_, &nvars_, reduce.out, out);
}

Var GraphFrame::ApplyEdges(const MessageSpec& msg, const KernelOptions& opts) {
  Var out = ops::GSDDMM(*tape_, graph_, msg.phi, Operand(msg, true), Operand(msg, false), opts);
  return Bind(&edata_, &evars_, msg.out, out);
}

Var GraphFrame::EdgeSoftmax(const std::string& scores, const std::string& out,
                            const KernelOptions& opts) {
  Var v = ops::EdgeSoftmax(*tape_, graph_, EdgeVar(scores), opts);
  return Bind(&edata_, &evars_, out, v);
}

void GraphFrame::UpdateAllUdf(const MessageUdf& message, const ReduceUdf& reduce,
                              const std::string& out) {
  EdgeBatch edges(&graph_, &ndata_, &edata_);
  const FeatureMatrix msgs = message(edges);
  MPG_CHECK_SHAPE(msgs.rows() == graph_.NumEdges(),
                  "message function returned " << msgs.rows() << " rows for "
                                               << graph_.NumEdges() << " edges");
  if (msgs.size() > kUdfWarnEntries) {
    std::cerr << "warning: user-defined message passing materialized " << msgs.size()
              << " message entries\n";
  }
  const auto& csc = graph_.Csc();
  FeatureMatrix result;
  bool shaped = false;
  for (const DegreeBucket& b : DegreeBuckets(graph_)) {
    NodeBatch batch;
    batch.nodes_ = b.nodes;
    batch.degree_ = b.degree;
    batch.ndata_ = &ndata_;
    batch.mailbox_ = FeatureMatrix(b.nodes.size() * b.degree, msgs.cols());
    for (size_t i = 0; i < b.nodes.size(); ++i) {
      const NodeId v = b.nodes[i];
      for (size_t j = 0; j < b.degree; ++j) {
        auto src = msgs.row(csc.edge_ids[csc.indptr[v] + j]);
        std::copy(src.begin(), src.end(), batch.mailbox_.row(i * b.degree + j).begin());
      }
    }
    const FeatureMatrix red = reduce(batch);
    MPG_CHECK_SHAPE(red.rows() == b.nodes.size(),
                    "reduce function returned " << red.rows() << " rows for a bucket of "
                                                << b.nodes.size() << " nodes (degree "
                                                << b.degree << ")");
    if (!shaped) {
      result = FeatureMatrix(graph_.NumNodes(), red.cols());
      shaped = true;
    }
    MPG_CHECK_SHAPE(red.cols() == result.cols(),
                    "reduce function returned width " << red.cols() << " for degree "
                                                      << b.degree << ", earlier buckets had "
                                                      << result.cols());
    for (size_t i = 0; i < b.nodes.size(); ++i) {
      auto row = red.row(i);
      std::copy(row.begin(), row.end(), result.row(b.nodes[i]).begin());
    }
  }
  if (!shaped) result = FeatureMatrix(graph_.NumNodes(), msgs.cols());
  SetNodeData(out, std::move(result));
}

}  // namespace mpg
