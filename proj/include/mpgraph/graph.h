/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/graph.h
 * \brief Immutable directed multigraph with COO storage and lazily built
 *  CSR/CSC views.
 */
#ifndef MPGRAPH_GRAPH_H_
#define MPGRAPH_GRAPH_H_

#include <mpgraph/base.h>

#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mpg {

/*!
 * \brief Compressed adjacency. Row r holds positions [indptr[r], indptr[r+1])
 *  into `indices` (the opposite endpoint) and `edge_ids` (original edge IDs).
 *  Within a row, entries are sorted by index, then by edge ID.
 */
struct CompactAdjacency {
  std::vector<uint64_t> indptr;
  std::vector<NodeId> indices;
  std::vector<EdgeId> edge_ids;

  uint64_t RowBegin(NodeId r) const { return indptr[r]; }
  uint64_t RowEnd(NodeId r) const { return indptr[r + 1]; }
  uint64_t RowLength(NodeId r) const { return indptr[r + 1] - indptr[r]; }
};

namespace detail {
struct Topology;
}  // namespace detail

/*!
 * \brief Directed multigraph. Edge e is (src[e] -> dst[e]); edge IDs are the
 *  COO positions at construction and never change.
 *
 *  Copies share storage. The reverse graph is a zero-copy view that shares
 *  both edge IDs and the compressed caches: CSC of the reverse is the same
 *  object as CSR of the forward graph.
 */
class Graph {
 public:
  Graph();
  /*! \brief Throws kRange naming the first edge with an endpoint >= num_nodes. */
  Graph(uint64_t num_nodes, std::vector<NodeId> src, std::vector<NodeId> dst);

  static Graph FromEdges(uint64_t num_nodes,
                         std::span<const std::pair<NodeId, NodeId>> edges);

  uint64_t NumNodes() const;
  uint64_t NumEdges() const;
  std::span<const NodeId> Src() const;
  std::span<const NodeId> Dst() const;

  /*! \brief Unique id of this orientation; a graph and its reverse differ. */
  int64_t Id() const;
  bool IsReversed() const { return reversed_; }

  Graph Reverse() const;

  /*! \brief Out-adjacency (rows = sources). Built once, thread-safe. */
  const CompactAdjacency& Csr() const;
  /*! \brief In-adjacency (rows = destinations). Built once, thread-safe. */
  const CompactAdjacency& Csc() const;
  bool HasCsr() const;
  bool HasCsc() const;

  /*! \brief Number of compressed-format builds performed on this topology
   *  (shared by both orientations). */
  uint64_t ConversionCount() const;

  std::vector<uint64_t> InDegrees(std::span<const NodeId> nodes) const;
  std::vector<uint64_t> OutDegrees(std::span<const NodeId> nodes) const;
  /*! \brief In-degree of every node. */
  std::vector<uint64_t> InDegrees() const;
  std::vector<uint64_t> OutDegrees() const;

  /*! \brief True when both graphs list the same (src, dst) per edge ID. */
  bool SameEdges(const Graph& other) const;

 private:
  Graph(std::shared_ptr<detail::Topology> topo, bool reversed)
      : topo_(std::move(topo)), reversed_(reversed) {}

  std::shared_ptr<detail::Topology> topo_;
  bool reversed_ = false;
};

/*! \brief Total number of compressed-format builds in this process. */
uint64_t GlobalConversionCount();

/*! \brief A graph extracted from a parent, with provenance of nodes and edges. */
struct Subgraph {
  Graph graph;
  std::vector<NodeId> parent_node_ids;
  std::vector<EdgeId> parent_edge_ids;
};

/*!
 * \brief For each seed, sample min(fanout, in_degree) distinct in-edges
 *  uniformly (partial Fisher-Yates over the CSC row). Seeds come first in the
 *  relabelled node order, then newly reached predecessors in first-seen order.
 */
Subgraph NeighborSample(const Graph& g, std::span<const NodeId> seeds,
                        uint32_t fanout, uint64_t rng_seed);

/*! \brief Node-induced subgraph; edges keep ascending parent edge-ID order. */
Subgraph NodeSubgraph(const Graph& g, std::span<const NodeId> nodes);

// ---------------------------------------------------------------------------
// Serialization

/*!
 * \brief Tab-separated `u<TAB>v` lines, `#` comments, optional `nodes=N`
 *  header. Without the header, num_nodes is max id + 1.
 */
Graph ReadEdgeList(std::istream& is);
Graph LoadEdgeList(const std::string& path);
void WriteEdgeList(const Graph& g, std::ostream& os);
void SaveEdgeList(const Graph& g, const std::string& path);

/*! \brief `GRF1`, u64 nodes, u64 edges, u32 src[], u32 dst[]; little endian. */
Graph ReadBinary(std::istream& is);
Graph LoadBinary(const std::string& path);
void WriteBinary(const Graph& g, std::ostream& os);
void SaveBinary(const Graph& g, const std::string& path);

}  // namespace mpg

#endif  // MPGRAPH_GRAPH_H_
