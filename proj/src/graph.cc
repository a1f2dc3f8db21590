/*!
 *  Copyright (c) 2026 by Contributors
 * \file graph.cc
 * \brief Graph storage, format conversion and sampling.
 */
#include <mpgraph/graph.h>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <random>

namespace mpg {
namespace detail {

namespace {
std::atomic<int64_t> g_next_graph_id{1};
std::atomic<uint64_t> g_global_conversions{0};
}  // namespace

struct CacheSlot {
  std::once_flag once;
  std::unique_ptr<CompactAdjacency> adj;
  std::atomic<bool> ready{false};
};

struct Topology {
  uint64_t num_nodes = 0;
  std::vector<NodeId> src;
  std::vector<NodeId> dst;
  // Rows keyed by src (forward CSR) and by dst (forward CSC).
  CacheSlot by_src;
  CacheSlot by_dst;
  std::atomic<uint64_t> conversions{0};
  int64_t id_forward = g_next_graph_id.fetch_add(2);
  int64_t id_reverse = id_forward + 1;
};

namespace {

std::unique_ptr<CompactAdjacency> BuildCompact(uint64_t num_nodes,
                                               const std::vector<NodeId>& rows,
                                               const std::vector<NodeId>& cols) {
  auto adj = std::make_unique<CompactAdjacency>();
  const size_t num_edges = rows.size();
  adj->indptr.assign(num_nodes + 1, 0);
  for (NodeId r : rows) ++adj->indptr[r + 1];
  std::partial_sum(adj->indptr.begin(), adj->indptr.end(), adj->indptr.begin());
  adj->indices.resize(num_edges);
  adj->edge_ids.resize(num_edges);
  std::vector<uint64_t> cursor(adj->indptr.begin(), adj->indptr.end() - 1);
  // Filling in edge-id order makes a stable sort by index sufficient for the
  // (index, edge_id) row order.
  for (size_t e = 0; e < num_edges; ++e) {
    const uint64_t pos = cursor[rows[e]]++;
    adj->indices[pos] = cols[e];
    adj->edge_ids[pos] = static_cast<EdgeId>(e);
  }
  std::vector<std::pair<NodeId, EdgeId>> scratch;
  for (uint64_t r = 0; r < num_nodes; ++r) {
    const uint64_t b = adj->indptr[r], en = adj->indptr[r + 1];
    if (en - b < 2) continue;
    scratch.clear();
    for (uint64_t p = b; p < en; ++p)
      scratch.emplace_back(adj->indices[p], adj->edge_ids[p]);
    if (std::is_sorted(scratch.begin(), scratch.end())) continue;
    std::sort(scratch.begin(), scratch.end());
    for (uint64_t p = b; p < en; ++p) {
      adj->indices[p] = scratch[p - b].first;
      adj->edge_ids[p] = scratch[p - b].second;
    }
  }
  return adj;
}

const CompactAdjacency& Materialize(Topology* topo, CacheSlot* slot,
                                    bool keyed_by_src) {
  if (!slot->ready.load(std::memory_order_acquire)) {
    std::call_once(slot->once, [&] {
      slot->adj = keyed_by_src ? BuildCompact(topo->num_nodes, topo->src, topo->dst)
                               : BuildCompact(topo->num_nodes, topo->dst, topo->src);
      topo->conversions.fetch_add(1);
      g_global_conversions.fetch_add(1);
      slot->ready.store(true, std::memory_order_release);
    });
  }
  return *slot->adj;
}

}  // namespace
}  // namespace detail

uint64_t GlobalConversionCount() { return detail::g_global_conversions.load(); }

Graph::Graph() : topo_(std::make_shared<detail::Topology>()) {}

Graph::Graph(uint64_t num_nodes, std::vector<NodeId> src, std::vector<NodeId> dst) {
  MPG_CHECK_SHAPE(src.size() == dst.size(),
                  "src has " << src.size() << " entries but dst has " << dst.size());
  MPG_CHECK_RANGE(num_nodes <= kInvalidId,
                  "num_nodes " << num_nodes << " exceeds 32-bit node id space");
  MPG_CHECK_RANGE(src.size() < kInvalidId,
                  "num_edges " << src.size() << " exceeds 32-bit edge id space");
  for (size_t e = 0; e < src.size(); ++e) {
    MPG_CHECK_RANGE(src[e] < num_nodes && dst[e] < num_nodes,
                    "edge " << e << " (" << src[e] << " -> " << dst[e]
                            << ") has an endpoint outside [0, " << num_nodes << ")");
  }
  topo_ = std::make_shared<detail::Topology>();
  topo_->num_nodes = num_nodes;
  topo_->src = std::move(src);
  topo_->dst = std::move(dst);
}

Graph Graph::FromEdges(uint64_t num_nodes,
                       std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<NodeId> src, dst;
  src.reserve(edges.size());
  dst.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    src.push_back(u);
    dst.push_back(v);
  }
  return Graph(num_nodes, std::move(src), std::move(dst));
}

uint64_t Graph::NumNodes() const { return topo_->num_nodes; }
uint64_t Graph::NumEdges() const { return topo_->src.size(); }

std::span<const NodeId> Graph::Src() const {
  return reversed_ ? topo_->dst : topo_->src;
}
std::span<const NodeId> Graph::Dst() const {
  return reversed_ ? topo_->src : topo_->dst;
}

int64_t Graph::Id() const {
  return reversed_ ? topo_->id_reverse : topo_->id_forward;
}

Graph Graph::Reverse() const { return Graph(topo_, !reversed_); }

const CompactAdjacency& Graph::Csr() const {
  return reversed_ ? detail::Materialize(topo_.get(), &topo_->by_dst, false)
                   : detail::Materialize(topo_.get(), &topo_->by_src, true);
}

const CompactAdjacency& Graph::Csc() const {
  return reversed_ ? detail::Materialize(topo_.get(), &topo_->by_src, true)
                   : detail::Materialize(topo_.get(), &topo_->by_dst, false);
}

bool Graph::HasCsr() const {
  const auto& slot = reversed_ ? topo_->by_dst : topo_->by_src;
  return slot.ready.load(std::memory_order_acquire);
}

bool Graph::HasCsc() const {
  const auto& slot = reversed_ ? topo_->by_src : topo_->by_dst;
  return slot.ready.load(std::memory_order_acquire);
}

uint64_t Graph::ConversionCount() const { return topo_->conversions.load(); }

namespace {
std::vector<uint64_t> CountAt(std::span<const NodeId> endpoints, uint64_t num_nodes,
                              std::span<const NodeId> nodes) {
  for (size_t i = 0; i < nodes.size(); ++i) {
    MPG_CHECK_RANGE(nodes[i] < num_nodes, "node id " << nodes[i] << " at position "
                                                     << i << " is out of range");
  }
  std::vector<uint64_t> all(num_nodes, 0);
  for (NodeId x : endpoints) ++all[x];
  std::vector<uint64_t> out(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) out[i] = all[nodes[i]];
  return out;
}

std::vector<uint64_t> CountAll(std::span<const NodeId> endpoints, uint64_t num_nodes) {
  std::vector<uint64_t> all(num_nodes, 0);
  for (NodeId x : endpoints) ++all[x];
  return all;
}
}  // namespace

std::vector<uint64_t> Graph::InDegrees(std::span<const NodeId> nodes) const {
  if (HasCsc()) {
    const auto& csc = Csc();
    std::vector<uint64_t> out(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
      MPG_CHECK_RANGE(nodes[i] < NumNodes(), "node id " << nodes[i] << " at position "
                                                         << i << " is out of range");
      out[i] = csc.RowLength(nodes[i]);
    }
    return out;
  }
  return CountAt(Dst(), NumNodes(), nodes);
}

std::vector<uint64_t> Graph::OutDegrees(std::span<const NodeId> nodes) const {
  return CountAt(Src(), NumNodes(), nodes);
}

std::vector<uint64_t> Graph::InDegrees() const { return CountAll(Dst(), NumNodes()); }
std::vector<uint64_t> Graph::OutDegrees() const { return CountAll(Src(), NumNodes()); }

bool Graph::SameEdges(const Graph& other) const {
  if (NumNodes() != other.NumNodes() || NumEdges() != other.NumEdges()) return false;
  auto s1 = Src(), d1 = Dst(), s2 = other.Src(), d2 = other.Dst();
  return std::equal(s1.begin(), s1.end(), s2.begin()) &&
         std::equal(d1.begin(), d1.end(), d2.begin());
}

// ---------------------------------------------------------------------------

namespace {

struct Relabeler {
  explicit Relabeler(uint64_t n) : map(n, kInvalidId) {}
  NodeId Get(NodeId parent) {
    if (map[parent] == kInvalidId) {
      map[parent] = static_cast<NodeId>(parents.size());
      parents.push_back(parent);
    }
    return map[parent];
  }
  std::vector<NodeId> map;
  std::vector<NodeId> parents;
};

}  // namespace

Subgraph NeighborSample(const Graph& g, std::span<const NodeId> seeds,
                        uint32_t fanout, uint64_t rng_seed) {
  MPG_CHECK_ARG(fanout >= 1, "fanout must be at least 1");
  for (size_t i = 0; i < seeds.size(); ++i) {
    MPG_CHECK_RANGE(seeds[i] < g.NumNodes(),
                    "seed " << seeds[i] << " at position " << i << " is out of range");
  }
  const auto& csc = g.Csc();
  const auto src = g.Src();
  std::mt19937_64 rng(rng_seed);
  Relabeler relabel(g.NumNodes());
  std::vector<NodeId> unique_seeds;
  for (NodeId s : seeds) {
    if (relabel.map[s] == kInvalidId) unique_seeds.push_back(s);
    relabel.Get(s);
  }

  std::vector<EdgeId> picked;
  std::vector<EdgeId> pool;
  for (NodeId s : unique_seeds) {
    pool.assign(csc.edge_ids.begin() + csc.RowBegin(s),
                csc.edge_ids.begin() + csc.RowEnd(s));
    const size_t take = std::min<size_t>(fanout, pool.size());
    for (size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      picked.push_back(pool[i]);
    }
  }

  std::vector<NodeId> sub_src, sub_dst;
  sub_src.reserve(picked.size());
  sub_dst.reserve(picked.size());
  const auto dst = g.Dst();
  for (EdgeId e : picked) {
    sub_src.push_back(relabel.Get(src[e]));
    sub_dst.push_back(relabel.Get(dst[e]));
  }
  Subgraph out;
  out.parent_node_ids = std::move(relabel.parents);
  out.parent_edge_ids = std::move(picked);
  out.graph = Graph(out.parent_node_ids.size(), std::move(sub_src), std::move(sub_dst));
  return out;
}

Subgraph NodeSubgraph(const Graph& g, std::span<const NodeId> nodes) {
  Relabeler relabel(g.NumNodes());
  for (size_t i = 0; i < nodes.size(); ++i) {
    MPG_CHECK_RANGE(nodes[i] < g.NumNodes(),
                    "node " << nodes[i] << " at position " << i << " is out of range");
    relabel.Get(nodes[i]);
  }
  const auto src = g.Src();
  const auto dst = g.Dst();
  Subgraph out;
  std::vector<NodeId> sub_src, sub_dst;
  for (size_t e = 0; e < src.size(); ++e) {
    if (relabel.map[src[e]] == kInvalidId || relabel.map[dst[e]] == kInvalidId) continue;
    sub_src.push_back(relabel.map[src[e]]);
    sub_dst.push_back(relabel.map[dst[e]]);
    out.parent_edge_ids.push_back(static_cast<EdgeId>(e));
  }
  out.parent_node_ids = std::move(relabel.parents);
  out.graph = Graph(out.parent_node_ids.size(), std::move(sub_src), std::move(sub_dst));
  return out;
}

}  // namespace mpg
