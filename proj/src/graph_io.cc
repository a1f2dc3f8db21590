/*!
 *  Copyright (c) 2026 by Contributors
 * \file graph_io.cc
 * \brief Edge-list text and GRF1 binary graph containers.
 */
#include <mpgraph/graph.h>

#include <algorithm>
#include <charconv>
#include <optional>

#include "io_util.h"

namespace mpg {

namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool ParseU64(std::string_view s, uint64_t* out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Graph ReadEdgeList(std::istream& is) {
  std::optional<uint64_t> declared_nodes;
  std::vector<NodeId> src, dst;
  uint64_t max_id = 0;
  bool any = false;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = Trim(view);
    if (view.empty()) continue;
    if (view.rfind("nodes=", 0) == 0) {
      uint64_t n = 0;
      MPG_CHECK(ParseU64(Trim(view.substr(6)), &n), ErrorCode::kIo,
                "line " << lineno << ": malformed nodes= header");
      declared_nodes = n;
      continue;
    }
    const auto sep = view.find_first_of(" \t");
    MPG_CHECK(sep != std::string_view::npos, ErrorCode::kIo,
              "line " << lineno << ": expected two node ids");
    uint64_t u = 0, v = 0;
    MPG_CHECK(ParseU64(Trim(view.substr(0, sep)), &u) &&
                  ParseU64(Trim(view.substr(sep + 1)), &v),
              ErrorCode::kIo, "line " << lineno << ": malformed edge '" << view << "'");
    MPG_CHECK_RANGE(u < kInvalidId && v < kInvalidId,
                    "line " << lineno << ": node id exceeds 32-bit range");
    src.push_back(static_cast<NodeId>(u));
    dst.push_back(static_cast<NodeId>(v));
    max_id = std::max({max_id, u, v});
    any = true;
  }
  const uint64_t n = declared_nodes ? *declared_nodes : (any ? max_id + 1 : 0);
  return Graph(n, std::move(src), std::move(dst));
}

Graph LoadEdgeList(const std::string& path) {
  auto is = io::OpenIn(path, false);
  return ReadEdgeList(is);
}

void WriteEdgeList(const Graph& g, std::ostream& os) {
  os << "nodes=" << g.NumNodes() << '\n';
  const auto src = g.Src();
  const auto dst = g.Dst();
  for (size_t e = 0; e < src.size(); ++e) os << src[e] << '\t' << dst[e] << '\n';
}

void SaveEdgeList(const Graph& g, const std::string& path) {
  auto os = io::OpenOut(path, false);
  WriteEdgeList(g, os);
  MPG_CHECK(os.good(), ErrorCode::kIo, "write failed for " << path);
}

Graph ReadBinary(std::istream& is) {
  io::ExpectMagic(is, "GRF1");
  const uint64_t n = io::ReadLE<uint64_t>(is, "num_nodes");
  const uint64_t m = io::ReadLE<uint64_t>(is, "num_edges");
  MPG_CHECK(m < kInvalidId, ErrorCode::kIo, "num_edges " << m << " too large");
  std::vector<NodeId> src(m), dst(m);
  for (auto& x : src) x = io::ReadLE<uint32_t>(is, "src");
  for (auto& x : dst) x = io::ReadLE<uint32_t>(is, "dst");
  return Graph(n, std::move(src), std::move(dst));
}

Graph LoadBinary(const std::string& path) {
  auto is = io::OpenIn(path, true);
  return ReadBinary(is);
}

void WriteBinary(const Graph& g, std::ostream& os) {
  os.write("GRF1", 4);
  io::WriteLE<uint64_t>(os, g.NumNodes());
  io::WriteLE<uint64_t>(os, g.NumEdges());
  for (NodeId x : g.Src()) io::WriteLE<uint32_t>(os, x);
  for (NodeId x : g.Dst()) io::WriteLE<uint32_t>(os, x);
}

void SaveBinary(const Graph& g, const std::string& path) {
  auto os = io::OpenOut(path, true);
  WriteBinary(g, os);
  MPG_CHECK(os.good(), ErrorCode::kIo, "write failed for " << path);
}

}  // namespace mpg
