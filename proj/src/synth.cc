/*!
 *  Copyright (c) 2026 by Contributors
 * \file synth.cc
 */
#include <mpgraph/synth.h>

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_set>

namespace mpg {

const char* GraphKindName(GraphKind k) {
  switch (k) {
    case GraphKind::kPowerLaw: return "power_law";
    case GraphKind::kConstantIndegree: return "constant_indegree";
    case GraphKind::kChain: return "chain";
    case GraphKind::kErdosRenyi: return "erdos_renyi";
  }
  return "?";
}

GraphKind ParseGraphKind(const std::string& name) {
  for (GraphKind k : {GraphKind::kPowerLaw, GraphKind::kConstantIndegree, GraphKind::kChain,
                      GraphKind::kErdosRenyi})
    if (name == GraphKindName(k)) return k;
  MPG_FAIL(ErrorCode::kInvalidArgument, "unknown graph kind '" << name << "'");
}

namespace {

uint64_t ParseCount(const std::string& key, const std::string& v) {
  size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  MPG_CHECK_ARG(used == v.size() && !v.empty() && v[0] != '-',
                "graph spec: '" << key << "' needs a non-negative integer, got '" << v << "'");
  return x;
}

}  // namespace

GenSpec GenSpec::Parse(const std::string& text, uint64_t default_seed) {
  GenSpec s;
  s.seed = default_seed;
  const auto colon = text.find(':');
  s.kind = ParseGraphKind(text.substr(0, colon));
  if (colon != std::string::npos) {
    std::istringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      MPG_CHECK_ARG(eq != std::string::npos, "graph spec: expected key=value, got '" << item << "'");
      const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
      if (key == "n") {
        s.num_nodes = ParseCount(key, val);
      } else if (key == "deg") {
        s.degree = ParseCount(key, val);
      } else if (key == "k") {
        s.k = ParseCount(key, val);
      } else if (key == "seed") {
        s.seed = ParseCount(key, val);
      } else if (key == "p") {
        size_t used = 0;
        try {
          s.p = std::stod(val, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        MPG_CHECK_ARG(used == val.size() && used > 0, "graph spec: bad probability '" << val << "'");
      } else {
        MPG_FAIL(ErrorCode::kInvalidArgument, "graph spec: unknown key '" << key << "'");
      }
    }
  }
  s.Validate();
  return s;
}

std::string GenSpec::ToString() const {
  std::ostringstream os;
  os << GraphKindName(kind) << ":n=" << num_nodes;
  switch (kind) {
    case GraphKind::kPowerLaw: os << ",deg=" << degree; break;
    case GraphKind::kConstantIndegree: os << ",k=" << k; break;
    case GraphKind::kErdosRenyi: os << ",p=" << p; break;
    case GraphKind::kChain: break;
  }
  return os.str();
}

void GenSpec::Validate() const {
  MPG_CHECK_ARG(num_nodes > 0, "graph spec needs n > 0");
  MPG_CHECK_ARG(num_nodes <= std::numeric_limits<NodeId>::max(),
                "graph spec: n=" << num_nodes << " is too large");
  switch (kind) {
    case GraphKind::kPowerLaw:
      MPG_CHECK_ARG(degree > 0, "power_law needs deg > 0");
      break;
    case GraphKind::kConstantIndegree:
      MPG_CHECK_ARG(k > 0 && k < num_nodes,
                    "constant_indegree needs 0 < k < n, got k=" << k << " n=" << num_nodes);
      break;
    case GraphKind::kErdosRenyi:
      MPG_CHECK_ARG(p > 0 && p <= 1, "erdos_renyi needs 0 < p <= 1, got " << p);
      break;
    case GraphKind::kChain: break;
  }
}

namespace {

Graph PowerLaw(const GenSpec& s, std::mt19937_64& rng) {
  const uint64_t n = s.num_nodes;
  std::vector<NodeId> src, dst;
  src.reserve((n - 1) * s.degree);
  dst.reserve((n - 1) * s.degree);
  // One entry per node plus one per received edge; a uniform pick is
  // proportional to 1 + in-degree.
  std::vector<NodeId> urn;
  urn.reserve(n + (n - 1) * s.degree);
  urn.push_back(0);
  for (NodeId v = 1; v < n; ++v) {
    const size_t pool = urn.size();
    std::uniform_int_distribution<size_t> pick(0, pool - 1);
    for (uint64_t j = 0; j < s.degree; ++j) {
      const NodeId u = urn[pick(rng)];
      src.push_back(v);
      dst.push_back(u);
      urn.push_back(u);
    }
    urn.push_back(v);
  }
  return Graph(n, std::move(src), std::move(dst));
}

Graph ConstantIndegree(const GenSpec& s, std::mt19937_64& rng) {
  const uint64_t n = s.num_nodes;
  std::vector<NodeId> src, dst;
  src.reserve(n * s.k);
  dst.reserve(n * s.k);
  std::unordered_set<uint64_t> chosen;
  for (NodeId v = 0; v < n; ++v) {
    // Floyd's sampling over the n-1 other nodes.
    chosen.clear();
    const uint64_t m = n - 1;
    for (uint64_t j = m - s.k; j < m; ++j) {
      const uint64_t t = std::uniform_int_distribution<uint64_t>(0, j)(rng);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<uint64_t> picks(chosen.begin(), chosen.end());
    std::sort(picks.begin(), picks.end());
    for (uint64_t t : picks) {
      src.push_back(static_cast<NodeId>(t < v ? t : t + 1));
      dst.push_back(v);
    }
  }
  return Graph(n, std::move(src), std::move(dst));
}

Graph Chain(const GenSpec& s) {
  std::vector<NodeId> src, dst;
  for (NodeId i = 0; i + 1 < s.num_nodes; ++i) {
    src.push_back(i);
    dst.push_back(i + 1);
  }
  return Graph(s.num_nodes, std::move(src), std::move(dst));
}

Graph ErdosRenyi(const GenSpec& s, std::mt19937_64& rng) {
  const uint64_t n = s.num_nodes;
  const uint64_t slots = n * (n - 1);
  std::vector<NodeId> src, dst;
  auto emit = [&](uint64_t slot) {
    const NodeId u = static_cast<NodeId>(slot / (n - 1));
    const uint64_t r = slot % (n - 1);
    src.push_back(u);
    dst.push_back(static_cast<NodeId>(r < u ? r : r + 1));
  };
  if (s.p >= 1.0) {
    for (uint64_t i = 0; i < slots; ++i) emit(i);
  } else {
    // Geometric gaps between kept slots.
    std::geometric_distribution<uint64_t> gap(s.p);
    for (uint64_t i = gap(rng); i < slots; i += 1 + gap(rng)) emit(i);
  }
  return Graph(n, std::move(src), std::move(dst));
}

}  // namespace

Graph Generate(const GenSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case GraphKind::kPowerLaw: return PowerLaw(spec, rng);
    case GraphKind::kConstantIndegree: return ConstantIndegree(spec, rng);
    case GraphKind::kChain: return Chain(spec);
    case GraphKind::kErdosRenyi: return ErdosRenyi(spec, rng);
  }
  MPG_FAIL(ErrorCode::kInvalidArgument, "unknown graph kind");
}

}  // namespace mpg
