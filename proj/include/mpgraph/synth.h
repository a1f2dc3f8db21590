/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/synth.h
 * \brief Seeded synthetic graph generators.
 */
#ifndef MPGRAPH_SYNTH_H_
#define MPGRAPH_SYNTH_H_

#include <mpgraph/graph.h>

#include <cstdint>
#include <string>

namespace mpg {

enum class GraphKind { kPowerLaw, kConstantIndegree, kChain, kErdosRenyi };

const char* GraphKindName(GraphKind k);
GraphKind ParseGraphKind(const std::string& name);

struct GenSpec {
  GraphKind kind = GraphKind::kChain;
  uint64_t num_nodes = 0;
  /*! \brief Out-edges per new node (power_law). */
  uint64_t degree = 0;
  /*! \brief In-degree of every node (constant_indegree). */
  uint64_t k = 0;
  /*! \brief Probability of each ordered pair u != v (erdos_renyi). */
  double p = 0.0;
  uint64_t seed = 0;

  /*!
   * \brief "power_law:n=10000,deg=20", "constant_indegree:n=100,k=32",
   *  "chain:n=4", "erdos_renyi:n=50,p=0.1"; an optional "seed=" key overrides
   *  `default_seed`.
   */
  static GenSpec Parse(const std::string& text, uint64_t default_seed = 0);
  std::string ToString() const;
  /*! \brief Throws kInvalidArgument. */
  void Validate() const;
};

/*!
 * \brief power_law: node v >= 1 sends `degree` edges to earlier nodes, each
 *  picked with probability proportional to 1 + its current in-degree
 *  (duplicates allowed), giving (n-1)*degree edges.
 *  constant_indegree: every node receives edges from k distinct other nodes.
 *  chain: i -> i+1. erdos_renyi: independent ordered pairs, no self-loops.
 */
Graph Generate(const GenSpec& spec);

}  // namespace mpg

#endif  // MPGRAPH_SYNTH_H_
