#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bpn/proof_net.hpp"

namespace bpn {

struct Violation {
  std::string message;
  std::optional<NodeId> node;
  std::optional<EdgeId> edge;
};

// Empty result means the graph is well formed and every link is typed.
std::vector<Violation> check_typed_graph(const ProofNet& n);
bool is_typed(const ProofNet& n);
void require_typed(const ProofNet& n);

// Acyclicity of every switching (par and contraction choose one premise).
// Atomic nets use the polarized orientation, others the paired-graph
// contraction with an exhaustive fallback on whatever cannot be contracted.
bool check_correctness(const ProofNet& n);
bool check_correctness_by_contraction(const ProofNet& n);
// Enumerates all switchings. Throws Unsupported above `max_switches` nodes.
bool check_correctness_exhaustive(const ProofNet& n, int max_switches = 20);
// Atomic nets only: positive edges point to their target, negative ones to
// their source.
bool polarized_acyclic(const ProofNet& n);

struct BoxDag {
  std::vector<NodeId> boxes;
  // (from, to): a polarized path from `from` to `to` meeting no other box.
  std::vector<std::pair<NodeId, NodeId>> arcs;

  std::vector<NodeId> parents(NodeId box) const;
  std::vector<NodeId> children(NodeId box) const;
  bool reaches(NodeId from, NodeId to) const;
  std::vector<NodeId> topological_order() const;
};

BoxDag polarized_dag(const ProofNet& n);

// Box names distinct and either positive or with a correct artifact closure.
bool is_bayesian(const ProofNet& n);
// Reference test: tries every way of closing the negative conclusions.
// Throws Unsupported when the search would exceed `max_candidates`.
bool is_bayesian_by_embedding(const ProofNet& n, long max_candidates = 200000);
// Empty when some name with negative conclusions and a box has no positive
// conclusion reachable from its box along same-named edges.
std::optional<ProofNet> artifact_closure(const ProofNet& n);

struct JointreeReport {
  bool ok = true;
  std::vector<std::string> failures;
};
JointreeReport jointree_check(const ProofNet& n);

// Induced sub-graph on `nodes`. Edges leaving the set become pending.
ProofNet subnet(const ProofNet& n, const std::set<NodeId>& nodes);

// Nodes touching an edge whose label mentions `name`.
std::set<NodeId> nodes_on_name(const ProofNet& n, const std::string& name);

}  // namespace bpn
