#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bpn/factor.hpp"
#include "bpn/formula.hpp"
#include "json.hpp"

namespace bpn {

using NodeId = int;
using EdgeId = int;

enum class NodeKind { Ax, Cut, Tensor, Par, One, Bot, Contraction, Weakening, Box };

const char* kind_name(NodeKind k);
NodeKind parse_kind(const std::string& s);

struct Node {
  NodeId id = -1;
  NodeKind kind = NodeKind::Ax;
  std::vector<EdgeId> premises;
  std::vector<EdgeId> conclusions;
  std::optional<Factor> cpt;  // boxes only; variables are the box's conclusion names
};

struct Edge {
  EdgeId id = -1;
  Formula label;
  NodeId source = -1;
  std::optional<NodeId> target;  // empty for a pending edge
};

// Typed graph of links. Node premise/conclusion lists and edge endpoints are
// stored redundantly; check_typed_graph reports any disagreement.
class ProofNet {
 public:
  // Builders. Each new conclusion edge starts pending and is appended to the
  // conclusion list; attaching it to a node removes it from that list.
  NodeId add_ax(const std::string& name);
  NodeId add_one();
  NodeId add_bot();
  NodeId add_weakening(const std::string& name);
  // Conclusions are the parents negatively, in CPT order, then the child.
  NodeId add_box(const Factor& cpt, const std::string& child);
  NodeId add_cut(EdgeId a, EdgeId b);
  NodeId add_tensor(EdgeId a, EdgeId b);
  NodeId add_par(EdgeId a, EdgeId b);
  NodeId add_contraction(EdgeId a, EdgeId b);
  // Balanced binary tree of contractions; returns the root edge.
  EdgeId add_contraction_tree(std::vector<EdgeId> edges);

  // Low-level construction.
  NodeId new_node(NodeKind kind, std::optional<NodeId> id = {});
  EdgeId new_edge(NodeId source, const Formula& label, std::optional<EdgeId> id = {});
  void attach(EdgeId e, NodeId target);  // appends e to target's premises

  bool has_node(NodeId id) const { return nodes_.count(id) > 0; }
  bool has_edge(EdgeId id) const { return edges_.count(id) > 0; }
  const Node& node(NodeId id) const;
  const Edge& edge(EdgeId id) const;
  Node& node_mut(NodeId id);
  Edge& edge_mut(EdgeId id);
  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::map<EdgeId, Edge>& edges() const { return edges_; }
  std::vector<NodeId> node_ids() const;
  std::size_t node_count() const { return nodes_.size(); }

  const std::vector<EdgeId>& conclusions() const { return conclusions_; }
  std::vector<EdgeId>& conclusions_mut() { return conclusions_; }
  std::vector<Formula> conclusion_formulas() const;
  void replace_conclusion(EdgeId old_edge, EdgeId new_edge);

  // Removal does not touch the other endpoint's lists.
  void erase_node(NodeId id);
  void erase_edge(EdgeId id);

  EdgeId conclusion(NodeId n, std::size_t i = 0) const { return node(n).conclusions.at(i); }
  EdgeId premise(NodeId n, std::size_t i) const { return node(n).premises.at(i); }
  std::optional<NodeId> target(EdgeId e) const { return edge(e).target; }
  NodeId source(EdgeId e) const { return edge(e).source; }
  const Formula& label(EdgeId e) const { return edge(e).label; }

  // Main (positive) conclusion of a box.
  EdgeId box_main(NodeId box) const;
  std::string box_name(NodeId box) const;
  std::vector<NodeId> boxes() const;
  std::optional<NodeId> box_of(const std::string& name) const;

  std::set<std::string> names() const;
  std::set<std::string> conclusion_names() const;
  bool is_atomic() const;
  bool is_positive() const;  // every conclusion is a positive atom

  NodeId next_node_id() const { return next_node_; }
  EdgeId next_edge_id() const { return next_edge_; }

 private:
  std::map<NodeId, Node> nodes_;
  std::map<EdgeId, Edge> edges_;
  std::vector<EdgeId> conclusions_;
  NodeId next_node_ = 0;
  EdgeId next_edge_ = 0;
};

nlohmann::json factor_to_json(const Factor& f);
Factor factor_from_json(const nlohmann::json& j);

nlohmann::json net_to_json(const ProofNet& n);
// Builds the graph as written, without checking it.
ProofNet net_from_json(const nlohmann::json& j);

std::string net_to_dot(const ProofNet& n, const std::map<NodeId, int>* component_of = nullptr);

}  // namespace bpn
