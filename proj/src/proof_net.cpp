#include "bpn/proof_net.hpp"

#include <algorithm>
#include <sstream>

#include "bpn/error.hpp"

namespace bpn {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Ax: return "ax";
    case NodeKind::Cut: return "cut";
    case NodeKind::Tensor: return "tensor";
    case NodeKind::Par: return "par";
    case NodeKind::One: return "one";
    case NodeKind::Bot: return "bot";
    case NodeKind::Contraction: return "contraction";
    case NodeKind::Weakening: return "weakening";
    case NodeKind::Box: return "box";
  }
  return "?";
}

NodeKind parse_kind(const std::string& s) {
  static const std::map<std::string, NodeKind> table = {
      {"ax", NodeKind::Ax},       {"cut", NodeKind::Cut},         {"tensor", NodeKind::Tensor},
      {"par", NodeKind::Par},     {"one", NodeKind::One},         {"bot", NodeKind::Bot},
      {"contraction", NodeKind::Contraction}, {"c", NodeKind::Contraction},
      {"weakening", NodeKind::Weakening},     {"w", NodeKind::Weakening},
      {"box", NodeKind::Box}};
  auto it = table.find(s);
  if (it == table.end()) throw Error(ErrorCode::ParseError, "unknown node kind '" + s + "'");
  return it->second;
}

NodeId ProofNet::new_node(NodeKind kind, std::optional<NodeId> id) {
  NodeId nid = id ? *id : next_node_;
  if (nodes_.count(nid)) throw Error(ErrorCode::PreconditionViolation, "duplicate node id " + std::to_string(nid));
  next_node_ = std::max(next_node_, nid + 1);
  Node n;
  n.id = nid;
  n.kind = kind;
  nodes_.emplace(nid, std::move(n));
  return nid;
}

EdgeId ProofNet::new_edge(NodeId source, const Formula& label, std::optional<EdgeId> id) {
  EdgeId eid = id ? *id : next_edge_;
  if (edges_.count(eid)) throw Error(ErrorCode::PreconditionViolation, "duplicate edge id " + std::to_string(eid));
  next_edge_ = std::max(next_edge_, eid + 1);
  edges_.emplace(eid, Edge{eid, label, source, std::nullopt});
  node_mut(source).conclusions.push_back(eid);
  conclusions_.push_back(eid);
  return eid;
}

void ProofNet::attach(EdgeId e, NodeId target) {
  Edge& ed = edge_mut(e);
  if (ed.target) throw Error(ErrorCode::PreconditionViolation, "edge " + std::to_string(e) + " already has a target");
  ed.target = target;
  node_mut(target).premises.push_back(e);
  conclusions_.erase(std::remove(conclusions_.begin(), conclusions_.end(), e), conclusions_.end());
}

NodeId ProofNet::add_ax(const std::string& name) {
  NodeId n = new_node(NodeKind::Ax);
  new_edge(n, Formula::pos(name));
  new_edge(n, Formula::neg(name));
  return n;
}

NodeId ProofNet::add_one() {
  NodeId n = new_node(NodeKind::One);
  new_edge(n, Formula::one());
  return n;
}

NodeId ProofNet::add_bot() {
  NodeId n = new_node(NodeKind::Bot);
  new_edge(n, Formula::bot());
  return n;
}

NodeId ProofNet::add_weakening(const std::string& name) {
  NodeId n = new_node(NodeKind::Weakening);
  new_edge(n, Formula::neg(name));
  return n;
}

NodeId ProofNet::add_box(const Factor& cpt, const std::string& child) {
  if (!cpt.has(child)) throw Error(ErrorCode::UnknownName, "box table lacks " + child);
  NodeId n = new_node(NodeKind::Box);
  node_mut(n).cpt = cpt;
  for (const auto& v : cpt.vars())
    if (v.name != child) new_edge(n, Formula::neg(v.name));
  new_edge(n, Formula::pos(child));
  return n;
}

NodeId ProofNet::add_cut(EdgeId a, EdgeId b) {
  NodeId n = new_node(NodeKind::Cut);
  attach(a, n);
  attach(b, n);
  return n;
}

NodeId ProofNet::add_tensor(EdgeId a, EdgeId b) {
  NodeId n = new_node(NodeKind::Tensor);
  Formula f = Formula::tensor(label(a), label(b));
  attach(a, n);
  attach(b, n);
  new_edge(n, f);
  return n;
}

NodeId ProofNet::add_par(EdgeId a, EdgeId b) {
  NodeId n = new_node(NodeKind::Par);
  Formula f = Formula::par(label(a), label(b));
  attach(a, n);
  attach(b, n);
  new_edge(n, f);
  return n;
}

NodeId ProofNet::add_contraction(EdgeId a, EdgeId b) {
  NodeId n = new_node(NodeKind::Contraction);
  Formula f = label(a);
  attach(a, n);
  attach(b, n);
  new_edge(n, f);
  return n;
}

EdgeId ProofNet::add_contraction_tree(std::vector<EdgeId> edges) {
  if (edges.empty()) throw Error(ErrorCode::PreconditionViolation, "empty contraction tree");
  while (edges.size() > 1) {
    std::vector<EdgeId> next;
    for (std::size_t i = 0; i + 1 < edges.size(); i += 2) next.push_back(conclusion(add_contraction(edges[i], edges[i + 1])));
    if (edges.size() % 2) next.push_back(edges.back());
    edges = std::move(next);
  }
  return edges.front();
}

const Node& ProofNet::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::PreconditionViolation, "no node " + std::to_string(id));
  return it->second;
}

const Edge& ProofNet::edge(EdgeId id) const {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw Error(ErrorCode::PreconditionViolation, "no edge " + std::to_string(id));
  return it->second;
}

Node& ProofNet::node_mut(NodeId id) { return const_cast<Node&>(node(id)); }
Edge& ProofNet::edge_mut(EdgeId id) { return const_cast<Edge&>(edge(id)); }

std::vector<NodeId> ProofNet::node_ids() const {
  std::vector<NodeId> out;
  for (const auto& [id, _] : nodes_) out.push_back(id);
  return out;
}

std::vector<Formula> ProofNet::conclusion_formulas() const {
  std::vector<Formula> out;
  for (EdgeId e : conclusions_) out.push_back(label(e));
  return out;
}

void ProofNet::replace_conclusion(EdgeId old_edge, EdgeId new_edge) {
  for (auto& e : conclusions_)
    if (e == old_edge) e = new_edge;
}

void ProofNet::erase_node(NodeId id) { nodes_.erase(id); }

void ProofNet::erase_edge(EdgeId id) {
  edges_.erase(id);
  conclusions_.erase(std::remove(conclusions_.begin(), conclusions_.end(), id), conclusions_.end());
}

EdgeId ProofNet::box_main(NodeId box) const {
  for (EdgeId e : node(box).conclusions)
    if (label(e).is_positive_atom()) return e;
  throw Error(ErrorCode::IllTyped, "box " + std::to_string(box) + " has no positive conclusion");
}

std::string ProofNet::box_name(NodeId box) const { return label(box_main(box)).name(); }

std::vector<NodeId> ProofNet::boxes() const {
  std::vector<NodeId> out;
  for (const auto& [id, n] : nodes_)
    if (n.kind == NodeKind::Box) out.push_back(id);
  return out;
}

std::optional<NodeId> ProofNet::box_of(const std::string& name) const {
  for (const auto& [id, n] : nodes_)
    if (n.kind == NodeKind::Box && box_name(id) == name) return id;
  return std::nullopt;
}

std::set<std::string> ProofNet::names() const {
  std::set<std::string> out;
  for (const auto& [id, e] : edges_) {
    auto s = e.label.atom_names();
    out.insert(s.begin(), s.end());
  }
  return out;
}

std::set<std::string> ProofNet::conclusion_names() const {
  std::set<std::string> out;
  for (EdgeId e : conclusions_) {
    auto s = label(e).atom_names();
    out.insert(s.begin(), s.end());
  }
  return out;
}

bool ProofNet::is_atomic() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const auto& p) { return p.second.label.is_atom(); });
}

bool ProofNet::is_positive() const {
  return std::all_of(conclusions_.begin(), conclusions_.end(),
                     [&](EdgeId e) { return label(e).is_positive_atom(); });
}

nlohmann::json factor_to_json(const Factor& f) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : f.vars()) vars.push_back({{"name", v.name}, {"values", v.values}});
  return {{"vars", vars}, {"table", f.table()}};
}

Factor factor_from_json(const nlohmann::json& j) {
  std::vector<VarSpec> vars;
  for (const auto& v : j.at("vars")) vars.push_back({v.at("name").get<std::string>(), v.at("values").get<std::vector<std::string>>()});
  return Factor::create(std::move(vars), j.at("table").get<std::vector<double>>());
}

nlohmann::json net_to_json(const ProofNet& n) {
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& [id, nd] : n.nodes()) {
    nlohmann::json j = {{"id", id}, {"kind", kind_name(nd.kind)}, {"premises", nd.premises}, {"conclusions", nd.conclusions}};
    if (nd.cpt) j["cpt"] = factor_to_json(*nd.cpt);
    nodes.push_back(j);
  }
  for (const auto& [id, e] : n.edges()) {
    nlohmann::json j = {{"id", id}, {"label", e.label.str()}, {"from", e.source}};
    j["to"] = e.target ? nlohmann::json(*e.target) : nlohmann::json(nullptr);
    edges.push_back(j);
  }
  return {{"nodes", nodes}, {"edges", edges}, {"conclusions", n.conclusions()}};
}

ProofNet net_from_json(const nlohmann::json& j) {
  try {
    ProofNet n;
    for (const auto& jn : j.at("nodes")) {
      NodeId id = n.new_node(parse_kind(jn.at("kind").get<std::string>()), jn.at("id").get<int>());
      if (jn.contains("cpt")) n.node_mut(id).cpt = factor_from_json(jn.at("cpt"));
    }
    std::vector<EdgeId> pending;
    for (const auto& je : j.at("edges")) {
      EdgeId id = je.at("id").get<int>();
      NodeId from = je.at("from").get<int>();
      if (!n.has_node(from)) throw Error(ErrorCode::ParseError, "edge " + std::to_string(id) + " has unknown source");
      n.new_edge(from, Formula::parse(je.at("label").get<std::string>()), id);
      if (je.contains("to") && !je.at("to").is_null()) {
        NodeId to = je.at("to").get<int>();
        if (!n.has_node(to)) throw Error(ErrorCode::ParseError, "edge " + std::to_string(id) + " has unknown target");
        n.attach(id, to);
      }
    }
    // Explicit port lists override the order in which edges were listed.
    for (const auto& jn : j.at("nodes")) {
      Node& nd = n.node_mut(jn.at("id").get<int>());
      if (jn.contains("premises")) nd.premises = jn.at("premises").get<std::vector<EdgeId>>();
      if (jn.contains("conclusions")) nd.conclusions = jn.at("conclusions").get<std::vector<EdgeId>>();
    }
    if (j.contains("conclusions")) n.conclusions_mut() = j.at("conclusions").get<std::vector<EdgeId>>();
    return n;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string net_to_dot(const ProofNet& n, const std::map<NodeId, int>* component_of) {
  std::ostringstream os;
  os << "digraph net {\n  rankdir=TB;\n";
  auto emit_node = [&](NodeId id, const Node& nd) {
    std::string label = kind_name(nd.kind);
    if (nd.kind == NodeKind::Box) label = "box " + n.box_name(id);
    std::string shape = nd.kind == NodeKind::Box ? "box" : "ellipse";
    os << "    n" << id << " [label=\"" << label << " #" << id << "\", shape=" << shape << "];\n";
  };
  if (component_of) {
    std::map<int, std::vector<NodeId>> groups;
    for (const auto& [id, nd] : n.nodes()) {
      auto it = component_of->find(id);
      groups[it == component_of->end() ? -1 : it->second].push_back(id);
    }
    for (const auto& [c, ids] : groups) {
      if (c >= 0) os << "  subgraph cluster_" << c << " {\n    label=\"M" << c << "\";\n";
      for (NodeId id : ids) emit_node(id, n.node(id));
      if (c >= 0) os << "  }\n";
    }
  } else {
    for (const auto& [id, nd] : n.nodes()) emit_node(id, nd);
  }
  for (const auto& [id, e] : n.edges()) {
    if (e.target) {
      os << "  n" << e.source << " -> n" << *e.target << " [label=\"" << e.label.str() << "\"];\n";
    } else {
      os << "  p" << id << " [shape=point];\n  n" << e.source << " -> p" << id << " [label=\"" << e.label.str() << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace bpn
