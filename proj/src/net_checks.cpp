#include "bpn/net_checks.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>

#include "bpn/error.hpp"
#include "bpn/rewrite.hpp"

namespace bpn {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

std::string nid(NodeId n) { return "node " + std::to_string(n); }

void type_node(const ProofNet& n, const Node& nd, std::vector<Violation>& out) {
  auto bad = [&](const std::string& m) { out.push_back({nid(nd.id) + " (" + kind_name(nd.kind) + "): " + m, nd.id, {}}); };
  auto arity = [&](std::size_t p, std::size_t c) {
    if (nd.premises.size() != p || nd.conclusions.size() != c) {
      bad("expects " + std::to_string(p) + " premises and " + std::to_string(c) + " conclusions");
      return false;
    }
    return true;
  };
  auto lab = [&](EdgeId e) -> const Formula& { return n.label(e); };
  switch (nd.kind) {
    case NodeKind::Ax:
      if (!arity(0, 2)) return;
      if (!lab(nd.conclusions[0]).is_atom() || lab(nd.conclusions[0]).dual() != lab(nd.conclusions[1]))
        bad("conclusions must be dual atoms");
      return;
    case NodeKind::Cut:
      if (!arity(2, 0)) return;
      if (lab(nd.premises[0]).dual() != lab(nd.premises[1])) bad("premises must be dual");
      return;
    case NodeKind::Tensor:
      if (!arity(2, 1)) return;
      if (lab(nd.conclusions[0]) != Formula::tensor(lab(nd.premises[0]), lab(nd.premises[1])))
        bad("conclusion must be the tensor of its premises");
      return;
    case NodeKind::Par:
      if (!arity(2, 1)) return;
      if (lab(nd.conclusions[0]) != Formula::par(lab(nd.premises[0]), lab(nd.premises[1])))
        bad("conclusion must be the par of its premises");
      return;
    case NodeKind::One:
      if (arity(0, 1) && lab(nd.conclusions[0]).kind() != Formula::Kind::One) bad("conclusion must be 1");
      return;
    case NodeKind::Bot:
      if (arity(0, 1) && lab(nd.conclusions[0]).kind() != Formula::Kind::Bot) bad("conclusion must be bot");
      return;
    case NodeKind::Contraction:
      if (!arity(2, 1)) return;
      if (!lab(nd.premises[0]).is_negative_atom() || lab(nd.premises[0]) != lab(nd.premises[1]) ||
          lab(nd.conclusions[0]) != lab(nd.premises[0]))
        bad("premises and conclusion must be the same negative atom");
      return;
    case NodeKind::Weakening:
      if (arity(0, 1) && !lab(nd.conclusions[0]).is_negative_atom()) bad("conclusion must be a negative atom");
      return;
    case NodeKind::Box: {
      if (!nd.premises.empty()) bad("a box has no premises");
      int positives = 0;
      std::set<std::string> names;
      std::string main;
      for (EdgeId e : nd.conclusions) {
        const Formula& f = lab(e);
        if (!f.is_atom()) {
          bad("conclusions must be atoms");
          return;
        }
        if (f.is_positive_atom()) {
          ++positives;
          main = f.name();
        }
        if (!names.insert(f.name()).second) bad("repeated name " + f.name());
      }
      if (positives != 1) {
        bad("needs exactly one positive conclusion");
        return;
      }
      if (!nd.cpt) {
        bad("missing table");
        return;
      }
      if (nd.cpt->name_set() != names) {
        bad("table variables differ from conclusion names");
        return;
      }
      try {
        validate_cpt(*nd.cpt, main);
      } catch (const Error& e) {
        bad(e.what());
      }
      return;
    }
  }
}

}  // namespace

std::vector<Violation> check_typed_graph(const ProofNet& n) {
  std::vector<Violation> out;
  std::map<EdgeId, int> as_premise, as_conclusion;
  for (const auto& [id, nd] : n.nodes()) {
    for (EdgeId e : nd.premises) {
      ++as_premise[e];
      if (!n.has_edge(e)) {
        out.push_back({nid(id) + " lists missing premise edge " + std::to_string(e), id, e});
      } else if (n.edge(e).target != id) {
        out.push_back({nid(id) + " lists edge " + std::to_string(e) + " as premise but the edge disagrees", id, e});
      }
    }
    for (EdgeId e : nd.conclusions) {
      ++as_conclusion[e];
      if (!n.has_edge(e)) {
        out.push_back({nid(id) + " lists missing conclusion edge " + std::to_string(e), id, e});
      } else if (n.edge(e).source != id) {
        out.push_back({nid(id) + " lists edge " + std::to_string(e) + " as conclusion but the edge disagrees", id, e});
      }
    }
  }
  std::map<EdgeId, int> pending_listed;
  for (EdgeId e : n.conclusions()) {
    ++pending_listed[e];
    if (!n.has_edge(e))
      out.push_back({"conclusion list names missing edge " + std::to_string(e), {}, e});
    else if (n.edge(e).target)
      out.push_back({"edge " + std::to_string(e) + " is listed as a conclusion but has a target", {}, e});
  }
  for (const auto& [id, e] : n.edges()) {
    std::string en = "edge " + std::to_string(id);
    if (as_conclusion[id] != 1)
      out.push_back({en + " is a conclusion of " + std::to_string(as_conclusion[id]) + " nodes", {}, id});
    if (as_premise[id] > 1) out.push_back({en + " is a premise of " + std::to_string(as_premise[id]) + " nodes", {}, id});
    if (!e.target && pending_listed[id] != 1) out.push_back({en + " is pending but not listed once as a conclusion", {}, id});
    if (e.target && !n.has_node(*e.target)) out.push_back({en + " targets a missing node", {}, id});
    if (!n.has_node(e.source)) out.push_back({en + " has a missing source", {}, id});
  }
  if (!out.empty()) return out;
  for (const auto& [id, nd] : n.nodes()) type_node(n, nd, out);
  return out;
}

bool is_typed(const ProofNet& n) { return check_typed_graph(n).empty(); }

void require_typed(const ProofNet& n) {
  auto v = check_typed_graph(n);
  if (!v.empty()) throw Error(ErrorCode::IllTyped, v.front().message);
}

bool polarized_acyclic(const ProofNet& n) {
  std::map<NodeId, int> indeg;
  std::map<NodeId, std::vector<NodeId>> out;
  for (const auto& [id, _] : n.nodes()) indeg[id] = 0;
  for (const auto& [id, e] : n.edges()) {
    if (!e.target) continue;
    if (!e.label.is_atom()) throw Error(ErrorCode::NonAtomic, "edge " + std::to_string(id));
    NodeId a = e.source, b = *e.target;
    if (e.label.is_negative_atom()) std::swap(a, b);
    out[a].push_back(b);
    ++indeg[b];
  }
  std::vector<NodeId> ready;
  for (const auto& [id, d] : indeg)
    if (d == 0) ready.push_back(id);
  std::size_t seen = 0;
  while (!ready.empty()) {
    NodeId x = ready.back();
    ready.pop_back();
    ++seen;
    for (NodeId y : out[x])
      if (--indeg[y] == 0) ready.push_back(y);
  }
  return seen == n.node_count();
}

namespace {

struct SwitchGraph {
  std::map<NodeId, int> index;
  // Internal edges as (u, v, partner) where partner indexes the other premise
  // of the same switching node, or -1.
  struct E {
    int u, v, partner;
    bool alive = true;
  };
  std::vector<E> edges;
  int switches = 0;

  explicit SwitchGraph(const ProofNet& n) {
    for (const auto& [id, _] : n.nodes()) index.emplace(id, static_cast<int>(index.size()));
    std::map<EdgeId, int> pos;
    for (const auto& [id, e] : n.edges()) {
      if (!e.target) continue;
      pos[id] = static_cast<int>(edges.size());
      edges.push_back({index.at(e.source), index.at(*e.target), -1});
    }
    for (const auto& [id, nd] : n.nodes()) {
      if (nd.kind != NodeKind::Par && nd.kind != NodeKind::Contraction) continue;
      if (nd.premises.size() != 2) throw Error(ErrorCode::IllTyped, nid(id) + " needs two premises");
      int a = pos.at(nd.premises[0]), b = pos.at(nd.premises[1]);
      edges[a].partner = b;
      edges[b].partner = a;
      ++switches;
    }
  }
};

// Searches for a switching with a cycle over the pairs left in `g`.
bool residual_has_cycle(const SwitchGraph& g, UnionFind base) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const auto& e = g.edges[i];
    if (!e.alive) continue;
    if (e.partner < 0) {
      if (!base.unite(e.u, e.v)) return true;
    } else if (i < e.partner) {
      pairs.push_back({i, e.partner});
    }
  }
  std::function<bool(std::size_t, UnionFind&)> go = [&](std::size_t k, UnionFind& uf) -> bool {
    if (k == pairs.size()) return false;
    for (int pick : {pairs[k].first, pairs[k].second}) {
      UnionFind copy = uf;
      if (!copy.unite(g.edges[pick].u, g.edges[pick].v)) return true;
      if (go(k + 1, copy)) return true;
    }
    return false;
  };
  return go(0, base);
}

}  // namespace

bool check_correctness_by_contraction(const ProofNet& n) {
  SwitchGraph g(n);
  int nv = static_cast<int>(g.index.size());
  UnionFind uf(nv);
  auto& E = g.edges;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < static_cast<int>(E.size()); ++i) {
      if (!E[i].alive) continue;
      int a = uf.find(E[i].u), b = uf.find(E[i].v);
      if (a == b) return false;
      if (E[i].partner < 0) {
        uf.unite(a, b);
        E[i].alive = false;
        changed = true;
        continue;
      }
      auto& f = E[E[i].partner];
      int c = uf.find(f.u), d = uf.find(f.v);
      if ((a == c && b == d) || (a == d && b == c)) {
        uf.unite(a, b);
        E[i].alive = false;
        f.alive = false;
        changed = true;
      }
    }
    if (changed) continue;
    std::vector<int> degree(nv, 0);
    for (const auto& e : E)
      if (e.alive) {
        ++degree[uf.find(e.u)];
        ++degree[uf.find(e.v)];
      }
    for (int i = 0; i < static_cast<int>(E.size()); ++i) {
      if (!E[i].alive) continue;
      if (degree[uf.find(E[i].u)] == 1 || degree[uf.find(E[i].v)] == 1) {
        E[i].alive = false;
        if (E[i].partner >= 0) E[E[i].partner].partner = -1;
        changed = true;
        break;
      }
    }
  }
  bool any = std::any_of(E.begin(), E.end(), [](const auto& e) { return e.alive; });
  if (!any) return true;
  return !residual_has_cycle(g, uf);
}

bool check_correctness_exhaustive(const ProofNet& n, int max_switches) {
  SwitchGraph g(n);
  if (g.switches > max_switches) throw Error(ErrorCode::Unsupported, "too many switching nodes");
  std::vector<int> first;  // first premise edge of each switching node
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
    if (g.edges[i].partner > i) first.push_back(i);
  int nv = static_cast<int>(g.index.size());
  for (long mask = 0; mask < (1L << first.size()); ++mask) {
    std::vector<bool> drop(g.edges.size(), false);
    for (std::size_t k = 0; k < first.size(); ++k) {
      int i = first[k];
      drop[(mask >> k) & 1 ? i : g.edges[i].partner] = true;
    }
    UnionFind uf(nv);
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (!drop[i] && !uf.unite(g.edges[i].u, g.edges[i].v)) return false;
  }
  return true;
}

bool check_correctness(const ProofNet& n) {
  if (n.is_atomic()) return polarized_acyclic(n);
  return check_correctness_by_contraction(n);
}

namespace {

std::map<NodeId, std::vector<NodeId>> polarized_adjacency(const ProofNet& n) {
  std::map<NodeId, std::vector<NodeId>> out;
  for (const auto& [id, e] : n.edges()) {
    if (!e.target) continue;
    if (e.label.is_positive_atom())
      out[e.source].push_back(*e.target);
    else
      out[*e.target].push_back(e.source);
  }
  return out;
}

}  // namespace

BoxDag polarized_dag(const ProofNet& n) {
  if (!n.is_atomic()) throw Error(ErrorCode::NonAtomic, "polarized order needs an atomic net");
  if (!polarized_acyclic(n)) throw Error(ErrorCode::Incorrect, "polarized orientation has a cycle");
  auto adj = polarized_adjacency(n);
  BoxDag d;
  d.boxes = n.boxes();
  for (NodeId b : d.boxes) {
    std::set<NodeId> seen{b};
    std::vector<NodeId> stack{b};
    std::set<NodeId> hits;
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      for (NodeId y : adj[x]) {
        if (!seen.insert(y).second) continue;
        if (n.node(y).kind == NodeKind::Box)
          hits.insert(y);
        else
          stack.push_back(y);
      }
    }
    for (NodeId h : hits) d.arcs.push_back({b, h});
  }
  return d;
}

std::vector<NodeId> BoxDag::parents(NodeId box) const {
  std::vector<NodeId> out;
  for (const auto& [a, b] : arcs)
    if (b == box) out.push_back(a);
  return out;
}

std::vector<NodeId> BoxDag::children(NodeId box) const {
  std::vector<NodeId> out;
  for (const auto& [a, b] : arcs)
    if (a == box) out.push_back(b);
  return out;
}

bool BoxDag::reaches(NodeId from, NodeId to) const {
  std::set<NodeId> seen{from};
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    for (NodeId y : children(x)) {
      if (y == to) return true;
      if (seen.insert(y).second) stack.push_back(y);
    }
  }
  return false;
}

std::vector<NodeId> BoxDag::topological_order() const {
  std::map<NodeId, int> indeg;
  for (NodeId b : boxes) indeg[b] = 0;
  for (const auto& [a, b] : arcs) ++indeg[b];
  std::vector<NodeId> order;
  std::set<NodeId> ready;
  for (const auto& [b, d] : indeg)
    if (d == 0) ready.insert(b);
  while (!ready.empty()) {
    NodeId x = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(x);
    for (NodeId y : children(x))
      if (--indeg[y] == 0) ready.insert(y);
  }
  return order;
}

std::set<NodeId> nodes_on_name(const ProofNet& n, const std::string& name) {
  std::set<NodeId> out;
  for (const auto& [id, e] : n.edges()) {
    if (!e.label.atom_names().count(name)) continue;
    out.insert(e.source);
    if (e.target) out.insert(*e.target);
  }
  return out;
}

namespace {

bool distinct_box_names(const ProofNet& n) {
  std::set<std::string> seen;
  for (NodeId b : n.boxes())
    if (!seen.insert(n.box_name(b)).second) return false;
  return true;
}

}  // namespace

std::optional<ProofNet> artifact_closure(const ProofNet& n) {
  ProofNet out = n;
  auto adj = polarized_adjacency(n);
  std::map<std::string, std::vector<EdgeId>> negatives;
  for (EdgeId e : n.conclusions())
    if (n.label(e).is_negative_atom()) negatives[n.label(e).name()].push_back(e);
  for (const auto& [name, negs] : negatives) {
    auto box = n.box_of(name);
    if (!box) continue;
    // Walk the same-named edges downward from the box.
    std::optional<EdgeId> found;
    std::set<NodeId> seen{*box};
    std::vector<NodeId> stack{*box};
    while (!stack.empty() && !found) {
      NodeId x = stack.back();
      stack.pop_back();
      for (EdgeId e : n.node(x).conclusions) {
        const Formula& f = n.label(e);
        if (!f.is_positive_atom() || f.name() != name) continue;
        if (!n.target(e)) {
          found = e;
          break;
        }
        if (seen.insert(*n.target(e)).second) stack.push_back(*n.target(e));
      }
      for (EdgeId e : n.node(x).premises) {
        const Formula& f = n.label(e);
        if (f.is_negative_atom() && f.name() == name && seen.insert(n.source(e)).second) stack.push_back(n.source(e));
      }
    }
    if (!found) return std::nullopt;
    EdgeId root = out.add_contraction_tree(negs);
    out.add_cut(*found, root);
  }
  return out;
}

bool is_bayesian(const ProofNet& n) {
  require_typed(n);
  if (!check_correctness(n)) throw Error(ErrorCode::Incorrect, "not a proof-net");
  if (!distinct_box_names(n)) return false;
  ProofNet at = n;
  if (!at.is_atomic()) {
    at = normal_form_decompose(normalize(n, false)).atomic;
    if (!at.is_atomic()) return false;
  }
  if (at.is_positive()) return true;
  auto closed = artifact_closure(at);
  return closed && polarized_acyclic(*closed);
}

bool is_bayesian_by_embedding(const ProofNet& n, long max_candidates) {
  require_typed(n);
  if (!n.is_atomic()) throw Error(ErrorCode::NonAtomic, "embedding search needs an atomic net");
  if (!distinct_box_names(n)) return false;
  std::map<std::string, std::vector<EdgeId>> negs, poss;
  for (EdgeId e : n.conclusions()) {
    const Formula& f = n.label(e);
    (f.is_negative_atom() ? negs : poss)[f.name()].push_back(e);
  }
  // Choices per negative conclusion: a positive conclusion of the same name,
  // or (index -1) a fresh source box when the net has no box of that name.
  struct Slot {
    EdgeId neg;
    std::vector<EdgeId> options;
  };
  std::vector<Slot> slots;
  long total = 1;
  for (const auto& [name, es] : negs) {
    std::vector<EdgeId> opts = poss[name];
    if (!n.box_of(name)) opts.push_back(-1);
    for (EdgeId e : es) {
      if (opts.empty()) return false;
      slots.push_back({e, opts});
      total *= static_cast<long>(opts.size());
      if (total > max_candidates) throw Error(ErrorCode::Unsupported, "embedding search too large");
    }
  }
  std::vector<std::size_t> pick(slots.size(), 0);
  for (long k = 0; k < total; ++k) {
    ProofNet m = n;
    std::map<std::pair<std::string, EdgeId>, std::vector<EdgeId>> groups;
    for (std::size_t i = 0; i < slots.size(); ++i)
      groups[{n.label(slots[i].neg).name(), slots[i].options[pick[i]]}].push_back(slots[i].neg);
    for (const auto& [key, es] : groups) {
      EdgeId root = m.add_contraction_tree(es);
      EdgeId pos = key.second;
      if (pos < 0) {
        NodeId b = m.add_box(Factor::create({binary_var(key.first)}, {0.5, 0.5}), key.first);
        pos = m.box_main(b);
      }
      m.add_cut(pos, root);
    }
    if (polarized_acyclic(m)) return true;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (++pick[i] < slots[i].options.size()) break;
      pick[i] = 0;
    }
  }
  return false;
}

JointreeReport jointree_check(const ProofNet& n) {
  JointreeReport r;
  if (!n.is_atomic()) {
    r.ok = false;
    r.failures.push_back("net is not atomic");
    return r;
  }
  for (const std::string& name : n.names()) {
    auto box = n.box_of(name);
    if (!box) {
      if (n.is_positive()) r.failures.push_back(name + ": no box");
      continue;
    }
    // Vertices are nodes plus one virtual vertex per pending edge.
    std::map<int, int> indeg;
    std::map<int, std::vector<int>> out;
    std::size_t edges = 0;
    for (const auto& [id, e] : n.edges()) {
      if (e.label.name() != name) continue;
      ++edges;
      int a = e.source, b = e.target ? *e.target : -1 - id;
      if (e.label.is_negative_atom()) std::swap(a, b);
      indeg[a] += 0;
      indeg[b] += 1;
      out[a].push_back(b);
    }
    if (indeg.count(*box) == 0 || indeg[*box] != 0) r.failures.push_back(name + ": box has an incoming edge");
    for (const auto& [v, d] : indeg)
      if (v != *box && d != 1) r.failures.push_back(name + ": vertex with in-degree " + std::to_string(d));
    if (indeg.size() != edges + 1) r.failures.push_back(name + ": not a tree");
    std::set<int> seen{*box};
    std::vector<int> stack{*box};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : out[x])
        if (seen.insert(y).second) stack.push_back(y);
    }
    if (seen.size() != indeg.size()) r.failures.push_back(name + ": not reachable from its box");
  }
  r.ok = r.failures.empty();
  return r;
}

ProofNet subnet(const ProofNet& n, const std::set<NodeId>& nodes) {
  ProofNet s;
  for (NodeId id : nodes) {
    const Node& nd = n.node(id);
    s.new_node(nd.kind, id);
    s.node_mut(id).cpt = nd.cpt;
  }
  for (NodeId id : nodes)
    for (EdgeId e : n.node(id).premises)
      if (!nodes.count(n.source(e)))
        throw Error(ErrorCode::NotASubnet, "premise " + std::to_string(e) + " of node " + std::to_string(id) +
                                               " comes from outside");
  // Edges keep their ids; conclusion order follows the parent's conclusions
  // first, then newly exposed edges by id.
  std::vector<EdgeId> order;
  std::set<EdgeId> listed;
  for (EdgeId e : n.conclusions())
    if (nodes.count(n.source(e))) {
      order.push_back(e);
      listed.insert(e);
    }
  for (NodeId id : nodes)
    for (EdgeId e : n.node(id).conclusions) s.new_edge(id, n.label(e), e);
  for (NodeId id : nodes) {
    auto& prem = s.node_mut(id).premises;
    for (EdgeId e : n.node(id).premises) {
      s.edge_mut(e).target = id;
      prem.push_back(e);
    }
  }
  std::vector<EdgeId> exposed;
  for (const auto& [id, e] : s.edges())
    if (!e.target && !listed.count(id)) exposed.push_back(id);
  order.insert(order.end(), exposed.begin(), exposed.end());
  s.conclusions_mut() = order;
  return s;
}

}  // namespace bpn
