#include "bpn/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "bpn/error.hpp"
#include "bpn/net_checks.hpp"

namespace bpn {

const char* redex_name(RedexKind k) {
  switch (k) {
    case RedexKind::AxCut: return "ax_cut";
    case RedexKind::TensorPar: return "tensor_par";
    case RedexKind::OneBot: return "one_bot";
    case RedexKind::ContractionWeakening: return "contraction_weakening";
    case RedexKind::BoxWeakening: return "box_weakening";
  }
  return "?";
}

std::string Redex::str() const {
  std::string s = std::string(redex_name(kind)) + " " + std::to_string(site);
  if (other >= 0) s += " " + std::to_string(other);
  return s;
}

namespace {

NodeKind src_kind(const ProofNet& n, EdgeId e) { return n.node(n.source(e)).kind; }

// Edge `e` takes over the place of `old`: its target and premise slot, or its
// position in the conclusion list.
void take_place(ProofNet& n, EdgeId e, EdgeId old) {
  auto t = n.target(old);
  if (t) {
    auto& prem = n.node_mut(*t).premises;
    std::replace(prem.begin(), prem.end(), old, e);
    n.edge_mut(e).target = *t;
    n.edge_mut(old).target.reset();
  } else {
    n.replace_conclusion(old, e);
    n.edge_mut(e).target.reset();
  }
}

void erase_with_conclusions(ProofNet& n, NodeId id) {
  for (EdgeId e : n.node(id).conclusions) n.erase_edge(e);
  n.erase_node(id);
}

[[noreturn]] void stale(const Redex& r) { throw Error(ErrorCode::StaleRedex, r.str()); }

bool is_cut(const ProofNet& n, NodeId id) { return n.has_node(id) && n.node(id).kind == NodeKind::Cut; }

}  // namespace

std::vector<Redex> find_redexes(const ProofNet& n, bool pruning) {
  std::vector<Redex> out;
  for (const auto& [id, nd] : n.nodes()) {
    if (nd.kind == NodeKind::Cut && nd.premises.size() == 2) {
      NodeId s0 = n.source(nd.premises[0]), s1 = n.source(nd.premises[1]);
      NodeKind k0 = n.node(s0).kind, k1 = n.node(s1).kind;
      if (s0 != s1) {
        if (k0 == NodeKind::Ax) out.push_back({RedexKind::AxCut, id, s0});
        if (k1 == NodeKind::Ax) out.push_back({RedexKind::AxCut, id, s1});
      }
      if ((k0 == NodeKind::Tensor && k1 == NodeKind::Par) || (k0 == NodeKind::Par && k1 == NodeKind::Tensor))
        out.push_back({RedexKind::TensorPar, id});
      if ((k0 == NodeKind::One && k1 == NodeKind::Bot) || (k0 == NodeKind::Bot && k1 == NodeKind::One))
        out.push_back({RedexKind::OneBot, id});
      if (pruning) {
        if (k0 == NodeKind::Box && k1 == NodeKind::Weakening) out.push_back({RedexKind::BoxWeakening, id, s1});
        if (k1 == NodeKind::Box && k0 == NodeKind::Weakening) out.push_back({RedexKind::BoxWeakening, id, s0});
      }
    } else if (nd.kind == NodeKind::Contraction && nd.premises.size() == 2) {
      for (EdgeId p : nd.premises)
        if (src_kind(n, p) == NodeKind::Weakening) out.push_back({RedexKind::ContractionWeakening, id, n.source(p)});
    }
  }
  return out;
}

bool is_normal(const ProofNet& n, bool pruning) { return find_redexes(n, pruning).empty(); }

void apply_redex(ProofNet& n, const Redex& r) {
  switch (r.kind) {
    case RedexKind::AxCut: {
      if (!is_cut(n, r.site) || !n.has_node(r.other) || n.node(r.other).kind != NodeKind::Ax) stale(r);
      const auto prem = n.node(r.site).premises;
      EdgeId pa = -1, q = -1;
      for (EdgeId p : prem) {
        if (n.source(p) == r.other && pa < 0)
          pa = p;
        else
          q = p;
      }
      if (pa < 0 || q < 0 || n.source(q) == r.other) stale(r);
      const auto& ac = n.node(r.other).conclusions;
      EdgeId other = ac[0] == pa ? ac[1] : ac[0];
      take_place(n, q, other);
      n.erase_node(r.site);
      n.erase_edge(pa);
      n.erase_edge(other);
      n.erase_node(r.other);
      return;
    }
    case RedexKind::TensorPar: {
      if (!is_cut(n, r.site)) stale(r);
      const auto prem = n.node(r.site).premises;
      NodeId s0 = n.source(prem[0]), s1 = n.source(prem[1]);
      NodeKind k0 = n.node(s0).kind, k1 = n.node(s1).kind;
      if (!((k0 == NodeKind::Tensor && k1 == NodeKind::Par) || (k0 == NodeKind::Par && k1 == NodeKind::Tensor))) stale(r);
      auto p0 = n.node(s0).premises, p1 = n.node(s1).premises;
      n.erase_node(r.site);
      erase_with_conclusions(n, s0);
      erase_with_conclusions(n, s1);
      for (EdgeId e : {p0[0], p0[1], p1[0], p1[1]}) n.edge_mut(e).target.reset();
      n.add_cut(p0[0], p1[0]);
      n.add_cut(p0[1], p1[1]);
      return;
    }
    case RedexKind::OneBot: {
      if (!is_cut(n, r.site)) stale(r);
      const auto prem = n.node(r.site).premises;
      NodeId s0 = n.source(prem[0]), s1 = n.source(prem[1]);
      std::set<NodeKind> ks{n.node(s0).kind, n.node(s1).kind};
      if (ks != std::set<NodeKind>{NodeKind::One, NodeKind::Bot}) stale(r);
      n.erase_node(r.site);
      erase_with_conclusions(n, s0);
      erase_with_conclusions(n, s1);
      return;
    }
    case RedexKind::ContractionWeakening: {
      if (!n.has_node(r.site) || n.node(r.site).kind != NodeKind::Contraction || !n.has_node(r.other) ||
          n.node(r.other).kind != NodeKind::Weakening)
        stale(r);
      const auto prem = n.node(r.site).premises;
      EdgeId pw = n.conclusion(r.other);
      if (std::find(prem.begin(), prem.end(), pw) == prem.end()) stale(r);
      EdgeId q = prem[0] == pw ? prem[1] : prem[0];
      EdgeId out = n.conclusion(r.site);
      take_place(n, q, out);
      n.erase_edge(out);
      n.erase_node(r.site);
      erase_with_conclusions(n, r.other);
      return;
    }
    case RedexKind::BoxWeakening: {
      if (!is_cut(n, r.site) || !n.has_node(r.other) || n.node(r.other).kind != NodeKind::Weakening) stale(r);
      const auto prem = n.node(r.site).premises;
      EdgeId pw = n.conclusion(r.other);
      if (std::find(prem.begin(), prem.end(), pw) == prem.end()) stale(r);
      EdgeId pb = prem[0] == pw ? prem[1] : prem[0];
      NodeId box = n.source(pb);
      if (n.node(box).kind != NodeKind::Box) stale(r);
      n.erase_node(r.site);
      erase_with_conclusions(n, r.other);
      // Each input of the box is now produced by its own weakening.
      for (EdgeId e : n.node(box).conclusions) {
        if (e == pb) continue;
        NodeId w = n.new_node(NodeKind::Weakening);
        n.node_mut(w).conclusions.push_back(e);
        n.edge_mut(e).source = w;
      }
      n.erase_edge(pb);
      n.erase_node(box);
      return;
    }
  }
}

ProofNet reduce_step(ProofNet n, const Redex& r) {
  apply_redex(n, r);
  return n;
}

ProofNet normalize(ProofNet n, bool pruning, std::vector<Redex>* trace) {
  for (;;) {
    auto rs = find_redexes(n, pruning);
    if (rs.empty()) return n;
    apply_redex(n, rs.front());
    if (trace) trace->push_back(rs.front());
  }
}

AxExpansion ax_expand(ProofNet& n, EdgeId e) {
  const Formula label = n.label(e);
  if (!label.is_atom()) throw Error(ErrorCode::NonAtomicEdge, "edge " + std::to_string(e));
  NodeId ax = n.new_node(NodeKind::Ax);
  EdgeId plus = n.new_edge(ax, Formula::pos(label.name()));
  EdgeId minus = n.new_edge(ax, Formula::neg(label.name()));
  EdgeId same = label.is_positive_atom() ? plus : minus;
  EdgeId dual = same == plus ? minus : plus;
  // `same` continues to wherever `e` went.
  auto& cl = n.conclusions_mut();
  cl.erase(std::remove(cl.begin(), cl.end(), same), cl.end());
  take_place(n, same, e);
  NodeId cut = label.is_positive_atom() ? n.add_cut(e, dual) : n.add_cut(dual, e);
  return {ax, cut};
}

TensorParExpansion tensor_par_expand(ProofNet& n, CutSide a, CutSide b, bool tensor_on_selected) {
  if (a.cut == b.cut || !is_cut(n, a.cut) || !is_cut(n, b.cut) || a.premise < 0 || a.premise > 1 || b.premise < 0 ||
      b.premise > 1)
    throw Error(ErrorCode::PreconditionViolation, "tensor_par_expand needs two distinct cuts");
  ProofNet m = n;
  EdgeId ai = m.premise(a.cut, a.premise), aj = m.premise(a.cut, 1 - a.premise);
  EdgeId bi = m.premise(b.cut, b.premise), bj = m.premise(b.cut, 1 - b.premise);
  m.erase_node(a.cut);
  m.erase_node(b.cut);
  for (EdgeId e : {ai, aj, bi, bj}) m.edge_mut(e).target.reset();
  NodeId ni = tensor_on_selected ? m.add_tensor(ai, bi) : m.add_par(ai, bi);
  NodeId nj = tensor_on_selected ? m.add_par(aj, bj) : m.add_tensor(aj, bj);
  NodeId cut = m.add_cut(m.conclusion(ni), m.conclusion(nj));
  if (!check_correctness(m)) throw Error(ErrorCode::WouldBreakCorrectness, "merging the cuts creates a cycle");
  n = std::move(m);
  return {cut, ni, nj};
}

NormalFormDecomposition normal_form_decompose(const ProofNet& n) {
  if (!is_normal(n, false)) throw Error(ErrorCode::NotNormal, "net has a redex");
  NormalFormDecomposition d;
  d.conclusions = n.conclusions();
  std::set<NodeId> forest;
  std::vector<EdgeId> stack(n.conclusions().begin(), n.conclusions().end());
  while (!stack.empty()) {
    EdgeId e = stack.back();
    stack.pop_back();
    if (n.label(e).is_atom()) continue;
    const Node& src = n.node(n.source(e));
    forest.insert(src.id);
    for (EdgeId p : src.premises) stack.push_back(p);
  }
  std::set<NodeId> keep;
  for (NodeId id : n.node_ids())
    if (!forest.count(id)) keep.insert(id);
  d.atomic = subnet(n, keep);
  // The atomic conclusions follow the leaves of the conclusion formulas.
  std::vector<EdgeId> leaves;
  std::function<void(EdgeId)> visit = [&](EdgeId e) {
    if (n.label(e).is_atom()) {
      leaves.push_back(e);
      return;
    }
    for (EdgeId p : n.node(n.source(e)).premises) visit(p);
  };
  for (EdgeId e : n.conclusions()) visit(e);
  d.atomic.conclusions_mut() = leaves;
  for (NodeId id : forest) {
    d.forest_nodes.push_back(n.node(id));
    for (EdgeId e : n.node(id).conclusions) d.forest_edges.push_back(n.edge(e));
  }
  return d;
}

ProofNet reassemble(const NormalFormDecomposition& d) {
  ProofNet n = d.atomic;
  for (const Node& nd : d.forest_nodes) {
    n.new_node(nd.kind, nd.id);
    n.node_mut(nd.id).cpt = nd.cpt;
  }
  for (const Edge& e : d.forest_edges) n.new_edge(e.source, e.label, e.id);
  for (const Node& nd : d.forest_nodes) {
    for (EdgeId p : nd.premises) {
      n.edge_mut(p).target = nd.id;
      n.node_mut(nd.id).premises.push_back(p);
    }
  }
  n.conclusions_mut() = d.conclusions;
  return n;
}

}  // namespace bpn
