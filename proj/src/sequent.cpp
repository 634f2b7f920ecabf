#include "bpn/sequent.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bpn/error.hpp"
#include "bpn/net_checks.hpp"

namespace bpn {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Ax: return "ax";
    case Rule::One: return "one";
    case Rule::Bot: return "bot";
    case Rule::Weakening: return "w";
    case Rule::Box: return "box";
    case Rule::Tensor: return "tensor";
    case Rule::Par: return "par";
    case Rule::Contraction: return "c";
    case Rule::Cut: return "cut";
    case Rule::Mix: return "mix";
  }
  return "?";
}

namespace {

[[noreturn]] void bad(const std::string& m) { throw Error(ErrorCode::PreconditionViolation, m); }

const Occurrence& at(const ProofTree& t, int i) {
  if (i < 0 || i >= static_cast<int>(t.sequent.size())) bad(std::string(rule_name(t.rule)) + ": active index out of range");
  return t.sequent[i];
}

std::vector<Occurrence> without(const std::vector<Occurrence>& s, std::initializer_list<int> drop) {
  std::vector<Occurrence> out;
  for (int k = 0; k < static_cast<int>(s.size()); ++k)
    if (std::find(drop.begin(), drop.end(), k) == drop.end()) out.push_back(s[k]);
  return out;
}

ProofTree leaf(Rule r, std::vector<Occurrence> seq, NodeId node) {
  ProofTree t;
  t.rule = r;
  t.node = node;
  t.sequent = std::move(seq);
  return t;
}

// Conclusion of a rule from its premises, or an exception.
std::vector<Occurrence> conclude(const ProofTree& t, EdgeId tag) {
  const auto& P = t.premises;
  auto need = [&](std::size_t np, std::size_t na) {
    if (P.size() != np || t.active.size() != na) bad(std::string(rule_name(t.rule)) + ": wrong number of premises");
  };
  switch (t.rule) {
    case Rule::Tensor: {
      need(2, 2);
      const auto& f = at(P[0], t.active[0]).formula;
      const auto& g = at(P[1], t.active[1]).formula;
      auto s = without(P[0].sequent, {t.active[0]});
      auto r = without(P[1].sequent, {t.active[1]});
      s.insert(s.end(), r.begin(), r.end());
      s.push_back({Formula::tensor(f, g), tag});
      return s;
    }
    case Rule::Cut: {
      need(2, 2);
      if (at(P[0], t.active[0]).formula.dual() != at(P[1], t.active[1]).formula) bad("cut: formulas are not dual");
      auto s = without(P[0].sequent, {t.active[0]});
      auto r = without(P[1].sequent, {t.active[1]});
      s.insert(s.end(), r.begin(), r.end());
      return s;
    }
    case Rule::Par:
    case Rule::Contraction: {
      need(1, 2);
      if (t.active[0] == t.active[1]) bad("repeated active index");
      const auto& f = at(P[0], t.active[0]).formula;
      const auto& g = at(P[0], t.active[1]).formula;
      auto s = without(P[0].sequent, {t.active[0], t.active[1]});
      if (t.rule == Rule::Par) {
        s.push_back({Formula::par(f, g), tag});
      } else {
        if (!f.is_negative_atom() || f != g) bad("c: needs two equal negative atoms");
        s.push_back({f, tag});
      }
      return s;
    }
    case Rule::Mix: {
      need(2, 0);
      auto s = P[0].sequent;
      s.insert(s.end(), P[1].sequent.begin(), P[1].sequent.end());
      return s;
    }
    default:
      bad(std::string(rule_name(t.rule)) + " is a leaf");
  }
}

ProofTree inner(Rule r, std::vector<ProofTree> premises, std::vector<int> active, EdgeId tag, NodeId node) {
  ProofTree t;
  t.rule = r;
  t.node = node;
  t.premises = std::move(premises);
  t.active = std::move(active);
  t.sequent = conclude(t, tag);
  return t;
}

// The occurrence a tensor, par or contraction introduces. Sequents are read up
// to exchange, so it need not be the last one.
const Occurrence* introduced(const ProofTree& p) {
  std::set<EdgeId> old;
  for (const auto& q : p.premises)
    for (const auto& o : q.sequent) old.insert(o.tag);
  for (const auto& o : p.sequent)
    if (!old.count(o.tag)) return &o;
  return nullptr;
}

std::vector<std::pair<EdgeId, std::string>> as_multiset(const std::vector<Occurrence>& seq) {
  std::vector<std::pair<EdgeId, std::string>> out;
  for (const auto& o : seq) out.emplace_back(o.tag, o.formula.str());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ProofTree ax_rule(const std::string& name, EdgeId pos_tag, EdgeId neg_tag, NodeId node) {
  return leaf(Rule::Ax, {{Formula::pos(name), pos_tag}, {Formula::neg(name), neg_tag}}, node);
}
ProofTree one_rule(EdgeId tag, NodeId node) { return leaf(Rule::One, {{Formula::one(), tag}}, node); }
ProofTree bot_rule(EdgeId tag, NodeId node) { return leaf(Rule::Bot, {{Formula::bot(), tag}}, node); }
ProofTree weakening_rule(const std::string& name, EdgeId tag, NodeId node) {
  return leaf(Rule::Weakening, {{Formula::neg(name), tag}}, node);
}

ProofTree box_rule(const Factor& cpt, const std::string& child, const std::vector<EdgeId>& tags, NodeId node) {
  std::vector<Occurrence> seq;
  for (const auto& v : cpt.vars())
    if (v.name != child) seq.push_back({Formula::neg(v.name), -1});
  seq.push_back({Formula::pos(child), -1});
  if (tags.size() != seq.size()) bad("box: one tag per conclusion");
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i].tag = tags[i];
  ProofTree t = leaf(Rule::Box, std::move(seq), node);
  t.cpt = cpt;
  return t;
}

ProofTree tensor_rule(ProofTree a, int i, ProofTree b, int j, EdgeId tag, NodeId node) {
  std::vector<ProofTree> ps;
  ps.push_back(std::move(a));
  ps.push_back(std::move(b));
  return inner(Rule::Tensor, std::move(ps), {i, j}, tag, node);
}
ProofTree cut_rule(ProofTree a, int i, ProofTree b, int j, NodeId node) {
  std::vector<ProofTree> ps;
  ps.push_back(std::move(a));
  ps.push_back(std::move(b));
  return inner(Rule::Cut, std::move(ps), {i, j}, -1, node);
}
ProofTree par_rule(ProofTree a, int i, int j, EdgeId tag, NodeId node) {
  std::vector<ProofTree> ps;
  ps.push_back(std::move(a));
  return inner(Rule::Par, std::move(ps), {i, j}, tag, node);
}
ProofTree contraction_rule(ProofTree a, int i, int j, EdgeId tag, NodeId node) {
  std::vector<ProofTree> ps;
  ps.push_back(std::move(a));
  return inner(Rule::Contraction, std::move(ps), {i, j}, tag, node);
}
ProofTree mix_rule(ProofTree a, ProofTree b) {
  std::vector<ProofTree> ps;
  ps.push_back(std::move(a));
  ps.push_back(std::move(b));
  return inner(Rule::Mix, std::move(ps), {}, -1, -1);
}

std::vector<std::string> check_proof_tree(const ProofTree& t) {
  std::vector<std::string> out;
  std::function<void(const ProofTree&)> go = [&](const ProofTree& p) {
    for (const auto& q : p.premises) go(q);
    std::string where = std::string(rule_name(p.rule)) + (p.node >= 0 ? " #" + std::to_string(p.node) : "");
    try {
      switch (p.rule) {
        case Rule::Ax:
          if (p.sequent.size() != 2 || !p.sequent[0].formula.is_atom() ||
              p.sequent[0].formula.dual() != p.sequent[1].formula)
            out.push_back(where + ": needs two dual atoms");
          break;
        case Rule::One:
        case Rule::Bot:
          if (p.sequent.size() != 1 ||
              p.sequent[0].formula.kind() != (p.rule == Rule::One ? Formula::Kind::One : Formula::Kind::Bot))
            out.push_back(where + ": wrong unit");
          break;
        case Rule::Weakening:
          if (p.sequent.size() != 1 || !p.sequent[0].formula.is_negative_atom())
            out.push_back(where + ": needs one negative atom");
          break;
        case Rule::Box: {
          std::set<std::string> names;
          int positives = 0;
          std::string child;
          for (const auto& o : p.sequent) {
            if (!o.formula.is_atom()) out.push_back(where + ": non-atomic conclusion");
            else {
              names.insert(o.formula.name());
              if (o.formula.is_positive_atom()) {
                ++positives;
                child = o.formula.name();
              }
            }
          }
          if (positives != 1 || !p.cpt || p.cpt->name_set() != names || names.size() != p.sequent.size())
            out.push_back(where + ": conclusions do not match the table");
          else
            validate_cpt(*p.cpt, child);
          break;
        }
        default: {
          const Occurrence* fresh = introduced(p);
          auto expect = conclude(p, fresh ? fresh->tag : -1);
          if (as_multiset(expect) != as_multiset(p.sequent)) out.push_back(where + ": conclusion does not follow from the premises");
        }
      }
    } catch (const Error& e) {
      out.push_back(where + ": " + e.what());
    }
  };
  go(t);
  // Formula occurrences must be distinct edges.
  std::map<EdgeId, int> count;
  std::function<void(const ProofTree&)> tags = [&](const ProofTree& p) {
    for (const auto& q : p.premises) tags(q);
    if (p.premises.empty())
      for (const auto& o : p.sequent) ++count[o.tag];
    else if (p.rule == Rule::Tensor || p.rule == Rule::Par || p.rule == Rule::Contraction)
      ++count[introduced(p) ? introduced(p)->tag : -1];
  };
  tags(t);
  for (const auto& [tag, k] : count)
    if (k > 1 || tag < 0) out.push_back("tag " + std::to_string(tag) + " is not a unique edge id");
  return out;
}

namespace {

int index_of_tag(const ProofTree& t, EdgeId e) {
  for (int i = 0; i < static_cast<int>(t.sequent.size()); ++i)
    if (t.sequent[i].tag == e) return i;
  throw Error(ErrorCode::Incorrect, "edge " + std::to_string(e) + " missing from sub-proof");
}

// Connected components of the undirected graph on `ids` using internal edges.
std::vector<std::set<NodeId>> pieces(const ProofNet& n, const std::set<NodeId>& ids) {
  std::vector<std::set<NodeId>> out;
  std::set<NodeId> seen;
  for (NodeId start : ids) {
    if (seen.count(start)) continue;
    std::set<NodeId> comp{start};
    std::vector<NodeId> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      const Node& nd = n.node(x);
      std::vector<NodeId> nb;
      for (EdgeId e : nd.premises) nb.push_back(n.source(e));
      for (EdgeId e : nd.conclusions)
        if (n.target(e)) nb.push_back(*n.target(e));
      for (NodeId y : nb)
        if (ids.count(y) && seen.insert(y).second) {
          comp.insert(y);
          stack.push_back(y);
        }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

ProofTree seq_leaf(const ProofNet& n, const Node& nd) {
  std::vector<Occurrence> s;
  for (EdgeId e : nd.conclusions) s.push_back({n.label(e), e});
  switch (nd.kind) {
    case NodeKind::Ax: return leaf(Rule::Ax, s, nd.id);
    case NodeKind::One: return leaf(Rule::One, s, nd.id);
    case NodeKind::Bot: return leaf(Rule::Bot, s, nd.id);
    case NodeKind::Weakening: return leaf(Rule::Weakening, s, nd.id);
    case NodeKind::Box: {
      ProofTree t = leaf(Rule::Box, s, nd.id);
      t.cpt = nd.cpt;
      return t;
    }
    default: throw Error(ErrorCode::Incorrect, std::string("a lone ") + kind_name(nd.kind) + " has no proof");
  }
}

ProofTree seq_net(const ProofNet& n) {
  auto ids_v = n.node_ids();
  if (ids_v.empty()) throw Error(ErrorCode::Incorrect, "empty net");
  std::set<NodeId> ids(ids_v.begin(), ids_v.end());
  if (ids.size() == 1) return seq_leaf(n, n.node(*ids.begin()));
  auto parts = pieces(n, ids);
  if (parts.size() > 1) {
    std::set<NodeId> rest;
    for (std::size_t k = 1; k < parts.size(); ++k) rest.insert(parts[k].begin(), parts[k].end());
    return mix_rule(seq_net(subnet(n, parts[0])), seq_net(subnet(n, rest)));
  }
  for (NodeId id : ids) {
    const Node& nd = n.node(id);
    if ((nd.kind != NodeKind::Par && nd.kind != NodeKind::Contraction) || n.target(nd.conclusions[0])) continue;
    std::set<NodeId> rest = ids;
    rest.erase(id);
    ProofTree p = seq_net(subnet(n, rest));
    int i = index_of_tag(p, nd.premises[0]), j = index_of_tag(p, nd.premises[1]);
    EdgeId tag = nd.conclusions[0];
    return nd.kind == NodeKind::Par ? par_rule(std::move(p), i, j, tag, id) : contraction_rule(std::move(p), i, j, tag, id);
  }
  for (NodeId id : ids) {
    const Node& nd = n.node(id);
    bool tensor = nd.kind == NodeKind::Tensor && !n.target(nd.conclusions[0]);
    if (!tensor && nd.kind != NodeKind::Cut) continue;
    std::set<NodeId> rest = ids;
    rest.erase(id);
    auto sides = pieces(n, rest);
    NodeId s0 = n.source(nd.premises[0]), s1 = n.source(nd.premises[1]);
    const std::set<NodeId>* a = nullptr;
    const std::set<NodeId>* b = nullptr;
    for (const auto& s : sides) {
      if (s.count(s0)) a = &s;
      if (s.count(s1)) b = &s;
    }
    if (a == b || sides.size() != 2) continue;
    ProofTree pa = seq_net(subnet(n, *a)), pb = seq_net(subnet(n, *b));
    int i = index_of_tag(pa, nd.premises[0]), j = index_of_tag(pb, nd.premises[1]);
    if (tensor) return tensor_rule(std::move(pa), i, std::move(pb), j, nd.conclusions[0], id);
    return cut_rule(std::move(pa), i, std::move(pb), j, id);
  }
  throw Error(ErrorCode::Incorrect, "no splitting link");
}

void in_net_order(ProofTree& t, const std::vector<EdgeId>& order) {
  std::map<EdgeId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::stable_sort(t.sequent.begin(), t.sequent.end(),
                   [&](const Occurrence& a, const Occurrence& b) { return pos[a.tag] < pos[b.tag]; });
}

}  // namespace

ProofTree sequentialize(const ProofNet& n) {
  require_typed(n);
  if (!check_correctness(n)) throw Error(ErrorCode::Incorrect, "not a proof-net");
  ProofTree t = seq_net(n);
  in_net_order(t, n.conclusions());
  return t;
}

ProofTree sequentialize(const CutNet& c, std::optional<int> pivot) {
  validate_cut_net(c);
  if (!is_proper(c)) throw Error(ErrorCode::NotProper, "some components share several cuts");
  int root = pivot ? *pivot : skeleton_center(c);
  RootedCutNet r{c, root};
  auto par = r.parents();
  std::function<ProofTree(int)> compose = [&](int k) {
    ProofTree t = sequentialize(c.component_net(k));
    t.component = k;
    for (int ch = 0; ch < static_cast<int>(c.components.size()); ++ch) {
      if (par[ch] != k) continue;
      ProofTree tc = compose(ch);
      NodeId cut = c.cuts_between(k, ch).front();
      EdgeId p0 = c.net.premise(cut, 0), p1 = c.net.premise(cut, 1);
      bool left = c.side_of(cut, 0) == k;
      int i = index_of_tag(left ? t : tc, p0), j = index_of_tag(left ? tc : t, p1);
      t = left ? cut_rule(std::move(t), i, std::move(tc), j, cut) : cut_rule(std::move(tc), i, std::move(t), j, cut);
    }
    return t;
  };
  ProofTree t = compose(root);
  in_net_order(t, c.net.conclusions());
  return t;
}

ProofNet desequentialize(const ProofTree& t) {
  auto problems = check_proof_tree(t);
  if (!problems.empty()) throw Error(ErrorCode::PreconditionViolation, problems.front());
  ProofNet n;
  auto opt = [](NodeId id) { return id >= 0 ? std::optional<NodeId>(id) : std::nullopt; };
  std::function<void(const ProofTree&)> build = [&](const ProofTree& p) {
    for (const auto& q : p.premises) build(q);
    auto active_tag = [&](int k) {
      return p.rule == Rule::Par || p.rule == Rule::Contraction ? p.premises[0].sequent[p.active[k]].tag
                                                                : p.premises[k].sequent[p.active[k]].tag;
    };
    switch (p.rule) {
      case Rule::Ax:
      case Rule::One:
      case Rule::Bot:
      case Rule::Weakening:
      case Rule::Box: {
        static const std::map<Rule, NodeKind> kinds = {{Rule::Ax, NodeKind::Ax},
                                                       {Rule::One, NodeKind::One},
                                                       {Rule::Bot, NodeKind::Bot},
                                                       {Rule::Weakening, NodeKind::Weakening},
                                                       {Rule::Box, NodeKind::Box}};
        NodeId id = n.new_node(kinds.at(p.rule), opt(p.node));
        n.node_mut(id).cpt = p.cpt;
        for (const auto& o : p.sequent) n.new_edge(id, o.formula, o.tag);
        return;
      }
      case Rule::Tensor:
      case Rule::Par:
      case Rule::Contraction: {
        NodeKind k = p.rule == Rule::Tensor ? NodeKind::Tensor : p.rule == Rule::Par ? NodeKind::Par : NodeKind::Contraction;
        NodeId id = n.new_node(k, opt(p.node));
        n.attach(active_tag(0), id);
        n.attach(active_tag(1), id);
        const Occurrence& fresh = *introduced(p);
        n.new_edge(id, fresh.formula, fresh.tag);
        return;
      }
      case Rule::Cut: {
        NodeId id = n.new_node(NodeKind::Cut, opt(p.node));
        n.attach(active_tag(0), id);
        n.attach(active_tag(1), id);
        return;
      }
      case Rule::Mix: return;
    }
  };
  build(t);
  std::vector<EdgeId> order;
  for (const auto& o : t.sequent) order.push_back(o.tag);
  n.conclusions_mut() = order;
  return n;
}

std::string pretty_formula(const Formula& f) {
  std::function<std::string(const Formula&, bool)> go = [&](const Formula& g, bool top) -> std::string {
    switch (g.kind()) {
      case Formula::Kind::Tensor:
      case Formula::Kind::Par: {
        std::string s = go(g.left(), false) + (g.kind() == Formula::Kind::Tensor ? "⊗" : "⅋") + go(g.right(), false);
        return top ? s : "(" + s + ")";
      }
      case Formula::Kind::Bot: return "⊥";
      default: return g.str();
    }
  };
  return go(f, true);
}

namespace {

std::string sequent_text(const std::vector<Occurrence>& s) {
  std::string out = "⊢";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : " ") + pretty_formula(s[i].formula);
  return out;
}

}  // namespace

std::string proof_to_text(const ProofTree& t) {
  std::ostringstream os;
  std::function<void(const ProofTree&, int)> go = [&](const ProofTree& p, int depth) {
    os << std::string(2 * depth, ' ') << rule_name(p.rule);
    if (p.rule == Rule::Cut) os << " " << pretty_formula(p.premises[0].sequent[p.active[0]].formula);
    if (p.component >= 0) os << " [M" << p.component << "]";
    os << "  " << sequent_text(p.sequent) << "\n";
    for (const auto& q : p.premises) go(q, depth + 1);
  };
  go(t, 0);
  return os.str();
}

std::string proof_outline(const ProofTree& t) {
  if (t.component >= 0) return "π" + std::to_string(t.component + 1);
  std::string s = rule_name(t.rule);
  if (t.rule == Rule::Cut || t.rule == Rule::Tensor) s += "(" + pretty_formula(t.premises[0].sequent[t.active[0]].formula) + ")";
  if (t.premises.empty()) return s;
  s += "{";
  for (std::size_t i = 0; i < t.premises.size(); ++i) s += (i ? ", " : "") + proof_outline(t.premises[i]);
  return s + "}";
}

nlohmann::json proof_to_json(const ProofTree& t) {
  nlohmann::json seq = nlohmann::json::array(), prem = nlohmann::json::array();
  for (const auto& o : t.sequent) seq.push_back({{"formula", o.formula.str()}, {"tag", o.tag}});
  for (const auto& p : t.premises) prem.push_back(proof_to_json(p));
  nlohmann::json j = {{"rule", rule_name(t.rule)}, {"sequent", seq}, {"active", t.active}, {"premises", prem}};
  if (t.node >= 0) j["node"] = t.node;
  if (t.component >= 0) j["component"] = t.component;
  if (t.cpt) j["cpt"] = factor_to_json(*t.cpt);
  return j;
}

}  // namespace bpn
