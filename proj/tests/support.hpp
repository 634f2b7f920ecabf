#pragma once

// Generators and reference implementations shared by the unit tests and the
// acceptance runner. The oracles here avoid the library's factor algebra.

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bpn/bayes_net.hpp"
#include "bpn/cut_net.hpp"
#include "bpn/error.hpp"
#include "bpn/net_checks.hpp"
#include "bpn/rewrite.hpp"
#include "bpn/semantics.hpp"
#include "bpn/sequent.hpp"
#include "json.hpp"

namespace bpn::testing {

using Rng = std::mt19937_64;

inline std::string data_path(const std::string& file) { return std::string(BPN_DATA_DIR) + "/" + file; }

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

// Season (A), sprinkler (B), rain (C), wet lawn (D), traffic jam (E).
inline BayesianNetwork rain_bn() { return bn_from_json(read_json(data_path("rain.json"))); }

// Sorted, comma separated; keeps test failure messages readable.
template <class C>
std::string joined(const C& items) {
  std::string out;
  for (const auto& x : items) out += (out.empty() ? "" : ",") + std::string(x);
  return out;
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return uniform(rng) < p; }

inline std::vector<double> random_rows(Rng& rng, std::size_t rows, std::size_t arity) {
  std::vector<double> t;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(arity);
    double s = 0;
    for (auto& x : row) s += (x = uniform(rng, 0.05, 1.0));
    for (auto x : row) t.push_back(x / s);
  }
  return t;
}

inline std::string letter_name(int i) {
  return i < 26 ? std::string(1, static_cast<char>('A' + i)) : "V" + std::to_string(i);
}

// Binary variables named A, B, ... in a topological order; each picks up to
// `max_parents` parents among the earlier ones.
inline BayesianNetwork random_bn(Rng& rng, int min_nodes, int max_nodes, int max_parents = 3) {
  int n = min_nodes + pick(rng, max_nodes - min_nodes + 1);
  BayesianNetwork b;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> parents;
    std::vector<int> earlier(i);
    for (int k = 0; k < i; ++k) earlier[k] = k;
    std::shuffle(earlier.begin(), earlier.end(), rng);
    int np = std::min<int>(i, pick(rng, max_parents + 1));
    std::sort(earlier.begin(), earlier.begin() + np);
    for (int k = 0; k < np; ++k) parents.push_back(letter_name(earlier[k]));
    b.add_variable(binary_var(letter_name(i)), parents, random_rows(rng, std::size_t{1} << np, 2));
  }
  return b;
}

inline std::set<std::string> random_subset(Rng& rng, const std::vector<std::string>& names, double p) {
  std::set<std::string> s;
  for (const auto& x : names)
    if (coin(rng, p)) s.insert(x);
  return s;
}

// Marginal over `keep` by enumerating every joint assignment and multiplying
// CPT entries looked up by hand.
inline std::map<Assignment, double> brute_marginal(const BayesianNetwork& b, const std::set<std::string>& keep) {
  const auto& vars = b.variables();
  std::vector<std::size_t> digit(vars.size(), 0);
  std::map<Assignment, double> out;
  while (true) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i].name] = vars[i].values[digit[i]];
    double p = 1.0;
    for (const auto& v : vars) {
      const Factor& cpt = b.cpt(v.name);
      std::size_t idx = 0;
      for (const auto& fv : cpt.vars()) {
        auto pos = std::find(fv.values.begin(), fv.values.end(), a.at(fv.name)) - fv.values.begin();
        idx = idx * fv.values.size() + static_cast<std::size_t>(pos);
      }
      p *= cpt.table()[idx];
    }
    out[project(a, keep)] += p;
    std::size_t i = vars.size();
    while (i > 0 && ++digit[i - 1] == vars[i - 1].values.size()) digit[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

inline double max_diff(const Factor& f, const std::map<Assignment, double>& ref) {
  double worst = 0;
  if (f.size() != ref.size()) return 1e300;
  for (const auto& [a, p] : ref) worst = std::max(worst, std::abs(f.at(a) - p));
  return worst;
}

// Classical d-separation: x and y are separated by z in the moral graph of
// the ancestral set of x, y and z.
inline bool classical_dsep(const BayesianNetwork& b, const std::set<std::string>& x, const std::set<std::string>& y,
                           const std::set<std::string>& z) {
  std::set<std::string> anc;
  std::vector<std::string> stack;
  for (const auto* s : {&x, &y, &z}) stack.insert(stack.end(), s->begin(), s->end());
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (!anc.insert(v).second) continue;
    for (const auto& p : b.parents(v)) stack.push_back(p);
  }
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& v : anc) {
    const auto& ps = b.parents(v);
    for (const auto& p : ps) adj[v].insert(p), adj[p].insert(v);
    for (const auto& p : ps)
      for (const auto& q : ps)
        if (p != q) adj[p].insert(q);
  }
  std::set<std::string> seen;
  std::vector<std::string> todo(x.begin(), x.end());
  while (!todo.empty()) {
    auto v = todo.back();
    todo.pop_back();
    if (z.count(v) || !seen.insert(v).second) continue;
    if (y.count(v)) return false;
    for (const auto& w : adj[v]) todo.push_back(w);
  }
  return true;
}

// Rewrites with a uniformly chosen redex each step. The callback sees the
// net after every step.
inline int reduce_randomly(ProofNet& n, bool pruning, Rng& rng,
                           const std::function<void(const ProofNet&, const Redex&)>& after = {}) {
  int steps = 0;
  while (true) {
    auto rs = find_redexes(n, pruning);
    if (rs.empty()) return steps;
    const Redex& r = rs[pick(rng, static_cast<int>(rs.size()))];
    Redex chosen = r;
    apply_redex(n, chosen);
    ++steps;
    if (after) after(n, chosen);
  }
}

// Every cut has atomic premises and its positive premise leaves a box.
inline bool normal_shape(const ProofNet& n) {
  for (const auto& [id, nd] : n.nodes()) {
    if (nd.kind != NodeKind::Cut) continue;
    for (EdgeId e : nd.premises) {
      const Formula& f = n.label(e);
      if (!f.is_atom()) return false;
      if (f.is_positive_atom() && n.node(n.source(e)).kind != NodeKind::Box) return false;
    }
  }
  return true;
}

inline int non_weakening_nodes(const ProofNet& n) {
  int k = 0;
  for (const auto& [id, nd] : n.nodes()) k += nd.kind != NodeKind::Weakening;
  return k;
}

// Puts a contraction with a fresh weakening in front of the attached
// negative atomic edge `e`.
inline void insert_weakened_contraction(ProofNet& n, EdgeId e, bool weakening_first) {
  const std::string x = n.label(e).name();
  NodeId t = *n.target(e);
  auto& prem = n.node_mut(t).premises;
  std::size_t pos = std::find(prem.begin(), prem.end(), e) - prem.begin();
  n.edge_mut(e).target.reset();
  NodeId w = n.add_weakening(x);
  NodeId c = n.new_node(NodeKind::Contraction);
  if (weakening_first) n.attach(n.conclusion(w), c);
  n.attach(e, c);
  if (!weakening_first) n.attach(n.conclusion(w), c);
  EdgeId out = n.new_edge(c, Formula::neg(x));
  n.node_mut(t).premises[pos] = out;
  n.edge_mut(out).target = t;
  auto& cs = n.conclusions_mut();
  cs.erase(std::remove(cs.begin(), cs.end(), out), cs.end());
  cs.erase(std::remove(cs.begin(), cs.end(), e), cs.end());
}

// A positive bpn from a random BN with extra redexes of every kind: atomic
// expansions, compound cuts from typing a factorization, a 1/bot cut and
// contractions with weakenings.
inline ProofNet redex_rich_bpn(Rng& rng, const BayesianNetwork& b, const std::set<std::string>& query) {
  ProofNet base = bn_to_bpn(b, query);
  ProofNet n = base;
  std::vector<std::string> elim;
  for (const auto& nm : b.names())
    if (!query.count(nm)) elim.push_back(nm);
  std::shuffle(elim.begin(), elim.end(), rng);
  if (coin(rng, 0.7)) {
    try {
      n = type_cuts(ve_factorize(normalize(base, false), elim).cut_net).net;
    } catch (const Error&) {
      n = base;
    }
  }
  int expansions = pick(rng, 4);
  for (int k = 0; k < expansions; ++k) {
    std::vector<EdgeId> atomic;
    for (const auto& [id, e] : n.edges())
      if (e.label.is_atom()) atomic.push_back(id);
    if (atomic.empty()) break;
    ax_expand(n, atomic[pick(rng, static_cast<int>(atomic.size()))]);
  }
  if (coin(rng, 0.3)) {
    NodeId one = n.add_one(), bot = n.add_bot();
    n.add_cut(n.conclusion(one), n.conclusion(bot));
  }
  if (coin(rng, 0.5)) {
    std::vector<EdgeId> neg;
    for (const auto& [id, e] : n.edges())
      if (e.label.is_negative_atom() && e.target) neg.push_back(id);
    if (!neg.empty()) insert_weakened_contraction(n, neg[pick(rng, static_cast<int>(neg.size()))], coin(rng));
  }
  return n;
}

// Random sequent-calculus derivation built from leaves (ax, 1, bot, w, box)
// with tensor, par, contraction, mix and cuts against identity expansions, so
// that its net is correct and holds redexes of every kind.
class ProofGenerator {
 public:
  explicit ProofGenerator(Rng& rng) : rng_(rng) {}

  ProofTree generate(int max_nodes) {
    std::vector<ProofTree> pieces;
    pieces.push_back(leaf());
    auto size = [&] {
      int s = 0;
      for (const auto& p : pieces) s += count_nodes(p);
      return s;
    };
    int guard = 0;
    while (size() < max_nodes - 6 && guard++ < 200) {
      int which = pick(rng_, static_cast<int>(pieces.size()));
      ProofTree& p = pieces[which];
      switch (pick(rng_, 9)) {
        case 0:
        case 1: pieces.push_back(leaf()); break;
        case 2:
          if (pieces.size() >= 2) {
            int other = pick(rng_, static_cast<int>(pieces.size()));
            if (other == which) break;
            ProofTree a = pieces[which], b = pieces[other];
            if (a.sequent.empty() || b.sequent.empty()) break;
            ProofTree t = tensor_rule(a, pick(rng_, a.sequent.size()), b, pick(rng_, b.sequent.size()), tag());
            erase_two(pieces, which, other);
            pieces.push_back(std::move(t));
          }
          break;
        case 3:
          if (p.sequent.size() >= 2) {
            auto [i, j] = two(p.sequent.size());
            p = par_rule(p, i, j, tag());
          }
          break;
        case 4: {  // cut against an identity
          if (p.sequent.empty()) break;
          int i = pick(rng_, p.sequent.size());
          const Formula f = p.sequent[i].formula;
          if (f.str().size() > 24) break;
          ProofTree id = identity(f);
          p = cut_rule(p, i, id, find(id, f.dual()));
          break;
        }
        case 5: {  // contraction, possibly with a weakening
          for (int i = 0; i < static_cast<int>(p.sequent.size()); ++i) {
            const Formula& f = p.sequent[i].formula;
            if (!f.is_negative_atom()) continue;
            int j = -1;
            for (int k = 0; k < static_cast<int>(p.sequent.size()); ++k)
              if (k != i && p.sequent[k].formula == f) j = k;
            if (j < 0 || coin(rng_)) {
              p = mix_rule(p, weakening_rule(f.name(), tag()));
              j = static_cast<int>(p.sequent.size()) - 1;
            }
            p = coin(rng_) ? contraction_rule(p, i, j, tag()) : contraction_rule(p, j, i, tag());
            break;
          }
          break;
        }
        case 6: {  // 1 against bot
          ProofTree u = cut_rule(one_rule(tag()), 0, bot_rule(tag()), 0);
          p = mix_rule(p, u);
          break;
        }
        case 7: {  // box main against a weakening
          ProofTree bx = box();
          int main = static_cast<int>(bx.sequent.size()) - 1;
          std::string x = bx.sequent.back().formula.name();
          ProofTree c = cut_rule(bx, main, weakening_rule(x, tag()), 0);
          if (c.sequent.empty())
            p = mix_rule(p, c);
          else
            pieces.push_back(std::move(c));
          break;
        }
        case 8:
          if (pieces.size() >= 2) {
            int other = pick(rng_, static_cast<int>(pieces.size()));
            if (other == which) break;
            ProofTree t = mix_rule(pieces[which], pieces[other]);
            erase_two(pieces, which, other);
            pieces.push_back(std::move(t));
          }
          break;
      }
    }
    ProofTree out = pieces[0];
    for (std::size_t k = 1; k < pieces.size(); ++k) out = mix_rule(out, pieces[k]);
    return out;
  }

  // Proof of F and dual(F), built from axioms.
  ProofTree identity(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Pos:
      case Formula::Kind::Neg: return ax_rule(f.name(), tag(), tag());
      case Formula::Kind::One:
      case Formula::Kind::Bot: return mix_rule(one_rule(tag()), bot_rule(tag()));
      case Formula::Kind::Tensor:
      case Formula::Kind::Par: {
        // tensor the two tensor-side formulas, then par the other two
        bool tensor = f.kind() == Formula::Kind::Tensor;
        Formula l = tensor ? f.left() : f.left().dual(), r = tensor ? f.right() : f.right().dual();
        ProofTree a = identity(f.left()), b = identity(f.right());
        ProofTree t = tensor_rule(a, find(a, l), b, find(b, r), tag());
        int i = find(t, l.dual());
        return par_rule(t, i, find(t, r.dual(), i), tag());
      }
    }
    return ax_rule("X", tag(), tag());
  }

  static int find(const ProofTree& t, const Formula& f, int skip = -1) {
    for (int k = 0; k < static_cast<int>(t.sequent.size()); ++k)
      if (k != skip && t.sequent[k].formula == f) return k;
    throw Error(ErrorCode::PreconditionViolation, "formula not in sequent");
  }

 private:
  ProofTree leaf() {
    switch (pick(rng_, 6)) {
      case 0:
      case 1: return ax_rule(name(), tag(), tag());
      case 2: return one_rule(tag());
      case 3: return weakening_rule(name(), tag());
      default: return box();
    }
  }

  ProofTree box() {
    std::string child = name();
    std::vector<VarSpec> vars;
    std::set<std::string> used{child};
    int k = pick(rng_, 3);
    for (int i = 0; i < k; ++i) {
      std::string y = name();
      if (used.insert(y).second) vars.push_back(binary_var(y));
    }
    vars.push_back(binary_var(child));
    Factor cpt = Factor::create(vars, random_rows(rng_, std::size_t{1} << (vars.size() - 1), 2));
    std::vector<EdgeId> tags;
    for (std::size_t i = 0; i < vars.size(); ++i) tags.push_back(tag());
    return box_rule(cpt, child, tags);
  }

  std::string name() { return std::string(1, static_cast<char>('P' + pick(rng_, 4))); }
  EdgeId tag() { return next_tag_++; }

  std::pair<int, int> two(std::size_t n) {
    int i = pick(rng_, static_cast<int>(n)), j = pick(rng_, static_cast<int>(n) - 1);
    if (j >= i) ++j;
    return {i, j};
  }

  static int count_nodes(const ProofTree& t) {
    int s = t.rule == Rule::Mix ? 0 : 1;
    for (const auto& p : t.premises) s += count_nodes(p);
    return s;
  }

  static void erase_two(std::vector<ProofTree>& v, int a, int b) {
    if (a < b) std::swap(a, b);
    v.erase(v.begin() + a);
    v.erase(v.begin() + b);
  }

  Rng& rng_;
  EdgeId next_tag_ = 0;
};

// Atomic net of boxes with distinct main names, a few axioms and weakenings,
// and random cuts from positive edges to contraction trees of negative ones.
// With `require_correct`, retries until the result is correct.
inline ProofNet random_atomic_net(Rng& rng, int max_boxes, bool require_correct = true) {
  for (int attempt = 0;; ++attempt) {
    int nb = 1 + pick(rng, max_boxes);
    int pool = nb + 2;
    ProofNet n;
    for (int i = 0; i < nb; ++i) {
      std::vector<VarSpec> vars;
      for (int j = 0; j < pool; ++j)
        if (j != i && coin(rng, 1.5 / pool)) vars.push_back(binary_var(letter_name(j)));
      if (vars.size() > 3) vars.resize(3);
      vars.push_back(binary_var(letter_name(i)));
      n.add_box(Factor::create(vars, random_rows(rng, std::size_t{1} << (vars.size() - 1), 2)), letter_name(i));
    }
    int nax = pick(rng, 3);
    for (int i = 0; i < nax; ++i) n.add_ax(letter_name(pick(rng, pool)));
    if (coin(rng, 0.3)) n.add_weakening(letter_name(pick(rng, pool)));
    std::map<std::string, std::vector<EdgeId>> pos, neg;
    for (EdgeId e : n.conclusions()) {
      const Formula& f = n.label(e);
      (f.is_positive_atom() ? pos : neg)[f.name()].push_back(e);
    }
    for (auto& [x, ps] : pos) {
      auto& ns = neg[x];
      std::shuffle(ps.begin(), ps.end(), rng);
      for (EdgeId p : ps) {
        if (ns.empty() || !coin(rng, 0.75)) continue;
        std::shuffle(ns.begin(), ns.end(), rng);
        int take = 1 + pick(rng, static_cast<int>(ns.size()));
        std::vector<EdgeId> group(ns.begin(), ns.begin() + take);
        ns.erase(ns.begin(), ns.begin() + take);
        EdgeId root = n.add_contraction_tree(group);
        n.add_cut(p, root);
      }
    }
    if (!require_correct || check_correctness(n) || attempt > 50) return n;
  }
}

}  // namespace bpn::testing
