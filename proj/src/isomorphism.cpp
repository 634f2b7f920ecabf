#include "bpn/isomorphism.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

namespace bpn {

namespace {

std::string signature(const ProofNet& n, const Node& nd) {
  std::string s = kind_name(nd.kind);
  std::vector<std::string> labels;
  for (EdgeId e : nd.premises) labels.push_back("p" + n.label(e).str());
  for (EdgeId e : nd.conclusions) labels.push_back("c" + n.label(e).str());
  if (nd.kind != NodeKind::Tensor && nd.kind != NodeKind::Par) std::sort(labels.begin(), labels.end());
  for (const auto& l : labels) s += "|" + l;
  return s;
}

bool ordered_premises(NodeKind k) { return k == NodeKind::Tensor || k == NodeKind::Par; }

struct Side {
  const ProofNet& n;
  std::vector<NodeId> ids;
  std::map<NodeId, int> index;
  std::vector<std::string> sig;
  std::map<EdgeId, int> concl_pos;

  explicit Side(const ProofNet& net) : n(net) {
    for (const auto& [id, nd] : n.nodes()) {
      index[id] = static_cast<int>(ids.size());
      ids.push_back(id);
      sig.push_back(signature(n, nd));
    }
    for (std::size_t i = 0; i < n.conclusions().size(); ++i) concl_pos[n.conclusions()[i]] = static_cast<int>(i);
  }
  const Node& node(int i) const { return n.node(ids[i]); }
  // Edge of node i at a port carrying `label`, for ports identified by label.
  std::optional<EdgeId> port(int i, const Formula& label, bool premise) const {
    const auto& list = premise ? node(i).premises : node(i).conclusions;
    for (EdgeId e : list)
      if (n.label(e) == label) return e;
    return std::nullopt;
  }
};

struct Matcher {
  const Side& A;
  const Side& B;

  struct State {
    std::vector<int> ma, mb;
    std::vector<std::pair<int, int>> work;
  };

  bool same_cpt(int a, int b) const {
    const auto& fa = A.node(a).cpt;
    const auto& fb = B.node(b).cpt;
    if (fa.has_value() != fb.has_value()) return false;
    return !fa || approx_equal(*fa, *fb, 1e-12, 1e-9);
  }

  bool assign(State& s, int a, int b) const {
    if (s.ma[a] == b) return true;
    if (s.ma[a] != -1 || s.mb[b] != -1) return false;
    if (A.sig[a] != B.sig[b] || !same_cpt(a, b)) return false;
    s.ma[a] = b;
    s.mb[b] = a;
    s.work.push_back({a, b});
    return true;
  }

  // Both edges continue to matching places.
  bool match_targets(State& s, EdgeId ea, EdgeId eb) const {
    auto ta = A.n.target(ea), tb = B.n.target(eb);
    if (ta.has_value() != tb.has_value()) return false;
    if (!ta) return A.concl_pos.at(ea) == B.concl_pos.at(eb);
    int ia = A.index.at(*ta), ib = B.index.at(*tb);
    if (ordered_premises(A.node(ia).kind)) {
      const auto& pa = A.node(ia).premises;
      const auto& pb = B.node(ib).premises;
      if (std::find(pa.begin(), pa.end(), ea) - pa.begin() != std::find(pb.begin(), pb.end(), eb) - pb.begin())
        return false;
    }
    return assign(s, ia, ib);
  }

  bool match_sources(State& s, EdgeId ea, EdgeId eb) const {
    return assign(s, A.index.at(A.n.source(ea)), B.index.at(B.n.source(eb)));
  }

  bool solve(State s) const {
    while (!s.work.empty()) {
      auto [a, b] = s.work.back();
      s.work.pop_back();
      const Node& na = A.node(a);
      const Node& nb = B.node(b);
      // Conclusions: single ones by position, otherwise by label.
      for (std::size_t k = 0; k < na.conclusions.size(); ++k) {
        EdgeId ea = na.conclusions[k];
        EdgeId eb = nb.conclusions.size() == 1 ? nb.conclusions[0] : B.port(b, A.n.label(ea), false).value_or(-1);
        if (eb < 0 || !match_targets(s, ea, eb)) return false;
      }
      if (na.kind == NodeKind::Contraction) {
        EdgeId a0 = na.premises[0], a1 = na.premises[1], b0 = nb.premises[0], b1 = nb.premises[1];
        for (bool swap : {false, true}) {
          State t = s;
          if (match_sources(t, a0, swap ? b1 : b0) && match_sources(t, a1, swap ? b0 : b1) && solve(t)) return true;
        }
        return false;
      }
      for (std::size_t k = 0; k < na.premises.size(); ++k) {
        EdgeId ea = na.premises[k];
        EdgeId eb = ordered_premises(na.kind) ? nb.premises[k] : B.port(b, A.n.label(ea), true).value_or(-1);
        if (eb < 0 || !match_sources(s, ea, eb)) return false;
      }
    }
    auto it = std::find(s.ma.begin(), s.ma.end(), -1);
    if (it == s.ma.end()) return true;
    int a = static_cast<int>(it - s.ma.begin());
    for (int b = 0; b < static_cast<int>(s.mb.size()); ++b) {
      if (s.mb[b] != -1 || B.sig[b] != A.sig[a]) continue;
      State t = s;
      if (assign(t, a, b) && solve(t)) return true;
    }
    return false;
  }
};

}  // namespace

bool isomorphic(const ProofNet& a, const ProofNet& b) {
  if (a.node_count() != b.node_count() || a.edges().size() != b.edges().size() ||
      a.conclusions().size() != b.conclusions().size())
    return false;
  if (canonical_hash(a) != canonical_hash(b)) return false;
  Side A(a), B(b);
  Matcher m{A, B};
  Matcher::State s{std::vector<int>(A.ids.size(), -1), std::vector<int>(B.ids.size(), -1), {}};
  for (std::size_t k = 0; k < a.conclusions().size(); ++k) {
    EdgeId ea = a.conclusions()[k], eb = b.conclusions()[k];
    if (a.label(ea) != b.label(eb)) return false;
    if (!m.match_sources(s, ea, eb)) return false;
  }
  return m.solve(std::move(s));
}

std::uint64_t canonical_hash(const ProofNet& n) {
  std::hash<std::string> H;
  std::map<NodeId, std::uint64_t> colour;
  for (const auto& [id, nd] : n.nodes()) colour[id] = H(signature(n, nd));
  for (int round = 0; round < 3; ++round) {
    std::map<NodeId, std::uint64_t> next;
    for (const auto& [id, nd] : n.nodes()) {
      std::vector<std::string> parts;
      for (EdgeId e : nd.premises)
        parts.push_back("p" + n.label(e).str() + ":" + std::to_string(colour[n.source(e)]));
      for (EdgeId e : nd.conclusions) {
        auto t = n.target(e);
        parts.push_back("c" + n.label(e).str() + ":" + (t ? std::to_string(colour[*t]) : "*"));
      }
      if (!ordered_premises(nd.kind)) std::sort(parts.begin(), parts.end());
      std::string s = std::to_string(colour[id]);
      for (const auto& p : parts) s += "," + p;
      next[id] = H(s);
    }
    colour = std::move(next);
  }
  std::vector<std::uint64_t> all;
  for (const auto& [id, c] : colour) all.push_back(c);
  std::sort(all.begin(), all.end());
  std::string s;
  for (auto c : all) s += std::to_string(c) + ";";
  for (EdgeId e : n.conclusions()) s += n.label(e).str() + "@" + std::to_string(colour[n.source(e)]) + ";";
  return H(s);
}

}  // namespace bpn
