#include "bpn/cut_net.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "bpn/error.hpp"
#include "bpn/net_checks.hpp"
#include "bpn/rewrite.hpp"

namespace bpn {

std::map<NodeId, int> CutNet::component_map() const {
  std::map<NodeId, int> m;
  for (int i = 0; i < static_cast<int>(components.size()); ++i)
    for (NodeId id : components[i]) m[id] = i;
  return m;
}

std::vector<NodeId> CutNet::separating_cuts() const {
  auto m = component_map();
  std::vector<NodeId> out;
  for (const auto& [id, nd] : net.nodes())
    if (!m.count(id)) out.push_back(id);
  return out;
}

int CutNet::side_of(NodeId cut, int premise) const {
  NodeId s = net.source(net.premise(cut, premise));
  for (int i = 0; i < static_cast<int>(components.size()); ++i)
    if (components[i].count(s)) return i;
  return -1;
}

std::vector<CutNet::Link> CutNet::skeleton() const {
  auto m = component_map();
  std::map<std::pair<int, int>, std::vector<NodeId>> links;
  for (NodeId c : separating_cuts()) {
    const Node& nd = net.node(c);
    if (nd.kind != NodeKind::Cut || nd.premises.size() != 2) continue;
    int a = m.count(net.source(nd.premises[0])) ? m.at(net.source(nd.premises[0])) : -1;
    int b = m.count(net.source(nd.premises[1])) ? m.at(net.source(nd.premises[1])) : -1;
    if (a < 0 || b < 0 || a == b) continue;
    links[{std::min(a, b), std::max(a, b)}].push_back(c);
  }
  std::vector<Link> out;
  for (auto& [k, v] : links) out.push_back({k.first, k.second, v});
  return out;
}

std::vector<int> CutNet::neighbours(int i) const {
  std::vector<int> out;
  for (const auto& l : skeleton()) {
    if (l.a == i) out.push_back(l.b);
    if (l.b == i) out.push_back(l.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> CutNet::cuts_between(int i, int j) const {
  for (const auto& l : skeleton())
    if ((l.a == i && l.b == j) || (l.a == j && l.b == i)) return l.cuts;
  return {};
}

std::set<std::string> CutNet::component_names(int i) const {
  std::set<std::string> out;
  for (NodeId id : components.at(i)) {
    const Node& nd = net.node(id);
    for (const auto* list : {&nd.premises, &nd.conclusions})
      for (EdgeId e : *list) {
        auto s = net.label(e).atom_names();
        out.insert(s.begin(), s.end());
      }
  }
  return out;
}

ProofNet CutNet::component_net(int i) const { return subnet(net, components.at(i)); }

std::vector<int> RootedCutNet::parents() const {
  int k = static_cast<int>(cut_net.components.size());
  std::vector<int> par(k, -2);
  par[root] = -1;
  std::queue<int> q;
  q.push(root);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : cut_net.neighbours(x))
      if (par[y] == -2) {
        par[y] = x;
        q.push(y);
      }
  }
  return par;
}

void validate_cut_net(const CutNet& c) {
  std::map<NodeId, int> m;
  for (int i = 0; i < static_cast<int>(c.components.size()); ++i) {
    if (c.components[i].empty()) throw Error(ErrorCode::NotAPartition, "empty component " + std::to_string(i));
    for (NodeId id : c.components[i]) {
      if (!c.net.has_node(id)) throw Error(ErrorCode::NotAPartition, "unknown node " + std::to_string(id));
      if (!m.emplace(id, i).second) throw Error(ErrorCode::NotAPartition, "node " + std::to_string(id) + " in two parts");
    }
  }
  for (const auto& [id, nd] : c.net.nodes()) {
    if (m.count(id)) {
      for (EdgeId e : nd.premises) {
        auto it = m.find(c.net.source(e));
        if (it == m.end() || it->second != m.at(id))
          throw Error(ErrorCode::NotASubnet, "premise of node " + std::to_string(id) + " crosses components");
      }
      continue;
    }
    if (nd.kind != NodeKind::Cut || nd.premises.size() != 2)
      throw Error(ErrorCode::NotAPartition, "node " + std::to_string(id) + " is in no part and is not a cut");
    auto a = m.find(c.net.source(nd.premises[0])), b = m.find(c.net.source(nd.premises[1]));
    if (a == m.end() || b == m.end() || a->second == b->second)
      throw Error(ErrorCode::NotAPartition, "cut " + std::to_string(id) + " does not separate two parts");
  }
  int k = static_cast<int>(c.components.size());
  auto links = c.skeleton();
  if (static_cast<int>(links.size()) != k - 1) throw Error(ErrorCode::SkeletonNotTree, "skeleton is not a tree");
  std::vector<bool> seen(k, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const auto& l : links) {
      int y = l.a == x ? l.b : l.b == x ? l.a : -1;
      if (y >= 0 && !seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(ErrorCode::SkeletonNotTree, "skeleton is not connected");
}

CutNet partition_to_cutnet(const ProofNet& n, const std::vector<std::set<NodeId>>& parts) {
  CutNet c{n, parts};
  validate_cut_net(c);
  return c;
}

CutNet split(const ProofNet& n, const std::set<NodeId>& r) {
  for (NodeId id : r) {
    if (!n.has_node(id)) throw Error(ErrorCode::NotASubnet, "unknown node " + std::to_string(id));
    for (EdgeId e : n.node(id).premises)
      if (!r.count(n.source(e))) throw Error(ErrorCode::NotASubnet, "node " + std::to_string(id) + " has an outside premise");
  }
  ProofNet m = n;
  std::set<NodeId> s;
  for (NodeId id : n.node_ids())
    if (!r.count(id)) s.insert(id);
  if (s.empty()) return partition_to_cutnet(m, {r});
  std::vector<EdgeId> leaving;
  for (const auto& [id, e] : n.edges())
    if (r.count(e.source) && e.target && !r.count(*e.target)) leaving.push_back(id);
  for (EdgeId e : leaving) s.insert(ax_expand(m, e).ax);
  return partition_to_cutnet(m, {r, s});
}

int width(const CutNet& c) {
  int w = 0;
  for (int i = 0; i < static_cast<int>(c.components.size()); ++i)
    w = std::max(w, static_cast<int>(c.component_names(i).size()) - 1);
  return w;
}

bool is_proper(const CutNet& c) {
  for (const auto& l : c.skeleton())
    if (l.cuts.size() != 1) return false;
  return true;
}

int skeleton_center(const CutNet& c) {
  int k = static_cast<int>(c.components.size());
  std::vector<std::vector<int>> adj(k);
  for (const auto& l : c.skeleton()) {
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::vector<int> deg(k);
  std::vector<bool> gone(k, false);
  for (int i = 0; i < k; ++i) deg[i] = static_cast<int>(adj[i].size());
  int left = k;
  while (left > 2) {
    std::vector<int> leaves;
    for (int i = 0; i < k; ++i)
      if (!gone[i] && deg[i] <= 1) leaves.push_back(i);
    for (int x : leaves) {
      gone[x] = true;
      --left;
      for (int y : adj[x]) --deg[y];
    }
  }
  for (int i = 0; i < k; ++i)
    if (!gone[i]) return i;
  return 0;
}

namespace {

bool structural(NodeKind k) { return k == NodeKind::Ax || k == NodeKind::Contraction || k == NodeKind::Weakening; }

bool mentions(const Formula& f, const std::string& name) { return f.atom_names().count(name) > 0; }

// Working state of the factorization: every node is in a component except
// separating cuts.
struct Carver {
  ProofNet net;
  std::map<NodeId, int> comp;
  std::vector<std::set<NodeId>> comps;
  std::vector<int> parent;
  int root = 0;

  int of(NodeId id) const {
    auto it = comp.find(id);
    return it == comp.end() ? -1 : it->second;
  }
  void put(NodeId id, int c) {
    int old = of(id);
    if (old >= 0) comps[old].erase(id);
    comp[id] = c;
    comps[c].insert(id);
  }
  void detach(NodeId id) {
    int old = of(id);
    if (old >= 0) comps[old].erase(id);
    comp.erase(id);
  }
  bool is_separating(NodeId id) const { return of(id) < 0; }
  NodeId expand(EdgeId e, int ax_side) {
    auto r = ax_expand(net, e);
    put(r.ax, ax_side);
    return r.cut;
  }
  bool linked(int a, int b) const {
    for (const auto& [id, nd] : net.nodes()) {
      if (!is_separating(id)) continue;
      int x = of(net.source(nd.premises[0])), y = of(net.source(nd.premises[1]));
      if ((x == a && y == b) || (x == b && y == a)) return true;
    }
    return false;
  }

  // Moves the nodes around `name` out of the root into a new child.
  void carve(const std::string& name) {
    std::set<NodeId> r2;
    for (NodeId id : comps[root]) {
      const Node& nd = net.node(id);
      for (const auto* list : {&nd.premises, &nd.conclusions})
        for (EdgeId e : *list)
          if (mentions(net.label(e), name)) r2.insert(id);
    }
    // Subtrees hanging below the root whose messages mention `name` move
    // under the new child, together with the root-side ends of their cuts.
    // Other subtrees stay below the root; a cut of theirs whose root end moves
    // gets an axiom left in the root.
    std::set<int> absorbed;
    std::set<EdgeId> to_expand, keep_below_root;
    for (bool changed = true; changed;) {
      changed = false;
      to_expand.clear();
      keep_below_root.clear();
      for (const auto& [id, nd] : net.nodes()) {
        if (!is_separating(id)) continue;
        for (int k = 0; k < 2; ++k) {
          EdgeId e = nd.premises[k];
          int other = of(net.source(nd.premises[1 - k]));
          if (of(net.source(e)) != root) continue;
          if (!absorbed.count(other) && mentions(net.label(e), name)) {
            absorbed.insert(other);
            changed = true;
          }
          NodeId src = net.source(e);
          if (!absorbed.count(other)) {
            if (r2.count(src)) keep_below_root.insert(e);
            continue;
          }
          if (r2.count(src)) continue;
          if (structural(net.node(src).kind)) {
            r2.insert(src);
            changed = true;
          } else {
            to_expand.insert(e);
          }
        }
      }
    }
    if (r2.empty() && absorbed.empty()) return;
    Carver saved = *this;
    int k = static_cast<int>(comps.size());
    comps.emplace_back();
    parent.push_back(root);
    for (NodeId id : r2) put(id, k);
    for (int t : absorbed) parent[t] = k;
    for (EdgeId e : to_expand) expand(e, k);
    for (EdgeId e : keep_below_root) expand(e, root);
    // Cuts inside the root or the new child whose premises now straddle them.
    for (NodeId id : net.node_ids()) {
      const Node& nd = net.node(id);
      int own = of(id);
      if (nd.kind != NodeKind::Cut || (own != root && own != k)) continue;
      int a = of(net.source(nd.premises[0])), b = of(net.source(nd.premises[1]));
      if (a == b) {
        if (a != own) put(id, a);
      } else {
        detach(id);
      }
    }
    std::vector<EdgeId> crossing, exposed;
    for (const auto& [id, e] : net.edges()) {
      int cs = of(e.source);
      if (!e.target) {
        if (cs == k) exposed.push_back(id);
        continue;
      }
      int ct = of(*e.target);
      if (ct >= 0 && cs != ct && (cs == k || ct == k) && (cs == root || ct == root)) crossing.push_back(id);
    }
    for (EdgeId e : crossing) expand(e, of(*net.target(e)));
    for (EdgeId e : exposed) expand(e, root);
    if (comps[root].empty()) {
      parent[k] = -1;
      parent[root] = -3;  // dropped
      root = k;
    } else if (!linked(k, root)) {
      *this = std::move(saved);
    }
  }
};

}  // namespace

RootedCutNet ve_factorize(const ProofNet& n, const std::vector<std::string>& order) {
  require_typed(n);
  if (!n.is_atomic() || !n.is_positive()) throw Error(ErrorCode::PreconditionViolation, "needs a positive atomic net");
  auto names = n.names();
  auto outputs = n.conclusion_names();
  std::set<std::string> seen;
  for (const auto& x : order) {
    if (!names.count(x)) throw Error(ErrorCode::BadOrder, x + " is not a name of the net");
    if (outputs.count(x)) throw Error(ErrorCode::BadOrder, x + " is a conclusion name");
    if (!seen.insert(x).second) throw Error(ErrorCode::BadOrder, x + " repeated");
  }
  Carver c;
  c.net = n;
  c.comps.emplace_back();
  c.parent.push_back(-1);
  for (NodeId id : n.node_ids()) c.put(id, 0);
  for (std::size_t i = 0; i + 1 < order.size(); ++i) c.carve(order[i]);
  // Root last, everything else in creation order.
  RootedCutNet out;
  out.cut_net.net = std::move(c.net);
  for (int i = 0; i < static_cast<int>(c.comps.size()); ++i)
    if (i != c.root && !c.comps[i].empty()) out.cut_net.components.push_back(c.comps[i]);
  out.cut_net.components.push_back(c.comps[c.root]);
  out.root = static_cast<int>(out.cut_net.components.size()) - 1;
  validate_cut_net(out.cut_net);
  return out;
}

namespace {

std::vector<int> distances(const CutNet& c, int from) {
  std::vector<int> d(c.components.size(), -1);
  d[from] = 0;
  std::queue<int> q;
  q.push(from);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : c.neighbours(x))
      if (d[y] < 0) {
        d[y] = d[x] + 1;
        q.push(y);
      }
  }
  return d;
}

std::optional<CutNet> merge_all(const CutNet& c, const std::vector<int>& dist) {
  for (const auto& link : c.skeleton()) {
    if (link.cuts.size() < 2) continue;
    std::vector<NodeId> cuts = link.cuts;
    std::sort(cuts.begin(), cuts.end(), [&](NodeId x, NodeId y) {
      auto kx = std::make_pair(c.net.label(c.net.premise(x, 0)).str(), x);
      auto ky = std::make_pair(c.net.label(c.net.premise(y, 0)).str(), y);
      return kx < ky;
    });
    int near = dist[link.a] <= dist[link.b] ? link.a : link.b;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      for (std::size_t j = i + 1; j < cuts.size(); ++j) {
        NodeId ca = cuts[i], cb = cuts[j];
        int sel = c.side_of(ca, 0);
        int other = sel == link.a ? link.b : link.a;
        int pb = c.side_of(cb, 0) == sel ? 0 : 1;
        // Prefer the tensor away from the pivot.
        for (bool tensor_on_sel : {sel != near, sel == near}) {
          CutNet d = c;
          TensorParExpansion r;
          try {
            r = tensor_par_expand(d.net, {ca, 0}, {cb, pb}, tensor_on_sel);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::WouldBreakCorrectness) throw;
            continue;
          }
          d.components[sel].insert(r.selected_node);
          d.components[other].insert(r.other_node);
          if (auto done = merge_all(d, dist)) return done;
        }
      }
    }
    return std::nullopt;
  }
  return c;
}

}  // namespace

CutNet type_cuts(const CutNet& c, std::optional<int> pivot) {
  validate_cut_net(c);
  int p = pivot ? *pivot : skeleton_center(c);
  if (p < 0 || p >= static_cast<int>(c.components.size()))
    throw Error(ErrorCode::PreconditionViolation, "pivot out of range");
  auto out = merge_all(c, distances(c, p));
  if (!out) throw Error(ErrorCode::WouldBreakCorrectness, "no correct way to merge the separating cuts");
  return *out;
}

nlohmann::json cutnet_to_json(const CutNet& c, std::optional<int> root) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& s : c.components) comps.push_back(std::vector<NodeId>(s.begin(), s.end()));
  nlohmann::json j = {{"net", net_to_json(c.net)}, {"components", comps}};
  if (root) j["root"] = *root;
  return j;
}

CutNet cutnet_from_json(const nlohmann::json& j, std::optional<int>* root) {
  try {
    CutNet c;
    c.net = net_from_json(j.at("net"));
    for (const auto& s : j.at("components")) {
      auto v = s.get<std::vector<NodeId>>();
      c.components.emplace_back(v.begin(), v.end());
    }
    if (root) *root = j.contains("root") ? std::optional<int>(j.at("root").get<int>()) : std::nullopt;
    validate_cut_net(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace bpn
