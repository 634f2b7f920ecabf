#include "bpn/dsep.hpp"

#include <algorithm>
#include <cmath>

#include "bpn/error.hpp"
#include "bpn/rewrite.hpp"

namespace bpn {

namespace {

void check_sets(const BayesianNetwork& b, const std::set<std::string>& x, const std::set<std::string>& y,
                const std::set<std::string>& z) {
  for (const auto* s : {&x, &y, &z})
    for (const auto& n : *s)
      if (!b.has(n)) throw Error(ErrorCode::UnknownName, n);
  for (const auto& n : x)
    if (y.count(n) || z.count(n)) throw Error(ErrorCode::PreconditionViolation, "sets must be disjoint");
  for (const auto& n : y)
    if (z.count(n)) throw Error(ErrorCode::PreconditionViolation, "sets must be disjoint");
}

}  // namespace

bool disconnected(const ProofNet& m, const std::set<std::string>& x, const std::set<std::string>& y,
                  const std::set<std::string>& z) {
  if (!m.is_positive()) throw Error(ErrorCode::NotBayesian, "conclusions must be positive");
  if (!is_normal(m, true)) throw Error(ErrorCode::NotNormal, "net has redexes");
  std::set<std::string> all;
  std::size_t total = 0;
  for (const auto* s : {&x, &y, &z}) {
    all.insert(s->begin(), s->end());
    total += s->size();
  }
  if (all != m.conclusion_names() || total != all.size())
    throw Error(ErrorCode::NotAPartition, "x, y and z must partition the conclusion names");
  if (x.empty() || y.empty()) return true;
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& [id, e] : m.edges()) {
    if (!e.target || z.count(e.label.name())) continue;
    adj[e.source].push_back(*e.target);
    adj[*e.target].push_back(e.source);
  }
  std::set<NodeId> seen;
  std::vector<NodeId> stack;
  for (const auto& nm : x)
    if (auto bx = m.box_of(nm)) {
      seen.insert(*bx);
      stack.push_back(*bx);
    }
  std::set<NodeId> goals;
  for (const auto& nm : y)
    if (auto bx = m.box_of(nm)) goals.insert(*bx);
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (goals.count(v)) return false;
    for (NodeId w : adj[v])
      if (seen.insert(w).second) stack.push_back(w);
  }
  return true;
}

bool dsep(const BayesianNetwork& b, const std::set<std::string>& x, const std::set<std::string>& y,
          const std::set<std::string>& z) {
  check_sets(b, x, y, z);
  if (x.empty() || y.empty()) return true;
  std::set<std::string> q = x;
  q.insert(y.begin(), y.end());
  q.insert(z.begin(), z.end());
  return disconnected(normalize(bn_to_bpn(b, q), true), x, y, z);
}

bool ci_oracle(const BayesianNetwork& b, const std::set<std::string>& x, const std::set<std::string>& y,
               const std::set<std::string>& z, double tol) {
  check_sets(b, x, y, z);
  if (x.empty() || y.empty()) return true;
  std::set<std::string> all = x;
  all.insert(y.begin(), y.end());
  all.insert(z.begin(), z.end());
  Factor pxyz = marginal(bn_joint(b), all);
  std::set<std::string> xz = x, yz = y;
  xz.insert(z.begin(), z.end());
  yz.insert(z.begin(), z.end());
  Factor pxz = marginal(pxyz, xz), pyz = marginal(pxyz, yz), pz = marginal(pxyz, z);
  for (std::size_t i = 0; i < pxyz.size(); ++i) {
    Assignment a = pxyz.assignment_at(i);
    double lhs = pxyz.table()[i] * pz.at(a);
    double rhs = pxz.at(a) * pyz.at(a);
    if (std::fabs(lhs - rhs) > tol) return false;
  }
  return true;
}

}  // namespace bpn
