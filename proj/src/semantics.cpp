#include "bpn/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bpn/error.hpp"
#include "bpn/net_checks.hpp"

namespace bpn {

namespace {

// Two boxes with one main name would be multiplied as a single variable.
void require_distinct_mains(const ProofNet& n) {
  std::set<std::string> seen;
  for (NodeId b : n.boxes())
    if (!seen.insert(n.box_name(b)).second) throw Error(ErrorCode::NotBayesian, "two boxes produce " + n.box_name(b));
}

std::vector<const Factor*> box_tables(const ProofNet& n, const std::set<NodeId>* only = nullptr) {
  if (!only) require_distinct_mains(n);
  std::vector<const Factor*> out;
  for (const auto& [id, nd] : n.nodes()) {
    if (nd.kind != NodeKind::Box || (only && !only->count(id))) continue;
    if (!nd.cpt) throw Error(ErrorCode::IllTyped, "box " + std::to_string(id) + " has no table");
    out.push_back(&*nd.cpt);
  }
  return out;
}

VarSpec spec_for(const ProofNet& n, const std::string& name) {
  for (const auto& [id, nd] : n.nodes())
    if (nd.cpt && nd.cpt->has(name)) return nd.cpt->var(name);
  return binary_var(name);
}

// Keeps `keep`, adding unit factors for names missing from `f`.
Factor restrict_to(const ProofNet& n, const Factor& f, const std::set<std::string>& keep, CostCounters* counters) {
  std::set<std::string> drop;
  for (const auto& v : f.vars())
    if (!keep.count(v.name)) drop.insert(v.name);
  Factor out = drop.empty() ? f : sum_out(f, drop, counters);
  std::vector<VarSpec> missing;
  for (const auto& k : keep)
    if (!out.has(k)) missing.push_back(spec_for(n, k));
  if (!missing.empty()) out = product(out, Factor::unit(missing));
  return out;
}

}  // namespace

Factor interpret_naive(const ProofNet& n, CostCounters* counters) {
  Factor joint = product_many(box_tables(n), counters);
  return restrict_to(n, joint, n.conclusion_names(), counters);
}

Factor interpret_rooted(const RootedCutNet& r, CostCounters* counters) {
  const CutNet& c = r.cut_net;
  auto par = r.parents();
  int k = static_cast<int>(c.components.size());
  for (int i = 0; i < k; ++i)
    if (par[i] == -2) throw Error(ErrorCode::SkeletonNotTree, "component unreachable from the root");
  require_distinct_mains(c.net);
  auto cmap = c.component_map();
  // Conclusion names sourced in each component.
  std::vector<std::set<std::string>> own_outputs(k);
  for (EdgeId e : c.net.conclusions()) {
    auto s = c.net.label(e).atom_names();
    own_outputs[cmap.at(c.net.source(e))].insert(s.begin(), s.end());
  }
  std::vector<std::vector<int>> children(k);
  for (int i = 0; i < k; ++i)
    if (par[i] >= 0) children[par[i]].push_back(i);
  std::function<std::pair<Factor, std::set<std::string>>(int)> visit = [&](int i) {
    std::vector<Factor> msgs;
    std::set<std::string> below = own_outputs[i];
    for (int ch : children[i]) {
      auto [m, outs] = visit(ch);
      msgs.push_back(std::move(m));
      below.insert(outs.begin(), outs.end());
    }
    std::vector<const Factor*> fs = box_tables(c.net, &c.components[i]);
    for (const auto& m : msgs) fs.push_back(&m);
    Factor prod = product_many(fs, counters);
    std::set<std::string> keep = below;
    if (par[i] >= 0)
      for (NodeId cut : c.cuts_between(i, par[i])) {
        auto s = c.net.label(c.net.premise(cut, 0)).atom_names();
        keep.insert(s.begin(), s.end());
      }
    std::set<std::string> drop;
    for (const auto& v : prod.vars())
      if (!keep.count(v.name)) drop.insert(v.name);
    Factor out = drop.empty() ? prod : sum_out(prod, drop, counters);
    return std::make_pair(std::move(out), below);
  };
  Factor result = visit(r.root).first;
  return restrict_to(c.net, result, c.net.conclusion_names(), nullptr);
}

Factor condition(const Factor& m, const std::vector<std::string>& targets, const Assignment& evidence) {
  std::set<std::string> keep(targets.begin(), targets.end());
  for (const auto& [k, v] : evidence) {
    if (!m.has(k)) throw Error(ErrorCode::UnknownName, "evidence name " + k);
    if (keep.count(k)) throw Error(ErrorCode::PreconditionViolation, k + " is both target and evidence");
    keep.insert(k);
  }
  for (const auto& t : targets)
    if (!m.has(t)) throw Error(ErrorCode::UnknownName, "target " + t);
  Factor joint = marginal(m, keep).slice(evidence);
  double pe = joint.total();
  if (!(pe > 0.0)) throw Error(ErrorCode::ZeroEvidence, "evidence has probability zero");
  std::vector<double> t = joint.table();
  for (double& x : t) x /= pe;
  return Factor::create(joint.vars(), std::move(t)).reorder(targets);
}

Factor query(const ProofNet& n, const std::vector<std::string>& targets, const Assignment& evidence) {
  return condition(interpret_naive(n), targets, evidence);
}

Sampler::Sampler(const ProofNet& n) : net_(n) {
  require_typed(net_);
  if (!net_.is_atomic()) throw Error(ErrorCode::NonAtomic, "sampling needs an atomic net");
  BoxDag dag = polarized_dag(net_);
  std::set<std::string> boxed;
  for (NodeId b : dag.boxes) boxed.insert(net_.box_name(b));
  for (const auto& nm : net_.names())
    if (!boxed.count(nm)) throw Error(ErrorCode::NotBayesian, nm + " has no box");
  for (NodeId b : dag.topological_order()) steps_.push_back({net_.box_name(b), &*net_.node(b).cpt});
}

Assignment Sampler::draw(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Assignment a;
  for (const auto& s : steps_) {
    const VarSpec& v = s.cpt->var(s.name);
    double x = u(rng), acc = 0.0;
    std::string pick = v.values.back();
    for (const auto& val : v.values) {
      a[s.name] = val;
      acc += s.cpt->at(a);
      if (x < acc) {
        pick = val;
        break;
      }
    }
    a[s.name] = pick;
  }
  return a;
}

std::vector<Assignment> forward_sample(const ProofNet& n, std::uint64_t seed, std::size_t count) {
  Sampler s(n);
  std::mt19937_64 rng(seed);
  std::vector<Assignment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(s.draw(rng));
  return out;
}

void apply_step(ProofNet& n, const RewriteStep& s) {
  switch (s.kind) {
    case RewriteStep::Kind::Reduce: apply_redex(n, s.redex); return;
    case RewriteStep::Kind::AxExpand: ax_expand(n, s.edge); return;
    case RewriteStep::Kind::TensorParExpand: tensor_par_expand(n, s.a, s.b, s.tensor_on_selected); return;
  }
}

bool check_invariance(const ProofNet& n, const std::vector<RewriteStep>& steps, double tol) {
  ProofNet m = n;
  Factor base = interpret_naive(m);
  for (const auto& s : steps) {
    apply_step(m, s);
    if (!approx_equal(base, interpret_naive(m), tol)) return false;
  }
  return true;
}

}  // namespace bpn
