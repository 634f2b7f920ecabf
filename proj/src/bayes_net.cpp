#include "bpn/bayes_net.hpp"

#include <algorithm>

#include "bpn/error.hpp"
#include "bpn/net_checks.hpp"
#include "bpn/rewrite.hpp"

namespace bpn {

void BayesianNetwork::add_variable(const VarSpec& var, const std::vector<std::string>& parents,
                                   const std::vector<double>& table) {
  std::vector<VarSpec> vars;
  for (const auto& p : parents) vars.push_back(this->var(p));
  vars.push_back(var);
  add_variable(var.name, parents, Factor::create(vars, table));
}

void BayesianNetwork::add_variable(const std::string& name, const std::vector<std::string>& parents,
                                   const Factor& cpt) {
  if (index_.count(name)) throw Error(ErrorCode::DuplicateVariable, name);
  std::set<std::string> seen;
  for (const auto& p : parents) {
    if (!index_.count(p)) throw Error(ErrorCode::UnknownName, "parent " + p + " of " + name);
    if (!seen.insert(p).second) throw Error(ErrorCode::DuplicateVariable, "parent " + p + " of " + name);
  }
  std::vector<std::string> expect = parents;
  expect.push_back(name);
  if (cpt.names() != expect) throw Error(ErrorCode::InvalidCpt, "table of " + name + " must range over parents then child");
  for (const auto& p : parents)
    if (cpt.var(p) != var(p)) throw Error(ErrorCode::ValueSetMismatch, p);
  validate_cpt(cpt, name);
  index_[name] = vars_.size();
  vars_.push_back(cpt.var(name));
  parents_[name] = parents;
  cpts_.emplace(name, cpt);
}

std::vector<std::string> BayesianNetwork::names() const {
  std::vector<std::string> out;
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

const VarSpec& BayesianNetwork::var(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error(ErrorCode::UnknownName, name);
  return vars_[it->second];
}

const std::vector<std::string>& BayesianNetwork::parents(const std::string& name) const {
  auto it = parents_.find(name);
  if (it == parents_.end()) throw Error(ErrorCode::UnknownName, name);
  return it->second;
}

std::vector<std::string> BayesianNetwork::children(const std::string& name) const {
  std::vector<std::string> out;
  for (const auto& v : vars_) {
    const auto& ps = parents_.at(v.name);
    if (std::find(ps.begin(), ps.end(), name) != ps.end()) out.push_back(v.name);
  }
  return out;
}

const Factor& BayesianNetwork::cpt(const std::string& name) const {
  auto it = cpts_.find(name);
  if (it == cpts_.end()) throw Error(ErrorCode::UnknownName, name);
  return it->second;
}

// Variables can only be added after their parents, so declaration order is
// already topological.
std::vector<std::string> BayesianNetwork::topological_order() const { return names(); }

BayesianNetwork bn_from_json(const nlohmann::json& j) {
  try {
    std::map<std::string, VarSpec> vars;
    std::vector<std::string> declared;
    for (const auto& v : j.at("variables")) {
      VarSpec s{v.at("name").get<std::string>(), v.at("values").get<std::vector<std::string>>()};
      if (vars.count(s.name)) throw Error(ErrorCode::DuplicateVariable, s.name);
      declared.push_back(s.name);
      vars.emplace(s.name, s);
    }
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<double>>> cpts;
    for (const auto& c : j.at("cpts")) {
      std::string child = c.at("child").get<std::string>();
      if (!vars.count(child)) throw Error(ErrorCode::UnknownName, child);
      if (cpts.count(child)) throw Error(ErrorCode::DuplicateVariable, "second table for " + child);
      cpts[child] = {c.value("parents", std::vector<std::string>{}), c.at("table").get<std::vector<double>>()};
    }
    for (const auto& name : declared)
      if (!cpts.count(name)) throw Error(ErrorCode::InvalidCpt, "no table for " + name);
    // Insert in an order where parents come first, preferring declaration order.
    BayesianNetwork b;
    std::set<std::string> done;
    while (done.size() < declared.size()) {
      bool progress = false;
      for (const auto& name : declared) {
        if (done.count(name)) continue;
        const auto& ps = cpts[name].first;
        if (!std::all_of(ps.begin(), ps.end(), [&](const std::string& p) { return done.count(p) > 0; })) {
          for (const auto& p : ps)
            if (!vars.count(p)) throw Error(ErrorCode::UnknownName, "parent " + p + " of " + name);
          continue;
        }
        b.add_variable(vars.at(name), ps, cpts[name].second);
        done.insert(name);
        progress = true;
        break;
      }
      if (!progress) throw Error(ErrorCode::CyclicGraph, "parent relation has a cycle");
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::json bn_to_json(const BayesianNetwork& b) {
  nlohmann::json vars = nlohmann::json::array(), cpts = nlohmann::json::array();
  for (const auto& v : b.variables()) {
    vars.push_back({{"name", v.name}, {"values", v.values}});
    cpts.push_back({{"child", v.name}, {"parents", b.parents(v.name)}, {"table", b.cpt(v.name).table()}});
  }
  return {{"variables", vars}, {"cpts", cpts}};
}

ProofNet bn_to_bpn(const BayesianNetwork& b, const std::set<std::string>& query) {
  for (const auto& q : query)
    if (!b.has(q)) throw Error(ErrorCode::UnknownName, "query name " + q);
  ProofNet n;
  std::map<std::string, NodeId> box;
  std::map<std::string, std::vector<EdgeId>> consumers;
  for (const auto& v : b.variables()) {
    NodeId id = n.add_box(b.cpt(v.name), v.name);
    box[v.name] = id;
    for (EdgeId e : n.node(id).conclusions)
      if (n.label(e).is_negative_atom()) consumers[n.label(e).name()].push_back(e);
  }
  std::vector<EdgeId> outputs;
  for (const auto& v : b.variables()) {
    EdgeId main = n.box_main(box[v.name]);
    auto& cons = consumers[v.name];
    if (query.count(v.name)) {
      if (cons.empty()) {
        outputs.push_back(main);
        continue;
      }
      NodeId ax = n.add_ax(v.name);
      outputs.push_back(n.conclusion(ax, 0));
      cons.push_back(n.conclusion(ax, 1));
    }
    if (cons.empty()) {
      NodeId w = n.add_weakening(v.name);
      n.add_cut(main, n.conclusion(w));
    } else {
      n.add_cut(main, n.add_contraction_tree(cons));
    }
  }
  n.conclusions_mut() = outputs;
  return n;
}

BayesianNetwork bpn_to_bn(const ProofNet& n) {
  require_typed(n);
  ProofNet at = normal_form_decompose(normalize(n, false)).atomic;
  BoxDag dag = polarized_dag(at);
  std::map<NodeId, std::string> name_of;
  for (NodeId bx : dag.boxes) name_of[bx] = at.box_name(bx);
  BayesianNetwork out;
  for (NodeId bx : dag.topological_order()) {
    const Factor& f = *at.node(bx).cpt;
    std::string child = name_of[bx];
    std::vector<std::string> parents;
    for (const auto& nm : f.names())
      if (nm != child) parents.push_back(nm);
    std::set<std::string> from_dag;
    for (NodeId p : dag.parents(bx)) from_dag.insert(name_of[p]);
    if (from_dag != std::set<std::string>(parents.begin(), parents.end()))
      throw Error(ErrorCode::NotBayesian, "inputs of box " + child + " are not all produced by boxes");
    std::vector<std::string> order = parents;
    order.push_back(child);
    out.add_variable(child, parents, f.reorder(order));
  }
  return out;
}

Factor bn_joint(const BayesianNetwork& b) {
  std::vector<const Factor*> fs;
  for (const auto& v : b.variables()) fs.push_back(&b.cpt(v.name));
  return product_many(fs).reorder(b.names());
}

bool same_bn(const BayesianNetwork& a, const BayesianNetwork& b, double tol) {
  if (a.names() != b.names()) return false;
  for (const auto& nm : a.names()) {
    if (a.var(nm) != b.var(nm) || a.parents(nm) != b.parents(nm)) return false;
    if (!approx_equal(a.cpt(nm), b.cpt(nm), tol)) return false;
  }
  return true;
}

}  // namespace bpn
