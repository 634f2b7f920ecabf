#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bpn/factor.hpp"
#include "bpn/proof_net.hpp"
#include "json.hpp"

namespace bpn {

class BayesianNetwork {
 public:
  // Adds a variable with its parents (which must already exist) and a table
  // over (parents..., child). Validates the table.
  void add_variable(const VarSpec& var, const std::vector<std::string>& parents, const std::vector<double>& table);
  void add_variable(const std::string& name, const std::vector<std::string>& parents, const Factor& cpt);

  const std::vector<VarSpec>& variables() const { return vars_; }
  std::vector<std::string> names() const;
  bool has(const std::string& name) const { return index_.count(name) > 0; }
  const VarSpec& var(const std::string& name) const;
  const std::vector<std::string>& parents(const std::string& name) const;
  std::vector<std::string> children(const std::string& name) const;  // in declaration order
  const Factor& cpt(const std::string& name) const;  // variables (parents..., child)
  std::vector<std::string> topological_order() const;

 private:
  std::vector<VarSpec> vars_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::vector<std::string>> parents_;
  std::map<std::string, Factor> cpts_;
};

BayesianNetwork bn_from_json(const nlohmann::json& j);
nlohmann::json bn_to_json(const BayesianNetwork& b);

// One box per variable; each variable's consumers (children and, for a query
// name, an axiom) share its main conclusion through contractions. Unconsumed
// variables are cut with a weakening. Conclusions are the query names.
ProofNet bn_to_bpn(const BayesianNetwork& b, const std::set<std::string>& query);
// Reads the network back from the boxes of the normalized atomic part.
BayesianNetwork bpn_to_bn(const ProofNet& n);

// Product of all tables, variables in declaration order.
Factor bn_joint(const BayesianNetwork& b);

bool same_bn(const BayesianNetwork& a, const BayesianNetwork& b, double tol = 1e-12);

}  // namespace bpn
