#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bpn/proof_net.hpp"
#include "json.hpp"

namespace bpn {

// A net partitioned into sub-nets. Nodes outside every component are the
// separating cuts; their premises come from two different components.
struct CutNet {
  ProofNet net;
  std::vector<std::set<NodeId>> components;

  struct Link {
    int a, b;  // a < b
    std::vector<NodeId> cuts;
  };

  std::map<NodeId, int> component_map() const;
  std::vector<NodeId> separating_cuts() const;
  std::vector<Link> skeleton() const;
  std::vector<int> neighbours(int i) const;
  std::vector<NodeId> cuts_between(int i, int j) const;
  // Names of every edge touching a node of the component.
  std::set<std::string> component_names(int i) const;
  ProofNet component_net(int i) const;
  // Component owning the source of a cut premise.
  int side_of(NodeId cut, int premise) const;
};

struct RootedCutNet {
  CutNet cut_net;
  int root = 0;

  // Parent of each component in the skeleton rooted at `root` (-1 for it).
  std::vector<int> parents() const;
};

// Checks partition, sub-net and tree conditions; throws on failure.
void validate_cut_net(const CutNet& c);
CutNet partition_to_cutnet(const ProofNet& n, const std::vector<std::set<NodeId>>& parts);

// Splits off the sub-net `r`: every edge leaving it is axiom-expanded, the
// axiom going to the other side and the new cut becoming separating.
CutNet split(const ProofNet& n, const std::set<NodeId>& r);

int width(const CutNet& c);
bool is_proper(const CutNet& c);
// Center of the skeleton tree; ties go to the smaller index.
int skeleton_center(const CutNet& c);

// Variable-elimination factorization. `order` lists names to eliminate; all
// but the last get their own component, the rest are summed at the root,
// which owns every conclusion.
RootedCutNet ve_factorize(const ProofNet& n, const std::vector<std::string>& order);

// Merges parallel separating cuts into single compound cuts, keeping the net
// correct. Par goes on the side nearer the pivot when possible.
CutNet type_cuts(const CutNet& c, std::optional<int> pivot = std::nullopt);

nlohmann::json cutnet_to_json(const CutNet& c, std::optional<int> root = std::nullopt);
CutNet cutnet_from_json(const nlohmann::json& j, std::optional<int>* root = nullptr);

}  // namespace bpn
