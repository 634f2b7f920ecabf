#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bpn/cut_net.hpp"
#include "bpn/proof_net.hpp"
#include "json.hpp"

namespace bpn {

enum class Rule { Ax, One, Bot, Weakening, Box, Tensor, Par, Contraction, Cut, Mix };

const char* rule_name(Rule r);

// A formula occurrence; the tag is the id of the edge it becomes in a net.
struct Occurrence {
  Formula formula;
  EdgeId tag = -1;
};

// Sequent-calculus derivation. `active` holds the indices of the principal
// formulas: one per premise for tensor and cut (into that premise's sequent),
// two into the single premise for par and contraction. Tensor, par and
// contraction append their new formula at the end of the conclusion; the
// checker reads sequents up to exchange.
struct ProofTree {
  Rule rule = Rule::Ax;
  NodeId node = -1;
  std::vector<Occurrence> sequent;
  std::vector<int> active;
  std::vector<ProofTree> premises;
  std::optional<Factor> cpt;
  int component = -1;  // set on the sub-proof of a cut-net component
};

ProofTree ax_rule(const std::string& name, EdgeId pos_tag, EdgeId neg_tag, NodeId node = -1);
ProofTree one_rule(EdgeId tag, NodeId node = -1);
ProofTree bot_rule(EdgeId tag, NodeId node = -1);
ProofTree weakening_rule(const std::string& name, EdgeId tag, NodeId node = -1);
// `tags` follow the conclusion order: parents negatively, then the child.
ProofTree box_rule(const Factor& cpt, const std::string& child, const std::vector<EdgeId>& tags, NodeId node = -1);
ProofTree tensor_rule(ProofTree a, int i, ProofTree b, int j, EdgeId tag, NodeId node = -1);
ProofTree cut_rule(ProofTree a, int i, ProofTree b, int j, NodeId node = -1);
ProofTree par_rule(ProofTree a, int i, int j, EdgeId tag, NodeId node = -1);
ProofTree contraction_rule(ProofTree a, int i, int j, EdgeId tag, NodeId node = -1);
ProofTree mix_rule(ProofTree a, ProofTree b);

// Every rule instance recomputed from its premises; empty means well formed.
std::vector<std::string> check_proof_tree(const ProofTree& t);

// Throws Incorrect when the net has no sequentialization.
ProofTree sequentialize(const ProofNet& n);
// Components are sequentialized separately and joined by cut rules along the
// skeleton, starting at the pivot. Throws NotProper on parallel cuts.
ProofTree sequentialize(const CutNet& c, std::optional<int> pivot = std::nullopt);

// Rebuilds the net; edge ids are the occurrence tags.
ProofNet desequentialize(const ProofTree& t);

std::string proof_to_text(const ProofTree& t);
// One-line shape, e.g. cut(A+){π1, π2} with component proofs abbreviated.
std::string proof_outline(const ProofTree& t);
nlohmann::json proof_to_json(const ProofTree& t);
std::string pretty_formula(const Formula& f);

}  // namespace bpn
