#pragma once

#include <string>
#include <vector>

#include "bpn/proof_net.hpp"

namespace bpn {

enum class RedexKind { AxCut, TensorPar, OneBot, ContractionWeakening, BoxWeakening };

const char* redex_name(RedexKind k);

// `site` is the cut (or the contraction for ContractionWeakening). `other`
// is the axiom for AxCut and the weakening for the two weakening rules.
struct Redex {
  RedexKind kind;
  NodeId site;
  NodeId other = -1;

  bool operator==(const Redex&) const = default;
  std::string str() const;
};

// Sorted by site id. BoxWeakening redexes appear only when pruning.
std::vector<Redex> find_redexes(const ProofNet& n, bool pruning);
bool is_normal(const ProofNet& n, bool pruning = false);

// Throws StaleRedex if `r` does not describe a redex of `n`.
void apply_redex(ProofNet& n, const Redex& r);
ProofNet reduce_step(ProofNet n, const Redex& r);
ProofNet normalize(ProofNet n, bool pruning, std::vector<Redex>* trace = nullptr);

struct AxExpansion {
  NodeId ax;
  NodeId cut;
};
// Replaces an atomic edge s -> t by s -> cut <- ax -> t.
AxExpansion ax_expand(ProofNet& n, EdgeId e);

// One premise of a cut, naming the side it sits on.
struct CutSide {
  NodeId cut;
  int premise;
};

struct TensorParExpansion {
  NodeId cut;
  NodeId selected_node;  // built from the selected premises
  NodeId other_node;
};

// Merges two cuts into one compound cut. The selected premises of both cuts
// form one side, which gets a tensor when `tensor_on_selected`, otherwise a
// par. The new cut's first premise is the selected side. Throws
// WouldBreakCorrectness (leaving `n` untouched) if the result is incorrect.
TensorParExpansion tensor_par_expand(ProofNet& n, CutSide a, CutSide b, bool tensor_on_selected);

// A normal net split into its atomic part and the formula trees of its
// compound conclusions.
struct NormalFormDecomposition {
  ProofNet atomic;
  std::vector<Node> forest_nodes;
  std::vector<Edge> forest_edges;
  std::vector<EdgeId> conclusions;
};
NormalFormDecomposition normal_form_decompose(const ProofNet& n);
ProofNet reassemble(const NormalFormDecomposition& d);

}  // namespace bpn
