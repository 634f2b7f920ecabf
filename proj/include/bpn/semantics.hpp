#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bpn/cut_net.hpp"
#include "bpn/factor.hpp"
#include "bpn/proof_net.hpp"
#include "bpn/rewrite.hpp"

namespace bpn {

// Product of the box tables with every name outside the conclusions summed
// out. Conclusion names that no box mentions get a uniform unit factor.
Factor interpret_naive(const ProofNet& n, CostCounters* counters = nullptr);

// Bottom-up over the skeleton: each component multiplies its boxes with its
// children's messages and keeps only the names it shares with its parent and
// the conclusions below it.
Factor interpret_rooted(const RootedCutNet& r, CostCounters* counters = nullptr);

// Conditional distribution of `targets` given `evidence`.
Factor query(const ProofNet& n, const std::vector<std::string>& targets, const Assignment& evidence);
// Same, from an already computed marginal over at least targets and evidence.
Factor condition(const Factor& marginal_table, const std::vector<std::string>& targets, const Assignment& evidence);

class Sampler {
 public:
  explicit Sampler(const ProofNet& n);
  Assignment draw(std::mt19937_64& rng) const;

 private:
  struct Step {
    std::string name;
    const Factor* cpt;
  };
  ProofNet net_;
  std::vector<Step> steps_;
};

std::vector<Assignment> forward_sample(const ProofNet& n, std::uint64_t seed, std::size_t count);

struct RewriteStep {
  enum class Kind { Reduce, AxExpand, TensorParExpand };
  Kind kind = Kind::Reduce;
  Redex redex{RedexKind::AxCut, -1};
  EdgeId edge = -1;
  CutSide a{-1, 0}, b{-1, 0};
  bool tensor_on_selected = true;
};

void apply_step(ProofNet& n, const RewriteStep& s);
// Applies the steps in turn and checks the interpretation never moves by
// more than `tol`.
bool check_invariance(const ProofNet& n, const std::vector<RewriteStep>& steps, double tol = 1e-9);

}  // namespace bpn
