#pragma once

#include <set>
#include <string>

#include "bpn/bayes_net.hpp"

namespace bpn {

// On a positive net normal under pruning whose conclusion names are split
// into x, y and z: drop every edge named in z and look for an undirected path
// between a box of x and a box of y. True when there is none.
bool disconnected(const ProofNet& m, const std::set<std::string>& x, const std::set<std::string>& y,
                  const std::set<std::string>& z);

// The same test on the net of `b` queried on x, y and z, pruned and normalized.
bool dsep(const BayesianNetwork& b, const std::set<std::string>& x, const std::set<std::string>& y,
          const std::set<std::string>& z);

// Numerical test: Pr(x,y,z) Pr(z) = Pr(x,z) Pr(y,z) everywhere.
bool ci_oracle(const BayesianNetwork& b, const std::set<std::string>& x, const std::set<std::string>& y,
               const std::set<std::string>& z, double tol = 1e-9);

}  // namespace bpn
