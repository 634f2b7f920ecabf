#pragma once

#include <cstdint>

#include "bpn/proof_net.hpp"

namespace bpn {

// Isomorphism of typed graphs preserving kinds, labels, premise order of
// tensor and par, box tables, and the order of the conclusions. Node and edge
// ids are ignored.
bool isomorphic(const ProofNet& a, const ProofNet& b);

// Equal for isomorphic nets.
std::uint64_t canonical_hash(const ProofNet& n);

}  // namespace bpn
