#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kex/compat.hpp"
#include "kex/compare.hpp"
#include "kex/matching_ref.hpp"
#include "kex/oblivious.hpp"
#include "kex/session.hpp"

namespace kex {

struct CrossoverOptions {
  CompareParams cmp{};
  // parties 1..k conjugate the adjacency by private permutations before the
  // matching runs; 0 skips the shuffle (useful for white-box tests)
  int shuffle_contributors = 2;
};

struct CrossoverResult {
  // entry u: share of the original label matched to vertex u+1, 0 if exposed
  SVec partner;
  // this party's shuffle permutation (empty when it contributed none)
  std::vector<uint32_t> own_perm;
};

// Augmenting-path rewrite along grandfather links, fully gated by aug_path.
// ix must be the one-hot indicator of x; y is the public endpoint. Runs a
// fixed number of steps equal to the vertex count, writes at the dummy
// position vanish.
void oblivious_augment(Session& s, SVec& mate, const SVec& grandfather, const SVec& ix,
                       SVal x, uint64_t y, SVal aug_path, const CompareParams& cp);

// Shared [y appears on the grandfather chain starting at x], walking a fixed
// number of steps. ix is the indicator of x.
SVal ancestor_flag(Session& s, const SVec& grandfather, const SVec& ix, uint64_t y,
                   const CompareParams& cp);

// Oblivious pairwise kidney exchange: finds a maximal set of two-way swaps on
// the shared adjacency matrix without revealing anything beyond each pair's
// own partner. Every loop bound, queue operation, and batch size depends only
// on the vertex count, so traffic and trace statistics are input independent.
// The adjacency is consumed (shuffled in place).
CrossoverResult run_crossover_ke(Session& s, SharedMatrix& adj, const CrossoverOptions& opt);

// Same, starting from the pairs' shared medical records.
CrossoverResult run_crossover_ke(Session& s, std::span<const SharedPairRecord> pool,
                                 const CrossoverOptions& opt);

// Plaintext twin of the oblivious schedule: same fixed pop count, dummy
// interleaving, and update order. The MPC run on a graph reconstructs to
// exactly this function's output on the same labeling.
Matching lockstep_match(const Graph& g);

}  // namespace kex
