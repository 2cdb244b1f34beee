#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "kex/compare.hpp"
#include "kex/matching_ref.hpp"
#include "kex/oblivious.hpp"
#include "kex/prg.hpp"
#include "kex/session.hpp"

namespace kex {

// Blood types in fixed order; the acceptable-donor sets implement standard
// ABO rules (Rh is folded into the antigen vectors, not modeled separately).
enum BloodType : int { kBloodO = 0, kBloodA = 1, kBloodB = 2, kBloodAB = 3 };
constexpr int kNumBloodTypes = 4;

// acceptable_donors[patient][donor] = 1 if the patient can take that ABO type
constexpr std::array<std::array<uint8_t, 4>, 4> kAcceptableDonors{{
    {1, 0, 0, 0},  // O patient
    {1, 1, 0, 0},  // A patient
    {1, 0, 1, 0},  // B patient
    {1, 1, 1, 1},  // AB patient
}};

bool blood_compatible(int donor_blood, int patient_blood);

// One incompatible patient-donor pair as it enrolls with the exchange.
struct PairRecord {
  int patient_blood = kBloodO;
  int donor_blood = kBloodO;
  std::vector<uint8_t> patient_antibodies;  // index = antigen id
  std::vector<uint8_t> donor_antigens;
  bool sensitized = false;
};

// donor of `from` donating to the patient of `to`
bool directed_compatible(const PairRecord& from, const PairRecord& to);

Graph build_compat_graph(std::span<const PairRecord> pool);

struct GeneratorConfig {
  int num_antigens = 50;
  double antigen_prob = 0.2;
  double sensitized_prevalence = 0.2;
  double antibody_prob_sensitized = 0.5;
  double antibody_prob_normal = 0.05;
  // exchange pools consist of pairs that cannot transplant directly, so the
  // generator resamples until the pair itself is incompatible
  bool only_incompatible = true;
};

PairRecord random_pair(const GeneratorConfig& cfg, Prg& prg);
std::vector<PairRecord> random_pool(size_t count, const GeneratorConfig& cfg, Prg& prg);

// Wire layout of one record: donor blood one-hot (4), patient acceptable
// set (4), donor antigens (|A|), patient antibodies (|A|).
std::vector<uint64_t> encode_record(const PairRecord& rec);
size_t record_elements(int num_antigens);

struct SharedPairRecord {
  SVec donor_blood;         // one-hot over blood types
  SVec patient_acceptable;  // indicator over donor blood types
  SVec donor_antigens;
  SVec patient_antibodies;
};

SharedPairRecord split_record_shares(std::span<const SVal> elems, int num_antigens);

// [donor of `from` compatible with patient of `to`]: one-hot blood dot plus
// a zero test on the antigen/antibody conflict count.
SVal comp_check(Session& s, const SharedPairRecord& from, const SharedPairRecord& to,
                const CompareParams& cp);

// Symmetric zero-diagonal adjacency over the pool; entry (u,v) is the product
// of both directed checks.
SharedMatrix build_adjacency(Session& s, std::span<const SharedPairRecord> pool,
                             const CompareParams& cp);

}  // namespace kex
