#include "kex/compat.hpp"

#include <array>

#include "kex/errors.hpp"

namespace kex {

bool blood_compatible(int donor_blood, int patient_blood) {
  return kAcceptableDonors[static_cast<size_t>(patient_blood)]
                          [static_cast<size_t>(donor_blood)] != 0;
}

bool directed_compatible(const PairRecord& from, const PairRecord& to) {
  if (!blood_compatible(from.donor_blood, to.patient_blood)) return false;
  size_t n = from.donor_antigens.size();
  if (to.patient_antibodies.size() != n)
    throw ConfigError("compat: antigen vector lengths differ");
  for (size_t i = 0; i < n; ++i)
    if (from.donor_antigens[i] && to.patient_antibodies[i]) return false;
  return true;
}

Graph build_compat_graph(std::span<const PairRecord> pool) {
  Graph g(static_cast<int>(pool.size()));
  for (size_t u = 0; u < pool.size(); ++u)
    for (size_t v = u + 1; v < pool.size(); ++v)
      if (directed_compatible(pool[u], pool[v]) && directed_compatible(pool[v], pool[u]))
        g.add_edge(static_cast<int>(u) + 1, static_cast<int>(v) + 1);
  return g;
}

namespace {

// US population ABO frequencies, order O, A, B, AB
constexpr std::array<double, 4> kBloodFreq{0.45, 0.40, 0.11, 0.04};

int sample_blood(Prg& prg) {
  double roll = prg.unit_real();
  double acc = 0.0;
  for (int b = 0; b < kNumBloodTypes - 1; ++b) {
    acc += kBloodFreq[static_cast<size_t>(b)];
    if (roll < acc) return b;
  }
  return kBloodAB;
}

PairRecord sample_pair_once(const GeneratorConfig& cfg, Prg& prg) {
  PairRecord rec;
  rec.patient_blood = sample_blood(prg);
  rec.donor_blood = sample_blood(prg);
  rec.sensitized = prg.unit_real() < cfg.sensitized_prevalence;
  double ab_prob = rec.sensitized ? cfg.antibody_prob_sensitized : cfg.antibody_prob_normal;
  rec.donor_antigens.resize(static_cast<size_t>(cfg.num_antigens));
  rec.patient_antibodies.resize(static_cast<size_t>(cfg.num_antigens));
  for (int i = 0; i < cfg.num_antigens; ++i) {
    rec.donor_antigens[static_cast<size_t>(i)] = prg.unit_real() < cfg.antigen_prob ? 1 : 0;
    rec.patient_antibodies[static_cast<size_t>(i)] = prg.unit_real() < ab_prob ? 1 : 0;
  }
  return rec;
}

}  // namespace

PairRecord random_pair(const GeneratorConfig& cfg, Prg& prg) {
  if (cfg.num_antigens <= 0) throw ConfigError("compat: num_antigens must be positive");
  for (;;) {
    PairRecord rec = sample_pair_once(cfg, prg);
    if (!cfg.only_incompatible || !directed_compatible(rec, rec)) return rec;
  }
}

std::vector<PairRecord> random_pool(size_t count, const GeneratorConfig& cfg, Prg& prg) {
  std::vector<PairRecord> pool;
  pool.reserve(count);
  for (size_t i = 0; i < count; ++i) pool.push_back(random_pair(cfg, prg));
  return pool;
}

size_t record_elements(int num_antigens) {
  return 2 * static_cast<size_t>(kNumBloodTypes) + 2 * static_cast<size_t>(num_antigens);
}

std::vector<uint64_t> encode_record(const PairRecord& rec) {
  std::vector<uint64_t> out;
  out.reserve(record_elements(static_cast<int>(rec.donor_antigens.size())));
  for (int b = 0; b < kNumBloodTypes; ++b) out.push_back(rec.donor_blood == b ? 1 : 0);
  const auto& acc = kAcceptableDonors[static_cast<size_t>(rec.patient_blood)];
  for (int b = 0; b < kNumBloodTypes; ++b) out.push_back(acc[static_cast<size_t>(b)]);
  for (uint8_t bit : rec.donor_antigens) out.push_back(bit);
  for (uint8_t bit : rec.patient_antibodies) out.push_back(bit);
  return out;
}

SharedPairRecord split_record_shares(std::span<const SVal> elems, int num_antigens) {
  size_t na = static_cast<size_t>(num_antigens);
  if (elems.size() != record_elements(num_antigens))
    throw ConfigError("compat: share vector has wrong length");
  SharedPairRecord rec;
  size_t pos = 0;
  auto take = [&](size_t count) {
    SVec part(elems.begin() + static_cast<ptrdiff_t>(pos),
              elems.begin() + static_cast<ptrdiff_t>(pos + count));
    pos += count;
    return part;
  };
  rec.donor_blood = take(kNumBloodTypes);
  rec.patient_acceptable = take(kNumBloodTypes);
  rec.donor_antigens = take(na);
  rec.patient_antibodies = take(na);
  return rec;
}

SVal comp_check(Session& s, const SharedPairRecord& from, const SharedPairRecord& to,
                const CompareParams& cp) {
  if (from.donor_antigens.size() >= (uint64_t{1} << cp.value_bits))
    throw ConfigError("compat: conflict count can exceed the comparison domain");
  SVal blood_ok = vec_read(s, to.patient_acceptable, from.donor_blood);
  SVal conflict = vec_read(s, to.patient_antibodies, from.donor_antigens);
  SVal tissue_ok = eqz(s, conflict, cp);
  return s.mul(blood_ok, tissue_ok);
}

SharedMatrix build_adjacency(Session& s, std::span<const SharedPairRecord> pool,
                             const CompareParams& cp) {
  size_t n = pool.size();
  SharedMatrix adj(n);
  for (size_t u = 0; u < n; ++u) {
    for (size_t v = u + 1; v < n; ++v) {
      SVal fwd = comp_check(s, pool[u], pool[v], cp);
      SVal bwd = comp_check(s, pool[v], pool[u], cp);
      SVal both = s.mul(fwd, bwd);
      adj.at(u, v) = both;
      adj.at(v, u) = both;
    }
  }
  return adj;
}

}  // namespace kex
