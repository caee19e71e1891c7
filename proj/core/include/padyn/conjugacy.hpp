#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "padyn/bullseye.hpp"
#include "padyn/census.hpp"

namespace padyn {

using DynMap = std::variant<FlowMap, MultiplierMap>;

Prime prime_of(const DynMap& F);
std::string map_literal(const DynMap& F);
// Circle index of ring 1 minus one.
long ring_offset(const DynMap& F);
// Orbit counts per ring, ring 1 being the first circle in the domain.
RingProfile matching_profile(const DynMap& F);
mpz_class ring_size(const DynMap& F, long circle);
// The canonical anchor of orbit `index` on a circle, as an exact integer.
mpz_class anchor_residue(const DynMap& F, long circle, const mpz_class& index);
// Index of x's orbit among the anchors of its circle.
mpz_class orbit_index(const DynMap& F, const PadicNumber& x);
PadicNumber iterate(const DynMap& F, const PadicNumber& z, const PadicNumber& x);
PadicNumber step(const DynMap& F, const PadicNumber& x);
// z with iterate(F, z, x0) = x, or nullopt when x is not in the orbit of x0.
std::optional<PadicNumber> orbit_time(const DynMap& F, const PadicNumber& x0, const PadicNumber& x);

struct AnchorPair {
  PadicNumber source;
  PadicNumber target;
};

struct ConjugacyMap {
  DynMap source, target;
  RingMatching matching;
  long source_offset = 0, target_offset = 0;
  long precision = 64;
  // Anchors replacing the canonical ones, keyed by (source ring, orbit index).
  std::map<std::pair<long, mpz_class>, AnchorPair> overrides;
};

ConjugacyMap build_conjugacy(const DynMap& F1, const DynMap& F2, long depth, long precision = 64);
PadicNumber h_eval(const ConjugacyMap& H, const PadicNumber& x, bool extend = false);
PadicNumber h_inv(const ConjugacyMap& H, const PadicNumber& y);
AnchorPair anchors_for(const ConjugacyMap& H, long ring, const mpz_class& index);

struct VerifyReport {
  long samples = 0;
  long failures = 0;
  long max_discrepancy = 0;  // digits in which the two sides disagree
  long min_agreement = 0;    // smallest number of digits compared on a passing sample
  std::vector<long> ring_coverage;
  std::vector<std::string> entries;
};
VerifyReport verify_conjugacy(const ConjugacyMap& H, long samples, std::uint64_t seed = 1);

struct HolderRow {
  long ring;
  long min_target;
  long max_target;
};
struct HolderReport {
  double slope = 0;
  std::vector<HolderRow> table;
  double inverse_slope = 0;
  std::vector<HolderRow> inverse_table;
  std::optional<mpq_class> exponent;  // m/m' for a flow pair
  long pair_samples = 0;
  long pair_failures = 0;
  // log_p of the constants needed in |h(y)-h(x)| <= C |y-x|^{m/m'}, per source ring.
  std::vector<std::pair<long, mpq_class>> pair_log_constants;
};
HolderReport holder_estimate(const ConjugacyMap& H, long pair_samples = 200, std::uint64_t seed = 1);

std::string conjugacy_to_json(const ConjugacyMap& H);
ConjugacyMap conjugacy_from_json(const std::string& text);

}  // namespace padyn
