#include "padyn/conjugacy.hpp"

#include <algorithm>
#include <random>

#include <json.hpp>

#include "padyn/literals.hpp"

namespace padyn {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct ClosureData {
  OrbitClosure closure;
  std::vector<mpz_class> reps;
};

// Coset enumeration is the expensive part of a multiplier's orbit keys; keep it per thread.
const ClosureData& closure_data(const MultiplierMap& L) {
  thread_local std::map<std::string, ClosureData> cache;
  const std::string key = std::to_string(L.p) + "/" + L.a.to_literal();
  auto it = cache.find(key);
  if (it == cache.end()) {
    OrbitClosure c = orbit_closure(L.a);
    auto reps = c.coset_reps();
    it = cache.emplace(key, ClosureData{std::move(c), std::move(reps)}).first;
  }
  return it->second;
}
const OrbitClosure& closure_of(const MultiplierMap& L) { return closure_data(L).closure; }
const std::vector<mpz_class>& coset_reps_of(const MultiplierMap& L) { return closure_data(L).reps; }
}  // namespace

Prime prime_of(const DynMap& F) {
  return std::visit([](const auto& m) { return m.p; }, F);
}

std::string map_literal(const DynMap& F) {
  return std::visit([](const auto& m) { return padyn::map_literal(m); }, F);
}

long ring_offset(const DynMap& F) {
  return std::visit(overloaded{[](const FlowMap& f) { return f.first_circle() - 1; },
                               [](const MultiplierMap&) { return 0L; }},
                    F);
}

RingProfile matching_profile(const DynMap& F) {
  return std::visit(overloaded{[](const FlowMap& f) {
                                 RingProfile r = ring_profile(f);
                                 const long off = f.first_circle() - 1;
                                 mpq_class x0 = r.x0 * mpq_class(pow_p(f.p, f.m * off));
                                 return RingProfile::geometric(x0, r.r, r.lambda, 1);
                               },
                               [](const MultiplierMap& l) { return ring_profile(l); }},
                    F);
}

mpz_class ring_size(const DynMap& F, long circle) {
  return std::visit(overloaded{[&](const FlowMap& f) { return orbit_count(f, circle); },
                               [&](const MultiplierMap& l) { return count_N(l.a); }},
                    F);
}

mpz_class anchor_residue(const DynMap& F, long circle, const mpz_class& index) {
  return std::visit(overloaded{[&](const FlowMap& f) { return key_at(f, circle, index).residue; },
                               [&](const MultiplierMap& l) {
                                 const auto& reps = coset_reps_of(l);
                                 if (index < 0 || index >= reps.size()) throw DomainError("orbit index out of range");
                                 return mpz_class(reps[index.get_ui()] * pow_p(l.p, circle));
                               }},
                    F);
}

mpz_class orbit_index(const DynMap& F, const PadicNumber& x) {
  return std::visit(overloaded{[&](const FlowMap& f) { return key_index(f, orbit_key(f, x)); },
                               [&](const MultiplierMap& l) {
                                 const OrbitClosure& c = closure_of(l);
                                 const auto& reps = coset_reps_of(l);
                                 const PadicNumber u = PadicNumber::from_parts(l.p, 0, x.unit(), x.precision());
                                 const mpz_class canon = c.canonical(u.residue(c.level));
                                 auto it = std::lower_bound(reps.begin(), reps.end(), canon);
                                 return mpz_class(it - reps.begin());
                               }},
                    F);
}

PadicNumber iterate(const DynMap& F, const PadicNumber& z, const PadicNumber& x) {
  return std::visit(overloaded{[&](const FlowMap& f) { return flow_iterate(f, z, x); },
                               [&](const MultiplierMap& l) { return power_zp(l.a, z) * x; }},
                    F);
}

PadicNumber step(const DynMap& F, const PadicNumber& x) {
  return std::visit(overloaded{[&](const FlowMap& f) { return flow_eval(f, x); },
                               [&](const MultiplierMap& l) { return l.a * x; }},
                    F);
}

std::optional<PadicNumber> orbit_time(const DynMap& F, const PadicNumber& x0, const PadicNumber& x) {
  return std::visit(overloaded{[&](const FlowMap& f) { return flow_time(f, x0, x); },
                               [&](const MultiplierMap& l) -> std::optional<PadicNumber> {
                                 if (x.is_zero() || x.valuation() != x0.valuation()) return std::nullopt;
                                 return discrete_log(l.a, x / x0);
                               }},
                    F);
}

static void require_zp_action(const DynMap& F) {
  if (const auto* l = std::get_if<MultiplierMap>(&F)) {
    auto c = classify(l->a, l->a.precision());
    if (c.kind != MultiplierKind::indifferent_irrational)
      throw DomainError("multiplier is " + to_string(c.kind) + "; its orbit space is not a bullseye space");
    if (l->p != 2 && l->a.residue(1) != 1)
      throw DomainError("z -> " + coefficient_literal(l->a) +
                        "^z is not continuous on Z_p (the multiplier has a root-of-unity factor of order " +
                        std::to_string(closure_of(*l).torsion) +
                        "); its orbit closures are not Z_p-odometers, so no orbit-matching conjugacy exists");
  }
}

ConjugacyMap build_conjugacy(const DynMap& F1, const DynMap& F2, long depth, long precision) {
  if (prime_of(F1) != prime_of(F2)) throw DomainError("conjugacy needs both maps over the same prime");
  require_zp_action(F1);
  require_zp_action(F2);
  return ConjugacyMap{F1, F2, RingMatching(matching_profile(F1), matching_profile(F2), depth),
                      ring_offset(F1), ring_offset(F2), precision, {}};
}

// Anchors are exact integers; give them room for the deepest circle they sit on.
// Multiplier anchors are p^circle times a coset representative; building them from parts
// avoids materialising p^circle, which is enormous on deep target rings.
static PadicNumber anchor_point(const DynMap& F, long circle, const mpz_class& index, long precision) {
  if (const auto* l = std::get_if<MultiplierMap>(&F)) {
    const auto& reps = coset_reps_of(*l);
    if (index < 0 || index >= reps.size()) throw DomainError("orbit index out of range");
    return PadicNumber::from_parts(l->p, circle, reps[index.get_ui()], precision);
  }
  return PadicNumber::from_integer(anchor_residue(F, circle, index), prime_of(F), precision);
}

static long flow_ring(const DynMap& F, long ring) { return std::holds_alternative<FlowMap>(F) ? ring : 0; }

AnchorPair anchors_for(const ConjugacyMap& H, long ring, const mpz_class& index) {
  auto it = H.overrides.find({ring, index});
  if (it != H.overrides.end()) return it->second;
  RingPoint y = H.matching.image({ring, index});
  // Flow times lose digits in proportion to the ring; multiplier anchors are exact.
  const long guard = H.precision + 4 * (flow_ring(H.source, ring) + flow_ring(H.target, y.ring));
  return {anchor_point(H.source, H.source_offset + ring, index, guard),
          anchor_point(H.target, H.target_offset + y.ring, y.index, guard)};
}

PadicNumber h_eval(const ConjugacyMap& H, const PadicNumber& x, bool extend) {
  if (x.is_zero()) return x;
  const long ring = x.valuation() - H.source_offset;
  if (ring < 1) throw DomainError("point outside the source domain");
  if (ring > H.matching.depth()) {
    if (!extend) throw DomainError("ring " + std::to_string(ring) + " beyond constructed depth " +
                                   std::to_string(H.matching.depth()));
    ConjugacyMap deeper = H;
    deeper.matching = RingMatching(H.matching.source(), H.matching.target(), ring);
    return h_eval(deeper, x, false);
  }
  const mpz_class index = orbit_index(H.source, x);
  const AnchorPair a = anchors_for(H, ring, index);
  auto z = orbit_time(H.source, a.source, x);
  if (!z) throw DomainError("point is not in the orbit of its anchor");
  return iterate(H.target, *z, a.target);
}

PadicNumber h_inv(const ConjugacyMap& H, const PadicNumber& y) {
  if (y.is_zero()) return y;
  const long ring = y.valuation() - H.target_offset;
  const mpz_class index = orbit_index(H.target, y);
  RingPoint x = H.matching.preimage({ring, index});
  const AnchorPair a = anchors_for(H, x.ring, x.index);
  auto z = orbit_time(H.target, a.target, y);
  if (!z) throw DomainError("point is not in the orbit of its anchor");
  return iterate(H.source, *z, a.source);
}

static PadicNumber random_zp(Prime p, long digits, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned long> d(0, p - 1);
  mpz_class z = 0;
  for (long i = 0; i < digits; ++i) z = z * p + d(rng);
  if (z == 0) return PadicNumber::zero(p, digits);
  const long v = ord_p(z, p);
  return PadicNumber::from_parts(p, v, z / pow_p(p, v), digits - v);
}

static mpz_class random_below(const mpz_class& n, std::mt19937_64& rng) {
  gmp_randclass r(gmp_randinit_default);
  r.seed(static_cast<unsigned long>(rng()));
  return r.get_z_range(n);
}

// Digits in which two values disagree within their joint precision (0 when equal).
static long discrepancy(const PadicNumber& a, const PadicNumber& b, long* agreement) {
  const PadicNumber d = a - b;
  const long joint = std::min(a.absolute_precision().value_or(1L << 30), b.absolute_precision().value_or(1L << 30));
  if (d.is_zero()) {
    *agreement = joint;
    return 0;
  }
  *agreement = d.valuation();
  return joint - d.valuation();
}

VerifyReport verify_conjugacy(const ConjugacyMap& H, long samples, std::uint64_t seed) {
  VerifyReport rep;
  rep.ring_coverage.assign(static_cast<std::size_t>(H.matching.depth()), 0);
  rep.min_agreement = 1L << 30;
  std::mt19937_64 rng(seed);
  const Prime p = prime_of(H.source);
  std::vector<long> rings;
  for (long N = 1; N <= H.matching.depth(); ++N)
    if (H.matching.source().count(N) > 0) rings.push_back(N);
  std::uniform_int_distribution<std::size_t> pick(0, rings.size() - 1);
  for (long s = 0; s < samples; ++s) {
    ++rep.samples;
    const long N = rings[pick(rng)];
    const mpz_class j = random_below(H.matching.source().count(N), rng);
    ++rep.ring_coverage[static_cast<std::size_t>(N - 1)];
    std::string where = "ring " + std::to_string(N) + " orbit " + j.get_str();
    try {
      const AnchorPair a = anchors_for(H, N, j);
      const long digits = H.precision;
      const PadicNumber x = iterate(H.source, random_zp(p, digits, rng), a.source);
      const PadicNumber hx = h_eval(H, x);
      const PadicNumber lhs = step(H.target, hx);
      const PadicNumber rhs = h_eval(H, step(H.source, x));
      long agree = 0;
      const long disc = discrepancy(lhs, rhs, &agree);
      bool failed = disc != 0;
      if (failed) rep.entries.push_back(where + ": functional equation off in " + std::to_string(disc) + " digits");
      // Norm law and agreement with the ring matching.
      RingPoint expected = H.matching.image({N, j});
      if (hx.valuation() != H.target_offset + expected.ring || orbit_index(H.target, hx) != expected.index) {
        failed = true;
        rep.entries.push_back(where + ": image lies outside the matched target orbit");
        rep.max_discrepancy = std::max(rep.max_discrepancy, digits);
      }
      if (failed) {
        ++rep.failures;
        rep.max_discrepancy = std::max(rep.max_discrepancy, disc);
      } else {
        rep.min_agreement = std::min(rep.min_agreement, agree);
      }
    } catch (const Error& e) {
      ++rep.failures;
      rep.max_discrepancy = std::max(rep.max_discrepancy, H.precision);
      rep.entries.push_back(where + ": " + e.what());
    }
  }
  if (rep.min_agreement == (1L << 30)) rep.min_agreement = 0;
  return rep;
}

static std::vector<HolderRow> ring_table(const RingMatching& beta) {
  std::vector<HolderRow> t;
  for (long N = 1; N <= beta.depth(); ++N)
    if (beta.source().count(N) > 0) t.push_back({N, beta.min_target_ring(N), beta.max_target_ring(N)});
  return t;
}

static double deep_half_slope(const std::vector<HolderRow>& t) {
  if (t.empty()) return 0;
  const long last = t.back().ring;
  std::vector<double> xs, ys;
  for (const auto& r : t)
    if (2 * r.ring > last) {
      xs.push_back(static_cast<double>(r.ring));
      ys.push_back(static_cast<double>(r.max_target));
    }
  return least_squares_slope(xs, ys);
}

HolderReport holder_estimate(const ConjugacyMap& H, long pair_samples, std::uint64_t seed) {
  if (H.matching.depth() < 10) throw DomainError("holder_estimate needs depth >= 10");
  HolderReport rep;
  rep.table = ring_table(H.matching);
  rep.slope = deep_half_slope(rep.table);
  // Constant into geometric rings: source ring N lands near ring r^N, which can overflow a
  // ring index long before the requested depth. Keep the deepest inverse that fits.
  for (long d = H.matching.depth(); d >= 1; --d) {
    try {
      rep.inverse_table = ring_table(RingMatching(H.matching.target(), H.matching.source(), d));
      break;
    } catch (const CapExceeded&) {
    }
  }
  rep.inverse_slope = deep_half_slope(rep.inverse_table);
  const auto* f1 = std::get_if<FlowMap>(&H.source);
  const auto* f2 = std::get_if<FlowMap>(&H.target);
  if (!f1 || !f2) return rep;
  rep.exponent = mpq_class(f1->m, f2->m);
  rep.exponent->canonicalize();
  std::mt19937_64 rng(seed);
  const Prime p = f1->p;
  std::map<long, mpq_class> worst;
  for (long s = 0; s < pair_samples; ++s) {
    const long N = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(H.matching.depth()));
    const mpz_class j = random_below(H.matching.source().count(N), rng);
    const AnchorPair a = anchors_for(H, N, j);
    const PadicNumber x = iterate(H.source, random_zp(p, H.precision, rng), a.source);
    PadicNumber z = random_zp(p, H.precision, rng);
    if (z.is_zero()) continue;
    ++rep.pair_samples;
    const PadicNumber y = flow_iterate(*f1, z, x);
    const PadicNumber hx = h_eval(H, x), hy = h_eval(H, y);
    const PadicNumber dh = hy - hx;
    // Same-orbit displacement |h(y) - h(x)| = |a' z h(x)^{m'+1}|.
    const long expected = f2->a.valuation() + z.valuation() + (f2->m + 1) * hx.valuation();
    if (dh.is_zero() || dh.valuation() != expected) {
      ++rep.pair_failures;
      continue;
    }
    const long dx = f1->a.valuation() + z.valuation() + (f1->m + 1) * x.valuation();
    // log_p C = -ord(h(y)-h(x)) + (m/m') ord(y-x)
    mpq_class logc = mpq_class(-dh.valuation()) + *rep.exponent * dx;
    auto [it, fresh] = worst.emplace(N, logc);
    if (!fresh && logc > it->second) it->second = logc;
  }
  rep.pair_log_constants.assign(worst.begin(), worst.end());
  return rep;
}

std::string conjugacy_to_json(const ConjugacyMap& H) {
  nlohmann::ordered_json doc;
  doc["source"] = map_literal(H.source);
  doc["target"] = map_literal(H.target);
  doc["depth"] = H.matching.depth();
  doc["precision"] = H.precision;
  doc["source_profile"] = H.matching.source().to_literal();
  doc["target_profile"] = H.matching.target().to_literal();
  doc["source_offset"] = H.source_offset;
  doc["target_offset"] = H.target_offset;
  doc["rings"] = nlohmann::ordered_json::array();
  for (const auto& r : ring_table(H.matching))
    doc["rings"].push_back({{"ring", r.ring},
                            {"orbits", H.matching.source().count(r.ring).get_str()},
                            {"first_target", r.min_target},
                            {"last_target", r.max_target}});
  doc["anchor_overrides"] = nlohmann::ordered_json::array();
  for (const auto& [key, a] : H.overrides)
    doc["anchor_overrides"].push_back({{"ring", key.first},
                                       {"index", key.second.get_str()},
                                       {"source", a.source.to_literal()},
                                       {"target", a.target.to_literal()}});
  return doc.dump(2) + "\n";
}

static DynMap dyn_from_literal(const std::string& s, long precision) {
  auto m = parse_map(s, precision);
  if (auto* f = std::get_if<FlowMap>(&m)) return *f;
  if (auto* l = std::get_if<MultiplierMap>(&m)) return *l;
  throw ParseError("conjugacies are built between flow and multiplier maps");
}

ConjugacyMap conjugacy_from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    const long precision = doc.at("precision").get<long>();
    ConjugacyMap H = build_conjugacy(dyn_from_literal(doc.at("source").get<std::string>(), precision),
                                     dyn_from_literal(doc.at("target").get<std::string>(), precision),
                                     doc.at("depth").get<long>(), precision);
    if (H.matching.source().to_literal() != doc.at("source_profile").get<std::string>() ||
        H.matching.target().to_literal() != doc.at("target_profile").get<std::string>())
      throw ParseError("stored profiles disagree with the maps");
    const Prime p = prime_of(H.source);
    for (const auto& o : doc.at("anchor_overrides"))
      H.overrides[{o.at("ring").get<long>(), mpz_class(o.at("index").get<std::string>())}] = {
          PadicNumber::parse(o.at("source").get<std::string>(), p),
          PadicNumber::parse(o.at("target").get<std::string>(), p)};
    return H;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad conjugacy document: ") + e.what());
  }
}

}  // namespace padyn
