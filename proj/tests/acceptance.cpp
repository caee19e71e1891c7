// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "padyn/census.hpp"
#include "padyn/conjugacy.hpp"
#include "padyn/infinity.hpp"

using namespace padyn;

namespace {

int failures = 0;
std::vector<std::string> pending_info;  // printed under the criterion line that produced them

struct Outcome {
  bool pass = true;
  std::string detail;
};

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && dt > limit_s) {
    o.pass = false;
    o.detail += "; time limit " + std::to_string(static_cast<int>(limit_s)) + " s exceeded";
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d: %s  %s  [%.2f s]  %s\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), dt, o.detail.c_str());
  for (const auto& line : pending_info) std::printf("    info: %s\n", line.c_str());
  pending_info.clear();
  std::fflush(stdout);
}

void info(const std::string& line) { pending_info.push_back(line); }

PadicNumber I(long n, Prime p, long T = 64) { return PadicNumber::from_integer(n, p, T); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

int main() {
  criterion(1, "orbit-count formula vs brute-force classes", 60, [] {
    Outcome o;
    long cases = 0;
    for (Prime p : {2ul, 3ul, 5ul})
      for (long m : {1L, 2L, 3L})
        for (long k : {0L, 1L}) {
          FlowMap F(p, m, I(k == 0 ? 1 : static_cast<long>(p), p));
          for (long i = 1; i <= 4; ++i) {
            if (pow_p(p, key_exponent(F, i)) > 10000000) break;
            if (!F.domain_ok(i)) continue;
            auto r = census_oracle(F, i);
            ++cases;
            if (r.classes != orbit_count(F, i)) {
              o.pass = false;
              o.detail += "p=" + std::to_string(p) + " m=" + std::to_string(m) + " k=" + std::to_string(k) +
                          " i=" + std::to_string(i) + ": " + r.classes.get_str() + " vs " +
                          orbit_count(F, i).get_str() + "; ";
            }
          }
        }
    o.detail += std::to_string(cases) + " (p,m,k,i) cases, exact";
    return o;
  });

  criterion(2, "N(a) values with brute-force partitions mod p^10", 5, [] {
    Outcome o;
    struct Row {
      long a;
      Prime p;
      long want;
    };
    for (Row r : {Row{2, 5, 1}, Row{4, 5, 2}, Row{3, 2, 2}}) {
      auto a = I(r.a, r.p);
      const mpz_class N = count_N(a), brute = count_orbits_bruteforce(a, 0, 10);
      const bool ok = N == r.want && brute == r.want && count_N_formula(a) == r.want;
      o.pass = o.pass && ok;
      o.detail += "N(" + std::to_string(r.a) + ") in Q" + std::to_string(r.p) + " = " + N.get_str() + " (brute " +
                  brute.get_str() + "); ";
    }
    return o;
  });

  criterion(3, "flow group law, flow_time inversion and norm law at precision 64", 30, [] {
    Outcome o;
    std::mt19937_64 rng(2024);
    const Prime primes[] = {2, 3, 5, 7};
    long bad_group = 0, bad_time = 0, bad_norm = 0;
    const long trials = 10000;
    for (long t = 0; t < trials; ++t) {
      const Prime p = primes[rng() % 4];
      const long m = 1 + static_cast<long>(rng() % 3);
      FlowMap F(p, m, PadicNumber::random_unit_scaled(p, static_cast<long>(rng() % 2), 64, rng));
      const PadicNumber x =
          PadicNumber::random_unit_scaled(p, F.first_circle() + static_cast<long>(rng() % 3), 64, rng);
      const PadicNumber z1 = PadicNumber::random_unit_scaled(p, static_cast<long>(rng() % 3), 64, rng);
      const PadicNumber z2 = PadicNumber::random_unit_scaled(p, static_cast<long>(rng() % 3), 64, rng);
      if (!flow_iterate(F, z1, flow_iterate(F, z2, x)).congruent(flow_iterate(F, z1 + z2, x))) ++bad_group;
      auto back = flow_time(F, x, flow_iterate(F, z1, x));
      if (!back || !back->congruent(z1)) ++bad_time;
      try {
        const Norm n = deviation_norm(F, z1, x);
        const long want = F.a.valuation() + z1.valuation() + (m + 1) * x.valuation();
        if (n.valuation != want) ++bad_norm;
      } catch (const Error&) {
        ++bad_norm;
      }
    }
    o.pass = bad_group == 0 && bad_time == 0 && bad_norm == 0;
    o.detail = std::to_string(trials) + " triples; failures: group " + std::to_string(bad_group) + ", inversion " +
               std::to_string(bad_time) + ", norm " + std::to_string(bad_norm);
    return o;
  });

  criterion(4, "Ouija divisibility for x + x^2 + x^3 over Q2 and Q3", 120, [] {
    Outcome o;
    for (Prime p : {2ul, 3ul}) {
      Germ f = PerturbedMap(p, 1, I(1, p, 48), I(1, p, 48));
      const ChartEstimate est = shrink_until(f, 1, 2, 200, 1);
      GFunction G = [&](const PadicNumber& e) { return g_closed(f, e); };
      const auto eta0 = PadicNumber::from_rational(mpq_class(1, pow_p(p, est.cutoff)), p, 48);
      const long n_max = pow_p(p, 5).get_si();
      const auto seq = hhat_run(G, eta0, I(1, p, 48), est.k, n_max);
      const auto rep = ouija_check(seq, true);
      o.pass = o.pass && rep.failures == 0 && rep.in_ideal;
      o.detail += "Q" + std::to_string(p) + ": k=" + std::to_string(est.k) + ", " + std::to_string(rep.pairs) +
                  " pairs, " + std::to_string(rep.failures) + " failures, min margin " + std::to_string(rep.min_margin) +
                  "; ";
    }
    return o;
  });

  criterion(5, "pulled-back conjugator: functional equation, closeness, isometry", 300, [] {
    Outcome o;
    for (Prime p : {3ul, 5ul})
      for (auto [m, a, b] : {std::tuple{1L, 1L, 1L}, std::tuple{2L, 1L, 1L}, std::tuple{1L, 1L, 0L}}) {
        Germ f = PerturbedMap(p, m, I(a, p, 48), I(b, p, 48));
        PullbackOptions opt;
        opt.samples = 500;
        opt.pairs = 500;
        const auto rep = pullback_verify(f, opt);
        o.pass = o.pass && rep.passed() && rep.samples == 500 && rep.pairs == 500;
        std::ostringstream os;
        os << "Q" << p << " (" << m << "," << a << "," << b << "): k=" << rep.chart.k << " N=" << rep.chart.cutoff
           << " T=" << rep.truncation << " fe " << rep.functional_failures << " close " << rep.closeness_failures
           << " iso " << rep.isometry_failures << "/" << rep.pairs << " undet " << rep.undetermined_pairs;
        if (m == 2) os << " cross " << rep.cross_sector_pairs;
        os << "; ";
        o.detail += os.str();
        for (const auto& e : rep.entries) info(e);
      }
    return o;
  });

  for (auto [m1, m2] : {std::pair{1L, 2L}, std::pair{1L, 3L}, std::pair{2L, 3L}}) {
    criterion(6, "Hoelder exponent m/m' for flows (" + std::to_string(m1) + "," + std::to_string(m2) + ") over Q5",
              60, [m1 = m1, m2 = m2] {
                Outcome o;
                const ConjugacyMap H = build_conjugacy(FlowMap(5, m1, I(1, 5)), FlowMap(5, m2, I(1, 5)), 12);
                const HolderReport rep = holder_estimate(H, 200);
                const double target = static_cast<double>(m1) / static_cast<double>(m2);
                const auto over = alpha_check(H.matching, mpq_class(m1, m2) + mpq_class(1, 10));
                const bool slope_ok = std::abs(rep.slope - target) <= 0.05;
                o.pass = slope_ok && !over.holds && rep.pair_failures == 0;
                o.detail = "slope " + fmt(rep.slope) + " vs " + fmt(target) + (slope_ok ? "" : " (off by more than 0.05)") +
                           "; alpha_check at m/m'+0.1: " + (over.holds ? "holds" : "violated") + "; same-orbit pairs " +
                           std::to_string(rep.pair_samples) + " with " + std::to_string(rep.pair_failures) + " failures";
                if (!slope_ok) {
                  std::string rows;
                  for (const auto& r : rep.table) rows += std::to_string(r.ring) + "->" + std::to_string(r.max_target) + " ";
                  info("per-ring max target: " + rows);
                }
                return o;
              });
  }

  criterion(7, "f_{2,1} -> L_2 over Q5: conjugacy, bounded rings, no_alpha", 0, [] {
    Outcome o;
    const FlowMap F(5, 1, I(1, 5));
    const auto pair = exponent_pair(ring_profile(MultiplierMap(5, I(2, 5))), ring_profile(F));
    const bool no_alpha = pair.kind == ExponentPair::Kind::no_alpha;
    o.detail = std::string("exponent_pair(const(N(2)), flow profile) = ") + to_string(pair.kind) + "; ";
    try {
      const ConjugacyMap H = build_conjugacy(F, MultiplierMap(5, I(2, 5)), 10);
      const auto v = verify_conjugacy(H, 500);
      const auto rep = holder_estimate(H, 0);
      o.pass = no_alpha && v.failures == 0 && rep.inverse_slope < 0.05;
      o.detail += "verify failures " + std::to_string(v.failures) + ", inverse slope " + fmt(rep.inverse_slope);
    } catch (const Error& e) {
      o.pass = false;
      o.detail += std::string("build_conjugacy rejected L_2: ") + e.what();
    }
    // The same checks with L_6, whose orbit closures are Z_p-odometers.
    const MultiplierMap L6(5, I(6, 5));
    const ConjugacyMap H6 = build_conjugacy(F, L6, 10);
    const auto v6 = verify_conjugacy(H6, 500);
    const auto r6 = holder_estimate(H6, 0);
    std::string rows;
    for (const auto& r : r6.inverse_table) rows += std::to_string(r.ring) + "->" + std::to_string(r.max_target) + " ";
    info("L_6 over Q5 (N = " + count_N(L6.a).get_str() + "): verify failures " + std::to_string(v6.failures) + "/" +
         std::to_string(v6.samples) + "; L_6 -> f_{2,1} ring table " + rows + "(slope " + fmt(r6.inverse_slope) + ")");
    info("exponent_pair(const(N(6)), flow profile) = " +
         to_string(exponent_pair(ring_profile(L6), ring_profile(F)).kind));
    return o;
  });

  criterion(8, "return deviation: constant for foreign primes, p^-n decay for the native prime", 5, [] {
    Outcome o;
    long sequences = 0;
    for (Prime p : {2ul, 3ul, 5ul, 7ul})
      for (long m : {1L, 2L, 3L}) {
        FlowMap F(p, m, I(static_cast<long>(p) + 1, p));
        const PadicNumber x = PadicNumber::from_integer(pow_p(p, F.first_circle()) * 2 + pow_p(p, F.first_circle() + 1), p, 64);
        for (long k : {1L, 2L, 4L}) {
          if (k % static_cast<long>(p) == 0) continue;
          const long base = F.a.valuation() + (m + 1) * x.valuation();  // ord(a k x^{m+1}) with p not dividing k
          for (Prime q : {2ul, 3ul, 5ul, 7ul, 11ul}) {
            const auto seq = return_deviation(F, x, k, q, 12);
            ++sequences;
            for (long n = 0; n <= 12; ++n) {
              const long want = q == p ? base + n : base;
              if (seq[static_cast<std::size_t>(n)].valuation != want) {
                o.pass = false;
                o.detail += "p=" + std::to_string(p) + " q=" + std::to_string(q) + " n=" + std::to_string(n) + "; ";
              }
            }
          }
        }
      }
    o.detail += std::to_string(sequences) + " sequences of length 13, exact";
    return o;
  });

  criterion(9, "bullseye calculus: mu, exponent table, sandwich to depth 200", 0, [] {
    Outcome o;
    const long mu5 = mu(RingProfile::constant(3), RingProfile::constant(2), 5);
    o.pass = mu5 == 6;
    o.detail = "mu(5) = " + std::to_string(mu5) + "; ";
    using K = ExponentPair::Kind;
    struct Row {
      const char* x;
      const char* y;
      K kind;
      mpq_class a1, a2;
    };
    const Row rows[] = {
        {"const(1)", "const(2)", K::iso, mpq_class(1, 2), 2},
        {"const(3)", "const(2)", K::iso, mpq_class(3, 2), mpq_class(2, 3)},
        {"const(2)", "const(2)", K::iso, 1, 1},
        {"const(1)", "geom(1/2,2,1)", K::no_alpha, 0, 0},
        {"geom(1/2,2,1)", "const(1)", K::no_alpha, 0, 0},
        {"const(2)", "geom(4/5,5,2)", K::no_alpha, 0, 0},
        {"geom(1,5,2)", "geom(1,5,1)", K::iso, 1, mpq_class(1, 2)},
        {"geom(1,5,1)", "geom(1,5,2)", K::iso, mpq_class(1, 2), 1},
        {"geom(1,2,3)", "geom(1,2,3)", K::iso, 1, 1},
        {"geom(1,2,3)", "geom(1,2,1)", K::iso, 1, mpq_class(1, 3)},
        {"geom(1,2,1)", "geom(1,3,1)", K::unknown, 0, 0},
        {"list(1,2,3)", "const(1)", K::unknown, 0, 0},
    };
    int table_ok = 0;
    for (const auto& r : rows) {
      const auto e = exponent_pair(RingProfile::parse(r.x), RingProfile::parse(r.y));
      bool ok = e.kind == r.kind && (r.kind != K::iso || (e.alpha1 == r.a1 && e.alpha2 == r.a2));
      if (ok) ++table_ok;
      else o.detail += std::string("mismatch ") + r.x + " vs " + r.y + "; ";
    }
    o.pass = o.pass && table_ok == 12;
    o.detail += "exponent table " + std::to_string(table_ok) + "/12; ";
    int sandwiches = 0;
    for (auto [x, y] : {std::pair{"const(3)", "const(2)"}, std::pair{"const(1)", "const(5)"},
                        std::pair{"geom(1,2,1)", "geom(1,2,2)"}, std::pair{"geom(1,2,3)", "geom(1,2,1)"},
                        std::pair{"const(2)", "geom(1/2,2,1)"}, std::pair{"geom(4/5,5,2)", "geom(1/5,5,1)"}}) {
      const RingMatching beta(RingProfile::parse(x), RingProfile::parse(y), 200);
      if (auto bad = sandwich_failure(beta)) {
        o.pass = false;
        o.detail += std::string("sandwich fails for ") + x + " vs " + y + " at N=" + std::to_string(*bad) + "; ";
      } else {
        ++sandwiches;
      }
    }
    o.detail += "sandwich holds at every ring to depth 200 for " + std::to_string(sandwiches) + " profile pairs";
    return o;
  });

  std::printf("%d criteria line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
