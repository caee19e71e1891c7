#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "padyn/multipliers.hpp"

using namespace padyn;

static PadicNumber I(long n, Prime p, long T = 30) { return PadicNumber::from_integer(n, p, T); }

TEST_CASE("classify") {
  CHECK(classify(I(5, 5), 20).kind == MultiplierKind::contracting);
  CHECK(classify(PadicNumber::from_rational(mpq_class(1, 5), 5, 20), 20).kind == MultiplierKind::expanding);
  auto r = classify(I(-1, 5), 20);
  CHECK(r.kind == MultiplierKind::indifferent_rational);
  CHECK(r.order == 2);
  CHECK(classify(I(2, 5), 20).kind == MultiplierKind::indifferent_irrational);
  CHECK(classify(I(2, 5), 20).certified_to == 20);
  CHECK(classify(teichmuller(I(2, 5, 20)), 20).order == 4);
  CHECK(classify(I(-1, 2), 20).order == 2);
  CHECK(classify(I(3, 2), 20).kind == MultiplierKind::indifferent_irrational);
  CHECK(to_string(MultiplierKind::indifferent_irrational) == "indifferent_irrational");
}

TEST_CASE("orbit closures") {
  auto c2 = orbit_closure(I(2, 5));
  CHECK(c2.n == 1);
  CHECK(c2.torsion == 4);
  CHECK(c2.subgroup.size() == 4);  // all of (Z/5)^x

  auto c4 = orbit_closure(I(4, 5));
  CHECK(c4.n == 1);
  CHECK(c4.torsion == 2);
  CHECK(c4.subgroup.size() == 2);

  auto c3 = orbit_closure(I(3, 2));
  CHECK(c3.n == 2);
  CHECK(c3.level == 3);
  CHECK(c3.subgroup == std::vector<mpz_class>{1, 3});
  CHECK(c3.contains(I(11, 2)));
  CHECK_FALSE(c3.contains(I(5, 2)));

  CHECK_THROWS_AS(orbit_closure(I(-1, 5)), DomainError);
  CHECK_THROWS_AS(orbit_closure(I(5, 5)), DomainError);

  // Closure mod p^T, lifted from the level, equals the brute-force closure of powers.
  for (auto [a, p] : std::vector<std::pair<long, Prime>>{{2, 5}, {4, 5}, {3, 2}, {5, 2}, {7, 3}, {6, 5}, {3, 7}}) {
    const long T = 5;
    auto c = orbit_closure(I(a, p));
    auto brute = closure_bruteforce(I(a, p), T);
    std::vector<mpz_class> mine;
    mpz_class M = pow_p(p, T);
    for (mpz_class u = 1; u < M; ++u)
      if (u % p != 0 && c.contains(PadicNumber::from_integer(u, p, T))) mine.push_back(u);
    CHECK(mine == brute);
  }
}

TEST_CASE("N(a)") {
  CHECK(count_N(I(2, 5)) == 1);
  CHECK(count_N(I(4, 5)) == 2);
  CHECK(count_N(I(3, 2)) == 2);
  CHECK(count_N(I(6, 5)) == 4);
  CHECK(count_N(I(26, 5)) == 20);
  for (auto [a, p] : std::vector<std::pair<long, Prime>>{{2, 5}, {4, 5}, {3, 2}, {5, 2}, {7, 3}, {6, 5}, {3, 7}, {17, 2}}) {
    auto x = I(a, p);
    CHECK(count_N(x) == count_N_formula(x));
    for (long i = 0; i <= 4; ++i) CHECK(count_orbits_bruteforce(x, i, i + 7) == count_N(x));
    CHECK(oracle::mult_cycles(a, static_cast<std::int64_t>(p), 7) == count_N(x).get_si());
  }
  CHECK_THROWS_AS(count_N(I(-1, 5)), DomainError);
}

TEST_CASE("exponents") {
  auto e = multiplier_exponent(I(2, 5), I(4, 5));
  CHECK(e.alpha == mpq_class(1, 2));
  CHECK_FALSE(e.swapped);
  auto s = multiplier_exponent(I(4, 5), I(2, 5));
  CHECK(s.alpha == mpq_class(1, 2));
  CHECK(s.swapped);
  CHECK(multiplier_exponent(I(3, 2), I(3, 2)).alpha == 1);

  CHECK(contracting_exponent(I(5, 5), I(5, 5)) == 1);
  CHECK(contracting_exponent(I(25, 5), I(5, 5)) == 2);
  CHECK(contracting_exponent(I(2, 2), I(9, 3)) == mpq_class(1, 2));
  CHECK_THROWS_AS(contracting_exponent(I(1, 5), I(5, 5)), DomainError);
  CHECK(expanding_exponent(PadicNumber::from_rational(mpq_class(1, 4), 2, 10),
                           PadicNumber::from_rational(mpq_class(1, 3), 3, 10)) == 2);
}

TEST_CASE("power_zp and discrete_log") {
  // Integer exponents agree with repeated multiplication.
  for (auto [a, p] : std::vector<std::pair<long, Prime>>{{6, 5}, {3, 2}, {4, 3}, {5, 2}}) {
    auto x = I(a, p);
    for (long n = 0; n < 12; ++n) CHECK(power_zp(x, I(n, p)).congruent(x.pow(n)));
    CHECK(power_zp(x, I(-1, p)).congruent(x.pow(-1)));
  }
  CHECK_THROWS_AS(power_zp(I(2, 5), I(3, 5)), DomainError);

  std::mt19937_64 rng(4);
  for (auto [a, p] : std::vector<std::pair<long, Prime>>{{6, 5}, {3, 2}, {4, 3}, {5, 2}, {8, 7}}) {
    auto x = I(a, p);
    for (int t = 0; t < 30; ++t) {
      auto z = PadicNumber::random_unit_scaled(p, static_cast<long>(rng() % 3), 30, rng);
      auto b = power_zp(x, z);
      auto back = discrete_log(x, b);
      REQUIRE(back);
      CHECK(power_zp(x, *back).congruent(b));
    }
  }
  // 2 is not a power of 6 in Z5 (2 is not 1 mod 5).
  CHECK_FALSE(discrete_log(I(6, 5), I(2, 5)).has_value());
  // -1 is not a power of 5 in Z2 (powers of 5 are 1 mod 4).
  CHECK_FALSE(discrete_log(I(5, 2), I(-1, 2)).has_value());
}
