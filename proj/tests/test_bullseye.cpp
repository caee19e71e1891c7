#include <doctest.h>

#include <cmath>

#include "padyn/bullseye.hpp"
#include "padyn/errors.hpp"

using namespace padyn;

static RingProfile P(const std::string& s) { return RingProfile::parse(s); }

// mu by direct summation, kept apart from Cumulative.
static long mu_direct(const RingProfile& X, const RingProfile& Y, long N) {
  mpz_class sx = 0;
  for (long n = 1; n < N; ++n) sx += X.count(n);
  mpz_class sy = 0;
  long M = 0;
  while (sy < sx) sy += Y.count(++M);
  return M;
}

TEST_CASE("profiles") {
  auto g = P("geom(1/2,2,1)");
  CHECK(g.count(1) == 1);
  CHECK(g.count(3) == 4);
  CHECK(g.to_literal() == "geom(1/2,2,1)");
  CHECK(P("const(3,2)").count(1) == 0);
  CHECK(P("const(3,2)").count(2) == 3);
  CHECK(P("list(1,0,4)").count(3) == 4);
  CHECK_THROWS_AS(P("list(1,2)").count(3), CapExceeded);
  CHECK_THROWS_AS(P("geom(1,1,1)"), DomainError);
  CHECK_THROWS_AS(P("cone(1)"), ParseError);
  CHECK_THROWS_AS(P("geom(1/3,2,1)"), DomainError);
}

TEST_CASE("mu") {
  CHECK(mu(P("const(3)"), P("const(2)"), 5) == 6);
  for (long N = 1; N <= 40; ++N) {
    const long closed = (3 * (N - 1) + 1) / 2;
    CHECK(mu(P("const(3)"), P("const(2)"), N) == closed);
    long self = mu(P("geom(1,2,1)"), P("geom(1,2,1)"), N);
    CHECK((self == N - 1 || self == N));
  }
  auto X = P("geom(1,2,2)"), Y = P("geom(1,2,1)");
  auto table = mu_table(X, Y, 60);
  for (long N = 2; N <= 60; ++N) {
    CHECK(table[N - 1] == mu_direct(X, Y, N));
    CHECK(table[N - 1] >= N);
    CHECK(table[N - 1] <= 2 * N + 2);
  }
  // The fill sandwich.
  for (auto [x, y] : std::vector<std::pair<std::string, std::string>>{
           {"const(3)", "const(2)"}, {"geom(1,2,2)", "geom(1,2,1)"}, {"const(1)", "geom(4,5,2)"}, {"list(0,1,2,3,4,5,6,7,8,9)", "const(7)"}}) {
    auto px = P(x), py = P(y);
    for (long N = 1; N <= 10; ++N) {
      long M = mu(px, py, N);
      mpz_class sx = 0, sy_below = 0, sy_upto = 0;
      for (long n = 1; n < N; ++n) sx += px.count(n);
      for (long n = 1; n < M; ++n) sy_below += py.count(n);
      sy_upto = sy_below + (M >= 1 ? py.count(M) : mpz_class(0));
      CHECK(sy_below <= sx);
      CHECK(sx <= sy_upto);
    }
  }
}

TEST_CASE("matching structure") {
  RingMatching id(P("const(1)"), P("const(1)"), 30);
  for (long N = 1; N <= 30; ++N) CHECK(id.image({N, 0}) == RingPoint{N, 0});

  RingMatching two(P("const(2)"), P("const(1)"), 50);
  for (long N = 1; N <= 50; ++N) {
    CHECK(two.min_target_ring(N) == 2 * N - 1);
    CHECK(two.max_target_ring(N) == 2 * N);
  }

  RingMatching flows(P("geom(1/2,2,1)"), P("geom(1/4,2,2)"), 40);
  for (long N = 4; N <= 40; ++N) CHECK(std::abs(flows.min_target_ring(N) - N / 2.0) <= 1.5);

  // Bijective onto the filled prefix, and prefix-stable.
  RingMatching a(P("geom(1,3,1)"), P("const(5)"), 8), b(P("geom(1,3,1)"), P("const(5)"), 9);
  for (long N = 1; N <= 8; ++N)
    for (mpz_class i = 0; i < a.source().count(N); ++i) {
      auto y = a.image({N, i});
      CHECK(y == b.image({N, i}));
      CHECK(a.preimage(y) == RingPoint{N, i});
    }
  CHECK(a.fill_level(1) == 5);
  CHECK_THROWS_AS(a.image({9, 0}), DomainError);
}

TEST_CASE("sandwich to depth 200") {
  for (auto [x, y] : std::vector<std::pair<std::string, std::string>>{
           {"const(3)", "const(2)"}, {"const(1)", "const(1)"}, {"geom(1,2,1)", "geom(1,2,2)"},
           {"geom(1,2,2)", "geom(1,2,1)"}, {"const(2)", "geom(1,2,1)"}, {"const(2,3)", "const(5)"}}) {
    CAPTURE(x);
    CAPTURE(y);
    CHECK_FALSE(sandwich_failure(RingMatching(P(x), P(y), 200)).has_value());
  }
  // Geometric into constant: target ring indices grow like 3^N, beyond a machine word at depth 200.
  CHECK_FALSE(sandwich_failure(RingMatching(P("geom(1,3,1)"), P("const(4)"), 30)).has_value());
  CHECK_THROWS_AS(RingMatching(P("geom(1,3,1)"), P("const(4)"), 200), CapExceeded);
}

TEST_CASE("alpha_check") {
  RingMatching id(P("const(1)"), P("const(1)"), 100);
  auto h = alpha_check(id, 1);
  CHECK(h.holds);
  CHECK(h.k >= -1);

  RingMatching flows(P("geom(1/2,2,1)"), P("geom(1/4,2,2)"), 100);
  CHECK(alpha_check(flows, mpq_class(1, 2)).holds);
  auto v = alpha_check(flows, mpq_class(3, 5));
  CHECK_FALSE(v.holds);
  CHECK_FALSE(v.witness.empty());

  // Shallow tables: a 0.1 excess over twelve rings is still detected.
  for (auto [x, y, num, den] : {std::tuple{"geom(4/5,5,1)", "geom(4/5,5,2)", 1, 2},
                                std::tuple{"geom(4/5,5,1)", "geom(4/5,5,3)", 1, 3},
                                std::tuple{"geom(4/5,5,2)", "geom(4/5,5,3)", 2, 3}}) {
    RingMatching shallow(P(x), P(y), 12);
    CHECK(alpha_check(shallow, mpq_class(num, den)).holds);
    CHECK_FALSE(alpha_check(shallow, mpq_class(num, den) + mpq_class(1, 10)).holds);
  }

  // Constants: exponent x0/y0 is sharp.
  RingMatching c(P("const(3)"), P("const(2)"), 200);
  CHECK(alpha_check(c, mpq_class(3, 2)).holds);
  for (mpq_class extra : {mpq_class(1, 19), mpq_class(1, 10), mpq_class(1, 2)})
    CHECK_FALSE(alpha_check(c, mpq_class(3, 2) + extra).holds);

  // Composition multiplies exponents.
  RingMatching f(P("const(1)"), P("const(2)"), 200), g(P("const(2)"), P("const(6)"), 200);
  CHECK(alpha_check(compose_tables(f, g), mpq_class(1, 6)).holds);
}

TEST_CASE("exponent_pair table") {
  struct Row {
    const char* x;
    const char* y;
    ExponentPair::Kind kind;
    mpq_class a1, a2;
  };
  using K = ExponentPair::Kind;
  std::vector<Row> rows = {
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
  for (auto& r : rows) {
    CAPTURE(r.x);
    CAPTURE(r.y);
    auto e = exponent_pair(P(r.x), P(r.y));
    CHECK(e.kind == r.kind);
    if (r.kind == K::iso) {
      CHECK(e.alpha1 == r.a1);
      CHECK(e.alpha2 == r.a2);
    }
    CHECK_FALSE(e.basis.empty());
  }
}
