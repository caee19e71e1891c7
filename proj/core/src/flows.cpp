#include "padyn/flows.hpp"

#include <algorithm>
#include <limits>

namespace padyn {

FlowMap::FlowMap(Prime p_, long m_, PadicNumber a_) : p(p_), m(m_), a(std::move(a_)) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (m < 1) throw DomainError("flow order m must be at least 1");
  if (a.prime() != p) throw DomainError("coefficient over the wrong prime");
  if (a.is_zero()) throw DomainError("flow coefficient a must be nonzero");
  if (a.valuation() < 0) throw DomainError("flow coefficient must satisfy |a| <= 1");
}

static mpz_class binom(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// With w0 = a x^m, the root of 1 - m z w0 near 1 - z w0 exists when the
// binomial tail of (1 - w)^m beyond the linear term is small enough.
bool FlowMap::domain_ok(long vx) const {
  if (vx < 1) return false;
  if (m == 1) return true;
  const long vm = ord_p(m, p);
  const long vw = a.valuation() + m * vx;
  if (vw < vm) return false;
  long e = std::numeric_limits<long>::max();
  for (long j = 2; j <= m; ++j) e = std::min(e, ord_p(binom(m, j), p) + j * vw);
  return e > 2 * vm && e - vm > vw;
}

long FlowMap::first_circle() const {
  for (long i = 1;; ++i)
    if (domain_ok(i)) return i;
}

PerturbedMap::PerturbedMap(Prime p, long m, PadicNumber a, PadicNumber b_)
    : flow(p, m, std::move(a)), b(std::move(b_)) {
  if (b.prime() != p) throw DomainError("coefficient over the wrong prime");
}

PadicNumber PerturbedMap::operator()(const PadicNumber& x) const {
  PadicNumber xm = x.pow(flow.m);
  PadicNumber xm1 = xm * x;
  return x + flow.a * xm1 + b * xm1 * xm;
}

static PadicNumber exact_int(long n, Prime p, long precision) {
  return PadicNumber::from_integer(n, p, std::max(precision, 1L));
}

PadicNumber flow_iterate(const FlowMap& F, const PadicNumber& z, const PadicNumber& x) {
  if (x.prime() != F.p || z.prime() != F.p) throw DomainError("operands over the wrong prime");
  if (x.is_zero()) return x;
  if (!F.domain_ok(x.valuation()))
    throw DomainError("x with valuation " + std::to_string(x.valuation()) +
                      " is outside the flow's Hensel domain");
  if (z.is_zero()) return x;
  if (z.valuation() < 0) throw DomainError("iteration time must satisfy |z| <= 1");
  const PadicNumber w = z * F.a * x.pow(F.m);
  const long need = *w.absolute_precision() + ord_p(F.m, F.p) + 1;
  const PadicNumber one = exact_int(1, F.p, need);
  const PadicNumber s = one - exact_int(F.m, F.p, need) * w;
  if (F.m == 1) return x / s;
  const PadicNumber anchor = one - w;
  return x / hensel_root(s, F.m, anchor);
}

PadicNumber flow_eval(const FlowMap& F, const PadicNumber& x) {
  return flow_iterate(F, exact_int(1, F.p, x.precision() + 1), x);
}

std::optional<PadicNumber> flow_time(const FlowMap& F, const PadicNumber& x, const PadicNumber& y) {
  if (x.is_zero() || y.is_zero()) throw DomainError("flow_time needs nonzero points");
  const PadicNumber xm = x.pow(F.m), ym = y.pow(F.m);
  const PadicNumber num = ym - xm;
  const PadicNumber den = F.a * exact_int(F.m, F.p, x.precision() + 1) * xm * ym;
  PadicNumber z = num / den;
  if (z.is_zero()) {
    if (*z.absolute_precision() < 0)
      throw PrecisionExhausted("orbit membership undetermined at this precision");
    return z;
  }
  if (z.valuation() < 0) return std::nullopt;
  return z;
}

bool orbit_contains(const FlowMap& F, const PadicNumber& x, const PadicNumber& y) {
  if (x.is_zero()) throw DomainError("orbit_contains needs x != 0");
  const long bound = F.a.valuation() + (F.m + 1) * x.valuation();
  const PadicNumber d = y - x;
  if (d.is_zero()) {
    if (d.absolute_precision() && *d.absolute_precision() < bound)
      throw PrecisionExhausted("orbit membership undetermined at this precision");
    return true;
  }
  return d.valuation() >= bound;
}

Norm deviation_norm(const FlowMap& F, const PadicNumber& z, const PadicNumber& x) {
  const PadicNumber y = flow_iterate(F, z, x);
  const PadicNumber d = y - x;
  std::optional<long> expected;
  if (!z.is_zero() && !x.is_zero()) expected = F.a.valuation() + z.valuation() + (F.m + 1) * x.valuation();
  std::optional<long> got = d.valuation_if_nonzero();
  if (d.is_zero() && expected && d.absolute_precision() && *d.absolute_precision() <= *expected)
    throw PrecisionExhausted("deviation below working precision");
  if (got != expected) throw Error("norm law |f^z(x) - x| = |a z x^{m+1}| violated");
  return norm_from_valuation(F.p, got);
}

std::vector<Norm> return_deviation(const FlowMap& F, const PadicNumber& x, long k, Prime q, long n_max) {
  if (!is_prime(q)) throw DomainError("q must be prime");
  std::vector<Norm> out;
  mpz_class z = k;
  const long t = x.precision() + 1;
  for (long n = 0; n <= n_max; ++n) {
    out.push_back(deviation_norm(F, PadicNumber::from_integer(z, F.p, t), x));
    z *= q;
  }
  return out;
}

}  // namespace padyn
