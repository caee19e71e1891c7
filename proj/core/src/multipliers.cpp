#include "padyn/multipliers.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace padyn {

MultiplierMap::MultiplierMap(Prime p_, PadicNumber a_) : p(p_), a(std::move(a_)) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (a.prime() != p) throw DomainError("multiplier over the wrong prime");
  if (a.is_zero()) throw DomainError("multiplier must be nonzero");
}

std::string to_string(MultiplierKind k) {
  switch (k) {
    case MultiplierKind::contracting: return "contracting";
    case MultiplierKind::expanding: return "expanding";
    case MultiplierKind::indifferent_rational: return "indifferent_rational";
    case MultiplierKind::indifferent_irrational: return "indifferent_irrational";
  }
  return "?";
}

static mpz_class mod_pos(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

static mpz_class powm(const mpz_class& b, const mpz_class& e, const mpz_class& m) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

MultiplierClass classify(const PadicNumber& a, long precision) {
  if (a.is_zero()) throw DomainError("multiplier must be nonzero");
  MultiplierClass c{};
  if (a.valuation() > 0) {
    c.kind = MultiplierKind::contracting;
    return c;
  }
  if (a.valuation() < 0) {
    c.kind = MultiplierKind::expanding;
    return c;
  }
  const Prime p = a.prime();
  const long t = std::min(precision, a.precision());
  c.certified_to = t;
  const mpz_class mod = pow_p(p, t);
  const long w = p == 2 ? 2 : static_cast<long>(p - 1);
  const mpz_class u = a.unit();
  if (powm(u, w, mod) != 1) {
    c.kind = MultiplierKind::indifferent_irrational;
    return c;
  }
  c.kind = MultiplierKind::indifferent_rational;
  for (long d = 1; d <= w; ++d) {
    if (w % d == 0 && powm(u, d, mod) == 1) {
      c.order = d;
      break;
    }
  }
  return c;
}

static void require_irrational(const PadicNumber& a) {
  auto c = classify(a, a.is_zero() ? 1 : a.precision());
  if (c.kind != MultiplierKind::indifferent_irrational)
    throw DomainError("multiplier is " + to_string(c.kind) + ", expected indifferent irrational");
}

bool OrbitClosure::contains(const PadicNumber& u) const {
  if (u.is_zero() || u.valuation() != 0) return false;
  return std::binary_search(subgroup.begin(), subgroup.end(), u.residue(level));
}

mpz_class OrbitClosure::canonical(const mpz_class& u) const {
  const mpz_class mod = pow_p(p, level);
  mpz_class best = -1;
  for (const auto& h : subgroup) {
    mpz_class r = mod_pos(u * h, mod);
    if (best < 0 || r < best) best = r;
  }
  return best;
}

std::vector<mpz_class> OrbitClosure::coset_reps() const {
  const mpz_class mod = pow_p(p, level);
  std::vector<mpz_class> reps;
  std::set<mpz_class> seen;
  for (mpz_class u = 1; u < mod; ++u) {
    if (mpz_divisible_ui_p(u.get_mpz_t(), p)) continue;
    if (seen.count(u)) continue;
    reps.push_back(u);
    for (const auto& h : subgroup) seen.insert(mod_pos(u * h, mod));
  }
  return reps;
}

OrbitClosure orbit_closure(const PadicNumber& a) {
  require_irrational(a);
  const Prime p = a.prime();
  OrbitClosure c;
  c.p = p;
  const PadicNumber one = PadicNumber::from_integer(1, p, a.precision());
  if (p == 2) {
    if (a.residue(2) == 1) {
      c.n = (a - one).valuation();
      c.level = c.n;
      c.torsion = 1;
      c.description = "1 + P^" + std::to_string(c.n);
    } else {
      c.n = (a + one).valuation();
      c.level = c.n + 1;
      c.torsion = 2;
      c.description = "(1 + P^" + std::to_string(c.n + 1) + ") u (a + P^" + std::to_string(c.n + 1) + ")";
    }
  } else {
    const PadicNumber zeta = teichmuller(a);
    c.n = (a / zeta - one).valuation();
    c.level = c.n;
    c.torsion = classify(zeta, zeta.precision()).order;
    c.description = "(1 + P^" + std::to_string(c.n) + ") x <zeta_" + std::to_string(c.torsion) + ">";
  }
  const mpz_class mod = pow_p(p, c.level);
  const mpz_class g = a.residue(c.level);
  std::set<mpz_class> h;
  mpz_class x = 1;
  do {
    h.insert(x);
    x = mod_pos(x * g, mod);
  } while (x != 1);
  c.subgroup.assign(h.begin(), h.end());
  return c;
}

static mpz_class euler_phi_pk(Prime p, long k) { return pow_p(p, k - 1) * (p - 1); }

mpz_class count_N(const PadicNumber& a) {
  OrbitClosure c = orbit_closure(a);
  return euler_phi_pk(c.p, c.level) / static_cast<unsigned long>(c.subgroup.size());
}

mpz_class count_N_formula(const PadicNumber& a) {
  OrbitClosure c = orbit_closure(a);
  if (c.p == 2) return pow_p(2, c.n - 1);
  return euler_phi_pk(c.p, c.n) / c.torsion;
}

mpz_class count_orbits_bruteforce(const PadicNumber& a, long circle, long T) {
  if (a.is_zero() || a.valuation() != 0) throw DomainError("brute force needs a unit multiplier");
  const Prime p = a.prime();
  const long e = T - circle;
  if (e < 1) throw DomainError("modulus must exceed the circle");
  const mpz_class modz = pow_p(p, e);
  if (mpz_sizeinbase(modz.get_mpz_t(), 2) > 40) throw CapExceeded("brute-force modulus too large");
  const std::uint64_t mod = modz.get_ui();
  const std::uint64_t g = a.residue(e).get_ui();
  // Points p^i u on the circle correspond to units u mod p^{T-i}; a acts on u.
  std::vector<bool> seen(mod, false);
  mpz_class orbits = 0;
  for (std::uint64_t u = 1; u < mod; ++u) {
    if (u % p == 0 || seen[u]) continue;
    ++orbits;
    std::uint64_t x = u;
    while (!seen[x]) {
      seen[x] = true;
      x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * g) % mod);
    }
  }
  return orbits;
}

std::vector<mpz_class> closure_bruteforce(const PadicNumber& a, long T) {
  const Prime p = a.prime();
  const mpz_class mod = pow_p(p, T), g = a.residue(T);
  std::set<mpz_class> s;
  mpz_class x = 1;
  do {
    s.insert(x);
    x = mod_pos(x * g, mod);
  } while (x != 1);
  return {s.begin(), s.end()};
}

DirectedExponent multiplier_exponent(const PadicNumber& a, const PadicNumber& a2) {
  mpz_class n1 = count_N(a), n2 = count_N(a2);
  DirectedExponent d;
  if (n1 > n2) {
    std::swap(n1, n2);
    d.swapped = true;
  }
  d.alpha = mpq_class(n1, n2);
  d.alpha.canonicalize();
  return d;
}

mpq_class contracting_exponent(const PadicNumber& pi1, const PadicNumber& pi2) {
  if (pi1.is_zero() || pi2.is_zero() || pi1.valuation() <= 0 || pi2.valuation() <= 0)
    throw DomainError("contracting_exponent needs |pi1| < 1 and |pi2| < 1");
  mpq_class r(pi1.valuation(), pi2.valuation());
  r.canonicalize();
  return r;
}

mpq_class expanding_exponent(const PadicNumber& pi1, const PadicNumber& pi2) {
  if (pi1.is_zero() || pi2.is_zero() || pi1.valuation() >= 0 || pi2.valuation() >= 0)
    throw DomainError("expanding_exponent needs |pi1| > 1 and |pi2| > 1");
  return contracting_exponent(pi1.pow(-1), pi2.pow(-1));
}

static long continuity_shift(const PadicNumber& a) {
  const Prime p = a.prime();
  if (a.is_zero() || a.valuation() != 0) throw DomainError("a^z needs a unit base");
  if (p != 2 && a.residue(1) != 1)
    throw DomainError("z -> a^z is not continuous on Z_p: a has a nontrivial root-of-unity part");
  const PadicNumber d = a - PadicNumber::from_integer(1, p, a.precision());
  return d.is_zero() ? a.precision() : d.valuation();
}

PadicNumber power_zp(const PadicNumber& a, const PadicNumber& z) {
  const Prime p = a.prime();
  if (z.prime() != p) throw DomainError("exponent over the wrong prime");
  const long shift = continuity_shift(a);
  if (!z.is_zero() && z.valuation() < 0) throw DomainError("exponent must lie in Z_p");
  long t = a.precision();
  if (auto az = z.absolute_precision()) t = std::min(t, *az + shift);
  if (t < 1) throw PrecisionExhausted("exponent known to too few digits");
  // a^{p^j} = 1 mod p^{j+shift}, so only z mod p^{t-shift} matters.
  const mpz_class mod = pow_p(p, t);
  const mpz_class e = z.is_zero() ? mpz_class(0) : z.residue(std::max(t - shift, 0L));
  return PadicNumber::from_parts(p, 0, powm(a.unit(), e, mod), t);
}

std::optional<PadicNumber> discrete_log(const PadicNumber& b, const PadicNumber& w) {
  const Prime p = b.prime();
  const long shift = continuity_shift(b);
  if (w.is_zero() || w.valuation() != 0) return std::nullopt;
  const long t = std::min(b.precision(), w.precision());
  const long digits = t - shift;
  if (digits < 1) throw PrecisionExhausted("too few digits for a discrete logarithm");
  const mpz_class mod = pow_p(p, t);
  const mpz_class bu = b.unit(), wu = mod_pos(w.unit(), mod);
  auto agreement = [&](const mpz_class& z) {
    mpz_class d = mod_pos(powm(bu, z, mod) - wu, mod);
    return d == 0 ? t : ord_p(d, p);
  };
  // Each correct digit strictly raises ord(b^z - w); a wrong one does not.
  mpz_class z = 0, place = 1;
  long best = agreement(z);
  for (long j = 0; j < digits && best < t; ++j) {
    mpz_class best_z = z;
    for (unsigned long d = 1; d < p; ++d) {
      mpz_class cand = z + place * d;
      long ag = agreement(cand);
      if (ag > best) {
        best = ag;
        best_z = cand;
      }
    }
    z = best_z;
    place *= p;
  }
  if (best < t) return std::nullopt;
  if (z == 0) return PadicNumber::zero(p, digits);
  const long v = ord_p(z, p);
  if (v >= digits) return PadicNumber::zero(p, digits);
  return PadicNumber::from_parts(p, v, z / pow_p(p, v), digits - v);
}

}  // namespace padyn
