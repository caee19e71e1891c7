#include "padyn/padic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace padyn {

bool is_prime(Prime p) {
  if (p < 2) return false;
  for (Prime d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

mpz_class pow_p(Prime p, long e) {
  if (e < 0) throw DomainError("negative exponent in pow_p");
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
  return r;
}

long ord_p(const mpz_class& n, Prime p) {
  if (n == 0) throw DomainError("ord_p of zero");
  mpz_class q;
  mpz_class pp = p;
  return static_cast<long>(mpz_remove(q.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

long ord_p(long n, Prime p) { return ord_p(mpz_class(n), p); }

static mpz_class mod_pos(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

static mpz_class strip_p(const mpz_class& n, Prime p, long* count) {
  mpz_class q;
  mpz_class pp = p;
  *count = static_cast<long>(mpz_remove(q.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
  return q;
}

PadicNumber PadicNumber::zero(Prime p, std::optional<long> abs_precision) {
  PadicNumber z;
  z.p_ = p;
  z.zero_ = true;
  z.zero_abs_ = abs_precision;
  return z;
}

PadicNumber PadicNumber::from_parts(Prime p, long valuation, const mpz_class& unit, long precision) {
  if (precision < 1) throw PrecisionExhausted("relative precision must be at least one digit");
  PadicNumber x;
  x.p_ = p;
  x.zero_ = false;
  x.val_ = valuation;
  x.prec_ = precision;
  x.unit_ = mod_pos(unit, pow_p(p, precision));
  if (mpz_divisible_ui_p(x.unit_.get_mpz_t(), p)) throw DomainError("unit part divisible by p");
  return x;
}

PadicNumber PadicNumber::from_integer(const mpz_class& n, Prime p, long precision) {
  if (n == 0) return zero(p);
  long v;
  mpz_class u = strip_p(n, p, &v);
  return from_parts(p, v, u, precision);
}

PadicNumber PadicNumber::from_rational(const mpq_class& q, Prime p, long precision) {
  if (q == 0) return zero(p);
  long vn, vd;
  mpz_class num = strip_p(q.get_num(), p, &vn);
  mpz_class den = strip_p(q.get_den(), p, &vd);
  mpz_class mod = pow_p(p, precision);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  return from_parts(p, vn - vd, num * inv, precision);
}

PadicNumber PadicNumber::random_unit_scaled(Prime p, long valuation, long precision,
                                            std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned long> lead(1, p - 1), digit(0, p - 1);
  mpz_class u = lead(rng);
  mpz_class place = p;
  for (long i = 1; i < precision; ++i) {
    u += place * digit(rng);
    place *= p;
  }
  return from_parts(p, valuation, u, precision);
}

long PadicNumber::valuation() const {
  if (zero_) throw DomainError("valuation of zero");
  return val_;
}

std::optional<long> PadicNumber::valuation_if_nonzero() const {
  if (zero_) return std::nullopt;
  return val_;
}

std::optional<long> PadicNumber::absolute_precision() const {
  if (zero_) return zero_abs_;
  return val_ + prec_;
}

mpz_class PadicNumber::residue(long k) const {
  auto abs = absolute_precision();
  if (abs && k > *abs)
    throw PrecisionExhausted("residue mod p^" + std::to_string(k) + " needs more than " +
                             std::to_string(*abs) + " known digits");
  if (zero_ || k <= 0) return 0;
  if (val_ < 0) throw DomainError("residue of a non-integral number");
  if (val_ >= k) return 0;
  return mod_pos(unit_ * pow_p(p_, val_), pow_p(p_, k));
}

std::vector<unsigned long> PadicNumber::digits() const {
  std::vector<unsigned long> d;
  if (zero_) return {0};
  mpz_class u = unit_;
  for (long i = 0; i < prec_; ++i) {
    d.push_back(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), p_));
  }
  return d;
}

PadicNumber PadicNumber::with_precision(long precision) const {
  if (zero_) return *this;
  if (precision > prec_)
    throw PrecisionExhausted("cannot raise precision from " + std::to_string(prec_) + " to " +
                             std::to_string(precision));
  return from_parts(p_, val_, unit_, precision);
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  return from_parts(p_, val_, -unit_, prec_);
}

static void same_prime(const PadicNumber& x, const PadicNumber& y) {
  if (x.prime() != y.prime()) throw DomainError("operands over different primes");
}

static std::optional<long> min_opt(std::optional<long> a, std::optional<long> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
  same_prime(x, y);
  const Prime p = x.p_;
  if (x.zero_ && y.zero_) return PadicNumber::zero(p, min_opt(x.zero_abs_, y.zero_abs_));
  if (x.zero_ || y.zero_) {
    const PadicNumber& nz = x.zero_ ? y : x;
    const PadicNumber& z = x.zero_ ? x : y;
    if (!z.zero_abs_) return nz;
    long a = std::min(nz.val_ + nz.prec_, *z.zero_abs_);
    if (a <= nz.val_) return PadicNumber::zero(p, a);
    return nz.with_precision(a - nz.val_);
  }
  long v = std::min(x.val_, y.val_);
  long a = std::min(x.val_ + x.prec_, y.val_ + y.prec_);
  if (a <= v) return PadicNumber::zero(p, a);
  mpz_class mod = pow_p(p, a - v);
  mpz_class s = 0;
  if (x.val_ - v < a - v) s += x.unit_ * pow_p(p, x.val_ - v);
  if (y.val_ - v < a - v) s += y.unit_ * pow_p(p, y.val_ - v);
  s = mod_pos(s, mod);
  if (s == 0) return PadicNumber::zero(p, a);
  long w;
  mpz_class u = strip_p(s, p, &w);
  return PadicNumber::from_parts(p, v + w, u, a - v - w);
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
  same_prime(x, y);
  const Prime p = x.p_;
  if (x.zero_ || y.zero_) {
    if ((x.zero_ && !x.zero_abs_) || (y.zero_ && !y.zero_abs_)) return PadicNumber::zero(p);
    if (x.zero_ && y.zero_) return PadicNumber::zero(p, *x.zero_abs_ + *y.zero_abs_);
    const PadicNumber& nz = x.zero_ ? y : x;
    const PadicNumber& z = x.zero_ ? x : y;
    return PadicNumber::zero(p, *z.zero_abs_ + nz.val_);
  }
  long t = std::min(x.prec_, y.prec_);
  return PadicNumber::from_parts(p, x.val_ + y.val_, x.unit_ * y.unit_, t);
}

PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
  same_prime(x, y);
  const Prime p = x.p_;
  if (y.zero_) throw DivisionByZero("division by a p-adic zero");
  if (x.zero_) {
    if (!x.zero_abs_) return x;
    return PadicNumber::zero(p, *x.zero_abs_ - y.val_);
  }
  long t = std::min(x.prec_, y.prec_);
  mpz_class mod = pow_p(p, t), inv;
  mpz_invert(inv.get_mpz_t(), y.unit_.get_mpz_t(), mod.get_mpz_t());
  return PadicNumber::from_parts(p, x.val_ - y.val_, x.unit_ * inv, t);
}

PadicNumber PadicNumber::pow(long n) const {
  if (zero_) {
    if (n <= 0) throw DivisionByZero("non-positive power of zero");
    if (!zero_abs_) return *this;
    return zero(p_, *zero_abs_ * n);
  }
  mpz_class mod = pow_p(p_, prec_), r;
  mpz_class e = n < 0 ? -n : n;
  mpz_powm(r.get_mpz_t(), unit_.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  if (n < 0) mpz_invert(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return from_parts(p_, val_ * n, r, prec_);
}

bool PadicNumber::congruent(const PadicNumber& other) const { return (*this - other).is_zero(); }

std::string PadicNumber::to_literal() const {
  std::ostringstream os;
  os << p_ << ':';
  if (zero_) {
    if (zero_abs_)
      os << "O(" << *zero_abs_ << "):0";
    else
      os << "inf:0";
    return os.str();
  }
  os << val_ << ':';
  auto d = digits();
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  return os.str();
}

static long parse_long(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw ParseError("expected an integer, got '" + s + "'");
  return v;
}

PadicNumber PadicNumber::parse(const std::string& literal, std::optional<Prime> p, long precision) {
  auto c1 = literal.find(':');
  if (c1 == std::string::npos) {
    if (!p) throw ParseError("rational literal '" + literal + "' needs a prime");
    mpq_class q;
    if (q.set_str(literal, 10) != 0) throw ParseError("malformed rational '" + literal + "'");
    if (q.get_den() == 0) throw DivisionByZero("zero denominator in '" + literal + "'");
    q.canonicalize();
    return from_rational(q, *p, precision);
  }
  auto c2 = literal.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ParseError("malformed p-adic literal '" + literal + "'");
  long pl = parse_long(literal.substr(0, c1));
  if (pl < 2 || !is_prime(static_cast<Prime>(pl)))
    throw DomainError("'" + literal.substr(0, c1) + "' is not a prime");
  Prime pp = static_cast<Prime>(pl);
  if (p && *p != pp) throw DomainError("literal prime differs from requested prime");
  std::string e = literal.substr(c1 + 1, c2 - c1 - 1);
  std::string body = literal.substr(c2 + 1);
  if (e == "inf") {
    if (body != "0") throw ParseError("exact zero must be written p:inf:0");
    return zero(pp);
  }
  if (e.size() > 3 && e.rfind("O(", 0) == 0 && e.back() == ')')
    return zero(pp, parse_long(e.substr(2, e.size() - 3)));
  long v = parse_long(e);
  std::vector<long> digs;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    long d = parse_long(tok);
    if (d < 0 || d >= pl) throw ParseError("digit " + tok + " out of range for p = " + std::to_string(pl));
    digs.push_back(d);
  }
  if (digs.empty()) throw ParseError("no digits in '" + literal + "'");
  if (digs[0] == 0) throw ParseError("leading digit of the unit must be nonzero");
  mpz_class u = 0;
  for (auto it = digs.rbegin(); it != digs.rend(); ++it) u = u * pl + *it;
  return from_parts(pp, v, u, static_cast<long>(digs.size()));
}

Norm norm_from_valuation(Prime p, std::optional<long> v) {
  Norm n;
  n.valuation = v;
  if (!v) {
    n.value = 0;
  } else if (*v >= 0) {
    n.value = mpq_class(mpz_class(1), pow_p(p, *v));
  } else {
    n.value = mpq_class(pow_p(p, -*v));
  }
  return n;
}

Norm norm_val(const PadicNumber& x) { return norm_from_valuation(x.prime(), x.valuation_if_nonzero()); }

std::string rational_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

PadicNumber hensel_root(const PadicNumber& b, long m, const PadicNumber& anchor) {
  if (m < 1) throw DomainError("root order must be positive");
  if (b.prime() != anchor.prime()) throw DomainError("operands over different primes");
  if (b.is_zero() || b.valuation() != 0) throw DomainError("hensel_root needs a unit radicand");
  if (anchor.is_zero() || anchor.valuation() != 0) throw DomainError("hensel_root needs a unit anchor");
  const Prime p = b.prime();
  const long vm = ord_p(m, p);
  const long t = b.precision();
  if (t - vm < 1) throw PrecisionExhausted("radicand precision too small for an m-th root");
  const mpz_class mod = pow_p(p, t);
  const mpz_class me = m;
  mpz_class alpha = anchor.unit();
  mpz_class r;
  mpz_powm(r.get_mpz_t(), alpha.get_mpz_t(), me.get_mpz_t(), mod.get_mpz_t());
  r = mod_pos(r - b.unit(), mod);
  long e = r == 0 ? t : ord_p(r, p);
  if (e <= 2 * vm)
    throw NoRootError("no " + std::to_string(m) + "-th root near the anchor: anchor^m - b is not 0 mod " +
                      std::to_string(p) + "^" + std::to_string(2 * vm + 1));
  const mpz_class pvm = pow_p(p, vm);
  const mpz_class m_unit = m / pvm;
  const mpz_class me1 = m - 1;
  for (int iter = 0; r != 0; ++iter) {
    if (iter > 256) throw Error("Newton iteration failed to converge");
    mpz_class den, inv;
    mpz_powm(den.get_mpz_t(), alpha.get_mpz_t(), me1.get_mpz_t(), mod.get_mpz_t());
    den = mod_pos(den * m_unit, mod);
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    mpz_class delta = mod_pos((r / pvm) * inv, mod);
    alpha = mod_pos(alpha - delta, mod);
    mpz_powm(r.get_mpz_t(), alpha.get_mpz_t(), me.get_mpz_t(), mod.get_mpz_t());
    r = mod_pos(r - b.unit(), mod);
  }
  return PadicNumber::from_parts(p, 0, alpha, t - vm);
}

PadicNumber mth_root(const PadicNumber& b, long m) {
  if (b.is_zero()) return b;
  const Prime p = b.prime();
  long v = b.valuation();
  if (v % m != 0) throw NoRootError("valuation " + std::to_string(v) + " not divisible by " + std::to_string(m));
  PadicNumber u = PadicNumber::from_parts(p, 0, b.unit(), b.precision());
  const long vm = ord_p(m, p);
  const long k = 2 * vm + 1;
  if (u.precision() < k) throw PrecisionExhausted("radicand precision too small for an m-th root");
  const mpz_class mod = pow_p(p, k);
  const mpz_class target = u.residue(k), me = m;
  for (mpz_class r = 1; r < mod; ++r) {
    if (mpz_divisible_ui_p(r.get_mpz_t(), p)) continue;
    mpz_class rr;
    mpz_powm(rr.get_mpz_t(), r.get_mpz_t(), me.get_mpz_t(), mod.get_mpz_t());
    if (rr == target) {
      PadicNumber root = hensel_root(u, m, PadicNumber::from_parts(p, 0, r, k));
      return PadicNumber::from_parts(p, v / m, root.unit(), root.precision());
    }
  }
  throw NoRootError("no " + std::to_string(m) + "-th root of the unit modulo " + std::to_string(p) + "^" +
                    std::to_string(k));
}

std::vector<PadicNumber> roots_of_unity(long m, Prime p, long precision) {
  if (m < 1) throw DomainError("root order must be positive");
  std::vector<PadicNumber> out;
  if (p == 2) {
    out.push_back(PadicNumber::from_integer(1, p, precision));
    if (m % 2 == 0) out.push_back(PadicNumber::from_integer(-1, p, precision));
    return out;
  }
  const long g = std::gcd(m, static_cast<long>(p - 1));
  const PadicNumber one = PadicNumber::from_integer(1, p, precision);
  const mpz_class ge = g, pm = p;
  for (unsigned long r = 1; r < p; ++r) {
    mpz_class rr, base = r;
    mpz_powm(rr.get_mpz_t(), base.get_mpz_t(), ge.get_mpz_t(), pm.get_mpz_t());
    if (rr == 1) out.push_back(hensel_root(one, g, PadicNumber::from_integer(r, p, 1)));
  }
  return out;
}

PadicNumber teichmuller(const PadicNumber& u) {
  if (u.is_zero() || u.valuation() != 0) throw DomainError("Teichmuller lift needs a unit");
  const Prime p = u.prime();
  if (p == 2) return PadicNumber::from_integer(u.residue(2) == 1 ? 1 : -1, p, u.precision());
  return hensel_root(PadicNumber::from_integer(1, p, u.precision()), static_cast<long>(p - 1), u);
}

long sector_modulus_exponent(long m, Prime p) { return ord_p(m, p) + 1; }

bool Sector::operator==(const Sector& o) const { return m == o.m && zeta.congruent(o.zeta); }

Sector sector_classify(const PadicNumber& x, long m) {
  if (x.is_zero()) throw DomainError("sector of zero");
  const Prime p = x.prime();
  const long e = sector_modulus_exponent(m, p);
  if (x.precision() < e) throw PrecisionExhausted("unit precision too small to determine the sector");
  const mpz_class mod = pow_p(p, e);
  const mpz_class res = mod_pos(x.unit(), mod);
  auto roots = roots_of_unity(m, p, x.precision());
  std::size_t best = 0;
  mpz_class best_res;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    mpz_class r = mod_pos(roots[i].unit() * res, mod);
    if (i == 0 || r < best_res) {
      best_res = r;
      best = i;
    }
  }
  Sector s;
  s.m = m;
  s.zeta = roots[best].pow(-1);
  s.residue = res;
  s.canonical = best_res;
  return s;
}

}  // namespace padyn
