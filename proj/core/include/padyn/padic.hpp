#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "padyn/errors.hpp"

namespace padyn {

using Prime = unsigned long;

bool is_prime(Prime p);
mpz_class pow_p(Prime p, long e);
// Exponent of p in n, n != 0.
long ord_p(const mpz_class& n, Prime p);
long ord_p(long n, Prime p);

// A p-adic number p^v * u with u a unit known modulo p^T.
// Zero is represented by a flag together with an absolute precision:
// the value is known to be divisible by p^A, or exactly zero when A is absent.
class PadicNumber {
 public:
  PadicNumber() = default;

  static PadicNumber zero(Prime p, std::optional<long> abs_precision = std::nullopt);
  static PadicNumber from_integer(const mpz_class& n, Prime p, long precision);
  static PadicNumber from_rational(const mpq_class& q, Prime p, long precision);
  // p^v * unit with unit reduced mod p^precision. unit must be prime to p.
  static PadicNumber from_parts(Prime p, long valuation, const mpz_class& unit, long precision);
  // A random element of p^v Z_p^x with the given relative precision.
  static PadicNumber random_unit_scaled(Prime p, long valuation, long precision, std::mt19937_64& rng);

  Prime prime() const { return p_; }
  bool is_zero() const { return zero_; }
  // Only meaningful when nonzero.
  long valuation() const;
  std::optional<long> valuation_if_nonzero() const;
  const mpz_class& unit() const { return unit_; }
  long precision() const { return prec_; }
  // Digits known: v + T for nonzero, A for an inexact zero, nullopt for exact zero.
  std::optional<long> absolute_precision() const;

  // Integer representative modulo p^k; requires k <= absolute precision.
  mpz_class residue(long k) const;
  // Lowest-order digits of the unit, little-endian.
  std::vector<unsigned long> digits() const;

  PadicNumber with_precision(long precision) const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y);
  PadicNumber pow(long n) const;

  // Equality up to the joint known precision.
  bool congruent(const PadicNumber& other) const;

  std::string to_literal() const;
  static PadicNumber parse(const std::string& literal, std::optional<Prime> p = std::nullopt,
                           long precision = 64);

 private:
  Prime p_ = 2;
  bool zero_ = true;
  long val_ = 0;
  mpz_class unit_ = 0;
  long prec_ = 0;
  std::optional<long> zero_abs_;
};

struct Norm {
  std::optional<long> valuation;  // nullopt for zero
  mpq_class value;                // p^{-valuation}, 0 for zero
};
Norm norm_val(const PadicNumber& x);
Norm norm_from_valuation(Prime p, std::optional<long> v);
std::string rational_string(const mpq_class& q);

// Unique root alpha of alpha^m = b with alpha = anchor mod p^{e-v_p(m)},
// where e = ord(anchor^m - b) must exceed 2 v_p(m).
PadicNumber hensel_root(const PadicNumber& b, long m, const PadicNumber& anchor);
// Some m-th root of the unit b, found from a residue anchor.
PadicNumber mth_root(const PadicNumber& b, long m);
// All m-th roots of unity in Q_p, ascending by residue, each at the given precision.
std::vector<PadicNumber> roots_of_unity(long m, Prime p, long precision);
PadicNumber teichmuller(const PadicNumber& u);

struct Sector {
  long m = 1;
  PadicNumber zeta;
  mpz_class residue;    // u mod p^{v_p(m)+1}
  mpz_class canonical;  // orbit minimum under mu_m
  bool operator==(const Sector& o) const;
};
// Writes the unit part u = zeta * u1 with u1 in the canonical fundamental domain.
Sector sector_classify(const PadicNumber& x, long m);
long sector_modulus_exponent(long m, Prime p);

}  // namespace padyn
