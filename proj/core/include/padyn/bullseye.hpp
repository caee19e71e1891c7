#pragma once
#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace padyn {

// Ring sizes x(n), n >= 1. Rings before n0 are empty.
struct RingProfile {
  enum class Kind { explicit_list, constant, geometric };
  Kind kind = Kind::constant;
  std::vector<mpz_class> counts;  // explicit_list, ring 1 first
  mpq_class x0 = 1;               // constant value, or geometric prefactor
  long r = 0;
  long lambda = 0;
  long n0 = 1;

  static RingProfile constant(const mpz_class& c, long n0 = 1);
  // x(n) = x0 r^{lambda n}
  static RingProfile geometric(const mpq_class& x0, long r, long lambda, long n0 = 1);
  static RingProfile explicit_counts(std::vector<mpz_class> counts);

  mpz_class count(long n) const;
  bool symbolic() const { return kind != Kind::explicit_list; }
  std::string to_literal() const;
  static RingProfile parse(const std::string& literal);
};

// Prefix sums S(n) = x(1) + ... + x(n), extended on demand.
class Cumulative {
 public:
  explicit Cumulative(RingProfile profile);
  const mpz_class& at(long n);
  // Ring holding the point with global index g (0-based).
  long ring_of(const mpz_class& g);
  // Smallest M >= 0 with S(M) >= target.
  long first_reaching(const mpz_class& target);
  const RingProfile& profile() const { return profile_; }

 private:
  RingProfile profile_;
  std::vector<mpz_class> sums_;
  mpz_class scratch_;
};

long mu(const RingProfile& X, const RingProfile& Y, long N);
std::vector<long> mu_table(const RingProfile& X, const RingProfile& Y, long n_max);

struct RingPoint {
  long ring = 0;
  mpz_class index = 0;
  bool operator==(const RingPoint& o) const { return ring == o.ring && index == o.index; }
};

// The order-preserving bijection between points of X and Y, where points are
// ordered by (ring, index). Built for source rings 1..depth.
class RingMatching {
 public:
  RingMatching(const RingProfile& X, const RingProfile& Y, long depth);

  long depth() const { return depth_; }
  const RingProfile& source() const { return X_; }
  const RingProfile& target() const { return Y_; }
  RingPoint image(const RingPoint& x) const;
  RingPoint preimage(const RingPoint& y) const;
  long min_target_ring(long N) const;
  long max_target_ring(long N) const;
  // Deepest target ring touched, and how many of its points are assigned.
  long target_depth() const { return target_depth_; }
  mpz_class fill_level(long M) const;
  const mpz_class& source_prefix(long N) const { return sx_.at(static_cast<std::size_t>(N)); }
  mpz_class target_prefix(long M) const;

 private:
  RingProfile X_, Y_;
  long depth_;
  long target_depth_ = 0;
  std::vector<mpz_class> sx_;
  mutable Cumulative cy_;  // filled to target_depth_ on construction, so lookups never grow it
};

// First N at which the images of rings 1..N-1 fail the sandwich
// rings 1..mu(N)-1 <= image <= rings 1..mu(N); nullopt when it holds to depth+1.
std::optional<long> sandwich_failure(const RingMatching& beta);

struct AlphaCheck {
  bool holds = true;
  mpq_class k;                     // min over rings of M - alpha N
  std::vector<RingPoint> witness;  // successive new minima in the deep half when violated
  double slope = 0;                // fitted slope of M - alpha N over the deep half
};
// Table of (N, smallest image ring of ring N).
using RingTable = std::vector<std::pair<long, long>>;
RingTable min_ring_table(const RingMatching& beta);
RingTable compose_tables(const RingMatching& first, const RingMatching& second);
AlphaCheck alpha_check(const RingTable& table, const mpq_class& alpha);
AlphaCheck alpha_check(const RingMatching& beta, const mpq_class& alpha);

struct ExponentPair {
  enum class Kind { iso, no_alpha, unknown };
  Kind kind = Kind::unknown;
  mpq_class alpha1, alpha2;
  std::string basis;
  std::string sharpness;
};
std::string to_string(ExponentPair::Kind k);
ExponentPair exponent_pair(const RingProfile& X, const RingProfile& Y);

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace padyn
