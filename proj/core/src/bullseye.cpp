#include "padyn/bullseye.hpp"

#include <algorithm>
#include <sstream>

#include "padyn/errors.hpp"
#include "padyn/padic.hpp"

namespace padyn {

RingProfile RingProfile::constant(const mpz_class& c, long n0) {
  if (c <= 0) throw DomainError("constant profile needs a positive ring size");
  if (n0 < 1) throw DomainError("profile offset must be at least 1");
  RingProfile r;
  r.kind = Kind::constant;
  r.x0 = c;
  r.n0 = n0;
  return r;
}

RingProfile RingProfile::geometric(const mpq_class& x0, long ratio, long lambda, long n0) {
  if (x0 <= 0) throw DomainError("geometric profile needs x0 > 0");
  if (ratio < 2) throw DomainError("geometric profile needs r >= 2");
  if (lambda < 1) throw DomainError("geometric profile needs lambda >= 1");
  if (n0 < 1) throw DomainError("profile offset must be at least 1");
  RingProfile r;
  r.kind = Kind::geometric;
  r.x0 = x0;
  r.x0.canonicalize();
  r.r = ratio;
  r.lambda = lambda;
  r.n0 = n0;
  r.count(n0);
  return r;
}

RingProfile RingProfile::explicit_counts(std::vector<mpz_class> counts) {
  if (counts.empty()) throw DomainError("explicit profile needs at least one ring");
  for (const auto& c : counts)
    if (c < 0) throw DomainError("ring sizes must be non-negative");
  RingProfile r;
  r.kind = Kind::explicit_list;
  r.counts = std::move(counts);
  r.n0 = 1;
  return r;
}

mpz_class RingProfile::count(long n) const {
  if (n < 1) throw DomainError("rings are indexed from 1");
  switch (kind) {
    case Kind::explicit_list:
      if (static_cast<std::size_t>(n) > counts.size())
        throw CapExceeded("explicit profile has only " + std::to_string(counts.size()) + " rings");
      return counts[static_cast<std::size_t>(n - 1)];
    case Kind::constant:
      return n < n0 ? mpz_class(0) : x0.get_num();
    case Kind::geometric: {
      if (n < n0) return 0;
      mpz_class pw;
      mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(lambda * n));
      mpq_class v = x0 * mpq_class(pw);
      v.canonicalize();
      if (v.get_den() != 1) throw DomainError("geometric profile gives a non-integral ring size at ring " + std::to_string(n));
      return v.get_num();
    }
  }
  return 0;
}

std::string RingProfile::to_literal() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::explicit_list:
      os << "list(";
      for (std::size_t i = 0; i < counts.size(); ++i) os << (i ? "," : "") << counts[i].get_str();
      os << ")";
      break;
    case Kind::constant:
      os << "const(" << rational_string(x0);
      if (n0 != 1) os << "," << n0;
      os << ")";
      break;
    case Kind::geometric:
      os << "geom(" << rational_string(x0) << "," << r << "," << lambda;
      if (n0 != 1) os << "," << n0;
      os << ")";
      break;
  }
  return os.str();
}

static std::vector<std::string> split_args(const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : body) {
    if (c == ' ') continue;
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

static mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) throw ParseError("bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

static long parse_int(const std::string& s) {
  mpq_class q = parse_rational(s);
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) throw ParseError("expected an integer, got '" + s + "'");
  return q.get_num().get_si();
}

RingProfile RingProfile::parse(const std::string& literal) {
  auto open = literal.find('(');
  if (open == std::string::npos || literal.back() != ')') throw ParseError("bad profile literal '" + literal + "'");
  const std::string head = literal.substr(0, open);
  auto args = split_args(literal.substr(open + 1, literal.size() - open - 2));
  if (head == "const") {
    if (args.size() < 1 || args.size() > 2) throw ParseError("const(c[,n0]) expected");
    mpq_class c = parse_rational(args[0]);
    if (c.get_den() != 1) throw ParseError("constant ring size must be an integer");
    return constant(c.get_num(), args.size() == 2 ? parse_int(args[1]) : 1);
  }
  if (head == "geom") {
    if (args.size() < 3 || args.size() > 4) throw ParseError("geom(c,r,lam[,n0]) expected");
    return geometric(parse_rational(args[0]), parse_int(args[1]), parse_int(args[2]),
                     args.size() == 4 ? parse_int(args[3]) : 1);
  }
  if (head == "list") {
    std::vector<mpz_class> counts;
    for (const auto& a : args) counts.emplace_back(parse_int(a));
    return explicit_counts(std::move(counts));
  }
  throw ParseError("unknown profile kind '" + head + "'");
}

Cumulative::Cumulative(RingProfile profile) : profile_(std::move(profile)), sums_{0} {}

// Constant profiles have closed-form prefix sums, so their (possibly astronomically
// many) rings are never materialised.
const mpz_class& Cumulative::at(long n) {
  if (profile_.kind == RingProfile::Kind::constant) {
    scratch_ = n < profile_.n0 ? mpz_class(0) : mpz_class(profile_.x0.get_num() * (n - profile_.n0 + 1));
    return scratch_;
  }
  while (static_cast<long>(sums_.size()) <= n) {
    long next = static_cast<long>(sums_.size());
    sums_.push_back(sums_.back() + profile_.count(next));
  }
  return sums_[static_cast<std::size_t>(n)];
}

long Cumulative::first_reaching(const mpz_class& target) {
  if (profile_.kind == RingProfile::Kind::constant) {
    if (target <= 0) return 0;
    const mpz_class& c = profile_.x0.get_num();
    mpz_class q = (target + c - 1) / c;
    if (!q.fits_slong_p()) throw CapExceeded("ring index overflows");
    return profile_.n0 - 1 + q.get_si();
  }
  while (sums_.back() < target) at(static_cast<long>(sums_.size()));
  return static_cast<long>(std::lower_bound(sums_.begin(), sums_.end(), target) - sums_.begin());
}

long Cumulative::ring_of(const mpz_class& g) { return first_reaching(g + 1); }

long mu(const RingProfile& X, const RingProfile& Y, long N) {
  if (N < 1) throw DomainError("mu is defined for N >= 1");
  Cumulative sx(X), sy(Y);
  return sy.first_reaching(sx.at(N - 1));
}

std::vector<long> mu_table(const RingProfile& X, const RingProfile& Y, long n_max) {
  Cumulative sx(X), sy(Y);
  std::vector<long> out;
  for (long N = 1; N <= n_max; ++N) out.push_back(sy.first_reaching(sx.at(N - 1)));
  return out;
}

RingMatching::RingMatching(const RingProfile& X, const RingProfile& Y, long depth)
    : X_(X), Y_(Y), depth_(depth), cy_(Y) {
  if (depth < 1) throw DomainError("matching depth must be at least 1");
  Cumulative cx(X);
  for (long n = 0; n <= depth; ++n) sx_.push_back(cx.at(n));
  target_depth_ = cy_.first_reaching(sx_.back());
}

static long ring_containing(const std::vector<mpz_class>& s, const mpz_class& g) {
  auto it = std::upper_bound(s.begin(), s.end(), g);
  if (it == s.end()) throw DomainError("point beyond the constructed rings");
  return static_cast<long>(it - s.begin());
}

mpz_class RingMatching::target_prefix(long M) const {
  if (M < 0 || M > target_depth_) throw DomainError("target ring not constructed");
  return cy_.at(M);
}

RingPoint RingMatching::image(const RingPoint& x) const {
  if (x.ring < 1 || x.ring > depth_) throw DomainError("source ring " + std::to_string(x.ring) + " not constructed");
  if (x.index < 0 || sx_[x.ring - 1] + x.index >= sx_[x.ring]) throw DomainError("index outside its ring");
  mpz_class g = sx_[x.ring - 1] + x.index;
  long M = cy_.ring_of(g);
  return {M, g - cy_.at(M - 1)};
}

RingPoint RingMatching::preimage(const RingPoint& y) const {
  if (y.ring < 1 || y.ring > target_depth_) throw DomainError("target ring not constructed");
  const mpz_class lo = cy_.at(y.ring - 1);
  if (y.index < 0 || lo + y.index >= cy_.at(y.ring)) throw DomainError("index outside its ring");
  mpz_class g = lo + y.index;
  if (g >= sx_.back()) throw DomainError("target point not yet matched");
  long N = ring_containing(sx_, g);
  return {N, g - sx_[N - 1]};
}

long RingMatching::min_target_ring(long N) const {
  if (sx_.at(N) == sx_.at(N - 1)) throw DomainError("ring " + std::to_string(N) + " is empty");
  return image({N, 0}).ring;
}

long RingMatching::max_target_ring(long N) const {
  mpz_class size = sx_.at(N) - sx_.at(N - 1);
  if (size == 0) throw DomainError("ring " + std::to_string(N) + " is empty");
  return image({N, size - 1}).ring;
}

mpz_class RingMatching::fill_level(long M) const {
  if (M < 1 || M > target_depth_) return 0;
  const mpz_class lo = cy_.at(M - 1);
  mpz_class hi = std::min(mpz_class(cy_.at(M)), sx_.back());
  return hi > lo ? mpz_class(hi - lo) : mpz_class(0);
}

std::optional<long> sandwich_failure(const RingMatching& beta) {
  const RingProfile& X = beta.source();
  const RingProfile& Y = beta.target();
  auto m = mu_table(X, Y, beta.depth() + 1);
  // Last matched source point before ring N, walking backwards over empty rings.
  for (long N = 1; N <= beta.depth() + 1; ++N) {
    const long muN = m[N - 1];
    long last_ring = N - 1;
    while (last_ring >= 1 && X.count(last_ring) == 0) --last_ring;
    long max_image = 0;
    if (last_ring >= 1) max_image = beta.max_target_ring(last_ring);
    if (max_image > muN) return N;
    // Every point of rings below mu(N) must come from rings below N.
    for (long M = muN - 1; M >= 1; --M) {
      mpz_class y = Y.count(M);
      if (y == 0) continue;
      if (beta.preimage({M, y - 1}).ring >= N) return N;
      break;
    }
  }
  return std::nullopt;
}

RingTable min_ring_table(const RingMatching& beta) {
  RingTable t;
  for (long N = 1; N <= beta.depth(); ++N)
    if (beta.source().count(N) > 0) t.emplace_back(N, beta.min_target_ring(N));
  return t;
}

RingTable compose_tables(const RingMatching& first, const RingMatching& second) {
  RingTable t;
  for (long N = 1; N <= first.depth(); ++N) {
    if (first.source().count(N) == 0) continue;
    RingPoint mid = first.image({N, 0});
    t.emplace_back(N, second.image(mid).ring);
  }
  return t;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

AlphaCheck alpha_check(const RingTable& table, const mpq_class& alpha) {
  AlphaCheck out;
  if (table.empty()) return out;
  const long last = table.back().first;
  std::vector<mpq_class> d;
  for (auto [N, M] : table) d.push_back(mpq_class(M) - alpha * N);
  out.k = *std::min_element(d.begin(), d.end());
  std::optional<mpq_class> shallow_min, deep_min;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (2 * table[i].first > last) {
      xs.push_back(static_cast<double>(table[i].first));
      ys.push_back(d[i].get_d());
      if (!deep_min || d[i] < *deep_min) deep_min = d[i];
    } else if (!shallow_min || d[i] < *shallow_min) {
      shallow_min = d[i];
    }
  }
  out.slope = least_squares_slope(xs, ys);
  // Integer ring indices make M - alpha*N jitter by up to one ring, so ask for a fitted
  // decrease across the deep window of more than half a ring.
  const double window = xs.empty() ? 0.0 : xs.back() - xs.front();
  const double drift = -out.slope * window;
  if (shallow_min && deep_min && drift > 0.6 && *deep_min < *shallow_min) {
    out.holds = false;
    std::optional<mpq_class> running;
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!running || d[i] < *running) {
        running = d[i];
        if (2 * table[i].first > last) out.witness.push_back({table[i].first, 0});
      }
    }
  }
  return out;
}

AlphaCheck alpha_check(const RingMatching& beta, const mpq_class& alpha) {
  return alpha_check(min_ring_table(beta), alpha);
}

std::string to_string(ExponentPair::Kind k) {
  switch (k) {
    case ExponentPair::Kind::iso: return "iso";
    case ExponentPair::Kind::no_alpha: return "no_alpha";
    case ExponentPair::Kind::unknown: return "unknown";
  }
  return "?";
}

ExponentPair exponent_pair(const RingProfile& X, const RingProfile& Y) {
  using K = RingProfile::Kind;
  ExponentPair e;
  if (!X.symbolic() || !Y.symbolic()) {
    e.basis = "explicit-profile";
    return e;
  }
  if (X.kind == K::constant && Y.kind == K::constant) {
    e.kind = ExponentPair::Kind::iso;
    e.alpha1 = X.x0 / Y.x0;
    e.alpha2 = Y.x0 / X.x0;
    e.alpha1.canonicalize();
    e.alpha2.canonicalize();
    e.basis = "constant-vs-constant";
    e.sharpness = "no surjective alpha-morphism X->Y for alpha > " + rational_string(e.alpha1);
    return e;
  }
  if (X.kind == K::constant && Y.kind == K::geometric) {
    e.kind = ExponentPair::Kind::no_alpha;
    e.basis = "constant-vs-geometric";
    e.sharpness = "no surjective alpha-morphism X->Y for any alpha > 0";
    return e;
  }
  if (X.kind == K::geometric && Y.kind == K::constant) {
    e.kind = ExponentPair::Kind::no_alpha;
    e.basis = "geometric-vs-constant";
    e.sharpness = "no surjective alpha-morphism Y->X for any alpha > 0";
    return e;
  }
  if (X.r != Y.r) {
    e.basis = "geometric-mismatched-ratio";
    return e;
  }
  e.kind = ExponentPair::Kind::iso;
  e.basis = "geometric-vs-geometric";
  if (Y.lambda <= X.lambda) {
    e.alpha1 = 1;
    e.alpha2 = mpq_class(Y.lambda, X.lambda);
    e.alpha2.canonicalize();
    e.sharpness = "no surjective alpha-morphism Y->X for alpha > " + rational_string(e.alpha2);
  } else {
    e.alpha1 = mpq_class(X.lambda, Y.lambda);
    e.alpha1.canonicalize();
    e.alpha2 = 1;
    e.sharpness = "no surjective alpha-morphism X->Y for alpha > " + rational_string(e.alpha1);
  }
  return e;
}

}  // namespace padyn
