#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "padyn/flows.hpp"

namespace padyn {

// A germ tangent to the identity in normal form, or an exact flow.
using Germ = std::variant<PerturbedMap, FlowMap>;
const FlowMap& model_flow(const Germ& f);
PadicNumber germ_apply(const Germ& f, const PadicNumber& x);

// The m-neighbourhood of infinity A(p^N Z_p \ {0}) with A(x) = -1/(m x^m),
// together with the inverse branch landing in the sector of zeta.
struct InfinityChart {
  Prime p = 2;
  long m = 1;
  long cutoff = 1;
  PadicNumber zeta;

  PadicNumber A(const PadicNumber& x) const;
  PadicNumber inverse(const PadicNumber& eta) const;
  bool contains(const PadicNumber& eta) const;
};
InfinityChart make_chart(const Germ& f, long cutoff, const PadicNumber& zeta);
InfinityChart chart_for(const Germ& f, long cutoff, const PadicNumber& x);

struct Transported {
  PadicNumber ftilde;
  PadicNumber G;
};
// f~(eta) = A(f(A^{-1}(eta))) and G = f~ - eta - a.
Transported transport(const Germ& f, const InfinityChart& chart, const PadicNumber& eta);
// The same G from eta * ((1 + a w + b w^2)^{-m} - 1) - a with w = -1/(m eta); no roots needed.
PadicNumber g_closed(const Germ& f, const PadicNumber& eta);

struct ChartEstimate {
  long cutoff = 1;
  long min_val_G = 0;   // smallest ord G seen
  long lip_val = 0;     // smallest ord(G1 - G2) - ord(eta1 - eta2) seen
  long k = 0;           // largest k with |G| < p^-k and Lipschitz constant <= p^-k
  mpq_class log_C;      // log_p of max |G| |eta|
  long samples = 0;
};
ChartEstimate measure_chart(const Germ& f, long cutoff, long samples, std::uint64_t seed, long precision = 48);
// Raise the cutoff until k >= k_min; the number of raises is cutoff - start.
ChartEstimate shrink_until(const Germ& f, long start, long k_min, long samples, std::uint64_t seed,
                           long precision = 48, long max_cutoff = 12);

using GFunction = std::function<PadicNumber(const PadicNumber&)>;

struct HHatSequence {
  PadicNumber eta0;
  PadicNumber a;
  long k = 0;
  std::vector<PadicNumber> values;  // values[n] = hhat_n
};
HHatSequence hhat_run(const GFunction& G, const PadicNumber& eta0, const PadicNumber& a, long k, long n_max,
                      long cap = -1);
void hhat_extend(HHatSequence& seq, const GFunction& G, long n_max);

struct OuijaReport {
  long pairs = 0;
  long failures = 0;
  long min_margin = 0;  // min over pairs of ord(h_m - h_n) - (ord(m - n) + k)
  bool in_ideal = true; // every hhat_n lies in p^k Z_p
  std::vector<std::string> entries;
};
OuijaReport ouija_check(const HHatSequence& seq, bool exhaustive = true);

struct HTilde {
  PadicNumber value;     // hhat(eta0 + z a)
  long error_valuation;  // certified |error| <= p^-error_valuation
};
HTilde htilde_eval(HHatSequence& seq, const GFunction& G, const PadicNumber& z, long T);

struct BaseDecomposition {
  PadicNumber eta0;  // a times the fractional part of eta / a
  PadicNumber z;     // integral part of eta / a, in Z_p
};
BaseDecomposition decompose(const PadicNumber& eta, const PadicNumber& a);

// The conjugator h near 0 with f o h = h o f_{m+1,a}, pulled back sector by sector.
class PulledBackConjugator {
 public:
  PulledBackConjugator(Germ f, ChartEstimate chart, long truncation, long precision = 48);
  struct Value {
    PadicNumber x;
    long error_valuation;
  };
  Value operator()(const PadicNumber& x);
  long truncation() const { return T_; }
  const ChartEstimate& chart() const { return est_; }
  std::size_t base_points() const { return cache_.size(); }

 private:
  Germ f_;
  ChartEstimate est_;
  long T_;
  long precision_;
  std::map<std::string, HHatSequence> cache_;
};

struct PullbackOptions {
  long samples = 500;
  long pairs = 500;
  long truncation = 0;  // 0 picks the largest T with p^T <= 1000
  long precision = 48;
  std::uint64_t seed = 1;
  long start_cutoff = 1;
  long circle_span = 3;  // sample circles cutoff .. cutoff + span - 1
};

struct PullbackReport {
  ChartEstimate chart;
  long shrink_steps = 0;
  long truncation = 0;
  long samples = 0;
  long functional_failures = 0;
  long min_functional_margin = 0;  // ord discrepancy minus certified level
  long precision_limited = 0;      // both sides agree in every known digit, but fewer than certified
  long closeness_failures = 0;     // |h(x) - x| <= |x|^{m+1-0.1}
  long pairs = 0;
  long cross_sector_pairs = 0;
  long isometry_failures = 0;
  long undetermined_pairs = 0;
  long sector_failures = 0;
  long chart_failures = 0;
  std::size_t base_points = 0;
  std::vector<std::string> entries;
  bool passed() const {
    return functional_failures == 0 && closeness_failures == 0 && isometry_failures == 0 && sector_failures == 0 &&
           chart_failures == 0 && undetermined_pairs == 0;
  }
};
PullbackReport pullback_verify(const Germ& f, const PullbackOptions& options = {});
long default_truncation(Prime p);

}  // namespace padyn
