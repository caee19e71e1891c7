#pragma once
#include <optional>
#include <vector>

#include "padyn/padic.hpp"

namespace padyn {

// The time-a map of x^{m+1} d/dx: f(x) = x / (1 - a m x^m)^{1/m}.
struct FlowMap {
  Prime p = 2;
  long m = 1;
  PadicNumber a;

  FlowMap() = default;
  FlowMap(Prime p, long m, PadicNumber a);
  long k() const { return a.valuation(); }
  // Whether the iteration root exists for every |z| <= 1 at this valuation of x.
  bool domain_ok(long vx) const;
  // Smallest circle index inside the domain.
  long first_circle() const;
};

// f(x) = x + a x^{m+1} + b x^{2m+1}.
struct PerturbedMap {
  FlowMap flow;
  PadicNumber b;

  PerturbedMap() = default;
  PerturbedMap(Prime p, long m, PadicNumber a, PadicNumber b);
  PadicNumber operator()(const PadicNumber& x) const;
};

PadicNumber flow_iterate(const FlowMap& F, const PadicNumber& z, const PadicNumber& x);
PadicNumber flow_eval(const FlowMap& F, const PadicNumber& x);
// Time z with flow_iterate(F, z, x) = y, or nullopt when y is outside the Z_p-orbit of x.
std::optional<PadicNumber> flow_time(const FlowMap& F, const PadicNumber& x, const PadicNumber& y);
bool orbit_contains(const FlowMap& F, const PadicNumber& x, const PadicNumber& y);
// |f^z(x) - x|, checked against |a z x^{m+1}|.
Norm deviation_norm(const FlowMap& F, const PadicNumber& z, const PadicNumber& x);
// |f^{k q^n}(x) - x| for n = 0..n_max.
std::vector<Norm> return_deviation(const FlowMap& F, const PadicNumber& x, long k, Prime q, long n_max);

}  // namespace padyn
