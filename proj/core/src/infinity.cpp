#include "padyn/infinity.hpp"

#include <algorithm>
#include <random>

namespace padyn {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

PadicNumber constant(long n, Prime p, long precision) { return PadicNumber::from_integer(n, p, precision); }
}  // namespace

const FlowMap& model_flow(const Germ& f) {
  return std::visit(overloaded{[](const PerturbedMap& g) -> const FlowMap& { return g.flow; },
                               [](const FlowMap& F) -> const FlowMap& { return F; }},
                    f);
}

PadicNumber germ_apply(const Germ& f, const PadicNumber& x) {
  return std::visit(overloaded{[&](const PerturbedMap& g) { return g(x); },
                               [&](const FlowMap& F) { return flow_eval(F, x); }},
                    f);
}

PadicNumber InfinityChart::A(const PadicNumber& x) const {
  if (x.is_zero()) throw DomainError("A is undefined at 0");
  const long prec = x.precision() + 8;
  return -(constant(1, p, prec) / (constant(m, p, prec) * x.pow(m)));
}

PadicNumber InfinityChart::inverse(const PadicNumber& eta) const {
  if (!contains(eta)) throw DomainError("eta = " + eta.to_literal() + " lies outside the chart");
  const long prec = eta.precision() + 8;
  const PadicNumber c = -(constant(1, p, prec) / (constant(m, p, prec) * eta));
  const PadicNumber r = mth_root(c, m);
  const PadicNumber omega = zeta / sector_classify(r, m).zeta;
  return r * omega;
}

bool InfinityChart::contains(const PadicNumber& eta) const {
  if (eta.is_zero()) return false;
  const long vm = ord_p(m, p);
  const long vx_times_m = -eta.valuation() - vm;
  if (vx_times_m % m != 0 || vx_times_m / m < cutoff) return false;
  if (m == 1) return true;
  const long prec = eta.precision() + 8;
  try {
    mth_root(-(constant(1, p, prec) / (constant(m, p, prec) * eta)), m);
  } catch (const NoRootError&) {
    return false;
  }
  return true;
}

InfinityChart make_chart(const Germ& f, long cutoff, const PadicNumber& zeta) {
  const FlowMap& F = model_flow(f);
  if (cutoff < 1) throw DomainError("chart cutoff must be at least 1");
  // The chart needs p^{N m} in m P for the translation invariance Y + a Z_p = Y.
  if (cutoff * F.m <= ord_p(F.m, F.p)) throw DomainError("cutoff too small for this m");
  return InfinityChart{F.p, F.m, cutoff, zeta};
}

InfinityChart chart_for(const Germ& f, long cutoff, const PadicNumber& x) {
  return make_chart(f, cutoff, sector_classify(x, model_flow(f).m).zeta);
}

Transported transport(const Germ& f, const InfinityChart& chart, const PadicNumber& eta) {
  const PadicNumber x = chart.inverse(eta);
  const PadicNumber ft = chart.A(germ_apply(f, x));
  return {ft, ft - eta - model_flow(f).a};
}

PadicNumber g_closed(const Germ& f, const PadicNumber& eta) {
  const auto* g = std::get_if<PerturbedMap>(&f);
  if (!g) return PadicNumber::zero(eta.prime());
  const FlowMap& F = g->flow;
  const long big = eta.precision() + F.a.precision() + 2 * std::abs(eta.valuation()) + 16;
  const PadicNumber one = constant(1, F.p, big);
  const PadicNumber w = -(one / (constant(F.m, F.p, big) * eta));
  if (w.valuation() < 1) throw DomainError("eta too small for the chart");
  const PadicNumber base = one + F.a * w + g->b * w * w;
  return eta * (base.pow(-F.m) - one) - F.a;
}

ChartEstimate measure_chart(const Germ& f, long cutoff, long samples, std::uint64_t seed, long precision) {
  const FlowMap& F = model_flow(f);
  make_chart(f, cutoff, constant(1, F.p, precision));
  std::mt19937_64 rng(seed);
  ChartEstimate est;
  est.cutoff = cutoff;
  est.samples = samples;
  est.min_val_G = precision;
  est.lip_val = precision;
  bool have_c = false;
  for (long s = 0; s < samples; ++s) {
    const long v = cutoff + s % 3;
    const PadicNumber x = PadicNumber::random_unit_scaled(F.p, v, precision, rng);
    const InfinityChart chart = chart_for(f, cutoff, x);
    const PadicNumber eta = chart.A(x);
    const PadicNumber G = g_closed(f, eta);
    if (!G.is_zero()) {
      est.min_val_G = std::min(est.min_val_G, G.valuation());
      mpq_class lc(-G.valuation() - eta.valuation());
      if (!have_c || lc > est.log_C) est.log_C = lc;
      have_c = true;
    }
    const long d = static_cast<long>(rng() % 6);
    const PadicNumber x2 = x + PadicNumber::random_unit_scaled(F.p, v + d, precision, rng);
    const PadicNumber eta2 = chart.A(x2);
    const PadicNumber dG = g_closed(f, eta2) - G;
    const PadicNumber de = eta2 - eta;
    if (!dG.is_zero() && !de.is_zero()) est.lip_val = std::min(est.lip_val, dG.valuation() - de.valuation());
  }
  // When G vanishes on every sample any k is valid; cap it so certified levels stay within precision.
  est.k = std::min({est.min_val_G - 1, est.lip_val, precision / 4});
  return est;
}

ChartEstimate shrink_until(const Germ& f, long start, long k_min, long samples, std::uint64_t seed, long precision,
                           long max_cutoff) {
  const FlowMap& F = model_flow(f);
  long cutoff = std::max(start, 1L);
  while (cutoff * F.m <= ord_p(F.m, F.p)) ++cutoff;
  for (; cutoff <= max_cutoff; ++cutoff) {
    ChartEstimate e = measure_chart(f, cutoff, samples, seed, precision);
    if (e.k >= k_min) return e;
  }
  throw DomainError("no chart up to cutoff " + std::to_string(max_cutoff) + " reaches k = " + std::to_string(k_min));
}

HHatSequence hhat_run(const GFunction& G, const PadicNumber& eta0, const PadicNumber& a, long k, long n_max, long cap) {
  const Prime p = a.prime();
  if (cap < 0) cap = pow_p(p, 8).get_si();
  if (n_max > cap) throw CapExceeded("hhat depth " + std::to_string(n_max) + " exceeds the cap " + std::to_string(cap));
  HHatSequence seq{eta0, a, k, {PadicNumber::zero(p)}};
  hhat_extend(seq, G, n_max);
  return seq;
}

void hhat_extend(HHatSequence& seq, const GFunction& G, long n_max) {
  long n = static_cast<long>(seq.values.size()) - 1;
  if (n >= n_max) return;
  PadicNumber eta = seq.eta0 + PadicNumber::from_integer(n, seq.a.prime(), seq.a.precision() + 8) * seq.a;
  seq.values.reserve(static_cast<std::size_t>(n_max + 1));
  for (; n < n_max; ++n) {
    const PadicNumber g = G(eta + seq.values.back());
    if (!g.is_zero() && g.valuation() <= seq.k)
      throw DomainError("|G| >= p^-" + std::to_string(seq.k) + " at eta = " + (eta + seq.values.back()).to_literal() +
                        "; enlarge the chart cutoff");
    seq.values.push_back(seq.values.back() + g);
    eta = eta + seq.a;
  }
}

OuijaReport ouija_check(const HHatSequence& seq, bool exhaustive) {
  OuijaReport rep;
  const Prime p = seq.a.prime();
  const long n = static_cast<long>(seq.values.size());
  rep.min_margin = 1L << 30;
  for (const auto& h : seq.values)
    if (!h.is_zero() && h.valuation() < seq.k) rep.in_ideal = false;
  auto check = [&](long i, long j, long ell) {
    ++rep.pairs;
    const PadicNumber d = seq.values[static_cast<std::size_t>(j)] - seq.values[static_cast<std::size_t>(i)];
    const long need = ell + seq.k;
    long got;
    if (d.is_zero()) {
      got = d.absolute_precision().value_or(1L << 30);
      if (got >= need) return;
    } else {
      got = d.valuation();
    }
    rep.min_margin = std::min(rep.min_margin, got - need);
    if (got < need) {
      ++rep.failures;
      if (rep.entries.size() < 20)
        rep.entries.push_back("n=" + std::to_string(i) + ", m=" + std::to_string(j) + ": ord " + std::to_string(got) +
                              " < " + std::to_string(need));
    }
  };
  if (exhaustive) {
    for (long i = 0; i < n; ++i)
      for (long j = i + 1; j < n; ++j) check(i, j, ord_p(j - i, p));
  } else {
    // Within each residue class mod p^ell, comparing to the smallest member suffices (ultrametric).
    for (long pl = 1, ell = 0; pl < n; pl *= static_cast<long>(p), ++ell)
      for (long j = pl; j < n; ++j) check(j % pl, j, ell);
  }
  if (rep.min_margin == (1L << 30)) rep.min_margin = 0;
  return rep;
}

HTilde htilde_eval(HHatSequence& seq, const GFunction& G, const PadicNumber& z, long T) {
  if (!z.is_zero() && z.valuation() < 0) throw DomainError("z must lie in Z_p");
  const mpz_class n = z.residue(T);
  if (!n.fits_slong_p()) throw CapExceeded("truncation too deep");
  hhat_extend(seq, G, n.get_si());
  return {seq.values[n.get_ui()], T + seq.k};
}

BaseDecomposition decompose(const PadicNumber& eta, const PadicNumber& a) {
  const Prime p = a.prime();
  const PadicNumber q = eta / a;
  if (q.is_zero() || q.valuation() >= 0) throw DomainError("eta / a must have a fractional part");
  const long v = q.valuation();
  const mpz_class frac_num = q.unit() % pow_p(p, -v);
  const long vf = ord_p(frac_num, p);
  const PadicNumber frac = PadicNumber::from_parts(p, v + vf, frac_num / pow_p(p, vf), q.precision() + 8);
  return {a * frac, q - frac};
}

long default_truncation(Prime p) {
  long T = 0;
  for (unsigned long pt = p; pt <= 1000; pt *= p) ++T;
  return std::max(T, 1L);
}

PulledBackConjugator::PulledBackConjugator(Germ f, ChartEstimate chart, long truncation, long precision)
    : f_(std::move(f)), est_(chart), T_(truncation), precision_(precision) {
  if (est_.k < 2) throw DomainError("the chart needs k >= 2");
}

PulledBackConjugator::Value PulledBackConjugator::operator()(const PadicNumber& x) {
  const FlowMap& F = model_flow(f_);
  if (x.is_zero()) return {x, 1L << 30};
  if (x.valuation() < est_.cutoff) throw DomainError("x outside the chart domain");
  const InfinityChart chart = chart_for(f_, est_.cutoff, x);
  const PadicNumber eta = chart.A(x);
  const BaseDecomposition dec = decompose(eta, F.a);
  const std::string key = dec.eta0.to_literal();
  auto it = cache_.find(key);
  const GFunction G = [this](const PadicNumber& e) { return g_closed(f_, e); };
  if (it == cache_.end()) it = cache_.emplace(key, hhat_run(G, dec.eta0, F.a, est_.k, 0)).first;
  const HTilde ht = htilde_eval(it->second, G, dec.z, T_);
  const PadicNumber image = chart.inverse(eta + ht.value);
  // A^{-1} scales eta-errors by |x|^{m+1}.
  return {image, (F.m + 1) * x.valuation() + ht.error_valuation};
}

PullbackReport pullback_verify(const Germ& f, const PullbackOptions& o) {
  const FlowMap& F = model_flow(f);
  PullbackReport rep;
  rep.chart = shrink_until(f, o.start_cutoff, 2, 200, o.seed, o.precision);
  rep.shrink_steps = rep.chart.cutoff - std::max(o.start_cutoff, 1L);
  rep.truncation = o.truncation > 0 ? o.truncation : default_truncation(F.p);
  rep.min_functional_margin = 1L << 30;
  PulledBackConjugator h(f, rep.chart, rep.truncation, o.precision);
  std::mt19937_64 rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
  const long N = rep.chart.cutoff;
  auto random_point = [&](long v) { return PadicNumber::random_unit_scaled(F.p, v, o.precision, rng); };
  auto note = [&](const std::string& s) {
    if (rep.entries.size() < 50) rep.entries.push_back(s);
  };
  for (long s = 0; s < o.samples; ++s) {
    ++rep.samples;
    const long v = N + static_cast<long>(rng() % static_cast<std::uint64_t>(o.circle_span));
    const PadicNumber x = random_point(v);
    const auto hx = h(x);
    const PadicNumber Fx = flow_eval(F, x);
    const auto hFx = h(Fx);
    const long level = std::min(hx.error_valuation, hFx.error_valuation);
    // f(h(x)) = h(F(x)) up to the certified truncation error.
    const PadicNumber d = germ_apply(f, hx.x) - hFx.x;
    const long got = d.is_zero() ? d.absolute_precision().value_or(1L << 30) : d.valuation();
    if (d.is_zero() && got < level) ++rep.precision_limited;
    rep.min_functional_margin = std::min(rep.min_functional_margin, got - level);
    if (!d.is_zero() && got < level) {
      ++rep.functional_failures;
      note("functional equation at " + x.to_literal() + ": ord " + std::to_string(got) + " < " + std::to_string(level));
    }
    // |h(x) - x| <= |x|^{m + 1 - 1/10}
    const PadicNumber dx = hx.x - x;
    if (!dx.is_zero() && 10 * dx.valuation() < (10 * F.m + 9) * x.valuation()) {
      ++rep.closeness_failures;
      note("|h(x) - x| too large at " + x.to_literal());
    }
    const Sector sx = sector_classify(x, F.m);
    if (!(sector_classify(germ_apply(f, x), F.m) == sx) || !(sector_classify(hx.x, F.m) == sx)) {
      ++rep.sector_failures;
      note("sector not preserved at " + x.to_literal());
    }
    const InfinityChart chart = make_chart(f, N, sx.zeta);
    if (!(chart.A(Fx) - chart.A(x) - F.a).is_zero()) {
      ++rep.chart_failures;
      note("A(F(x)) != A(x) + a at " + x.to_literal());
    }
  }
  for (long s = 0; s < o.pairs; ++s) {
    ++rep.pairs;
    const long v1 = N + static_cast<long>(rng() % static_cast<std::uint64_t>(o.circle_span));
    const PadicNumber x1 = random_point(v1);
    PadicNumber x2 = x1;
    if (s % 4 == 0) {
      x2 = random_point(N + static_cast<long>(rng() % static_cast<std::uint64_t>(o.circle_span)));
    } else {
      const long err = (F.m + 1) * v1 + rep.truncation + rep.chart.k;
      const long dv = v1 + static_cast<long>(rng() % static_cast<std::uint64_t>(err - v1));
      x2 = x1 + random_point(dv);
    }
    const PadicNumber dx = x2 - x1;
    if (dx.is_zero()) {
      --rep.pairs;
      continue;
    }
    if (!(sector_classify(x1, F.m) == sector_classify(x2, F.m))) ++rep.cross_sector_pairs;
    const auto h1 = h(x1), h2 = h(x2);
    const long level = std::min(h1.error_valuation, h2.error_valuation);
    const PadicNumber dh = h2.x - h1.x;
    const long got = dh.is_zero() ? dh.absolute_precision().value_or(1L << 30) : dh.valuation();
    if (got >= level && dx.valuation() >= level) {
      ++rep.undetermined_pairs;
      continue;
    }
    if (dh.is_zero() || got != dx.valuation()) {
      ++rep.isometry_failures;
      note("isometry fails for " + x1.to_literal() + ", " + x2.to_literal());
    }
  }
  rep.base_points = h.base_points();
  if (rep.min_functional_margin == (1L << 30)) rep.min_functional_margin = 0;
  return rep;
}

}  // namespace padyn
