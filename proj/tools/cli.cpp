#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "padyn/census.hpp"
#include "padyn/conjugacy.hpp"
#include "padyn/infinity.hpp"
#include "padyn/literals.hpp"
#include "padyn/version.hpp"

namespace padyn::cli {

namespace {

using json = nlohmann::ordered_json;

struct Globals {
  long precision = 64;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string format = "json";
};

struct Result {
  json doc = json::object();
  bool failed = false;          // verification failed
  std::optional<std::string> raw;  // pre-rendered output (DOT)
};

json integer(const mpz_class& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

std::string norm_string(const Norm& n) { return rational_string(n.value); }

PadicNumber number(const std::string& s, Prime p, long precision) {
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') return PadicNumber::parse(s.substr(1, s.size() - 2), p, precision);
  return PadicNumber::parse(s, p, precision);
}

json padic_fields(const PadicNumber& x) {
  json j;
  j["literal"] = x.to_literal();
  if (x.is_zero()) {
    j["valuation"] = nullptr;
    j["norm"] = "0";
  } else {
    j["valuation"] = x.valuation();
    j["precision"] = x.precision();
    j["norm"] = norm_string(norm_val(x));
  }
  return j;
}

DynMap dyn_map(const std::string& s, long precision) {
  auto m = parse_map(s, precision);
  if (auto* f = std::get_if<FlowMap>(&m)) return *f;
  if (auto* l = std::get_if<MultiplierMap>(&m)) return *l;
  throw ParseError("expected flow(p,m,a) or mult(p,a), got '" + s + "'");
}

Germ germ_of(const std::string& s, long precision) {
  auto m = parse_map(s, precision);
  if (auto* g = std::get_if<PerturbedMap>(&m)) return *g;
  if (auto* f = std::get_if<FlowMap>(&m)) return *f;
  throw ParseError("expected germ(p,m,a,b) or flow(p,m,a), got '" + s + "'");
}

json rows_json(const std::vector<HolderRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back({{"ring", r.ring}, {"min_target", r.min_target}, {"max_target", r.max_target}});
  return a;
}

json chart_json(const ChartEstimate& e) {
  return {{"cutoff", e.cutoff}, {"k", e.k},         {"min_ord_G", e.min_val_G},
          {"lipschitz_ord", e.lip_val}, {"log_p_C", rational_string(e.log_C)}, {"samples", e.samples}};
}

void render_table(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      render_table(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) render_table(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << "\t" << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

// Each leaf subcommand registers a handler; the one CLI11 marks as parsed runs.
struct Leaf {
  CLI::App* app;
  std::string path;
  std::function<Result()> handler;
};

}  // namespace

Outcome run(const std::vector<std::string>& args) {
  Outcome outcome;
  Globals g;
  g.jobs = std::max(1u, std::thread::hardware_concurrency());
  CLI::App app{"p-adic dynamics toolkit: orbits, conjugacies and Hoelder exponents of germs near a fixed point", "padyn"};
  app.set_version_flag("--version", std::string(padyn::version));
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.add_option("--precision", g.precision, "working precision T in digits")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", g.seed, "seed for all sampling")->capture_default_str();
  app.add_option("--jobs", g.jobs, "parallelism degree (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "dot", "table"}))->capture_default_str();

  std::vector<Leaf> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    leaves.push_back({sub, parent->get_name() + " " + name, {}});
    return std::make_pair(sub, leaves.size() - 1);
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->require_subcommand(1);
    return s;
  };

  // Shared option storage; each leaf reads only what it declared.
  std::string x_s, y_s, z_s, map_s, from_s, to_s, germ_s, a_s, b_s, op_s = "add", replay_s, alpha_s;
  std::string prof_x, prof_y;
  long m = 1, circle = 1, depth = 10, n = 1, k = 1, samples = 1000, pairs = 200, cutoff = 1, truncation = 0;
  long max_circle = 3;
  unsigned long p = 0, q = 0;
  std::size_t cap = 1000000;
  bool extend = false, grouped = false, inverse = false;

  // padic
  CLI::App* padic = group("padic", "p-adic numbers: literals, arithmetic, roots");
  {
    auto [s, i] = leaf(padic, "show", "digits, valuation and norm of a number");
    s->add_option("--x", x_s, "number literal (p:v:digits or a rational)")->required();
    s->add_option("--p", p, "prime, needed for rational input");
    leaves[i].handler = [&] {
      auto x = PadicNumber::parse(x_s, p ? std::optional<Prime>(p) : std::nullopt, g.precision);
      Result r;
      r.doc = padic_fields(x);
      json d = json::array();
      if (!x.is_zero())
        for (auto v : x.digits()) d.push_back(v);
      r.doc["digits"] = d;
      return r;
    };
  }
  {
    auto [s, i] = leaf(padic, "arith", "x op y");
    s->add_option("--x", x_s)->required();
    s->add_option("--y", y_s, "second operand; an integer exponent for pow")->required();
    s->add_option("--op", op_s)->check(CLI::IsMember({"add", "sub", "mul", "div", "pow"}));
    s->add_option("--p", p);
    leaves[i].handler = [&] {
      auto x = PadicNumber::parse(x_s, p ? std::optional<Prime>(p) : std::nullopt, g.precision);
      PadicNumber v;
      if (op_s == "pow") {
        v = x.pow(std::stol(y_s));
      } else {
        auto y = number(y_s, x.prime(), g.precision);
        if (op_s == "add") v = x + y;
        if (op_s == "sub") v = x - y;
        if (op_s == "mul") v = x * y;
        if (op_s == "div") v = x / y;
      }
      Result r;
      r.doc["op"] = op_s;
      r.doc["value"] = padic_fields(v);
      return r;
    };
  }
  {
    auto [s, i] = leaf(padic, "root", "an m-th root by Hensel lifting");
    s->add_option("--x", x_s)->required();
    s->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    s->add_option("--p", p);
    leaves[i].handler = [&] {
      auto x = PadicNumber::parse(x_s, p ? std::optional<Prime>(p) : std::nullopt, g.precision);
      auto rt = mth_root(x, m);
      Result r;
      r.doc["root"] = padic_fields(rt);
      r.doc["sector"] = sector_classify(rt, m).canonical.get_str();
      return r;
    };
  }
  {
    auto [s, i] = leaf(padic, "unity", "the m-th roots of unity in Q_p");
    s->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    s->add_option("--p", p)->required();
    leaves[i].handler = [&] {
      if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
      Result r;
      json a = json::array();
      for (auto& z : roots_of_unity(m, p, g.precision)) a.push_back(z.to_literal());
      r.doc["count"] = a.size();
      r.doc["roots"] = a;
      return r;
    };
  }

  // flow
  CLI::App* flow = group("flow", "time-z maps of the flows x' = a x^{m+1}");
  auto flow_x = [&](const FlowMap& F) { return number(x_s, F.p, g.precision); };
  {
    auto [s, i] = leaf(flow, "iterate", "f^z(x)");
    s->add_option("--map", map_s, "flow(p,m,a)")->required();
    s->add_option("--x", x_s)->required();
    s->add_option("--z", z_s)->default_val("1");
    leaves[i].handler = [&] {
      auto F = parse_flow(map_s, g.precision);
      auto x = flow_x(F);
      auto v = flow_iterate(F, number(z_s, F.p, g.precision), x);
      Result r;
      r.doc["value"] = padic_fields(v);
      return r;
    };
  }
  {
    auto [s, i] = leaf(flow, "time", "z with f^z(x) = y, if y is on the Z_p-orbit of x");
    s->add_option("--map", map_s)->required();
    s->add_option("--x", x_s)->required();
    s->add_option("--y", y_s)->required();
    leaves[i].handler = [&] {
      auto F = parse_flow(map_s, g.precision);
      auto z = flow_time(F, flow_x(F), number(y_s, F.p, g.precision));
      Result r;
      r.doc["in_orbit"] = z.has_value();
      r.doc["z"] = z ? json(padic_fields(*z)) : json(nullptr);
      return r;
    };
  }
  {
    auto [s, i] = leaf(flow, "contains", "is y on the Z_p-orbit of x");
    s->add_option("--map", map_s)->required();
    s->add_option("--x", x_s)->required();
    s->add_option("--y", y_s)->required();
    leaves[i].handler = [&] {
      auto F = parse_flow(map_s, g.precision);
      Result r;
      r.doc["contains"] = orbit_contains(F, flow_x(F), number(y_s, F.p, g.precision));
      return r;
    };
  }
  {
    auto [s, i] = leaf(flow, "deviation", "|f^z(x) - x|, checked against |a z x^{m+1}|");
    s->add_option("--map", map_s)->required();
    s->add_option("--x", x_s)->required();
    s->add_option("--z", z_s)->required();
    leaves[i].handler = [&] {
      auto F = parse_flow(map_s, g.precision);
      Result r;
      r.doc["norm"] = norm_string(deviation_norm(F, number(z_s, F.p, g.precision), flow_x(F)));
      return r;
    };
  }
  {
    auto [s, i] = leaf(flow, "return", "|f^{k q^n}(x) - x| for n = 0..N");
    s->add_option("--map", map_s)->required();
    s->add_option("--x", x_s)->required();
    s->add_option("--k", k)->default_val(1);
    s->add_option("--q", q, "prime of the sequence q^n")->required();
    s->add_option("--n", n, "largest n")->default_val(8);
    leaves[i].handler = [&] {
      auto F = parse_flow(map_s, g.precision);
      Result r;
      json a = json::array();
      for (auto& v : return_deviation(F, flow_x(F), k, q, n)) a.push_back(norm_string(v));
      r.doc["norms"] = a;
      return r;
    };
  }

  // multiplier
  CLI::App* mult = group("multiplier", "multiplier maps x -> a x");
  auto unit_a = [&] {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    return number(a_s, p, g.precision);
  };
  {
    auto [s, i] = leaf(mult, "classify", "contracting, expanding or indifferent");
    s->add_option("--p", p)->required();
    s->add_option("--a", a_s)->required();
    leaves[i].handler = [&] {
      auto c = classify(unit_a(), g.precision);
      Result r;
      r.doc["class"] = to_string(c.kind);
      if (c.kind == MultiplierKind::indifferent_rational) r.doc["order"] = c.order;
      if (c.kind == MultiplierKind::indifferent_irrational) r.doc["certified_digits"] = c.certified_to;
      return r;
    };
  }
  {
    auto [s, i] = leaf(mult, "closure", "closure of {a^z : z in Z_p}");
    s->add_option("--p", p)->required();
    s->add_option("--a", a_s)->required();
    leaves[i].handler = [&] {
      auto c = orbit_closure(unit_a());
      Result r;
      r.doc["description"] = c.description;
      r.doc["n"] = c.n;
      r.doc["torsion"] = c.torsion;
      r.doc["level"] = c.level;
      json sub = json::array();
      for (auto& u : c.subgroup) sub.push_back(integer(u));
      r.doc["subgroup_mod_p_level"] = sub;
      return r;
    };
  }
  {
    auto [s, i] = leaf(mult, "count", "N(a), the number of Z_p-orbits per circle");
    s->add_option("--p", p)->required();
    s->add_option("--a", a_s)->required();
    s->add_option("--check-digits", n, "also count orbits by brute force modulo p^this (0 to skip)")->default_val(0);
    leaves[i].handler = [&] {
      auto a = unit_a();
      Result r;
      const mpz_class N = count_N(a);
      r.doc["N"] = integer(N);
      r.doc["formula"] = integer(count_N_formula(a));
      if (n > 0) {
        const mpz_class b = count_orbits_bruteforce(a, 0, n);
        r.doc["bruteforce"] = integer(b);
        r.doc["agree"] = b == N;
        r.failed = b != N;
      }
      return r;
    };
  }
  {
    auto [s, i] = leaf(mult, "exponent", "best Hoelder exponent N(a)/N(b) between L_a and L_b");
    s->add_option("--p", p)->required();
    s->add_option("--a", a_s)->required();
    s->add_option("--b", b_s)->required();
    leaves[i].handler = [&] {
      auto e = multiplier_exponent(unit_a(), number(b_s, p, g.precision));
      Result r;
      r.doc["alpha"] = rational_string(e.alpha);
      r.doc["swapped"] = e.swapped;
      r.doc["lipeomorphic"] = e.alpha == 1;
      return r;
    };
  }
  {
    auto [s, i] = leaf(mult, "contracting", "best exponent ord(a)/ord(b) between contractions over p and q");
    s->add_option("--p", p)->required();
    s->add_option("--a", a_s)->required();
    s->add_option("--q", q)->required();
    s->add_option("--b", b_s)->required();
    leaves[i].handler = [&] {
      if (!is_prime(q)) throw DomainError(std::to_string(q) + " is not prime");
      Result r;
      r.doc["alpha"] = rational_string(contracting_exponent(unit_a(), number(b_s, q, g.precision)));
      return r;
    };
  }

  // census
  CLI::App* census = group("census", "Z_p-orbits of a flow on each circle |x| = p^-i");
  {
    auto [s, i] = leaf(census, "count", "orbits on one circle");
    s->add_option("--map", map_s)->required();
    s->add_option("--circle", circle)->required();
    leaves[i].handler = [&] {
      Result r;
      r.doc["count"] = integer(orbit_count(parse_flow(map_s, g.precision), circle));
      return r;
    };
  }
  {
    auto [s, i] = leaf(census, "reps", "canonical orbit representatives on one circle");
    s->add_option("--map", map_s)->required();
    s->add_option("--circle", circle)->required();
    s->add_option("--cap", cap)->capture_default_str();
    leaves[i].handler = [&] {
      Result r;
      json a = json::array();
      for (auto& key : orbit_reps(parse_flow(map_s, g.precision), circle, cap)) a.push_back(integer(key.residue));
      r.doc["count"] = a.size();
      r.doc["reps"] = a;
      return r;
    };
  }
  {
    auto [s, i] = leaf(census, "diagram", "concentric orbit diagram (json or dot)");
    s->add_option("--map", map_s)->required();
    s->add_option("--max-circle", max_circle)->capture_default_str();
    s->add_option("--cap", cap)->capture_default_str();
    leaves[i].handler = [&] {
      auto F = parse_flow(map_s, g.precision);
      Result r;
      if (g.format == "dot") {
        r.raw = emit_diagram(F, max_circle, DiagramFormat::dot, cap);
      } else {
        auto d = nlohmann::ordered_json::parse(emit_diagram(F, max_circle, DiagramFormat::json, cap));
        for (auto it = d.begin(); it != d.end(); ++it) r.doc[it.key()] = it.value();
      }
      return r;
    };
  }
  {
    auto [s, i] = leaf(census, "oracle", "brute-force orbit classes compared with the formula");
    s->add_option("--map", map_s)->required();
    s->add_option("--circle", circle)->required();
    leaves[i].handler = [&] {
      auto F = parse_flow(map_s, g.precision);
      auto o = census_oracle(F, circle);
      const mpz_class want = orbit_count(F, circle);
      Result r;
      r.doc["modulus_exponent"] = o.modulus_exponent;
      r.doc["residues"] = integer(o.residues);
      r.doc["classes"] = integer(o.classes);
      r.doc["formula"] = integer(want);
      r.doc["agree"] = o.classes == want;
      r.failed = o.classes != want;
      return r;
    };
  }

  // bullseye
  CLI::App* bull = group("bullseye", "bullseye spaces given by ring-size profiles");
  auto profiles = [&] { return std::make_pair(RingProfile::parse(prof_x), RingProfile::parse(prof_y)); };
  {
    auto [s, i] = leaf(bull, "mu", "mu(N) for N = 1..depth");
    s->add_option("--x", prof_x, "const(c[,n0]) | geom(c,r,lam[,n0]) | list(...)")->required();
    s->add_option("--y", prof_y)->required();
    s->add_option("--depth", depth)->default_val(10);
    leaves[i].handler = [&] {
      auto [X, Y] = profiles();
      Result r;
      json a = json::array();
      for (long v : mu_table(X, Y, depth)) a.push_back(v);
      r.doc["mu"] = a;
      return r;
    };
  }
  {
    auto [s, i] = leaf(bull, "match", "the ring matching and its sandwich check");
    s->add_option("--x", prof_x)->required();
    s->add_option("--y", prof_y)->required();
    s->add_option("--depth", depth)->default_val(10);
    leaves[i].handler = [&] {
      auto [X, Y] = profiles();
      RingMatching beta(X, Y, depth);
      Result r;
      json rows = json::array();
      for (long N = 1; N <= depth; ++N)
        if (X.count(N) > 0) rows.push_back({{"ring", N}, {"min_target", beta.min_target_ring(N)}, {"max_target", beta.max_target_ring(N)}});
      r.doc["rings"] = rows;
      auto bad = sandwich_failure(beta);
      r.doc["sandwich_ok"] = !bad;
      if (bad) r.doc["sandwich_fails_at"] = *bad;
      r.failed = bad.has_value();
      return r;
    };
  }
  {
    auto [s, i] = leaf(bull, "exponent", "best exponent pair from the symbolic profiles");
    s->add_option("--x", prof_x)->required();
    s->add_option("--y", prof_y)->required();
    leaves[i].handler = [&] {
      auto [X, Y] = profiles();
      auto e = exponent_pair(X, Y);
      Result r;
      r.doc["kind"] = to_string(e.kind);
      if (e.kind == ExponentPair::Kind::iso) {
        r.doc["alpha1"] = rational_string(e.alpha1);
        r.doc["alpha2"] = rational_string(e.alpha2);
      }
      r.doc["basis"] = e.basis;
      r.doc["sharpness"] = e.sharpness;
      return r;
    };
  }
  {
    auto [s, i] = leaf(bull, "alpha", "finite-depth alpha-morphism check of the matching");
    s->add_option("--x", prof_x)->required();
    s->add_option("--y", prof_y)->required();
    s->add_option("--depth", depth)->default_val(100);
    s->add_option("--alpha", alpha_s)->required();
    leaves[i].handler = [&] {
      auto [X, Y] = profiles();
      mpq_class alpha(alpha_s);
      alpha.canonicalize();
      auto c = alpha_check(RingMatching(X, Y, depth), alpha);
      Result r;
      r.doc["holds"] = c.holds;
      r.doc["k"] = rational_string(c.k);
      r.doc["deep_half_slope (fitted)"] = c.slope;
      json w = json::array();
      for (auto& pt : c.witness) w.push_back(pt.ring);
      r.doc["witness_rings"] = w;
      return r;
    };
  }

  // conjugacy
  CLI::App* conj = group("conjugacy", "orbit-matching conjugacies between flows and multipliers");
  auto add_pair = [&](CLI::App* s) {
    s->add_option("--from", from_s, "flow(p,m,a) or mult(p,a)");
    s->add_option("--to", to_s);
    s->add_option("--depth", depth)->default_val(10);
    s->add_option("--replay", replay_s, "conjugacy JSON written by 'conjugacy build'");
  };
  auto load = [&] {
    if (!replay_s.empty()) {
      std::ifstream in(replay_s);
      if (!in) throw DomainError("cannot read " + replay_s);
      std::stringstream ss;
      ss << in.rdbuf();
      auto doc = json::parse(ss.str(), nullptr, false);
      if (doc.is_discarded()) throw ParseError("replay file is not JSON");
      if (doc.contains("conjugacy")) doc = doc["conjugacy"];
      return conjugacy_from_json(doc.dump());
    }
    if (from_s.empty() || to_s.empty()) throw DomainError("--from and --to are required without --replay");
    return build_conjugacy(dyn_map(from_s, g.precision), dyn_map(to_s, g.precision), depth, g.precision);
  };
  {
    auto [s, i] = leaf(conj, "build", "build and serialise the conjugacy");
    add_pair(s);
    leaves[i].handler = [&] {
      Result r;
      r.doc["conjugacy"] = json::parse(conjugacy_to_json(load()));
      return r;
    };
  }
  {
    auto [s, i] = leaf(conj, "eval", "h(x)");
    add_pair(s);
    s->add_option("--x", x_s)->required();
    s->add_flag("--extend", extend, "build deeper rings on demand");
    s->add_flag("--inverse", inverse, "evaluate h^-1 instead");
    leaves[i].handler = [&] {
      auto H = load();
      auto x = number(x_s, prime_of(H.source), g.precision);
      Result r;
      r.doc["value"] = padic_fields(inverse ? h_inv(H, x) : h_eval(H, x, extend));
      return r;
    };
  }
  {
    auto [s, i] = leaf(conj, "verify", "check f2(h(x)) = h(f1(x)) on samples");
    add_pair(s);
    s->add_option("--samples", samples)->default_val(1000);
    leaves[i].handler = [&] {
      auto rep = verify_conjugacy(load(), samples, g.seed);
      Result r;
      r.doc["samples"] = rep.samples;
      r.doc["failures"] = rep.failures;
      r.doc["max_discrepancy"] = rep.max_discrepancy;
      r.doc["min_agreement"] = rep.min_agreement;
      r.doc["ring_coverage"] = rep.ring_coverage;
      r.doc["entries"] = rep.entries;
      r.failed = rep.failures > 0;
      return r;
    };
  }
  {
    auto [s, i] = leaf(conj, "holder", "per-ring image table and fitted exponent at 0");
    add_pair(s);
    s->add_option("--pairs", pairs)->default_val(200);
    leaves[i].handler = [&] {
      auto rep = holder_estimate(load(), pairs, g.seed);
      Result r;
      r.doc["slope"] = rep.slope;
      r.doc["slope_note"] = "least-squares fit over the deeper half of the rings";
      if (rep.exponent) r.doc["exponent"] = rational_string(*rep.exponent);
      r.doc["table"] = rows_json(rep.table);
      r.doc["inverse_slope"] = rep.inverse_slope;
      r.doc["inverse_table"] = rows_json(rep.inverse_table);
      r.doc["pair_samples"] = rep.pair_samples;
      r.doc["pair_failures"] = rep.pair_failures;
      json c = json::array();
      for (auto& [N, v] : rep.pair_log_constants) c.push_back({{"ring", N}, {"log_p_C", rational_string(v)}});
      r.doc["pair_constants"] = c;
      r.failed = rep.pair_failures > 0;
      return r;
    };
  }

  // infinity
  CLI::App* inf = group("infinity", "transport to infinity and the pulled-back conjugator");
  {
    auto [s, i] = leaf(inf, "transport", "f~(eta) and G(eta) in the chart at infinity");
    s->add_option("--germ", germ_s, "germ(p,m,a,b) or flow(p,m,a)")->required();
    s->add_option("--cutoff", cutoff)->default_val(1);
    s->add_option("--x", x_s, "point near 0; eta = A(x)")->required();
    s->add_option("--samples", samples)->default_val(200);
    leaves[i].handler = [&] {
      Germ f = germ_of(germ_s, g.precision);
      const FlowMap& F = model_flow(f);
      auto x = number(x_s, F.p, g.precision);
      auto chart = chart_for(f, cutoff, x);
      auto eta = chart.A(x);
      auto t = transport(f, chart, eta);
      Result r;
      r.doc["eta"] = padic_fields(eta);
      r.doc["ftilde"] = padic_fields(t.ftilde);
      r.doc["G"] = padic_fields(t.G);
      r.doc["chart"] = chart_json(measure_chart(f, cutoff, samples, g.seed, g.precision));
      return r;
    };
  }
  {
    auto [s, i] = leaf(inf, "hhat", "the hhat recursion and its divisibility checks");
    s->add_option("--germ", germ_s)->required();
    s->add_option("--cutoff", cutoff)->default_val(1);
    s->add_option("--depth", depth, "largest n")->default_val(243);
    s->add_flag("--grouped", grouped, "check one pair per residue class instead of all pairs");
    leaves[i].handler = [&] {
      Germ f = germ_of(germ_s, g.precision);
      const FlowMap& F = model_flow(f);
      auto est = shrink_until(f, cutoff, 2, 200, g.seed, g.precision);
      auto chart = make_chart(f, est.cutoff, PadicNumber::from_integer(1, F.p, g.precision));
      auto eta0 = decompose(chart.A(PadicNumber::from_parts(F.p, est.cutoff, 1, g.precision)), F.a).eta0;
      GFunction G = [&](const PadicNumber& e) { return g_closed(f, e); };
      auto seq = hhat_run(G, eta0, F.a, est.k, depth);
      auto rep = ouija_check(seq, !grouped);
      Result r;
      r.doc["chart"] = chart_json(est);
      r.doc["eta0"] = eta0.to_literal();
      r.doc["depth"] = depth;
      r.doc["pairs"] = rep.pairs;
      r.doc["failures"] = rep.failures;
      r.doc["min_margin"] = rep.min_margin;
      r.doc["in_ideal"] = rep.in_ideal;
      r.doc["entries"] = rep.entries;
      r.failed = rep.failures > 0 || !rep.in_ideal;
      return r;
    };
  }
  {
    auto [s, i] = leaf(inf, "verify", "functional equation, closeness and isometry of the pulled-back h");
    s->add_option("--germ", germ_s)->required();
    s->add_option("--cutoff", cutoff)->default_val(1);
    s->add_option("--samples", samples)->default_val(500);
    s->add_option("--pairs", pairs)->default_val(500);
    s->add_option("--truncation", truncation, "digits T of the hhat truncation (0 = largest with p^T <= 1000)")->default_val(0);
    leaves[i].handler = [&] {
      Germ f = germ_of(germ_s, g.precision);
      PullbackOptions o;
      o.samples = samples;
      o.pairs = pairs;
      o.truncation = truncation;
      o.precision = g.precision;
      o.seed = g.seed;
      o.start_cutoff = cutoff;
      auto rep = pullback_verify(f, o);
      Result r;
      r.doc["chart"] = chart_json(rep.chart);
      r.doc["shrink_steps"] = rep.shrink_steps;
      r.doc["truncation"] = rep.truncation;
      r.doc["samples"] = rep.samples;
      r.doc["functional_failures"] = rep.functional_failures;
      r.doc["min_functional_margin"] = rep.min_functional_margin;
      r.doc["precision_limited"] = rep.precision_limited;
      r.doc["closeness_failures"] = rep.closeness_failures;
      r.doc["sector_failures"] = rep.sector_failures;
      r.doc["chart_failures"] = rep.chart_failures;
      r.doc["pairs"] = rep.pairs;
      r.doc["cross_sector_pairs"] = rep.cross_sector_pairs;
      r.doc["isometry_failures"] = rep.isometry_failures;
      r.doc["undetermined_pairs"] = rep.undetermined_pairs;
      r.doc["base_points"] = rep.base_points;
      r.doc["entries"] = rep.entries;
      r.doc["passed"] = rep.passed();
      r.failed = !rep.passed();
      return r;
    };
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  std::ostringstream out, err;
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    outcome.out = out.str();
    outcome.err = err.str();
    outcome.exit_code = code == 0 ? 0 : 1;
    return outcome;
  }
  if (g.format == "dot" && !census->got_subcommand("diagram")) {
    outcome.err = "--format dot is only available for 'census diagram'\n";
    outcome.exit_code = 1;
    return outcome;
  }

  const Leaf* chosen = nullptr;
  for (const auto& l : leaves)
    if (l.app->parsed()) chosen = &l;
  Result res;
  try {
    res = chosen->handler();
  } catch (const padyn::Error& e) {
    outcome.err = std::string("error: ") + e.what() + "\n";
    outcome.exit_code = 1;
    return outcome;
  } catch (const std::invalid_argument& e) {
    outcome.err = std::string("error: bad numeric argument (") + e.what() + ")\n";
    outcome.exit_code = 1;
    return outcome;
  }

  if (res.raw) {
    outcome.out = *res.raw;
  } else {
    json doc;
    std::string inv;
    for (const auto& a : args) inv += (inv.empty() ? "" : " ") + a;
    doc["command"] = chosen->path;
    doc["invocation"] = inv;
    doc["version"] = padyn::version;
    doc["schema"] = 1;
    doc["precision"] = g.precision;
    doc["seed"] = g.seed;
    for (auto it = res.doc.begin(); it != res.doc.end(); ++it) doc[it.key()] = it.value();
    if (g.format == "table") {
      std::ostringstream os;
      render_table(doc, "", os);
      outcome.out = os.str();
    } else {
      outcome.out = doc.dump(2) + "\n";
    }
  }
  outcome.exit_code = res.failed ? 2 : 0;
  return outcome;
}

}  // namespace padyn::cli
