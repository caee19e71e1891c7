#include "padyn/census.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace padyn {

static void require_circle(const FlowMap& F, long circle) {
  if (circle < 1) throw DomainError("circle index must be at least 1");
  if (!F.domain_ok(circle))
    throw DomainError("circle " + std::to_string(circle) + " is outside the flow's domain (first valid circle is " +
                      std::to_string(F.first_circle()) + ")");
}

long key_exponent(const FlowMap& F, long circle) { return circle * (F.m + 1) + F.k(); }

mpz_class orbit_count(const FlowMap& F, long circle) {
  require_circle(F, circle);
  return pow_p(F.p, circle * F.m + F.k() - 1) * (F.p - 1);
}

// Units below p^e listed in increasing order have index u - floor(u/p) - 1.
static mpz_class unit_index(const mpz_class& u, Prime p) { return u - u / p - 1; }
static mpz_class unit_at(const mpz_class& j, Prime p) { return j + j / (p - 1) + 1; }

std::vector<OrbitKey> orbit_reps(const FlowMap& F, long circle, std::size_t cap) {
  mpz_class n = orbit_count(F, circle);
  if (n > cap)
    throw CapExceeded("circle " + std::to_string(circle) + " has " + n.get_str() +
                      " orbits, above the cap; use the count-only mode");
  std::vector<OrbitKey> out;
  const mpz_class scale = pow_p(F.p, circle);
  for (mpz_class j = 0; j < n; ++j) out.push_back({circle, unit_at(j, F.p) * scale});
  return out;
}

OrbitKey orbit_key(const FlowMap& F, const PadicNumber& x) {
  if (x.is_zero()) throw DomainError("zero has no orbit key");
  const long i = x.valuation();
  require_circle(F, i);
  return {i, x.residue(key_exponent(F, i))};
}

mpz_class key_index(const FlowMap& F, const OrbitKey& key) {
  return unit_index(key.residue / pow_p(F.p, key.circle), F.p);
}

OrbitKey key_at(const FlowMap& F, long circle, const mpz_class& index) {
  if (index < 0 || index >= orbit_count(F, circle)) throw DomainError("orbit index out of range");
  return {circle, unit_at(index, F.p) * pow_p(F.p, circle)};
}

namespace {
struct DisjointSets {
  std::vector<std::uint32_t> parent, size;
  explicit DisjointSets(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};
}  // namespace

OracleResult census_oracle(const FlowMap& F, long circle) {
  require_circle(F, circle);
  OracleResult r;
  r.modulus_exponent = key_exponent(F, circle) + 1;
  const long digits = r.modulus_exponent - circle;
  const mpz_class total = pow_p(F.p, digits - 1) * (F.p - 1);
  if (total > 50000000) throw CapExceeded("oracle enumeration too large");
  r.residues = total;
  const std::size_t n = total.get_ui();
  DisjointSets sets(n);
  const mpz_class scale = pow_p(F.p, circle);
  const PadicNumber one = PadicNumber::from_integer(1, F.p, digits + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const PadicNumber x = PadicNumber::from_parts(F.p, circle, unit_at(j, F.p), digits);
    const PadicNumber y = flow_iterate(F, one, x);
    const mpz_class u = y.residue(r.modulus_exponent) / scale;
    sets.unite(static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(unit_index(u, F.p).get_ui()));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (sets.find(static_cast<std::uint32_t>(j)) == j) r.class_sizes.emplace_back(sets.size[j]);
  r.classes = static_cast<unsigned long>(r.class_sizes.size());
  return r;
}

RingProfile ring_profile(const FlowMap& F) {
  mpq_class x0(pow_p(F.p, std::max(F.k() - 1, 0L)) * (F.p - 1), F.k() == 0 ? mpz_class(F.p) : mpz_class(1));
  x0.canonicalize();
  return RingProfile::geometric(x0, static_cast<long>(F.p), F.m, F.first_circle());
}

RingProfile ring_profile(const MultiplierMap& L) {
  auto c = classify(L.a, L.a.precision());
  if (c.kind != MultiplierKind::indifferent_irrational)
    throw DomainError("a " + to_string(c.kind) + " multiplier has no bullseye orbit space");
  return RingProfile::constant(count_N(L.a), 1);
}

std::string emit_diagram(const FlowMap& F, long i_max, DiagramFormat format, std::size_t cap) {
  std::vector<std::vector<OrbitKey>> rings;
  std::size_t total = 0;
  for (long i = F.first_circle(); i <= i_max; ++i) {
    rings.push_back(orbit_reps(F, i, cap));
    total += rings.back().size();
    if (total > cap) throw CapExceeded("diagram exceeds the node cap");
  }
  if (format == DiagramFormat::json) {
    nlohmann::ordered_json doc;
    doc["p"] = F.p;
    doc["m"] = F.m;
    doc["a"] = F.a.to_literal();
    doc["rings"] = nlohmann::ordered_json::array();
    for (const auto& ring : rings) {
      nlohmann::ordered_json r;
      r["i"] = ring.front().circle;
      r["count"] = ring.size();
      r["reps"] = nlohmann::ordered_json::array();
      for (const auto& k : ring) {
        if (k.residue.fits_slong_p())
          r["reps"].push_back(k.residue.get_si());
        else
          r["reps"].push_back(k.residue.get_str());
      }
      doc["rings"].push_back(r);
    }
    return doc.dump(2) + "\n";
  }
  // Concentric layout: twopi places a node at its graph distance from the root,
  // so ring i hangs off a chain of i invisible hubs.
  std::ostringstream os;
  os << "graph orbits {\n  layout=twopi;\n  root=center;\n  node [shape=circle, fontsize=9];\n";
  os << "  center [label=\"0\", shape=point];\n";
  long prev_hub = 0;
  for (const auto& ring : rings) {
    const long i = ring.front().circle;
    os << "  hub" << i << " [style=invis, label=\"\"];\n";
    os << "  " << (prev_hub ? "hub" + std::to_string(prev_hub) : std::string("center")) << " -- hub" << i
       << " [style=invis];\n";
    os << "  subgraph cluster_ring" << i << " {\n    label=\"|x| = " << F.p << "^-" << i << ", " << ring.size()
       << " orbits\";\n";
    for (const auto& k : ring)
      os << "    n" << i << "_" << k.residue.get_str() << " [label=\"" << k.residue.get_str() << "\", ring=" << i
         << "];\n";
    os << "  }\n";
    for (const auto& k : ring)
      os << "  " << (prev_hub ? "hub" + std::to_string(prev_hub) : std::string("center")) << " -- n" << i << "_"
         << k.residue.get_str() << " [style=invis];\n";
    prev_hub = i;
  }
  os << "}\n";
  return os.str();
}

}  // namespace padyn
