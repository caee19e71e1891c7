#pragma once
#include <string>
#include <vector>

#include "padyn/bullseye.hpp"
#include "padyn/flows.hpp"
#include "padyn/multipliers.hpp"

namespace padyn {

// Smallest residue of an orbit on the circle |x| = p^{-circle},
// taken modulo p^{circle (m+1) + ord(a)}.
struct OrbitKey {
  long circle = 0;
  mpz_class residue;
  bool operator==(const OrbitKey& o) const { return circle == o.circle && residue == o.residue; }
  bool operator<(const OrbitKey& o) const {
    return circle != o.circle ? circle < o.circle : residue < o.residue;
  }
};

long key_exponent(const FlowMap& F, long circle);
mpz_class orbit_count(const FlowMap& F, long circle);
std::vector<OrbitKey> orbit_reps(const FlowMap& F, long circle, std::size_t cap = 1000000);
OrbitKey orbit_key(const FlowMap& F, const PadicNumber& x);
// Position of a key among the sorted keys of its circle, and back.
mpz_class key_index(const FlowMap& F, const OrbitKey& key);
OrbitKey key_at(const FlowMap& F, long circle, const mpz_class& index);

struct OracleResult {
  long modulus_exponent = 0;      // residues are taken mod p^this
  mpz_class residues;             // points of the circle at that modulus
  mpz_class classes;              // connected components under x -> f(x)
  std::vector<mpz_class> class_sizes;
};
// Independent count: union-find over circle residues one digit finer than the
// orbit modulus, joining each residue to the image under the actual map.
OracleResult census_oracle(const FlowMap& F, long circle);

RingProfile ring_profile(const FlowMap& F);
RingProfile ring_profile(const MultiplierMap& L);

enum class DiagramFormat { json, dot };
std::string emit_diagram(const FlowMap& F, long i_max, DiagramFormat format, std::size_t cap = 1000000);

}  // namespace padyn
