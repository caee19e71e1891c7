#pragma once
#include <optional>
#include <string>
#include <vector>

#include "padyn/padic.hpp"

namespace padyn {

struct MultiplierMap {
  Prime p = 2;
  PadicNumber a;

  MultiplierMap() = default;
  MultiplierMap(Prime p, PadicNumber a);
  PadicNumber operator()(const PadicNumber& x) const { return a * x; }
};

enum class MultiplierKind { contracting, expanding, indifferent_rational, indifferent_irrational };

struct MultiplierClass {
  MultiplierKind kind;
  long order = 0;        // for indifferent_rational
  long certified_to = 0; // digits the root-of-unity test used
};
std::string to_string(MultiplierKind k);

MultiplierClass classify(const PadicNumber& a, long precision);

// Closure of {a^z : z in Z_p} inside Z_p^x: the preimage of a subgroup H of
// (Z/p^level)^x. H is generated by a mod p^level.
struct OrbitClosure {
  Prime p = 2;
  long n = 0;          // ord(a1 - 1) for odd p; ord(a -+ 1) for p = 2
  long torsion = 1;    // order of the root-of-unity part
  long level = 1;
  std::vector<mpz_class> subgroup;  // sorted residues mod p^level
  std::string description;

  bool contains(const PadicNumber& u) const;
  // Smallest residue mod p^level in the coset u H.
  mpz_class canonical(const mpz_class& u) const;
  // Sorted canonical coset representatives; their number is N(a).
  std::vector<mpz_class> coset_reps() const;
};

OrbitClosure orbit_closure(const PadicNumber& a);
mpz_class count_N(const PadicNumber& a);
// The two closed forms, for cross-checking.
mpz_class count_N_formula(const PadicNumber& a);
// Orbits of multiplication by a on the units of circle i modulo p^T, by walking cycles.
mpz_class count_orbits_bruteforce(const PadicNumber& a, long circle, long T);
// Residues {a^n mod p^T}.
std::vector<mpz_class> closure_bruteforce(const PadicNumber& a, long T);

struct DirectedExponent {
  mpq_class alpha;
  bool swapped = false;  // true when the roles of a and a' were exchanged
};
DirectedExponent multiplier_exponent(const PadicNumber& a, const PadicNumber& a2);
mpq_class contracting_exponent(const PadicNumber& pi1, const PadicNumber& pi2);
mpq_class expanding_exponent(const PadicNumber& pi1, const PadicNumber& pi2);

// a^z for z in Z_p; requires z -> a^z to be continuous (a in 1 + pZ_p, any unit for p = 2).
PadicNumber power_zp(const PadicNumber& a, const PadicNumber& z);
// z in Z_p with b^z = w, or nullopt if w is not in the closure of the powers of b.
std::optional<PadicNumber> discrete_log(const PadicNumber& b, const PadicNumber& w);

}  // namespace padyn
