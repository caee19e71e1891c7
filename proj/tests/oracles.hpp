#pragma once
// Slow, independent reference computations used to check the library.
#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace oracle {

inline std::int64_t ipow(std::int64_t p, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= p;
  return r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Digits of num/den (p not dividing den) by repeated division, little-endian.
inline std::vector<unsigned long> rational_digits(mpz_class num, mpz_class den, unsigned long p, int count) {
  std::vector<unsigned long> d;
  for (int i = 0; i < count; ++i) {
    unsigned long digit = 0;
    for (; digit < p; ++digit) {
      mpz_class r = num - den * digit;
      if (mpz_divisible_ui_p(r.get_mpz_t(), p)) break;
    }
    d.push_back(digit);
    num = (num - den * digit) / p;
  }
  return d;
}

// All x mod p^k with x^m = b mod p^k, by exhaustion.
inline std::vector<std::int64_t> roots_mod(std::int64_t b, int m, std::int64_t p, int k) {
  const std::int64_t M = ipow(p, k);
  std::vector<std::int64_t> out;
  for (std::int64_t x = 0; x < M; ++x) {
    __int128 y = 1;
    for (int i = 0; i < m; ++i) y = (y * x) % M;
    if (static_cast<std::int64_t>(y) == mod(b, M)) out.push_back(x);
  }
  return out;
}

// Number of cycles of u -> a u on units mod p^k, by walking each cycle.
inline std::int64_t mult_cycles(std::int64_t a, std::int64_t p, int k) {
  const std::int64_t M = ipow(p, k);
  std::vector<char> seen(static_cast<std::size_t>(M), 0);
  std::int64_t cycles = 0;
  for (std::int64_t u = 1; u < M; ++u) {
    if (u % p == 0 || seen[static_cast<std::size_t>(u)]) continue;
    ++cycles;
    for (std::int64_t x = u; !seen[static_cast<std::size_t>(x)]; x = mod(x * a, M)) seen[static_cast<std::size_t>(x)] = 1;
  }
  return cycles;
}

// Modular inverse of a unit u mod M by brute extended Euclid.
inline std::int64_t inv_mod(std::int64_t u, std::int64_t M) {
  std::int64_t g = M, x = 0, y = 1, r = mod(u, M);
  while (r != 0) {
    std::int64_t q = g / r;
    std::int64_t t = g - q * r;
    g = r;
    r = t;
    t = x - q * y;
    x = y;
    y = t;
  }
  return mod(x, M);
}

// Cycles of x -> x / (1 - a x) on the residues mod p^(2i+k) of the circle |x| = p^-i.
// For m = 1 this permutation's cycles are the Zp-orbits seen at that modulus.
inline std::int64_t flow1_cycles(std::int64_t p, std::int64_t a, int i, int k) {
  const std::int64_t M = ipow(p, 2 * i + k), lo = ipow(p, i);
  std::vector<char> seen(static_cast<std::size_t>(M), 0);
  std::int64_t cycles = 0;
  for (std::int64_t x = lo; x < M; x += lo) {
    if ((x / lo) % p == 0 || seen[static_cast<std::size_t>(x)]) continue;
    ++cycles;
    for (std::int64_t y = x; !seen[static_cast<std::size_t>(y)];) {
      seen[static_cast<std::size_t>(y)] = 1;
      y = mod(static_cast<std::int64_t>(static_cast<__int128>(y) * inv_mod(1 - a * y, M) % M), M);
    }
  }
  return cycles;
}

}  // namespace oracle
