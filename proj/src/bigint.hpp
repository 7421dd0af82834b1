#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace noisy {

// log2 of a positive big integer, accurate to long-double precision.
inline long double log2_mpz(const mpz_class& z) {
  signed long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2l(static_cast<long double>(mant)) + static_cast<long double>(exp);
}

inline bool is_power_of_two(const mpz_class& z) {
  return z > 0 && mpz_popcount(z.get_mpz_t()) == 1;
}

// exact exponent for powers of two, i.e. z == 2^result
inline unsigned long exact_log2(const mpz_class& z) {
  return mpz_sizeinbase(z.get_mpz_t(), 2) - 1;
}

inline mpz_class pow2_mpz(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline std::string to_string(const mpz_class& z) { return z.get_str(); }

}  // namespace noisy
