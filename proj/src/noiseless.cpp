#include "noiseless.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bigint.hpp"
#include "errors.hpp"

namespace noisy {

namespace {

constexpr long kExactBinomialCap = 1000;
constexpr double kLog2e = 1.4426950408889634;

double log2_binomial(long n, long k) {
  return kLog2e * (std::lgamma(static_cast<double>(n) + 1.0) -
                   std::lgamma(static_cast<double>(k) + 1.0) -
                   std::lgamma(static_cast<double>(n - k) + 1.0));
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace

double preparation_cost(const Spectrum& s) { return s.qubits() + entropy_bits(s); }

double garbage_bound(double input_entropy_bits, double output_entropy_bits) {
  if (input_entropy_bits < 0.0 || output_entropy_bits < 0.0)
    raise(Errc::invalid_argument, "entropies must be nonnegative");
  return std::max(0.0, output_entropy_bits - input_entropy_bits);
}

MixedTransitionCost mixed_to_mixed_cost(const Spectrum& a, const Spectrum& b) {
  MixedTransitionCost cost;
  double na = a.qubits(), nb = b.qubits();
  double sa = entropy_bits(a), sb = entropy_bits(b);
  cost.delta_qubits = nb - na;
  cost.delta_entropy = sb - sa;
  cost.additional_pure_qubits = std::max(0.0, cost.delta_qubits + cost.delta_entropy);

  double held = na - sa;                    // pure qubits after distilling a
  double noise_deficit = garbage_bound(sa, sb);
  double pure_needed = (nb - sb) + 2.0 * noise_deficit;
  cost.sketch.push_back("distill source: " + fmt(na - sa) + " pure qubits + " + fmt(sa) +
                        " noise qubits on hand");
  cost.sketch.push_back("form target needs " + fmt(nb - sb) + " pure qubits + " + fmt(sb) +
                        " noise qubits");
  if (noise_deficit > 0.0)
    cost.sketch.push_back("produce " + fmt(noise_deficit) +
                          " missing noise qubits from entangled pairs: costs " +
                          fmt(2.0 * noise_deficit) + " pure");
  else if (cost.delta_entropy < 0.0)
    cost.sketch.push_back("noise surplus of " + fmt(-cost.delta_entropy) +
                          " qubits discarded (clamped accounting)");
  cost.sketch.push_back("additional pure qubits: " + fmt(std::max(0.0, pure_needed - held)));
  return cost;
}

BinomialProtocolResult binomial_protocol(double a2, long n) {
  if (!(a2 > 0.0 && a2 < 1.0)) raise(Errc::invalid_argument, "a2 must lie in (0,1)");
  if (n < 1) raise(Errc::invalid_argument, "n must be >= 1");

  BinomialProtocolResult res;
  res.outcomes.reserve(static_cast<std::size_t>(n) + 1);
  const double l2a = std::log2(a2), l2b = std::log2(1.0 - a2);
  const bool exact = n <= kExactBinomialCap;

  mpz_class binom = 1;
  double total = 0.0;
  for (long k = 0; k <= n; ++k) {
    BinomialOutcome o;
    o.k = k;
    if (exact) {
      o.block_dim = binom;
      o.log2_block_dim = static_cast<double>(log2_mpz(binom));
      if (k < n) {
        binom *= static_cast<unsigned long>(n - k);
        mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(k + 1));
      }
    } else {
      o.log2_block_dim = log2_binomial(n, k);
    }
    o.probability = std::exp2(o.log2_block_dim + k * l2a + (n - k) * l2b);
    o.pure_yield = static_cast<double>(n) - o.log2_block_dim;
    total += o.probability;
    res.outcomes.push_back(std::move(o));
  }
  if (std::abs(total - 1.0) > 1e-10)
    raise(Errc::internal, "outcome probabilities do not sum to 1");

  double expected_yield = 0.0, erasure = 0.0;
  for (const auto& o : res.outcomes) {
    expected_yield += o.probability * o.pure_yield;
    if (o.probability > 0.0) erasure -= o.probability * std::log2(o.probability);
  }
  res.expected_yield = expected_yield;
  res.erasure_bits = erasure;
  res.net_pure_states = expected_yield - erasure;
  res.per_copy = res.net_pure_states / static_cast<double>(n);

  double entropy = -(a2 * l2a + (1.0 - a2) * l2b);
  res.ledger.pure_qubits_in = n * (1.0 + entropy);  // noiseless preparation of the source
  res.ledger.pure_qubits_out = res.net_pure_states;
  res.ledger.noise_produced_qubits = n * entropy;
  res.ledger.erasure_bits = erasure;
  res.ledger.per_copy_in = 1.0 + entropy;
  res.ledger.per_copy_out = res.per_copy;
  return res;
}

std::vector<mpq_class> binomial_outcome_probabilities_exact(long num, long den, long n) {
  if (den < 2 || num < 1 || num >= den) raise(Errc::invalid_argument, "need 0 < num/den < 1");
  if (n < 1) raise(Errc::invalid_argument, "n must be >= 1");
  std::vector<mpq_class> ps;
  ps.reserve(static_cast<std::size_t>(n) + 1);
  mpz_class binom = 1;
  mpz_class den_pow;
  mpz_pow_ui(den_pow.get_mpz_t(), mpz_class(den).get_mpz_t(), static_cast<unsigned long>(n));
  for (long k = 0; k <= n; ++k) {
    mpz_class a_pow, b_pow;
    mpz_pow_ui(a_pow.get_mpz_t(), mpz_class(num).get_mpz_t(), static_cast<unsigned long>(k));
    mpz_pow_ui(b_pow.get_mpz_t(), mpz_class(den - num).get_mpz_t(),
               static_cast<unsigned long>(n - k));
    mpq_class p(binom * a_pow * b_pow, den_pow);
    p.canonicalize();
    ps.push_back(p);
    if (k < n) {
      binom *= static_cast<unsigned long>(n - k);
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(k + 1));
    }
  }
  return ps;
}

ErasureScalingReport erasure_cost_scaling(double a2, std::span<const long> ns) {
  ErasureScalingReport rep;
  for (long n : ns) {
    auto res = binomial_protocol(a2, n);
    ErasureScalingRow row;
    row.n = n;
    row.erasure_bits = res.erasure_bits;
    row.per_copy = res.erasure_bits / static_cast<double>(n);
    row.log_bound = std::log2(static_cast<double>(n) + 1.0);
    rep.rows.push_back(row);
  }
  return rep;
}

BinomialProtocolResult type_class_protocol(const Spectrum& s, long n) {
  if (s.dim() > 4) raise(Errc::invalid_argument, "type-class protocol covers dimensions <= 4");
  if (n < 1) raise(Errc::invalid_argument, "n must be >= 1");
  auto levels = s.materialize();
  const std::size_t d = levels.size();
  const double log2d = s.qubits();

  // composition count C(n+d-1, d-1)
  double log_count = 0.0;
  for (std::size_t i = 1; i < d; ++i)
    log_count += std::log2(static_cast<double>(n + static_cast<long>(i))) -
                 std::log2(static_cast<double>(i));
  if (log_count > std::log2(4e6)) raise(Errc::overflow, "too many type classes");

  BinomialProtocolResult res;
  double total = 0.0;
  const bool exact = n <= kExactBinomialCap;
  long index = 0;

  // multinomial(n; k_0..k_{d-1}) = prod_i C(rem_i, k_i), updated per level
  std::function<void(std::size_t, long, double, double, const mpz_class&)> rec =
      [&](std::size_t level, long rem, double l2v, double l2m, const mpz_class& coef) {
        if (level == d - 1) {
          double l2val = l2v + (levels[level] > 0.0
                                    ? rem * std::log2(levels[level])
                                    : (rem > 0 ? -std::numeric_limits<double>::infinity() : 0.0));
          double l2mult = l2m;  // the final level contributes C(rem, rem) = 1
          BinomialOutcome o;
          o.k = index++;
          if (exact) {
            o.block_dim = coef;
            o.log2_block_dim = static_cast<double>(log2_mpz(coef));
          } else {
            o.log2_block_dim = l2mult;
          }
          o.probability = std::isinf(l2val) ? 0.0 : std::exp2(o.log2_block_dim + l2val);
          o.pure_yield = static_cast<double>(n) * log2d - o.log2_block_dim;
          total += o.probability;
          res.outcomes.push_back(std::move(o));
          return;
        }
        mpz_class binom = coef;
        double lg_binom = 0.0;
        for (long k = 0;; ++k) {
          double l2vk = l2v + (levels[level] > 0.0
                                   ? k * std::log2(levels[level])
                                   : (k > 0 ? -std::numeric_limits<double>::infinity() : 0.0));
          rec(level + 1, rem - k, l2vk, l2m + lg_binom, binom);
          if (k == rem) break;
          binom *= static_cast<unsigned long>(rem - k);
          mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(k + 1));
          lg_binom += std::log2(static_cast<double>(rem - k)) -
                      std::log2(static_cast<double>(k + 1));
        }
      };
  rec(0, n, 0.0, 0.0, mpz_class(1));

  if (std::abs(total - 1.0) > 1e-9) raise(Errc::internal, "type-class probabilities do not sum to 1");

  double expected_yield = 0.0, erasure = 0.0;
  for (const auto& o : res.outcomes) {
    expected_yield += o.probability * o.pure_yield;
    if (o.probability > 0.0) erasure -= o.probability * std::log2(o.probability);
  }
  res.expected_yield = expected_yield;
  res.erasure_bits = erasure;
  res.net_pure_states = expected_yield - erasure;
  res.per_copy = res.net_pure_states / static_cast<double>(n);

  double entropy = entropy_bits(s);
  res.ledger.pure_qubits_in = n * (log2d + entropy);
  res.ledger.pure_qubits_out = res.net_pure_states;
  res.ledger.noise_produced_qubits = n * entropy;
  res.ledger.erasure_bits = erasure;
  res.ledger.per_copy_in = log2d + entropy;
  res.ledger.per_copy_out = res.per_copy;
  return res;
}

}  // namespace noisy
