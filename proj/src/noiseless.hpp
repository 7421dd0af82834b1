#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

#include "spectrum.hpp"

namespace noisy {

/// Pure-qubit bookkeeping for a run without free noise.
struct CostLedger {
  double pure_qubits_in = 0.0;        // pure qubits spent preparing the input
  double pure_qubits_out = 0.0;       // net pure qubits recovered
  double noise_produced_qubits = 0.0; // noise manufactured from pure pairs
  double erasure_bits = 0.0;          // Shannon cost of merging outcome branches
  double per_copy_in = 0.0;
  double per_copy_out = 0.0;
};

/// N + S: pure qubits needed to prepare s without access to noise.
double preparation_cost(const Spectrum& s);

struct MixedTransitionCost {
  double additional_pure_qubits = 0.0;  // max(0, dN + dS)
  double delta_qubits = 0.0;            // dN
  double delta_entropy = 0.0;           // dS
  std::vector<std::string> sketch;      // step-by-step protocol ledger
};

/// Noiseless a -> b transition cost: max(0, dN + dS) additional pure qubits,
/// realized by distilling a, buying the missing noise at two pure qubits per
/// noise qubit, and forming b.
MixedTransitionCost mixed_to_mixed_cost(const Spectrum& a, const Spectrum& b);

/// Minimal garbage register: max(0, outputS - inputS) qubits must be traced
/// out to raise the entropy that much.
double garbage_bound(double input_entropy_bits, double output_entropy_bits);

struct BinomialOutcome {
  long k = 0;
  double probability = 0.0;  // C(n,k) a2^k (1-a2)^(n-k)
  mpz_class block_dim;       // C(n,k); exact below the big-integer crossover
  double log2_block_dim = 0.0;
  double pure_yield = 0.0;  // I_k = n - log2 C(n,k)
};

struct BinomialProtocolResult {
  std::vector<BinomialOutcome> outcomes;
  CostLedger ledger;
  double expected_yield = 0.0;  // sum_k p_k I_k
  double erasure_bits = 0.0;    // H({p_k})
  double net_pure_states = 0.0; // N_o = expected_yield - erasure
  double per_copy = 0.0;        // N_o / n
};

/// Measure how many zeros an n-fold qubit source has: n+1 outcomes with
/// probabilities p_k, each projecting onto a C(n,k)-dimensional uniform
/// block worth I_k = n - log2 C(n,k) pure qubits. Exact big integers for
/// n <= 1000, log-domain binomials above.
BinomialProtocolResult binomial_protocol(double a2, long n);

/// Exact rational outcome probabilities for a2 = num/den; they sum to 1
/// exactly (big-rational arithmetic).
std::vector<mpq_class> binomial_outcome_probabilities_exact(long num, long den, long n);

struct ErasureScalingRow {
  long n = 0;
  double erasure_bits = 0.0;
  double per_copy = 0.0;
  double log_bound = 0.0;  // log2(n+1)
};

struct ErasureScalingReport {
  std::vector<ErasureScalingRow> rows;
};

/// H({p_k}) across an n grid: always <= log2(n+1) and vanishing per copy.
ErasureScalingReport erasure_cost_scaling(double a2, std::span<const long> ns);

/// Multinomial extension of the measurement protocol to sources of
/// dimension <= 4: outcomes are type classes of n-strings.
BinomialProtocolResult type_class_protocol(const Spectrum& s, long n);

}  // namespace noisy
