#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "protocol.hpp"
#include "spectrum.hpp"

namespace noisy {

/// Eigenvalues of tensor_power(s, n) inside the band
/// 2^{-n(S+delta)} <= v <= 2^{-n(S-delta)}, carrying weight c.
struct TypicalSet {
  long n = 0;
  double delta = 0.0;
  double weight = 0.0;           // c
  mpz_class cardinality;         // number of member eigenvalues
  double log_cardinality = 0.0;  // log2(cardinality), -inf when empty
  Spectrum power;                // the full tensor-power spectrum
  std::vector<std::size_t> included;  // indices into power.entries()
  double band_lo = 0.0, band_hi = 0.0;  // bounds on -log2(value)
};

TypicalSet typical_set(const Spectrum& s, long n, double delta);

enum class RateDirection { distill, form, mixed_to_mixed };
const char* direction_name(RateDirection d);

/// Per-experiment record for the asymptotic protocols. trace_error is the
/// a priori budget 2(1-c) + dilution error; epsilon_met says whether that
/// budget stays within the requested 2*epsilon.
struct RateReport {
  RateDirection direction = RateDirection::distill;
  long n = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double yield_per_copy = 0.0;
  double trace_error = 0.0;
  double info_before = 0.0, info_after = 0.0;
  double entropy_before = 0.0, entropy_after = 0.0;
  bool epsilon_met = true;
  long required_n = 0;  // advisory threshold when epsilon_met is false (-1: none found)
};

struct DistillResult {
  RateReport report;
  NoisyProtocol protocol;  // uniform cyclic block dilution over D positions
  unsigned long log2_d = 0;
  double typical_weight = 1.0;
};

/// Convert s^(x)n into pure qubits at rate log d - S - delta - O(1/n):
/// D = 2^ceil(n(S+delta)) block-diluted away, n log d - log D pure qubits kept.
DistillResult distill(const Spectrum& s, long n, double delta, double epsilon);

struct FormResult {
  RateReport report;
  double pure_qubits = 0.0;   // n log d - log2 D'
  double noise_qubits = 0.0;  // log2 D'
  unsigned long log2_d_prime = 0;
  double typical_weight = 1.0;
};

/// Prepare s^(x)n from pure qubits plus maximally mixed ancillas:
/// D' = largest power of two <= c 2^{n(S-delta)} supplies the noise.
FormResult form(const Spectrum& s, long n, double delta, double epsilon);

/// Optimal conversion ratio info(a)/info(b); throws target_no_information
/// when info(b) vanishes (the rate diverges).
double mixed_to_mixed_rate(const Spectrum& a, const Spectrum& b);

struct ContinuityBound {
  int qubits = 0;
  double trace_dist = 0.0;
  double bound = 0.0;  // bits
};

/// Explicit entropy continuity bound B(N, T) with |S(a)-S(b)| <= B for all
/// N-qubit states at trace distance T: (T/2) log2(2^N - 1) + h(T/2), capped
/// at its maximum so it stays monotone in T.
ContinuityBound fannes_bound(int qubits, double trace_dist);

struct AuditRow {
  long n = 0;
  double yield = 0.0;  // distill output per copy
  double cost = 0.0;   // formation input per copy
  double ratio = 0.0;  // yield / cost; <= 1, -> 1 as n grows and delta -> 0
};

struct AuditReport {
  double delta = 0.0;
  std::vector<AuditRow> rows;
};

/// pi -> rho -> pi round trip: ratio of pure qubits recovered to pure qubits
/// invested, per n.
AuditReport optimality_audit(const Spectrum& s, std::span<const long> ns, double delta);

struct RigidityReport {
  bool trivial = false;
  double yield_per_copy = 0.0;  // pure qubits distillable from one free copy
  std::string verdict;
};

/// What happens if the free ancilla is not maximally mixed: any other choice
/// hands out pure qubits for free and every transition rate diverges.
RigidityReport rigidity_experiment(const Spectrum& free_ancilla);

/// Smallest n (advisory, log-domain search) with typical weight >= 1-epsilon.
std::optional<long> weight_threshold_n(const Spectrum& s, double delta, double epsilon,
                                       long limit = 1L << 20);

/// Typical weight of tensor_power(s, n) evaluated in log domain only
/// (no big-integer multiplicities); NaN when the enumeration is too large.
double typical_weight_estimate(const Spectrum& s, long n, double delta);

struct ExactRunCheck {
  double measured_error = 0.0;  // trace distance of the simulated run to its target
  double budget = 0.0;          // reported trace_error it must stay under
};

/// Full exact simulation of the distillation protocol at small n
/// (d^n within the explicit cap): block dilution, then tracing the D block.
ExactRunCheck distill_exact_check(const Spectrum& s, long n, double delta, double epsilon);

/// Full exact run of the formation protocol at small n: the wrap-around
/// interval mixture carries the uniform-D' state exactly onto the typical
/// state; measured against tensor_power(s, n).
ExactRunCheck form_exact_check(const Spectrum& s, long n, double delta, double epsilon);

}  // namespace noisy
