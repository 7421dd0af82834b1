#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "density_matrix.hpp"
#include "mixing.hpp"
#include "spectrum.hpp"

namespace noisy {

/// Executable noisy operation realizing a single-copy transition: tensor a
/// maximally mixed ancilla of ancilla_dim, apply a block permutation plan,
/// trace the ancilla back out. The plan divides the ancilla into groups
/// N_1..N_J and permutes block indices by sigma_j inside group j, so the
/// output eigenvalues are q~_i = sum_j (N_j/N) p_{sigma_j(i)}.
struct NoisyProtocol {
  enum class Kind {
    explicit_mixture,  // groups + mixture listed term by term
    uniform_cyclic,    // cycle_span shifts of [0, cycle_span), weight 1/span each
  };

  Kind kind = Kind::explicit_mixture;
  mpz_class input_dim;
  mpz_class ancilla_dim;

  std::vector<long> group_sizes;  // N_j; sum = ancilla_dim (explicit kind)
  PermutationMixture mixture;     // target weights alpha_j (explicit kind)
  mpz_class cycle_span;           // uniform_cyclic kind

  /// A priori l1 bound on |simulate(p) - q|, from the group rounding.
  double error_bound = 0.0;
};

/// Build a protocol carrying p to q per the mixture-of-permutations
/// construction. Requires equal dims, q more mixed than p, and
/// ancilla_dim >= the number of mixture terms.
NoisyProtocol synthesize(const Spectrum& p, const Spectrum& q, long ancilla_dim);

/// The exact dilution protocol averaging the first `span` sorted positions
/// with uniform cyclic shifts; span must divide into the ancilla evenly, so
/// the weights 1/span are exact and the error bound is zero.
NoisyProtocol cyclic_protocol(const mpz_class& input_dim, const mpz_class& span);

/// Exact output spectrum of a protocol run, computed in multiplicity
/// representation; the input_dim x ancilla_dim expansion is never allocated.
Spectrum simulate(const NoisyProtocol& proto, const Spectrum& p);

/// Same action on an explicit value vector in the protocol's working basis
/// ordering (the order is preserved, not re-sorted).
std::vector<double> simulate_on_vector(const NoisyProtocol& proto, const std::vector<double>& values);

/// Tensor maximally mixed ancillas so both spectra occupy the same number of
/// qubits (the lcm of the dimensions; for power-of-two inputs this is the
/// larger qubit count).
std::pair<Spectrum, Spectrum> pad_to_common_qubits(const Spectrum& a, const Spectrum& b);

/// One primitive of the noisy-operations class.
struct ChannelStep {
  enum class Kind { add_maximally_mixed, permute, trace_out_ancilla };
  Kind kind;
  int qubits = 0;         // add/trace width
  std::vector<int> perm;  // permute only

  static ChannelStep add(int qubits) { return {Kind::add_maximally_mixed, qubits, {}}; }
  static ChannelStep permutation(std::vector<int> p) { return {Kind::permute, 0, std::move(p)}; }
  static ChannelStep trace_out(int qubits) { return {Kind::trace_out_ancilla, qubits, {}}; }
};

/// Composition of primitive steps with a declared input dimension.
struct NoChannel {
  long input_dim = 0;
  std::vector<ChannelStep> steps;

  long output_dim() const;  // validates step shapes along the way
};

/// Exact action on a diagonal state given as an explicit probability vector.
std::vector<double> apply_channel(const NoChannel& chan, std::vector<double> state);

/// Same channel acting on a dense matrix (dims capped at 64 throughout).
DensityMatrix apply_channel(const NoChannel& chan, const DensityMatrix& m);

struct ChannelAudit {
  long samples = 0;
  long violations = 0;
  double max_info_gain = 0.0;  // max over samples of info(out) - info(in)
};

/// Samples random diagonal inputs and checks info(out) <= info(in) + 1e-9.
/// Violations are reported, not thrown.
ChannelAudit verify_no(const NoChannel& chan, long trials, std::uint64_t seed);

/// One random composed channel (dims kept within [2, 64]) and one random
/// input per trial; aggregated monotonicity audit over all trials.
ChannelAudit random_channel_audit(long trials, std::uint64_t seed);

double vector_entropy_bits(std::span<const double> v);
double vector_info_bits(std::span<const double> v);

}  // namespace noisy
