#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace noisy {

/// One group of equal eigenvalues. Values live in log2 domain so that
/// tensor powers with astronomically small eigenvalues stay representable;
/// `weight` is value*multiplicity (the total probability mass of the group)
/// and `multiplicity` is exact.
struct SpectrumEntry {
  double log2_value;       // -infinity marks exact zero eigenvalues
  double weight;           // value * multiplicity, in [0, 1]
  mpz_class multiplicity;  // >= 1

  double value() const;
};

/// Exact eigenvalue multiset of a state, sorted by value nonincreasing.
/// Equal values (within 1e-12 relative) are grouped into one entry, which is
/// what keeps n-fold tensor powers tractable: a spectrum with t distinct
/// values has at most C(n+t-1, t-1) distinct values in its n-th power.
class Spectrum {
 public:
  Spectrum() = default;

  /// Build from explicit eigenvalues (any order, zeros allowed).
  static Spectrum from_values(std::span<const double> values);
  /// Build from (value, multiplicity) pairs.
  static Spectrum from_entries(const std::vector<std::pair<double, mpz_class>>& entries);
  static Spectrum pure(const mpz_class& dim);
  static Spectrum maximally_mixed(const mpz_class& dim);

  const std::vector<SpectrumEntry>& entries() const { return entries_; }
  const mpz_class& dim() const { return dim_; }
  /// log2(dim); exact when dim is a power of two.
  double qubits() const { return qubits_; }

  bool is_pure() const;
  bool is_maximally_mixed() const;
  /// Number of nonzero eigenvalues.
  mpz_class support() const;

  Spectrum tensor_power(long n) const;
  Spectrum tensor_with(const Spectrum& other) const;

  /// Explicit value vector; throws Errc::overflow above max_dim.
  std::vector<double> materialize(std::size_t max_dim = kMaterializeCap) const;

  /// Canonicalize a raw grouped list (sorts, merges, validates).
  static Spectrum from_raw_groups(std::vector<SpectrumEntry> groups);

  static constexpr std::size_t kMaterializeCap = std::size_t{1} << 22;
  /// Relative grouping tolerance for equal eigenvalues, in log2 units.
  static constexpr double kGroupTolLog2 = 1.4427e-12;

 private:
  std::vector<SpectrumEntry> entries_;
  mpz_class dim_ = 0;
  double qubits_ = 0.0;

  void finalize_and_validate();
};

struct MonotoneVector {
  std::vector<double> ky_fan;  // partial sums of the k largest eigenvalues, k = 1..dim
  double entropy = 0.0;        // bits
  double info = 0.0;           // bits, qubits - entropy
};

/// Von Neumann entropy in bits, with the 0*log0 = 0 convention.
double entropy_bits(const Spectrum& s);
/// I = N - S: qubit count minus entropy. Nonnegative.
double info_bits(const Spectrum& s);

/// Full Ky Fan vector; requires a materializable dimension.
MonotoneVector ky_fan_norms(const Spectrum& s);
/// Partial sum of the k largest eigenvalues for arbitrary (big) k.
double ky_fan_at(const Spectrum& s, const mpz_class& k);

struct MajorizationResult {
  bool more_mixed = false;
  /// Smallest k whose partial sum certifies the violation, when not more mixed.
  std::optional<mpz_class> first_violation;
};

/// Is q more mixed than p? True iff every partial sum of q's sorted
/// eigenvalues is <= that of p (within 1e-12 absolute slack per sum).
MajorizationResult compare_mixedness(const Spectrum& q, const Spectrum& p);
bool more_mixed(const Spectrum& q, const Spectrum& p);

/// l1 distance of the two spectra aligned position by position in their
/// sorted order (trace distance of commuting states in a common eigenbasis).
double trace_distance(const Spectrum& a, const Spectrum& b);

/// l1 distance of two diagonal states in an explicitly given basis ordering.
double trace_distance(std::span<const double> a, std::span<const double> b);

/// Absolute slack used by majorization partial-sum comparisons.
inline constexpr double kMajorizationSlack = 1e-12;

}  // namespace noisy
