#pragma once

#include <complex>
#include <span>
#include <vector>

#include "spectrum.hpp"

namespace noisy {

using cplx = std::complex<double>;

/// Small dense Hermitian trace-1 matrix. Dimensions are capped at 64; all
/// asymptotic work routes through Spectrum instead.
class DensityMatrix {
 public:
  static constexpr int kMaxDim = 64;

  DensityMatrix(int dim, std::vector<cplx> entries);
  static DensityMatrix diagonal(std::span<const double> values);
  static DensityMatrix identity_mixed(int dim);  // I/dim

  int dim() const { return dim_; }
  const cplx& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
  const std::vector<cplx>& entries() const { return a_; }

 private:
  int dim_;
  std::vector<cplx> a_;
  void validate() const;
};

struct EigenSystem {
  std::vector<double> values;  // sorted nonincreasing
  std::vector<cplx> vectors;   // row-major dim x dim; column j pairs with values[j]
  int dim = 0;
};

/// Cyclic Jacobi for a Hermitian matrix: off-diagonal Frobenius threshold
/// 1e-13, hard cap 100 sweeps. Deterministic, no pivoting choices.
EigenSystem jacobi_eigensystem(std::vector<cplx> a, int dim);

/// Eigenvalues of a density matrix as a Spectrum: clipped to [0,1],
/// renormalized to sum 1, grouped by the 1e-12 rule.
Spectrum eigen_spectrum(const DensityMatrix& m);

/// Sum of |eigenvalues| of a-b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

struct Purification {
  int system_qubits = 0;
  int ancilla_qubits = 0;
  int system_dim = 0;
  int ancilla_dim = 0;
  std::vector<cplx> amplitudes;  // joint index i*ancilla_dim + a

  DensityMatrix reduced_system() const;
};

/// Pure joint state whose system marginal is m, with the minimal ancilla:
/// ceil(log2 rank) qubits, rank counted above 1e-10.
Purification minimal_purification(const DensityMatrix& m);

}  // namespace noisy
