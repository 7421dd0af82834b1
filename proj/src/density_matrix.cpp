#include "density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace noisy {

namespace {

double off_diagonal_frobenius(const std::vector<cplx>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += std::norm(a[static_cast<std::size_t>(i) * n + j]);
  return std::sqrt(2.0 * s);
}

}  // namespace

DensityMatrix::DensityMatrix(int dim, std::vector<cplx> entries) : dim_(dim), a_(std::move(entries)) {
  if (dim_ < 1 || dim_ > kMaxDim) raise(Errc::invalid_argument, "density matrix dim must be in [1,64]");
  if (a_.size() != static_cast<std::size_t>(dim_) * dim_)
    raise(Errc::invalid_argument, "entry count does not match dim");
  validate();
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> values) {
  int d = static_cast<int>(values.size());
  std::vector<cplx> a(static_cast<std::size_t>(d) * d, cplx(0.0, 0.0));
  for (int i = 0; i < d; ++i) a[static_cast<std::size_t>(i) * d + i] = values[i];
  return DensityMatrix(d, std::move(a));
}

DensityMatrix DensityMatrix::identity_mixed(int dim) {
  std::vector<double> v(static_cast<std::size_t>(dim), 1.0 / dim);
  return diagonal(v);
}

void DensityMatrix::validate() const {
  double trace = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      cplx diff = at(i, j) - std::conj(at(j, i));
      if (std::abs(diff) > 1e-10) raise(Errc::not_hermitian, "matrix is not Hermitian within 1e-10");
    }
    trace += at(i, i).real();
  }
  if (std::abs(trace - 1.0) > 1e-10) raise(Errc::invalid_argument, "trace must be 1 within 1e-10");
  auto eig = jacobi_eigensystem(a_, dim_);
  if (eig.values.back() < -1e-9) raise(Errc::not_positive, "negative eigenvalue beyond tolerance");
}

EigenSystem jacobi_eigensystem(std::vector<cplx> a, int n) {
  std::vector<cplx> v(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

  auto idx = [n](int r, int c) { return static_cast<std::size_t>(r) * n + c; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_frobenius(a, n) <= 1e-13) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cplx apq = a[idx(p, q)];
        double r = std::abs(apq);
        if (r < 1e-300) continue;
        cplx phase = apq / r;  // e^{i phi}
        double app = a[idx(p, p)].real();
        double aqq = a[idx(q, q)].real();
        double t;
        if (app == aqq) {
          t = 1.0;
        } else {
          double tau = (app - aqq) / (2.0 * r);  // cot(2 theta)
          t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;

        // A <- G^dagger A G with G mixing columns p and q:
        //   col_p' = c col_p + s e^{-i phi} col_q
        //   col_q' = -s e^{i phi} col_p + c col_q
        for (int i = 0; i < n; ++i) {
          cplx aip = a[idx(i, p)], aiq = a[idx(i, q)];
          a[idx(i, p)] = c * aip + s * std::conj(phase) * aiq;
          a[idx(i, q)] = -s * phase * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          cplx apj = a[idx(p, j)], aqj = a[idx(q, j)];
          a[idx(p, j)] = c * apj + s * phase * aqj;
          a[idx(q, j)] = -s * std::conj(phase) * apj + c * aqj;
        }
        a[idx(p, q)] = 0.0;
        a[idx(q, p)] = 0.0;
        for (int i = 0; i < n; ++i) {
          cplx vip = v[idx(i, p)], viq = v[idx(i, q)];
          v[idx(i, p)] = c * vip + s * std::conj(phase) * viq;
          v[idx(i, q)] = -s * phase * vip + c * viq;
        }
      }
    }
  }

  EigenSystem es;
  es.dim = n;
  es.values.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a[idx(i, i)].real();
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] > diag[y]; });
  es.vectors.resize(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    es.values[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) es.vectors[idx(i, j)] = v[idx(i, order[j])];
  }
  return es;
}

Spectrum eigen_spectrum(const DensityMatrix& m) {
  auto eig = jacobi_eigensystem(m.entries(), m.dim());
  double total = 0.0;
  for (double& x : eig.values) {
    x = std::clamp(x, 0.0, 1.0);
    total += x;
  }
  if (total <= 0.0) raise(Errc::not_positive, "eigenvalues sum to zero");
  for (double& x : eig.values) x /= total;
  return Spectrum::from_values(eig.values);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) raise(Errc::dimension_mismatch, "trace distance needs equal dims");
  std::vector<cplx> diff(a.entries());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= b.entries()[i];
  auto eig = jacobi_eigensystem(std::move(diff), a.dim());
  double s = 0.0;
  for (double x : eig.values) s += std::abs(x);
  return s;
}

DensityMatrix Purification::reduced_system() const {
  std::vector<cplx> rho(static_cast<std::size_t>(system_dim) * system_dim, cplx(0.0, 0.0));
  for (int i = 0; i < system_dim; ++i)
    for (int j = 0; j < system_dim; ++j) {
      cplx acc(0.0, 0.0);
      for (int k = 0; k < ancilla_dim; ++k)
        acc += amplitudes[static_cast<std::size_t>(i) * ancilla_dim + k] *
               std::conj(amplitudes[static_cast<std::size_t>(j) * ancilla_dim + k]);
      rho[static_cast<std::size_t>(i) * system_dim + j] = acc;
    }
  return DensityMatrix(system_dim, std::move(rho));
}

Purification minimal_purification(const DensityMatrix& m) {
  auto eig = jacobi_eigensystem(m.entries(), m.dim());
  int rank = 0;
  for (double x : eig.values)
    if (x > 1e-10) ++rank;
  if (rank == 0) raise(Errc::not_positive, "matrix has no positive eigenvalues");

  Purification p;
  p.system_dim = m.dim();
  p.system_qubits = static_cast<int>(std::ceil(std::log2(static_cast<double>(m.dim()))));
  p.ancilla_qubits = rank <= 1 ? 0 : static_cast<int>(std::ceil(std::log2(static_cast<double>(rank))));
  p.ancilla_dim = 1 << p.ancilla_qubits;
  p.amplitudes.assign(static_cast<std::size_t>(p.system_dim) * p.ancilla_dim, cplx(0.0, 0.0));
  for (int r = 0; r < rank; ++r) {
    double lam = std::max(eig.values[r], 0.0);
    double root = std::sqrt(lam);
    for (int i = 0; i < p.system_dim; ++i)
      p.amplitudes[static_cast<std::size_t>(i) * p.ancilla_dim + r] =
          root * eig.vectors[static_cast<std::size_t>(i) * m.dim() + r];
  }
  return p;
}

}  // namespace noisy
