#pragma once

#include <span>
#include <vector>

namespace noisy {

/// Square matrix with unit row and column sums (within 1e-10) and entries
/// >= -1e-12. Classical image of a noisy operation with equal in/out dims.
class DoublyStochastic {
 public:
  DoublyStochastic(int dim, std::vector<double> entries);
  static DoublyStochastic identity(int dim);

  int dim() const { return dim_; }
  double at(int r, int c) const { return m_[static_cast<std::size_t>(r) * dim_ + c]; }
  const std::vector<double>& entries() const { return m_; }
  std::vector<double> apply(std::span<const double> p) const;

 private:
  int dim_;
  std::vector<double> m_;
};

/// Convex combination of permutations; perm[i] is sigma(i), so the term
/// contributes weight * p[sigma(i)] at output index i.
struct PermutationMixture {
  struct Term {
    double weight;
    std::vector<int> perm;
  };
  std::vector<Term> terms;

  int dim() const { return terms.empty() ? 0 : static_cast<int>(terms[0].perm.size()); }
};

/// Doubly stochastic D with D p = q, built as a chain of at most dim-1
/// T-transforms (two-index averagings). Requires q more mixed than p;
/// throws Errc::not_majorized naming the first violated partial sum.
DoublyStochastic transfer_matrix(std::span<const double> p, std::span<const double> q);

/// Greedy Birkhoff-von Neumann decomposition: repeatedly match a permutation
/// on the positive support and subtract its minimal entry. A Caratheodory
/// reduction pass keeps the term count within (dim-1)^2 + 1.
PermutationMixture birkhoff(const DoublyStochastic& d);

std::vector<double> apply_mixture(const PermutationMixture& m, std::span<const double> p);

/// Sum of weight * P(sigma) as an explicit matrix.
DoublyStochastic mixture_matrix(const PermutationMixture& m);

/// Carathéodory bound on Birkhoff terms for a dim x dim matrix.
inline std::size_t birkhoff_term_bound(int dim) {
  return static_cast<std::size_t>(dim - 1) * static_cast<std::size_t>(dim - 1) + 1;
}

}  // namespace noisy
