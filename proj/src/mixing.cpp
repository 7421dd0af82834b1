#include "mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace noisy {

namespace {

constexpr double kZeroTol = 1e-12;

void check_probability_vector(std::span<const double> v, const char* name) {
  if (v.empty()) raise(Errc::invalid_argument, std::string(name) + " is empty");
  double total = 0.0;
  for (double x : v) {
    if (x < -1e-12 || !std::isfinite(x))
      raise(Errc::invalid_argument, std::string(name) + " has a negative entry");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9)
    raise(Errc::invalid_argument, std::string(name) + " does not sum to 1");
}

std::vector<int> sorted_order(std::span<const double> v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
  return order;
}

// Kuhn augmenting-path matching on the positive support, rows and columns
// tried in ascending index order so decompositions are bit-stable.
bool try_kuhn(const std::vector<double>& m, int d, int row, std::vector<int>& match_col,
              std::vector<char>& visited) {
  for (int c = 0; c < d; ++c) {
    if (m[static_cast<std::size_t>(row) * d + c] <= kZeroTol || visited[c]) continue;
    visited[c] = 1;
    if (match_col[c] < 0 || try_kuhn(m, d, match_col[c], match_col, visited)) {
      match_col[c] = row;
      return true;
    }
  }
  return false;
}

// Shrink a convex combination of permutation matrices to the Caratheodory
// bound: find an affine dependence among the terms and shift weight along it
// until one term vanishes.
void caratheodory_reduce(PermutationMixture& mix, std::size_t bound) {
  const int d = mix.dim();
  const int rows = d * d + 1;
  while (mix.terms.size() > bound) {
    const int m = static_cast<int>(mix.terms.size());
    std::vector<double> a(static_cast<std::size_t>(rows) * m, 0.0);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < d; ++i) a[static_cast<std::size_t>(i * d + mix.terms[j].perm[i]) * m + j] = 1.0;
      a[static_cast<std::size_t>(rows - 1) * m + j] = 1.0;
    }
    // gaussian elimination; record pivot column per eliminated row
    std::vector<int> pivot_col;
    std::vector<int> row_of_col(m, -1);
    int r = 0;
    for (int c = 0; c < m && r < rows; ++c) {
      int best = -1;
      double best_abs = 1e-9;
      for (int i = r; i < rows; ++i) {
        double v = std::abs(a[static_cast<std::size_t>(i) * m + c]);
        if (v > best_abs) {
          best_abs = v;
          best = i;
        }
      }
      if (best < 0) continue;  // free column
      if (best != r)
        for (int k = 0; k < m; ++k)
          std::swap(a[static_cast<std::size_t>(best) * m + k], a[static_cast<std::size_t>(r) * m + k]);
      double piv = a[static_cast<std::size_t>(r) * m + c];
      for (int k = 0; k < m; ++k) a[static_cast<std::size_t>(r) * m + k] /= piv;
      for (int i = 0; i < rows; ++i) {
        if (i == r) continue;
        double f = a[static_cast<std::size_t>(i) * m + c];
        if (f == 0.0) continue;
        for (int k = 0; k < m; ++k) a[static_cast<std::size_t>(i) * m + k] -= f * a[static_cast<std::size_t>(r) * m + k];
      }
      row_of_col[c] = r;
      pivot_col.push_back(c);
      ++r;
    }
    int free_col = -1;
    for (int c = 0; c < m; ++c)
      if (row_of_col[c] < 0) {
        free_col = c;
        break;
      }
    if (free_col < 0) return;  // numerically full rank; give up quietly
    std::vector<double> mu(m, 0.0);
    mu[free_col] = 1.0;
    for (int c = 0; c < m; ++c)
      if (row_of_col[c] >= 0)
        mu[c] = -a[static_cast<std::size_t>(row_of_col[c]) * m + free_col];
    bool has_positive = std::any_of(mu.begin(), mu.end(), [](double x) { return x > 0.0; });
    if (!has_positive)
      for (double& x : mu) x = -x;
    double t = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
      if (mu[j] > 1e-12) t = std::min(t, mix.terms[j].weight / mu[j]);
    if (!std::isfinite(t)) return;
    std::vector<PermutationMixture::Term> kept;
    for (int j = 0; j < m; ++j) {
      double w = mix.terms[j].weight - t * mu[j];
      if (w > 1e-14) {
        kept.push_back(std::move(mix.terms[j]));
        kept.back().weight = w;
      }
    }
    if (kept.size() >= mix.terms.size()) return;  // no progress; stop
    mix.terms = std::move(kept);
  }
}

}  // namespace

DoublyStochastic::DoublyStochastic(int dim, std::vector<double> entries)
    : dim_(dim), m_(std::move(entries)) {
  if (dim_ < 1) raise(Errc::invalid_argument, "dimension must be >= 1");
  if (m_.size() != static_cast<std::size_t>(dim_) * dim_)
    raise(Errc::invalid_argument, "entry count does not match dim");
  for (double x : m_)
    if (x < -1e-12 || !std::isfinite(x))
      raise(Errc::invalid_argument, "doubly stochastic entries must be >= 0");
  for (int i = 0; i < dim_; ++i) {
    double row = 0.0, col = 0.0;
    for (int j = 0; j < dim_; ++j) {
      row += at(i, j);
      col += at(j, i);
    }
    if (std::abs(row - 1.0) > 1e-10 || std::abs(col - 1.0) > 1e-10)
      raise(Errc::invalid_argument, "row/column sums must equal 1");
  }
}

DoublyStochastic DoublyStochastic::identity(int dim) {
  std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = 1.0;
  return DoublyStochastic(dim, std::move(m));
}

std::vector<double> DoublyStochastic::apply(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_)
    raise(Errc::dimension_mismatch, "vector length does not match matrix dim");
  std::vector<double> q(p.size(), 0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) q[i] += at(i, j) * p[j];
  return q;
}

DoublyStochastic transfer_matrix(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) raise(Errc::dimension_mismatch, "p and q must have equal length");
  check_probability_vector(p, "p");
  check_probability_vector(q, "q");
  const int d = static_cast<int>(p.size());

  auto order_p = sorted_order(p);
  auto order_q = sorted_order(q);
  std::vector<double> ps(d), qs(d);
  for (int i = 0; i < d; ++i) {
    ps[i] = p[order_p[i]];
    qs[i] = q[order_q[i]];
  }

  double sp = 0.0, sq = 0.0;
  for (int k = 0; k < d; ++k) {
    sp += ps[k];
    sq += qs[k];
    if (sq > sp + 1e-12)
      raise(Errc::not_majorized,
            "q is not more mixed than p: partial sum violated at k=" + std::to_string(k + 1));
  }

  // Hardy-Littlewood-Polya chain: each T-transform matches one more
  // coordinate of the sorted vectors, so at most d-1 factors are needed.
  std::vector<double> cur = ps;
  std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i) * d + i] = 1.0;

  for (int step = 0; step < d; ++step) {
    int j = -1;
    for (int i = d - 1; i >= 0; --i)
      if (cur[i] - qs[i] > 1e-13) {
        j = i;
        break;
      }
    if (j < 0) break;
    int k = -1;
    for (int i = j + 1; i < d; ++i)
      if (qs[i] - cur[i] > 1e-13) {
        k = i;
        break;
      }
    if (k < 0) break;  // residual mismatch below tolerance

    double delta = std::min(cur[j] - qs[j], qs[k] - cur[k]);
    double mu = delta / (cur[j] - cur[k]);
    // row mix of the accumulated matrix: rows j,k <- T * rows
    for (int c = 0; c < d; ++c) {
      double rj = m[static_cast<std::size_t>(j) * d + c];
      double rk = m[static_cast<std::size_t>(k) * d + c];
      m[static_cast<std::size_t>(j) * d + c] = (1.0 - mu) * rj + mu * rk;
      m[static_cast<std::size_t>(k) * d + c] = mu * rj + (1.0 - mu) * rk;
    }
    if (cur[j] - qs[j] <= qs[k] - cur[k]) {
      cur[k] += delta;
      cur[j] = qs[j];
    } else {
      cur[j] -= delta;
      cur[k] = qs[k];
    }
  }

  // undo the sorting: D[order_q[a]][order_p[b]] = M[a][b]
  std::vector<double> full(static_cast<std::size_t>(d) * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      full[static_cast<std::size_t>(order_q[a]) * d + order_p[b]] = m[static_cast<std::size_t>(a) * d + b];
  return DoublyStochastic(d, std::move(full));
}

PermutationMixture birkhoff(const DoublyStochastic& d) {
  const int n = d.dim();
  std::vector<double> rem = d.entries();
  double remaining = 1.0;
  PermutationMixture mix;

  while (remaining > 1e-12) {
    std::vector<int> match_col(n, -1);
    for (int r = 0; r < n; ++r) {
      std::vector<char> visited(n, 0);
      if (!try_kuhn(rem, n, r, match_col, visited))
        raise(Errc::decomposition_stalled,
              "no perfect matching on the positive support (row " + std::to_string(r) + ")");
    }
    std::vector<int> perm(n);
    for (int c = 0; c < n; ++c) perm[match_col[c]] = c;
    double w = remaining;
    for (int r = 0; r < n; ++r) w = std::min(w, rem[static_cast<std::size_t>(r) * n + perm[r]]);
    for (int r = 0; r < n; ++r) {
      double& cell = rem[static_cast<std::size_t>(r) * n + perm[r]];
      cell -= w;
      if (cell < kZeroTol) cell = 0.0;
    }
    mix.terms.push_back({w, std::move(perm)});
    remaining -= w;
  }

  caratheodory_reduce(mix, birkhoff_term_bound(n));
  return mix;
}

std::vector<double> apply_mixture(const PermutationMixture& m, std::span<const double> p) {
  if (m.terms.empty()) raise(Errc::invalid_argument, "empty permutation mixture");
  if (m.dim() != static_cast<int>(p.size()))
    raise(Errc::dimension_mismatch, "vector length does not match mixture dim");
  std::vector<double> q(p.size(), 0.0);
  for (const auto& term : m.terms)
    for (std::size_t i = 0; i < p.size(); ++i) q[i] += term.weight * p[term.perm[i]];
  return q;
}

DoublyStochastic mixture_matrix(const PermutationMixture& m) {
  const int n = m.dim();
  if (n == 0) raise(Errc::invalid_argument, "empty permutation mixture");
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& term : m.terms)
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + term.perm[i]] += term.weight;
  return DoublyStochastic(n, std::move(a));
}

}  // namespace noisy
