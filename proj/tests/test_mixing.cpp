#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "errors.hpp"
#include "mixing.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

using namespace noisy;

namespace {

std::vector<double> random_distribution(std::mt19937_64& rng, int dim) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> v(dim);
  double total = 0.0;
  for (auto& x : v) total += (x = exp1(rng));
  for (auto& x : v) x /= total;
  return v;
}

PermutationMixture random_mixture(std::mt19937_64& rng, int dim, int n_terms) {
  PermutationMixture m;
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> w(n_terms);
  double tw = 0.0;
  for (auto& x : w) tw += (x = exp1(rng));
  for (int j = 0; j < n_terms; ++j) {
    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    m.terms.push_back({w[j] / tw, std::move(perm)});
  }
  return m;
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("transfer matrix: identity and uniform examples") {
  std::vector<double> p{0.5, 0.3, 0.2};
  auto id = transfer_matrix(p, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(id.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));

  std::vector<double> point{1.0, 0.0}, uniform{0.5, 0.5};
  auto d = transfer_matrix(point, uniform);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(d.at(i, j) == doctest::Approx(0.5));
}

TEST_CASE("transfer matrix maps p to q") {
  std::vector<double> p{0.5, 0.3, 0.2}, q{0.4, 0.35, 0.25};
  auto d = transfer_matrix(p, q);
  CHECK(linf(d.apply(p), q) < 1e-10);

  std::mt19937_64 rng = trial_rng(31, 0);
  for (int trial = 0; trial < 500; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 7);
    auto pv = random_distribution(rng, dim);
    auto mix = random_mixture(rng, dim, 3);
    auto qv = apply_mixture(mix, pv);
    auto dm = transfer_matrix(pv, qv);
    CHECK(linf(dm.apply(pv), qv) < 1e-10);
  }
}

TEST_CASE("transfer matrix works on unsorted inputs") {
  std::vector<double> p{0.2, 0.5, 0.3}, q{0.25, 0.35, 0.4};
  auto d = transfer_matrix(p, q);
  CHECK(linf(d.apply(p), q) < 1e-10);
}

TEST_CASE("transfer matrix rejects non-majorized pairs naming the violated sum") {
  std::vector<double> p{0.5, 0.5}, q{1.0, 0.0};
  try {
    transfer_matrix(p, q);
    FAIL("expected NotMajorized");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_majorized);
    CHECK(std::string(e.what()).find("k=1") != std::string::npos);
  }
}

TEST_CASE("birkhoff: examples") {
  auto id_mix = birkhoff(DoublyStochastic::identity(3));
  REQUIRE(id_mix.terms.size() == 1);
  CHECK(id_mix.terms[0].weight == doctest::Approx(1.0));
  CHECK(id_mix.terms[0].perm == std::vector<int>{0, 1, 2});

  DoublyStochastic half(2, {0.5, 0.5, 0.5, 0.5});
  auto mix = birkhoff(half);
  REQUIRE(mix.terms.size() == 2);
  CHECK(mix.terms[0].weight == doctest::Approx(0.5));
  CHECK(mix.terms[1].weight == doctest::Approx(0.5));
  bool has_id = false, has_swap = false;
  for (const auto& t : mix.terms) {
    if (t.perm == std::vector<int>{0, 1}) has_id = true;
    if (t.perm == std::vector<int>{1, 0}) has_swap = true;
  }
  CHECK(has_id);
  CHECK(has_swap);
}

TEST_CASE("birkhoff reconstructs matrices built from known mixtures") {
  std::mt19937_64 rng = trial_rng(32, 0);
  for (int trial = 0; trial < 300; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 7);
    auto mix = random_mixture(rng, dim, 5);
    auto dmat = mixture_matrix(mix);
    auto rec = birkhoff(dmat);
    auto back = mixture_matrix(rec);
    double werr = 0.0;
    double wsum = 0.0;
    for (const auto& t : rec.terms) wsum += t.weight;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) werr = std::max(werr, std::abs(back.at(i, j) - dmat.at(i, j)));
    CHECK(werr < 1e-9);
    CHECK(std::abs(wsum - 1.0) < 1e-12);
    CHECK(rec.terms.size() <= birkhoff_term_bound(dim));
  }
}

TEST_CASE("birkhoff stays within the caratheodory bound on dense matrices") {
  std::mt19937_64 rng = trial_rng(33, 0);
  for (int trial = 0; trial < 50; ++trial) {
    int dim = 3 + static_cast<int>(rng() % 6);
    auto mix = random_mixture(rng, dim, 4 * dim);  // dense support
    auto dmat = mixture_matrix(mix);
    auto rec = birkhoff(dmat);
    CHECK(rec.terms.size() <= birkhoff_term_bound(dim));
    auto back = mixture_matrix(rec);
    double err = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) err = std::max(err, std::abs(back.at(i, j) - dmat.at(i, j)));
    CHECK(err < 1e-9);
  }
}

TEST_CASE("birkhoff is deterministic") {
  std::mt19937_64 rng = trial_rng(34, 0);
  auto mix = random_mixture(rng, 5, 6);
  auto dmat = mixture_matrix(mix);
  auto a = birkhoff(dmat);
  auto b = birkhoff(dmat);
  REQUIRE(a.terms.size() == b.terms.size());
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    CHECK(a.terms[i].weight == b.terms[i].weight);
    CHECK(a.terms[i].perm == b.terms[i].perm);
  }
}

TEST_CASE("apply mixture: identity and swap") {
  PermutationMixture id{{{1.0, {0, 1}}}};
  std::vector<double> p{1.0, 0.0};
  CHECK(apply_mixture(id, p) == std::vector<double>{1.0, 0.0});

  PermutationMixture half{{{0.5, {0, 1}}, {0.5, {1, 0}}}};
  auto q = apply_mixture(half, p);
  CHECK(q[0] == doctest::Approx(0.5));
  CHECK(q[1] == doctest::Approx(0.5));
}

TEST_CASE("end-to-end: mixture from transfer+birkhoff reproduces q") {
  std::mt19937_64 rng = trial_rng(35, 0);
  for (int trial = 0; trial < 500; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 7);
    auto pv = random_distribution(rng, dim);
    auto qv = apply_mixture(random_mixture(rng, dim, 3), pv);
    auto mix = birkhoff(transfer_matrix(pv, qv));
    CHECK(linf(apply_mixture(mix, pv), qv) < 1e-8);
  }
}

TEST_CASE("bistochastic maps only increase mixedness") {
  std::mt19937_64 rng = trial_rng(36, 0);
  for (int trial = 0; trial < 500; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 7);
    auto pv = random_distribution(rng, dim);
    auto mix = random_mixture(rng, dim, 1 + static_cast<int>(rng() % 6));
    auto dmat = mixture_matrix(mix);
    auto qv = dmat.apply(pv);
    CHECK(more_mixed(Spectrum::from_values(qv), Spectrum::from_values(pv)));
  }
}

TEST_CASE("oracle equivalence: more_mixed iff transfer_matrix succeeds") {
  std::mt19937_64 rng = trial_rng(37, 0);
  int majorized = 0, rejected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 7);
    auto pv = random_distribution(rng, dim);
    std::vector<double> qv;
    if (trial % 2 == 0) {
      qv = apply_mixture(random_mixture(rng, dim, 3), pv);
    } else {
      qv = random_distribution(rng, dim);
    }
    bool mm = more_mixed(Spectrum::from_values(qv), Spectrum::from_values(pv));
    bool ok = true;
    try {
      auto d = transfer_matrix(pv, qv);
      ok = linf(d.apply(pv), qv) < 1e-8;
    } catch (const Error& e) {
      REQUIRE(e.code() == Errc::not_majorized);
      ok = false;
    }
    CHECK(mm == ok);
    (mm ? majorized : rejected)++;
  }
  CHECK(majorized >= 400);
  CHECK(rejected >= 100);
}

TEST_CASE("doubly stochastic validation") {
  CHECK_THROWS_AS(DoublyStochastic(2, {0.9, 0.0, 0.0, 0.9}), Error);
  CHECK_THROWS_AS(DoublyStochastic(2, {1.1, -0.1, -0.1, 1.1}), Error);
}
