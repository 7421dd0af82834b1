#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

using namespace noisy;

namespace {

// independent high-precision entropy oracle over explicit values
long double entropy_oracle(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v)
    if (x > 0) s -= static_cast<long double>(x) * std::log2l(static_cast<long double>(x));
  return s;
}

Spectrum spec(std::initializer_list<double> v) {
  std::vector<double> vv(v);
  return Spectrum::from_values(vv);
}

std::vector<double> random_distribution(std::mt19937_64& rng, int dim) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> v(dim);
  double total = 0.0;
  for (auto& x : v) total += (x = exp1(rng));
  for (auto& x : v) x /= total;
  return v;
}

// q = sum_j alpha_j (p o sigma_j): more mixed than p by construction
std::vector<double> random_more_mixed(std::mt19937_64& rng, const std::vector<double>& p,
                                      int n_perms = 3) {
  const int d = static_cast<int>(p.size());
  std::vector<double> w(n_perms);
  double tw = 0.0;
  std::exponential_distribution<double> exp1(1.0);
  for (auto& x : w) tw += (x = exp1(rng));
  std::vector<double> q(d, 0.0);
  std::vector<int> idx(d);
  for (int j = 0; j < n_perms; ++j) {
    for (int i = 0; i < d; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < d; ++i) q[i] += (w[j] / tw) * p[idx[i]];
  }
  return q;
}

}  // namespace

TEST_CASE("entropy matches closed-form and oracle values") {
  CHECK(entropy_bits(spec({0.5, 0.5})) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(entropy_bits(Spectrum::pure(8)) == doctest::Approx(0.0).epsilon(1e-13));
  // binary entropy h(1/4), frozen from the long-double summation oracle
  const double h14 = 0.8112781244591328;
  CHECK(std::abs(entropy_bits(spec({0.75, 0.25})) - h14) < 1e-12);
  CHECK(std::abs(static_cast<double>(entropy_oracle({0.75, 0.25})) - h14) < 1e-14);
}

TEST_CASE("info = qubits - entropy") {
  CHECK(info_bits(Spectrum::maximally_mixed(4)) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(info_bits(Spectrum::pure(2)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(info_bits(spec({0.75, 0.25})) - 0.1887218755408672) < 1e-12);
}

TEST_CASE("ky fan norms are the partial sums") {
  auto m = ky_fan_norms(spec({0.5, 0.3, 0.2}));
  REQUIRE(m.ky_fan.size() == 3);
  CHECK(m.ky_fan[0] == doctest::Approx(0.5));
  CHECK(m.ky_fan[1] == doctest::Approx(0.8));
  CHECK(m.ky_fan[2] == doctest::Approx(1.0));

  auto mm = ky_fan_norms(Spectrum::maximally_mixed(5));
  for (int k = 1; k <= 5; ++k) CHECK(mm.ky_fan[k - 1] == doctest::Approx(k / 5.0));

  auto me = ky_fan_norms(Spectrum::from_entries({{0.25, 4}}));
  REQUIRE(me.ky_fan.size() == 4);
  CHECK(me.ky_fan[2] == doctest::Approx(0.75));

  // big-k partial sums agree with the explicit vector
  auto s = spec({0.4, 0.3, 0.2, 0.1});
  for (int k = 1; k <= 4; ++k)
    CHECK(ky_fan_at(s, k) == doctest::Approx(ky_fan_norms(s).ky_fan[k - 1]));
}

TEST_CASE("more mixed: examples") {
  auto p = spec({0.5, 0.3, 0.2});
  auto q = spec({0.4, 0.35, 0.25});
  CHECK(more_mixed(q, p));
  CHECK_FALSE(more_mixed(p, q));

  CHECK_FALSE(more_mixed(Spectrum::pure(2), Spectrum::maximally_mixed(2)));
  CHECK(more_mixed(Spectrum::maximally_mixed(2), Spectrum::pure(2)));
  CHECK(more_mixed(q, q));

  auto r = compare_mixedness(Spectrum::pure(2), Spectrum::maximally_mixed(2));
  REQUIRE(r.first_violation.has_value());
  CHECK(*r.first_violation == 1);

  CHECK_THROWS_AS(more_mixed(Spectrum::pure(2), Spectrum::pure(4)), Error);
}

TEST_CASE("more mixed is a preorder and the uniform state is the top") {
  std::mt19937_64 rng = trial_rng(11, 0);
  std::uniform_int_distribution<int> dims(2, 8);
  for (int trial = 0; trial < 2000; ++trial) {
    int d = dims(rng);
    auto pv = random_distribution(rng, d);
    auto qv = random_more_mixed(rng, pv);
    auto rv = random_more_mixed(rng, qv);
    auto p = Spectrum::from_values(pv);
    auto q = Spectrum::from_values(qv);
    auto r = Spectrum::from_values(rv);
    CHECK(more_mixed(p, p));
    CHECK(more_mixed(q, p));
    CHECK(more_mixed(r, q));
    CHECK(more_mixed(r, p));  // transitivity on a constructed chain
    CHECK(more_mixed(Spectrum::maximally_mixed(d), p));
  }
}

TEST_CASE("schur concavity of entropy and ky fan monotonicity") {
  std::mt19937_64 rng = trial_rng(12, 0);
  for (int trial = 0; trial < 500; ++trial) {
    int d = 2 + static_cast<int>(rng() % 7);
    auto pv = random_distribution(rng, d);
    auto qv = random_more_mixed(rng, pv);
    auto p = Spectrum::from_values(pv);
    auto q = Spectrum::from_values(qv);
    REQUIRE(more_mixed(q, p));
    CHECK(entropy_bits(q) >= entropy_bits(p) - 1e-10);
    auto mp = ky_fan_norms(p), mq = ky_fan_norms(q);
    for (int k = 0; k < d; ++k) CHECK(mq.ky_fan[k] <= mp.ky_fan[k] + 1e-10);
  }
}

TEST_CASE("tensor power: hand-expanded example and degenerate cases") {
  auto s2 = spec({0.75, 0.25}).tensor_power(2);
  REQUIRE(s2.entries().size() == 3);
  CHECK(s2.entries()[0].value() == doctest::Approx(0.5625).epsilon(1e-13));
  CHECK(s2.entries()[0].multiplicity == 1);
  CHECK(s2.entries()[1].value() == doctest::Approx(0.1875).epsilon(1e-13));
  CHECK(s2.entries()[1].multiplicity == 2);
  CHECK(s2.entries()[2].value() == doctest::Approx(0.0625).epsilon(1e-13));
  CHECK(s2.entries()[2].multiplicity == 1);

  auto pure5 = Spectrum::pure(2).tensor_power(5);
  CHECK(pure5.is_pure());
  CHECK(pure5.dim() == 32);

  auto mm3 = Spectrum::maximally_mixed(2).tensor_power(3);
  CHECK(mm3.is_maximally_mixed());
  REQUIRE(mm3.entries().size() == 1);
  CHECK(mm3.entries()[0].multiplicity == 8);
  CHECK(mm3.entries()[0].value() == doctest::Approx(0.125));
}

TEST_CASE("tensor power: entropy additivity and binomial multiplicities") {
  auto s = spec({0.75, 0.25});
  for (long n : {10L, 100L, 2000L}) {
    auto sn = s.tensor_power(n);
    CHECK(std::abs(entropy_bits(sn) - n * entropy_bits(s)) <= 1e-9 * n);
    CHECK(sn.entries().size() == static_cast<std::size_t>(n + 1));
    double total = 0.0;
    for (const auto& e : sn.entries()) total += e.weight;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  // exact binomial multiplicities at n = 6
  auto s6 = s.tensor_power(6);
  mpz_class binom;
  for (std::size_t k = 0; k < s6.entries().size(); ++k) {
    mpz_bin_uiui(binom.get_mpz_t(), 6, static_cast<unsigned long>(k));
    CHECK(s6.entries()[k].multiplicity == binom);
  }
}

TEST_CASE("tensor power survives n = 100000 without overflow") {
  auto sn = spec({0.75, 0.25}).tensor_power(100000);
  CHECK(sn.entries().size() == 100001);
  double total = 0.0;
  for (const auto& e : sn.entries()) total += e.weight;
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(std::abs(entropy_bits(sn) - 100000 * 0.8112781244591328) < 1e-4);
  CHECK(sn.qubits() == doctest::Approx(100000.0));
}

TEST_CASE("tensor power refuses absurd enumerations") {
  auto s = spec({0.4, 0.3, 0.2, 0.1});
  CHECK_THROWS_AS(s.tensor_power(100000), Error);
}

TEST_CASE("trace distance") {
  auto a = spec({0.75, 0.25});
  CHECK(trace_distance(a, a) == doctest::Approx(0.0));
  std::vector<double> x{1.0, 0.0}, y{0.0, 1.0};
  CHECK(trace_distance(std::span<const double>(x), std::span<const double>(y)) ==
        doctest::Approx(2.0));
  CHECK(trace_distance(a, Spectrum::maximally_mixed(2)) == doctest::Approx(0.5));
  CHECK(trace_distance(Spectrum::maximally_mixed(2), a) == doctest::Approx(0.5));
}

TEST_CASE("info invariant under permutation and under adding noise") {
  auto s = spec({0.6, 0.25, 0.15});
  auto sp = spec({0.15, 0.6, 0.25});  // same multiset
  CHECK(info_bits(s) == doctest::Approx(info_bits(sp)).epsilon(1e-12));
  for (unsigned long m : {2UL, 4UL, 32UL}) {
    auto padded = s.tensor_with(Spectrum::maximally_mixed(m));
    CHECK(std::abs(info_bits(padded) - info_bits(s)) < 1e-10);
  }
}

TEST_CASE("spectrum validation") {
  std::vector<double> bad{0.5, 0.4};  // sums to 0.9
  CHECK_THROWS_AS(Spectrum::from_values(bad), Error);
  std::vector<double> neg{1.5, -0.5};
  CHECK_THROWS_AS(Spectrum::from_values(neg), Error);
  CHECK_THROWS_AS(Spectrum::from_entries({{0.5, 0}}), Error);

  // grouping: equal values within 1e-12 relative collapse into one entry
  auto g = Spectrum::from_values(std::vector<double>{0.5, 0.25 + 1e-16, 0.25});
  CHECK(g.entries().size() == 2);
  CHECK(g.entries()[1].multiplicity == 2);
}

TEST_CASE("support and zero padding") {
  auto s = spec({0.6, 0.4, 0.0, 0.0});
  CHECK(s.support() == 2);
  CHECK(s.dim() == 4);
  CHECK(s.qubits() == doctest::Approx(2.0));
  auto p = s.tensor_power(3);
  CHECK(p.dim() == 64);
  CHECK(p.support() == 8);
}
