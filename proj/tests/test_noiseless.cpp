#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "asymptotic.hpp"
#include "errors.hpp"
#include "noiseless.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

using namespace noisy;

namespace {

const double kH14 = 0.8112781244591328;

Spectrum spec(std::initializer_list<double> v) {
  std::vector<double> vv(v);
  return Spectrum::from_values(vv);
}

}  // namespace

TEST_CASE("preparation cost N + S") {
  CHECK(preparation_cost(Spectrum::pure(2)) == doctest::Approx(1.0));
  CHECK(preparation_cost(Spectrum::maximally_mixed(2)) == doctest::Approx(2.0));
  CHECK(preparation_cost(spec({0.75, 0.25})) == doctest::Approx(1.0 + kH14).epsilon(1e-12));
}

TEST_CASE("mixed to mixed cost: formula and ledger trace agree") {
  auto s = spec({0.75, 0.25});
  CHECK(mixed_to_mixed_cost(s, s).additional_pure_qubits == doctest::Approx(0.0));

  // pure qubit -> maximally mixed qubit: dN=0, dS=1, cost 1
  auto c1 = mixed_to_mixed_cost(Spectrum::pure(2), Spectrum::maximally_mixed(2));
  CHECK(c1.additional_pure_qubits == doctest::Approx(1.0));

  // (0.75,0.25) -> maximally mixed on two qubits: 1 + (2 - h(1/4))
  auto c2 = mixed_to_mixed_cost(s, Spectrum::maximally_mixed(4));
  CHECK(c2.additional_pure_qubits == doctest::Approx(1.0 + (2.0 - kH14)).epsilon(1e-12));

  // step-by-step ledger oracle for dS >= 0 transitions:
  // held = Na - Sa; needed = (Nb - Sb) + 2 dS; additional = needed - held
  std::mt19937_64 rng = trial_rng(61, 0);
  std::exponential_distribution<double> exp1(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int da = 2 << (rng() % 2), db = 2 << (rng() % 3);
    std::vector<double> av(da), bv(db);
    double ta = 0.0, tb = 0.0;
    for (auto& x : av) ta += (x = exp1(rng));
    for (auto& x : av) x /= ta;
    for (auto& x : bv) tb += (x = exp1(rng));
    for (auto& x : bv) x /= tb;
    auto a = Spectrum::from_values(av);
    auto b = Spectrum::from_values(bv);
    if (entropy_bits(b) < entropy_bits(a)) continue;  // ledger oracle covers dS >= 0
    double held = a.qubits() - entropy_bits(a);
    double needed = (b.qubits() - entropy_bits(b)) +
                    2.0 * (entropy_bits(b) - entropy_bits(a));
    double traced = std::max(0.0, needed - held);
    CHECK(mixed_to_mixed_cost(a, b).additional_pure_qubits == doctest::Approx(traced).epsilon(1e-10));
  }
}

TEST_CASE("garbage bound") {
  CHECK(garbage_bound(0.7, 0.7) == doctest::Approx(0.0));
  CHECK(garbage_bound(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(garbage_bound(kH14, 2.0) == doctest::Approx(2.0 - kH14).epsilon(1e-12));
  CHECK_THROWS_AS(garbage_bound(-0.1, 0.5), Error);
}

TEST_CASE("binomial protocol: exact n=2 case returns zero net yield") {
  auto res = binomial_protocol(0.5, 2);
  REQUIRE(res.outcomes.size() == 3);
  CHECK(res.outcomes[0].probability == doctest::Approx(0.25));
  CHECK(res.outcomes[1].probability == doctest::Approx(0.5));
  CHECK(res.outcomes[1].block_dim == 2);
  CHECK(res.outcomes[0].pure_yield == doctest::Approx(2.0));
  CHECK(res.outcomes[1].pure_yield == doctest::Approx(1.0));
  CHECK(res.expected_yield == doctest::Approx(1.5));
  CHECK(res.erasure_bits == doctest::Approx(1.5));
  CHECK(res.net_pure_states == 0.0);  // exactly, in IEEE arithmetic
}

TEST_CASE("binomial protocol: almost-pure source approaches one pure state per qubit") {
  auto res = binomial_protocol(1.0 - 1e-12, 50);
  CHECK(res.per_copy == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("binomial protocol: per-copy yield equals 1 - S up to fp noise") {
  // N_o/n = 1 - h(a2) exactly: the log n terms in sum p I and H cancel
  for (double a2 : {0.3, 0.5, 0.75, 0.9}) {
    double expected = 1.0 - (-a2 * std::log2(a2) - (1 - a2) * std::log2(1 - a2));
    for (long n : {10L, 500L, 2000L}) {
      auto res = binomial_protocol(a2, n);
      CHECK(res.per_copy == doctest::Approx(expected).epsilon(1e-9));
      CHECK(res.erasure_bits <= std::log2(static_cast<double>(n) + 1.0) + 1e-12);
    }
  }
}

TEST_CASE("binomial protocol: n = 10000 within the erasure-corrected window") {
  auto res = binomial_protocol(0.75, 10000);
  double top = 1.0 - kH14;
  double bottom = top - std::log2(10001.0) / 10000.0;
  CHECK(res.per_copy >= bottom);
  CHECK(res.per_copy <= top + 1e-12);
  // no exact big integers above the crossover, but the logs are filled
  CHECK(res.outcomes[5000].block_dim == 0);
  CHECK(res.outcomes[5000].log2_block_dim > 9000.0);
}

TEST_CASE("exact rational outcome probabilities sum to 1 exactly") {
  for (long n : {5L, 64L, 257L}) {
    auto ps = binomial_outcome_probabilities_exact(3, 4, n);
    mpq_class total = 0;
    for (const auto& p : ps) total += p;
    CHECK(total == 1);
  }
  CHECK_THROWS_AS(binomial_outcome_probabilities_exact(4, 4, 5), Error);
}

TEST_CASE("exact rational probabilities match the floating evaluation") {
  auto ps = binomial_outcome_probabilities_exact(3, 4, 40);
  auto res = binomial_protocol(0.75, 40);
  for (long k = 0; k <= 40; ++k)
    CHECK(res.outcomes[static_cast<std::size_t>(k)].probability ==
          doctest::Approx(ps[static_cast<std::size_t>(k)].get_d()).epsilon(1e-12));
}

TEST_CASE("erasure cost scaling") {
  std::vector<long> ns;
  for (long n = 4; n <= 4096; n *= 2) ns.push_back(n);
  auto rep = erasure_cost_scaling(0.75, ns);
  double prev = 1e9;
  for (const auto& row : rep.rows) {
    CHECK(row.erasure_bits <= row.log_bound + 1e-12);
    CHECK(row.per_copy < prev);  // strictly decreasing toward zero
    prev = row.per_copy;
  }
  CHECK(rep.rows.back().per_copy < 0.002);

  auto one = erasure_cost_scaling(0.3, std::vector<long>{1});
  CHECK(one.rows[0].erasure_bits <= 1.0 + 1e-12);

  auto thousand = erasure_cost_scaling(0.5, std::vector<long>{1000});
  CHECK(thousand.rows[0].per_copy <= 0.01);
}

TEST_CASE("type classes generalize the binomial protocol") {
  // d=2 must reproduce the binomial numbers
  auto bin = binomial_protocol(0.75, 12);
  auto gen = type_class_protocol(spec({0.25, 0.75}), 12);
  CHECK(gen.outcomes.size() == bin.outcomes.size());
  CHECK(gen.expected_yield == doctest::Approx(bin.expected_yield).epsilon(1e-12));
  CHECK(gen.erasure_bits == doctest::Approx(bin.erasure_bits).epsilon(1e-12));

  // d=3 and d=4: per-copy net yield equals log d - S
  auto s3 = spec({0.5, 0.3, 0.2});
  auto r3 = type_class_protocol(s3, 30);
  CHECK(r3.per_copy == doctest::Approx(std::log2(3.0) - entropy_bits(s3)).epsilon(1e-9));

  auto s4 = spec({0.4, 0.3, 0.2, 0.1});
  auto r4 = type_class_protocol(s4, 20);
  CHECK(r4.per_copy == doctest::Approx(2.0 - entropy_bits(s4)).epsilon(1e-9));

  CHECK_THROWS_AS(type_class_protocol(Spectrum::maximally_mixed(8), 4), Error);
}

TEST_CASE("cycle loss approaches 2S via the asymptotic distill rate") {
  auto s = spec({0.75, 0.25});
  auto d = distill(s, 2000, 0.05, 0.01);
  double loss = preparation_cost(s) - d.report.yield_per_copy;
  CHECK(std::abs(loss - 2.0 * kH14) <= 0.06);
}

TEST_CASE("noiseless cost dominates the noisy information gap") {
  std::mt19937_64 rng = trial_rng(62, 0);
  std::exponential_distribution<double> exp1(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int da = 2 << (rng() % 2), db = 2 << (rng() % 2);
    std::vector<double> av(da), bv(db);
    double ta = 0.0, tb = 0.0;
    for (auto& x : av) ta += (x = exp1(rng));
    for (auto& x : av) x /= ta;
    for (auto& x : bv) tb += (x = exp1(rng));
    for (auto& x : bv) x /= tb;
    auto a = Spectrum::from_values(av);
    auto b = Spectrum::from_values(bv);
    if (entropy_bits(b) < entropy_bits(a)) continue;
    // with free noise the additional pure-qubit need is info(b) - info(a)
    double noisy = std::max(0.0, info_bits(b) - info_bits(a));
    CHECK(mixed_to_mixed_cost(a, b).additional_pure_qubits >= noisy - 1e-10);
  }
}

TEST_CASE("binomial protocol rejects bad arguments") {
  CHECK_THROWS_AS(binomial_protocol(0.0, 5), Error);
  CHECK_THROWS_AS(binomial_protocol(1.0, 5), Error);
  CHECK_THROWS_AS(binomial_protocol(0.5, 0), Error);
}
