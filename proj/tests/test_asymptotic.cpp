#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "asymptotic.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

using namespace noisy;

namespace {

const double kH14 = 0.8112781244591328;  // binary entropy h(1/4)

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

}  // namespace

TEST_CASE("typical set: weight and band membership") {
  auto s = spec({0.75, 0.25});
  auto ts = typical_set(s, 100, 0.1);
  // frozen from the exact binomial-sum oracle
  CHECK(ts.weight == doctest::Approx(0.867640).epsilon(1e-4));
  for (std::size_t idx : ts.included) {
    double neg = -ts.power.entries()[idx].log2_value;
    CHECK(neg >= ts.band_lo - 1e-6);
    CHECK(neg <= ts.band_hi + 1e-6);
  }
  // log-cardinality bracket: n(S-d) + log c <= log|TYP| <= n(S+d)
  CHECK(ts.log_cardinality >= ts.band_lo + std::log2(ts.weight) - 1e-6);
  CHECK(ts.log_cardinality <= ts.band_hi + 1e-6);

  auto mm = typical_set(Spectrum::maximally_mixed(4), 7, 0.05);
  CHECK(mm.weight == doctest::Approx(1.0));
  CHECK(mm.cardinality == mm.power.dim());

  auto wide = typical_set(s, 10, 2.0);
  CHECK(wide.weight == doctest::Approx(1.0));

  auto pure = typical_set(Spectrum::pure(2), 20, 0.05);
  CHECK(pure.weight == doctest::Approx(1.0));
  CHECK(pure.cardinality == 1);
}

TEST_CASE("typical weight agrees between exact and log-domain paths") {
  auto s = spec({0.75, 0.25});
  for (long n : {50L, 200L, 1000L}) {
    auto ts = typical_set(s, n, 0.05);
    CHECK(typical_weight_estimate(s, n, 0.05) == doctest::Approx(ts.weight).epsilon(1e-9));
  }
  auto s3 = spec({0.5, 0.3, 0.2});
  auto ts3 = typical_set(s3, 40, 0.1);
  CHECK(typical_weight_estimate(s3, 40, 0.1) == doctest::Approx(ts3.weight).epsilon(1e-9));

  auto thr = weight_threshold_n(s, 0.05, 0.01);
  REQUIRE(thr.has_value());
  CHECK(*thr > 1000);
  CHECK(*thr <= 2000);
}

TEST_CASE("distill: degenerate inputs") {
  auto pure = distill(Spectrum::pure(4), 10, 0.05, 0.01);
  CHECK(pure.report.yield_per_copy == 2.0);  // exactly log d
  CHECK(pure.report.trace_error == 0.0);
  CHECK(pure.log2_d == 0);

  auto mm = distill(Spectrum::maximally_mixed(2), 10, 0.05, 0.01);
  CHECK(mm.report.yield_per_copy == 0.0);
  CHECK(mm.report.trace_error == doctest::Approx(0.0));
}

TEST_CASE("distill: rate window at n=2000 and monotone yield sequence") {
  auto s = spec({0.75, 0.25});
  auto res = distill(s, 2000, 0.05, 0.01);
  CHECK(res.report.yield_per_copy >= 0.1377);
  CHECK(res.report.yield_per_copy <= 0.1888);
  CHECK(res.report.yield_per_copy == doctest::Approx(1.0 - 1723.0 / 2000.0).epsilon(1e-12));
  CHECK(res.report.epsilon_met);
  CHECK(res.report.trace_error <= 2 * 0.01);
  // RateReport bracket: yield in [log d - S - delta - 2/n, log d - S]
  CHECK(res.report.yield_per_copy >= 1.0 - kH14 - 0.05 - 2.0 / 2000);
  CHECK(res.report.yield_per_copy <= 1.0 - kH14);

  double prev = 0.0;
  for (long n : {200L, 500L, 1000L, 2000L}) {
    auto r = distill(s, n, 0.05, 0.01);
    CHECK(r.report.yield_per_copy >= prev - 1e-12);
    prev = r.report.yield_per_copy;
    CHECK(r.report.yield_per_copy >= 1.0 - kH14 - 0.05 - 2.0 / n);
    CHECK(r.report.yield_per_copy <= 1.0 - kH14);
  }
}

TEST_CASE("distill: epsilon shortfall is reported with a usable threshold") {
  auto s = spec({0.75, 0.25});
  auto r = distill(s, 500, 0.05, 0.01);
  CHECK_FALSE(r.report.epsilon_met);
  CHECK(r.report.trace_error > 0.02);
  CHECK(r.report.required_n > 1000);
  CHECK(r.report.required_n <= 2000);
  // the threshold really is sufficient
  auto ok = distill(s, r.report.required_n, 0.05, 0.01);
  CHECK(ok.report.epsilon_met);
}

TEST_CASE("form: degenerate inputs") {
  auto pure = form(Spectrum::pure(4), 10, 0.05, 0.01);
  CHECK(pure.pure_qubits == doctest::Approx(20.0));
  CHECK(pure.noise_qubits == 0.0);

  auto mm = form(Spectrum::maximally_mixed(2), 10, 0.05, 0.01);
  CHECK(mm.pure_qubits == doctest::Approx(0.0));
  CHECK(mm.noise_qubits == doctest::Approx(10.0));
}

TEST_CASE("form: cost window and distill/form duality gap") {
  auto s = spec({0.75, 0.25});
  auto res = form(s, 2000, 0.05, 0.01);
  CHECK(res.report.yield_per_copy >= 1.0 - kH14);
  CHECK(res.report.yield_per_copy <= 1.0 - kH14 + 0.05 + 2.0 / 2000);

  for (long n : {200L, 500L, 1000L, 2000L}) {
    auto d = distill(s, n, 0.05, 0.01);
    auto f = form(s, n, 0.05, 0.01);
    double gap = f.report.yield_per_copy - d.report.yield_per_copy;
    CHECK(gap >= -1e-12);
    CHECK(gap <= 2 * 0.05 + 4.0 / n);
  }
}

TEST_CASE("small-n exactness: simulated protocols stay within the reported budget") {
  auto s = spec({0.75, 0.25});
  for (double delta : {0.05, 0.2}) {
    auto dc = distill_exact_check(s, 12, delta, 0.01);
    CHECK(dc.measured_error <= dc.budget + 1e-9);
    auto fc = form_exact_check(s, 12, delta, 0.01);
    CHECK(fc.measured_error <= fc.budget + 1e-9);
  }
  // wide band: everything typical, the run must be exact
  auto exact = distill_exact_check(s, 12, 2.0, 0.5);
  CHECK(exact.measured_error <= 1e-12);

  // a three-level example exercises non-qubit sources
  auto s3 = spec({0.6, 0.3, 0.1});
  auto dc3 = distill_exact_check(s3, 8, 0.1, 0.05);
  CHECK(dc3.measured_error <= dc3.budget + 1e-9);
}

TEST_CASE("mixed to mixed rate") {
  auto s = spec({0.75, 0.25});
  CHECK(mixed_to_mixed_rate(s, s) == doctest::Approx(1.0));
  CHECK(mixed_to_mixed_rate(Spectrum::pure(4), Spectrum::pure(2)) == doctest::Approx(2.0));
  CHECK(mixed_to_mixed_rate(s, Spectrum::pure(2)) == doctest::Approx(1.0 - kH14).epsilon(1e-10));
  CHECK_THROWS_AS(mixed_to_mixed_rate(s, Spectrum::maximally_mixed(2)), Error);
}

TEST_CASE("fannes bound: endpoints, monotonicity, and validity on random pairs") {
  CHECK(fannes_bound(3, 0.0).bound == doctest::Approx(0.0));
  CHECK(fannes_bound(1, 2.0).bound >= 0.0);
  CHECK(fannes_bound(1, 2.0).bound == doctest::Approx(1.0));

  for (int nq = 1; nq <= 4; ++nq) {
    double prev = -1.0;
    for (double t = 0.0; t <= 2.0 + 1e-9; t += 0.01) {
      double b = fannes_bound(nq, std::min(t, 2.0)).bound;
      CHECK(b >= prev - 1e-12);
      prev = b;
    }
    CHECK(fannes_bound(nq, 2.0).bound == doctest::Approx(static_cast<double>(nq)));
  }

  std::mt19937_64 rng = trial_rng(51, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    int nq = 1 + static_cast<int>(rng() % 3);
    int dim = 1 << nq;
    auto a = random_distribution(rng, dim);
    auto b = random_distribution(rng, dim);
    double tdis = trace_distance(std::span<const double>(a), std::span<const double>(b));
    double ds = std::abs(vector_entropy_bits(a) - vector_entropy_bits(b));
    CHECK(ds <= fannes_bound(nq, tdis).bound + 1e-9);
  }
}

TEST_CASE("optimality audit: pure states cycle exactly, mixed states approach 1") {
  std::vector<long> ns{500, 1000, 2000, 5000};
  auto pure_rep = optimality_audit(Spectrum::pure(4), ns, 0.02);
  for (const auto& row : pure_rep.rows) CHECK(row.ratio == doctest::Approx(1.0));

  auto rep = optimality_audit(spec({0.75, 0.25}), ns, 0.02);
  double prev = 0.0;
  for (const auto& row : rep.rows) {
    CHECK(row.ratio <= 1.0 + 1e-9);
    CHECK(row.ratio >= 0.78);
    CHECK(row.ratio >= prev - 1e-9);
    prev = row.ratio;
  }
  CHECK(rep.rows.back().ratio == doctest::Approx(0.8075).epsilon(2e-3));

  CHECK_THROWS_AS(optimality_audit(Spectrum::maximally_mixed(4), ns, 0.02), Error);
}

TEST_CASE("rigidity: only the maximally mixed ancilla keeps the theory nontrivial") {
  auto nontrivial = rigidity_experiment(Spectrum::maximally_mixed(2));
  CHECK_FALSE(nontrivial.trivial);

  auto from_pure = rigidity_experiment(Spectrum::pure(2));
  CHECK(from_pure.trivial);
  CHECK(from_pure.yield_per_copy == doctest::Approx(1.0));

  auto skewed = rigidity_experiment(spec({0.9, 0.1}));
  CHECK(skewed.trivial);
  CHECK(skewed.yield_per_copy == doctest::Approx(0.5310044064107188).epsilon(1e-10));
}

TEST_CASE("typical set rejects bad parameters") {
  auto s = spec({0.75, 0.25});
  CHECK_THROWS_AS(typical_set(s, 10, 0.0), Error);
  CHECK_THROWS_AS(typical_set(s, 0, 0.1), Error);
}
