#include "asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bigint.hpp"
#include "errors.hpp"
#include "mixing.hpp"

namespace noisy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

unsigned long ceil_log2(const mpz_class& z) {
  if (z <= 1) return 0;
  unsigned long bits = mpz_sizeinbase(z.get_mpz_t(), 2);
  return is_power_of_two(z) ? bits - 1 : bits;
}

long floor_with_guard(double x) { return static_cast<long>(std::floor(x + 1e-9)); }
long ceil_with_guard(double x) { return static_cast<long>(std::ceil(x - 1e-9)); }

}  // namespace

// Typical weight evaluated purely in log domain (lgamma multinomials), for
// threshold searches where exact big-integer multiplicities would be wasted.
double typical_weight_estimate(const Spectrum& s, long n, double delta) {
  double entropy = entropy_bits(s);
  double lo = n * (entropy - delta), hi = n * (entropy + delta);
  double tol_lo = 1e-9 * (1.0 + std::abs(lo)), tol_hi = 1e-9 * (1.0 + std::abs(hi));

  struct Base {
    double log2_value;
    double log2_mult;
  };
  std::vector<Base> base;
  for (const auto& e : s.entries())
    if (e.log2_value != -kInf)
      base.push_back({e.log2_value, static_cast<double>(log2_mpz(e.multiplicity))});
  const std::size_t t = base.size();

  double log_count = 0.0;
  for (std::size_t i = 1; i < t; ++i)
    log_count += std::log2(static_cast<double>(n + i)) - std::log2(static_cast<double>(i));
  if (log_count > std::log2(4e6)) return std::numeric_limits<double>::quiet_NaN();

  constexpr double kLog2e = 1.4426950408889634;
  double c = 0.0;
  std::function<void(std::size_t, long, double, double)> rec = [&](std::size_t level, long rem,
                                                                   double l2v, double l2m) {
    if (level == t - 1) {
      l2v += rem * base[level].log2_value;
      l2m += rem * base[level].log2_mult - kLog2e * std::lgamma(static_cast<double>(rem) + 1.0);
      double neg = -l2v;
      if (neg >= lo - tol_lo && neg <= hi + tol_hi) c += std::exp2(l2v + l2m);
      return;
    }
    for (long k = 0; k <= rem; ++k)
      rec(level + 1, rem - k, l2v + k * base[level].log2_value,
          l2m + k * base[level].log2_mult - kLog2e * std::lgamma(static_cast<double>(k) + 1.0));
  };
  if (t > 0) rec(0, n, 0.0, kLog2e * std::lgamma(static_cast<double>(n) + 1.0));
  return std::min(c, 1.0);
}

const char* direction_name(RateDirection d) {
  switch (d) {
    case RateDirection::distill: return "distill";
    case RateDirection::form: return "form";
    case RateDirection::mixed_to_mixed: return "mixedToMixed";
  }
  return "unknown";
}

TypicalSet typical_set(const Spectrum& s, long n, double delta) {
  if (delta <= 0.0) raise(Errc::invalid_argument, "delta must be positive");
  if (n < 1) raise(Errc::invalid_argument, "n must be >= 1");

  TypicalSet ts;
  ts.n = n;
  ts.delta = delta;
  ts.power = s.tensor_power(n);
  double entropy = entropy_bits(s);
  ts.band_lo = n * (entropy - delta);
  ts.band_hi = n * (entropy + delta);
  double tol_lo = 1e-9 * (1.0 + std::abs(ts.band_lo));
  double tol_hi = 1e-9 * (1.0 + std::abs(ts.band_hi));

  ts.cardinality = 0;
  double c = 0.0;
  for (std::size_t i = 0; i < ts.power.entries().size(); ++i) {
    const auto& e = ts.power.entries()[i];
    if (e.log2_value == -kInf) continue;
    double neg = -e.log2_value;
    if (neg >= ts.band_lo - tol_lo && neg <= ts.band_hi + tol_hi) {
      ts.included.push_back(i);
      ts.cardinality += e.multiplicity;
      c += e.weight;
    }
  }
  ts.weight = std::min(c, 1.0);
  ts.log_cardinality =
      ts.cardinality > 0 ? static_cast<double>(log2_mpz(ts.cardinality)) : -kInf;
  return ts;
}

std::optional<long> weight_threshold_n(const Spectrum& s, double delta, double epsilon,
                                       long limit) {
  if (s.is_pure() || s.is_maximally_mixed()) return 1;
  auto met = [&](long n) {
    double c = typical_weight_estimate(s, n, delta);
    return !std::isnan(c) && c >= 1.0 - epsilon - 1e-12;
  };
  long hi = 1;
  while (hi <= limit && !met(hi)) hi *= 2;
  if (hi > limit) return std::nullopt;
  long lo = hi / 2 + 1;
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (met(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return hi;
}

namespace {

struct BlockChoice {
  unsigned long log2_d = 0;
  double weight = 1.0;  // typical weight c
};

// Power-of-two dilution block for distillation: log2 D = ceil(n(S+delta)),
// widened if needed so every typical eigenvalue fits inside the block.
BlockChoice distill_block(const Spectrum& s, const TypicalSet& ts, long n, double delta) {
  BlockChoice b;
  b.weight = ts.weight;
  double nq = n * s.qubits();
  if (s.is_pure()) {
    b.log2_d = 0;
  } else if (s.is_maximally_mixed()) {
    b.log2_d = static_cast<unsigned long>(floor_with_guard(nq));
  } else {
    long e = ceil_with_guard(n * (entropy_bits(s) + delta));
    e = std::max(e, 0L);
    e = std::min(e, floor_with_guard(nq));
    e = std::max(e, static_cast<long>(ceil_log2(ts.cardinality)));
    b.log2_d = static_cast<unsigned long>(e);
  }
  return b;
}

// Largest power-of-two noise register for formation: log2 D' =
// floor(n(S-delta) + log2 c), shrunk if needed so no typical eigenvalue
// exceeds 1/D'.
BlockChoice form_block(const Spectrum& s, const TypicalSet& ts, long n, double delta) {
  BlockChoice b;
  b.weight = ts.weight;
  double nq = n * s.qubits();
  if (s.is_pure()) {
    b.log2_d = 0;
    return b;
  }
  if (s.is_maximally_mixed()) {
    b.log2_d = static_cast<unsigned long>(floor_with_guard(nq));
    return b;
  }
  if (ts.weight <= 0.0 || ts.included.empty()) {
    b.log2_d = 0;
    return b;
  }
  double log2c = std::log2(ts.weight);
  long e = floor_with_guard(n * (entropy_bits(s) - delta) + log2c);
  e = std::max(e, 0L);
  e = std::min(e, floor_with_guard(nq));
  // validity: max typical eigenvalue (renormalized by c) must be <= 1/D'
  double max_l2v = ts.power.entries()[ts.included.front()].log2_value;
  while (e > 0 && max_l2v - log2c > -static_cast<double>(e) + 1e-12) --e;
  b.log2_d = static_cast<unsigned long>(e);
  return b;
}

RateReport base_report(RateDirection dir, const Spectrum& s, long n, double delta, double epsilon,
                       double weight) {
  RateReport r;
  r.direction = dir;
  r.n = n;
  r.delta = delta;
  r.epsilon = epsilon;
  r.trace_error = 2.0 * std::max(0.0, 1.0 - weight);
  r.epsilon_met = (1.0 - weight) <= epsilon + 1e-12;
  r.required_n = n;
  if (!r.epsilon_met) {
    auto thr = weight_threshold_n(s, delta, epsilon);
    r.required_n = thr.value_or(-1);
  }
  r.entropy_before = n * entropy_bits(s);
  r.info_before = n * info_bits(s);
  return r;
}

}  // namespace

DistillResult distill(const Spectrum& s, long n, double delta, double epsilon) {
  auto ts = typical_set(s, n, delta);
  auto block = distill_block(s, ts, n, delta);

  DistillResult res;
  res.log2_d = block.log2_d;
  res.typical_weight = block.weight;

  mpz_class dim_pow;
  mpz_pow_ui(dim_pow.get_mpz_t(), s.dim().get_mpz_t(), static_cast<unsigned long>(n));
  res.protocol = cyclic_protocol(dim_pow, pow2_mpz(block.log2_d));

  res.report = base_report(RateDirection::distill, s, n, delta, epsilon, block.weight);
  double yield = (n * s.qubits() - static_cast<double>(block.log2_d)) / n;
  if (s.is_maximally_mixed()) yield = 0.0;
  res.report.yield_per_copy = std::max(yield, 0.0);
  if (s.is_pure()) res.report.trace_error = 0.0;
  res.report.info_after = n * res.report.yield_per_copy;
  res.report.entropy_after = 0.0;
  return res;
}

FormResult form(const Spectrum& s, long n, double delta, double epsilon) {
  auto ts = typical_set(s, n, delta);
  auto block = form_block(s, ts, n, delta);

  FormResult res;
  res.log2_d_prime = block.log2_d;
  res.typical_weight = block.weight;
  res.noise_qubits = static_cast<double>(block.log2_d);
  res.pure_qubits = n * s.qubits() - res.noise_qubits;

  res.report = base_report(RateDirection::form, s, n, delta, epsilon, block.weight);
  res.report.yield_per_copy = std::max(res.pure_qubits / n, 0.0);
  if (s.is_pure()) res.report.trace_error = 0.0;
  // inputs: pure qubits plus a maximally mixed register of log2 D' qubits
  res.report.info_before = res.pure_qubits;
  res.report.entropy_before = res.noise_qubits;
  res.report.info_after = n * info_bits(s);
  res.report.entropy_after = n * entropy_bits(s);
  return res;
}

double mixed_to_mixed_rate(const Spectrum& a, const Spectrum& b) {
  double ib = info_bits(b);
  if (ib <= 1e-12)
    raise(Errc::target_no_information, "target carries no information; the rate diverges");
  return info_bits(a) / ib;
}

ContinuityBound fannes_bound(int qubits, double trace_dist) {
  if (qubits < 1) raise(Errc::invalid_argument, "qubit count must be >= 1");
  if (trace_dist < -1e-12 || trace_dist > 2.0 + 1e-12)
    raise(Errc::invalid_argument, "trace distance must lie in [0,2]");
  ContinuityBound cb;
  cb.qubits = qubits;
  cb.trace_dist = std::clamp(trace_dist, 0.0, 2.0);
  double t = cb.trace_dist / 2.0;
  double dim = std::exp2(static_cast<double>(qubits));
  double t_peak = 1.0 - 1.0 / dim;  // where the bound reaches its maximum, log2(dim)
  double te = std::min(t, t_peak);
  cb.bound = te * std::log2(dim - 1.0) + h2(te);
  return cb;
}

AuditReport optimality_audit(const Spectrum& s, std::span<const long> ns, double delta) {
  if (info_bits(s) <= 1e-12)
    raise(Errc::target_no_information, "audit needs a state with positive information");
  AuditReport rep;
  rep.delta = delta;
  for (long n : ns) {
    auto d = distill(s, n, delta, 1.0);
    auto f = form(s, n, delta, 1.0);
    AuditRow row;
    row.n = n;
    row.yield = d.report.yield_per_copy;
    row.cost = f.report.yield_per_copy;
    row.ratio = row.cost > 0.0 ? row.yield / row.cost : 1.0;
    rep.rows.push_back(row);
  }
  return rep;
}

RigidityReport rigidity_experiment(const Spectrum& free_ancilla) {
  RigidityReport rep;
  if (free_ancilla.is_maximally_mixed()) {
    rep.trivial = false;
    rep.yield_per_copy = 0.0;
    rep.verdict = "nontrivial: transition rates finite";
  } else {
    rep.trivial = true;
    rep.yield_per_copy = info_bits(free_ancilla);
    rep.verdict = "trivial: unbounded pure-qubit supply, all rates infinite";
  }
  return rep;
}

ExactRunCheck distill_exact_check(const Spectrum& s, long n, double delta, double epsilon) {
  auto ts = typical_set(s, n, delta);
  if (ts.power.dim() > (1UL << 20))
    raise(Errc::overflow, "exact distillation check needs d^n within the explicit cap");
  auto res = distill(s, n, delta, epsilon);
  const std::size_t dim = ts.power.dim().get_ui();
  const std::size_t block = res.protocol.cycle_span.get_ui();

  // working basis: typical eigenvalues first, atypical after, each sorted
  std::vector<double> vec;
  vec.reserve(dim);
  std::vector<char> is_typ(ts.power.entries().size(), 0);
  for (std::size_t idx : ts.included) is_typ[idx] = 1;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < ts.power.entries().size(); ++i) {
      if (is_typ[i] != (pass == 0 ? 1 : 0)) continue;
      const auto& e = ts.power.entries()[i];
      double v = e.value();
      for (unsigned long k = 0; k < e.multiplicity.get_ui(); ++k) vec.push_back(v);
    }
  }

  auto out = simulate_on_vector(res.protocol, vec);

  // compare to the ideal diluted state: uniform on the D block, zero outside
  // (removing the maximally mixed block afterwards only contracts further)
  ExactRunCheck check;
  check.budget = res.report.trace_error;
  double measured = 0.0;
  double inv = 1.0 / static_cast<double>(block);
  for (std::size_t i = 0; i < dim; ++i)
    measured += std::abs(out[i] - (i < block ? inv : 0.0));
  check.measured_error = measured;
  return check;
}

ExactRunCheck form_exact_check(const Spectrum& s, long n, double delta, double epsilon) {
  auto ts = typical_set(s, n, delta);
  if (ts.power.dim() > 4096)
    raise(Errc::overflow, "exact formation check needs d^n within the explicit cap");
  if (ts.weight <= 0.0) raise(Errc::insufficient_n, "typical set carries no weight");
  auto res = form(s, n, delta, epsilon);
  const std::size_t dim = ts.power.dim().get_ui();
  const std::size_t dprime = static_cast<std::size_t>(1) << res.log2_d_prime;

  // target: the renormalized typical state, typical values first
  std::vector<double> target;
  target.reserve(dim);
  for (std::size_t idx : ts.included) {
    const auto& e = ts.power.entries()[idx];
    double lam = e.value() / ts.weight;
    for (unsigned long k = 0; k < e.multiplicity.get_ui(); ++k) target.push_back(lam);
  }
  const std::size_t support = target.size();
  target.resize(dim, 0.0);

  // wrap-around interval mixture: lay arcs of length g_i = lambda_i * D' end
  // to end around a unit circle; total length is exactly D', so every point
  // is covered by exactly D' consecutive positions
  std::vector<long double> cum(support + 1, 0.0L);
  for (std::size_t i = 0; i < support; ++i) {
    long double g = static_cast<long double>(target[i]) * static_cast<long double>(dprime);
    if (g > 1.0L) g = 1.0L;
    cum[i + 1] = cum[i] + g;
  }
  if (std::abs(static_cast<double>(cum[support]) - static_cast<double>(dprime)) > 1e-6)
    raise(Errc::internal, "wrap mixture arcs do not close the circle");

  std::vector<double> breaks;
  breaks.reserve(support);
  for (std::size_t i = 0; i < support; ++i) {
    double f = static_cast<double>(cum[i] - std::floor(cum[i]));
    breaks.push_back(f);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               breaks.end());

  auto locate = [&](long double y) {
    // position whose cumulative arc contains y in [0, D')
    std::size_t lo = 0, hi = support;
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cum[mid] <= y)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  };

  std::vector<double> source(dim, 0.0);
  for (std::size_t i = 0; i < dprime; ++i) source[i] = 1.0 / static_cast<double>(dprime);

  std::vector<double> out(dim, 0.0);
  std::vector<int> perm(dim);
  const std::size_t n_segments = breaks.size();
  for (std::size_t seg = 0; seg < n_segments; ++seg) {
    double b0 = breaks[seg];
    double b1 = seg + 1 < n_segments ? breaks[seg + 1] : breaks[0] + 1.0;
    double w = b1 - b0;
    if (w <= 1e-15) continue;
    double mid = 0.5 * (b0 + b1);
    std::fill(perm.begin(), perm.end(), -1);
    for (std::size_t t = 0; t < dprime; ++t) {
      std::size_t i = locate(static_cast<long double>(mid) + static_cast<long double>(t));
      perm[i] = static_cast<int>(t);
    }
    int next_slot = static_cast<int>(dprime);
    for (std::size_t i = 0; i < dim; ++i)
      if (perm[i] < 0) perm[i] = next_slot++;
    for (std::size_t i = 0; i < dim; ++i) out[i] += w * source[static_cast<std::size_t>(perm[i])];
  }

  // the mixture must land on the typical state exactly (up to rounding)
  double mix_err = 0.0;
  for (std::size_t i = 0; i < dim; ++i) mix_err += std::abs(out[i] - target[i]);
  if (mix_err > 1e-9) raise(Errc::internal, "wrap mixture failed to reproduce the typical state");

  ExactRunCheck check;
  check.budget = res.report.trace_error;
  check.measured_error = trace_distance(Spectrum::from_values(out), ts.power);
  return check;
}

}  // namespace noisy
