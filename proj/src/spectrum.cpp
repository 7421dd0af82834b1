#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bigint.hpp"
#include "errors.hpp"

namespace noisy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Representation noise in log2 domain grows with the magnitude of the
// exponent; widen the grouping tolerance accordingly so products that are
// mathematically equal still land in one group at large n.
double merge_tol(double log2_value) {
  double mag = std::abs(log2_value);
  return std::max(Spectrum::kGroupTolLog2, mag * 0x1p-50);
}

double weight_of(double log2_value, const mpz_class& mult) {
  if (log2_value == -kInf) return 0.0;
  long double lw = static_cast<long double>(log2_value) + log2_mpz(mult);
  return static_cast<double>(std::exp2l(lw));
}

}  // namespace

double SpectrumEntry::value() const {
  return log2_value == -kInf ? 0.0 : std::exp2(log2_value);
}

Spectrum Spectrum::from_values(std::span<const double> values) {
  if (values.empty()) raise(Errc::invalid_argument, "spectrum needs at least one eigenvalue");
  std::vector<double> v(values.begin(), values.end());
  for (double& x : v) {
    if (x < -1e-12 || x > 1.0 + 1e-12 || !std::isfinite(x))
      raise(Errc::invalid_argument, "eigenvalue outside [0,1]: " + std::to_string(x));
    x = std::clamp(x, 0.0, 1.0);
  }
  std::sort(v.begin(), v.end(), std::greater<>());

  std::vector<SpectrumEntry> groups;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < v.size() && (v[j] == v[i] || v[i] - v[j] <= 1e-12 * v[i])) sum += v[j++];
    std::size_t count = j - i;
    SpectrumEntry e;
    e.multiplicity = static_cast<unsigned long>(count);
    if (v[i] <= 0.0) {
      e.log2_value = -kInf;
      e.weight = 0.0;
    } else {
      e.weight = sum;
      e.log2_value = std::log2(sum / static_cast<double>(count));
    }
    groups.push_back(std::move(e));
    i = j;
  }
  return from_raw_groups(std::move(groups));
}

Spectrum Spectrum::from_entries(const std::vector<std::pair<double, mpz_class>>& entries) {
  if (entries.empty()) raise(Errc::invalid_argument, "spectrum needs at least one entry");
  std::vector<SpectrumEntry> groups;
  for (const auto& [value, mult] : entries) {
    if (value < -1e-12 || value > 1.0 + 1e-12 || !std::isfinite(value))
      raise(Errc::invalid_argument, "eigenvalue outside [0,1]");
    if (mult < 1) raise(Errc::invalid_argument, "multiplicity must be >= 1");
    SpectrumEntry e;
    e.multiplicity = mult;
    double v = std::clamp(value, 0.0, 1.0);
    e.log2_value = v > 0.0 ? std::log2(v) : -kInf;
    e.weight = weight_of(e.log2_value, mult);
    groups.push_back(std::move(e));
  }
  return from_raw_groups(std::move(groups));
}

Spectrum Spectrum::pure(const mpz_class& dim) {
  if (dim < 1) raise(Errc::invalid_argument, "dimension must be >= 1");
  std::vector<SpectrumEntry> groups;
  groups.push_back({0.0, 1.0, 1});
  if (dim > 1) groups.push_back({-kInf, 0.0, mpz_class(dim - 1)});
  return from_raw_groups(std::move(groups));
}

Spectrum Spectrum::maximally_mixed(const mpz_class& dim) {
  if (dim < 1) raise(Errc::invalid_argument, "dimension must be >= 1");
  std::vector<SpectrumEntry> groups;
  groups.push_back({static_cast<double>(-log2_mpz(dim)), 1.0, dim});
  return from_raw_groups(std::move(groups));
}

Spectrum Spectrum::from_raw_groups(std::vector<SpectrumEntry> groups) {
  Spectrum s;
  s.entries_ = std::move(groups);
  s.finalize_and_validate();
  return s;
}

void Spectrum::finalize_and_validate() {
  if (entries_.empty()) raise(Errc::invalid_argument, "empty spectrum");
  for (const auto& e : entries_) {
    if (e.multiplicity < 1) raise(Errc::invalid_argument, "multiplicity must be >= 1");
    if (e.log2_value > 1e-9) raise(Errc::invalid_argument, "eigenvalue above 1");
    if (e.weight < -1e-12 || !std::isfinite(e.weight))
      raise(Errc::invalid_argument, "bad group weight");
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) {
                     return a.log2_value > b.log2_value;
                   });

  // merge groups holding the same value (1e-12 relative, wider at scale)
  std::vector<SpectrumEntry> merged;
  for (auto& e : entries_) {
    if (!merged.empty()) {
      SpectrumEntry& last = merged.back();
      bool both_zero = last.log2_value == -kInf && e.log2_value == -kInf;
      bool close = std::isfinite(last.log2_value) && std::isfinite(e.log2_value) &&
                   last.log2_value - e.log2_value <= merge_tol(last.log2_value);
      if (both_zero || close) {
        last.weight += e.weight;
        last.multiplicity += e.multiplicity;
        if (std::isfinite(last.log2_value))
          last.log2_value = static_cast<double>(std::log2l(static_cast<long double>(last.weight)) -
                                                log2_mpz(last.multiplicity));
        continue;
      }
    }
    merged.push_back(std::move(e));
  }
  entries_ = std::move(merged);

  dim_ = 0;
  double total = 0.0;
  for (const auto& e : entries_) {
    dim_ += e.multiplicity;
    total += e.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    raise(Errc::invalid_argument,
          "eigenvalues must sum to 1 (got " + std::to_string(total) + ")");
  qubits_ = is_power_of_two(dim_) ? static_cast<double>(exact_log2(dim_))
                                  : static_cast<double>(log2_mpz(dim_));
}

bool Spectrum::is_pure() const {
  return entries_[0].multiplicity == 1 && entries_[0].weight >= 1.0 - 1e-12;
}

bool Spectrum::is_maximally_mixed() const {
  return entries_.size() == 1 && entries_[0].multiplicity == dim_;
}

mpz_class Spectrum::support() const {
  mpz_class n = 0;
  for (const auto& e : entries_)
    if (e.log2_value != -kInf) n += e.multiplicity;
  return n;
}

Spectrum Spectrum::tensor_with(const Spectrum& other) const {
  if (entries_.size() * other.entries_.size() > 4'000'000)
    raise(Errc::overflow, "tensor product would exceed the entry cap");
  std::vector<SpectrumEntry> groups;
  groups.reserve(entries_.size() * other.entries_.size());
  for (const auto& a : entries_) {
    for (const auto& b : other.entries_) {
      SpectrumEntry e;
      e.multiplicity = a.multiplicity * b.multiplicity;
      if (a.log2_value == -kInf || b.log2_value == -kInf) {
        e.log2_value = -kInf;
        e.weight = 0.0;
      } else {
        e.log2_value = a.log2_value + b.log2_value;
        e.weight = a.weight * b.weight;
      }
      groups.push_back(std::move(e));
    }
  }
  return from_raw_groups(std::move(groups));
}

Spectrum Spectrum::tensor_power(long n) const {
  if (n < 1) raise(Errc::invalid_argument, "tensor power needs n >= 1");
  if (n == 1) return *this;

  // nonzero part, normalized so the power of an eps-valid spectrum stays
  // eps-valid (products of 1 +/- 1e-13 drift out of tolerance by n otherwise)
  struct Base {
    long double log2_value;
    mpz_class mult;
  };
  std::vector<Base> base;
  long double total = 0.0L;
  for (const auto& e : entries_)
    if (e.log2_value != -kInf) total += static_cast<long double>(e.weight);
  for (const auto& e : entries_) {
    if (e.log2_value == -kInf) continue;
    long double l2v = std::log2l(static_cast<long double>(e.weight)) - log2_mpz(e.multiplicity) -
                      std::log2l(total);
    base.push_back({l2v, e.multiplicity});
  }
  const std::size_t t = base.size();
  if (t == 0) raise(Errc::internal, "spectrum without support");

  // C(n+t-1, t-1) compositions; refuse absurd enumerations up front
  double log_count = 0.0;
  for (std::size_t i = 1; i < t; ++i)
    log_count += std::log2(static_cast<double>(n + i)) - std::log2(static_cast<double>(i));
  if (log_count > std::log2(4e6))
    raise(Errc::overflow, "tensor power would enumerate too many distinct values");

  std::vector<SpectrumEntry> groups;
  // walk compositions (k_0..k_{t-1}), sum k_i = n, carrying the exact
  // coefficient multinomial(n;k) * prod mult_i^{k_i} incrementally
  struct Frame {
    long rem;
    long double l2v;
    mpz_class coef;
  };
  auto emit = [&](long double l2v, const mpz_class& coef) {
    SpectrumEntry e;
    e.multiplicity = coef;
    e.log2_value = static_cast<double>(l2v);
    e.weight = static_cast<double>(std::exp2l(l2v + log2_mpz(coef)));
    groups.push_back(std::move(e));
  };
  std::function<void(std::size_t, long, long double, const mpz_class&)> rec =
      [&](std::size_t level, long rem, long double l2v, const mpz_class& coef) {
        if (level == t - 1) {
          mpz_class c = coef;
          mpz_class mp;
          mpz_pow_ui(mp.get_mpz_t(), base[level].mult.get_mpz_t(),
                     static_cast<unsigned long>(rem));
          c *= mp;
          emit(l2v + static_cast<long double>(rem) * base[level].log2_value, c);
          return;
        }
        // k = 0..rem at this level; binom = C(rem, k) * mult^k, updated in place
        mpz_class binom = coef;
        for (long k = 0;; ++k) {
          rec(level + 1, rem - k, l2v + static_cast<long double>(k) * base[level].log2_value,
              binom);
          if (k == rem) break;
          binom *= static_cast<unsigned long>(rem - k);
          mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(),
                          static_cast<unsigned long>(k + 1));
          binom *= base[level].mult;
        }
      };
  rec(0, n, 0.0L, mpz_class(1));

  // zero eigenvalues of the power: dim^n - support^n
  mpz_class dim_pow, nz_pow;
  mpz_pow_ui(dim_pow.get_mpz_t(), dim_.get_mpz_t(), static_cast<unsigned long>(n));
  mpz_class nz = support();
  mpz_pow_ui(nz_pow.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(n));
  if (dim_pow > nz_pow) groups.push_back({-kInf, 0.0, dim_pow - nz_pow});

  return from_raw_groups(std::move(groups));
}

std::vector<double> Spectrum::materialize(std::size_t max_dim) const {
  if (dim_ > static_cast<unsigned long>(max_dim))
    raise(Errc::overflow, "spectrum too large to materialize");
  std::vector<double> v;
  v.reserve(dim_.get_ui());
  for (const auto& e : entries_) {
    double val = e.value();
    for (unsigned long i = 0; i < e.multiplicity.get_ui(); ++i) v.push_back(val);
  }
  return v;
}

double entropy_bits(const Spectrum& s) {
  double ent = 0.0;
  for (const auto& e : s.entries())
    if (e.weight > 0.0 && e.log2_value != -kInf) ent -= e.weight * e.log2_value;
  return std::max(ent, 0.0);
}

double info_bits(const Spectrum& s) { return std::max(s.qubits() - entropy_bits(s), 0.0); }

MonotoneVector ky_fan_norms(const Spectrum& s) {
  if (s.dim() > static_cast<unsigned long>(Spectrum::kMaterializeCap))
    raise(Errc::overflow, "dimension too large for an explicit Ky Fan vector");
  MonotoneVector m;
  m.ky_fan.reserve(s.dim().get_ui());
  double acc = 0.0;
  for (const auto& e : s.entries()) {
    double val = e.value();
    for (unsigned long i = 0; i < e.multiplicity.get_ui(); ++i) {
      acc += val;
      m.ky_fan.push_back(acc);
    }
  }
  m.entropy = entropy_bits(s);
  m.info = info_bits(s);
  return m;
}

double ky_fan_at(const Spectrum& s, const mpz_class& k) {
  if (k <= 0) return 0.0;
  mpz_class remaining = k > s.dim() ? s.dim() : k;
  double acc = 0.0;
  for (const auto& e : s.entries()) {
    if (remaining <= 0) break;
    mpz_class take = remaining < e.multiplicity ? remaining : e.multiplicity;
    if (e.log2_value != -kInf) {
      if (take == e.multiplicity)
        acc += e.weight;
      else
        acc += static_cast<double>(
            std::exp2l(log2_mpz(take) + static_cast<long double>(e.log2_value)));
    }
    remaining -= take;
  }
  return acc;
}

MajorizationResult compare_mixedness(const Spectrum& q, const Spectrum& p) {
  if (q.dim() != p.dim())
    raise(Errc::dimension_mismatch, "majorization needs equal dimensions");

  const auto& qe = q.entries();
  const auto& pe = p.entries();
  std::size_t iq = 0, ip = 0;
  mpz_class rem_q = qe[0].multiplicity, rem_p = pe[0].multiplicity;
  mpz_class pos = 0, seg_start = 0;
  double sum_q = 0.0, sum_p = 0.0;
  double prev_diff = 0.0;  // sum_q - sum_p at the previous breakpoint

  while (iq < qe.size() && ip < pe.size()) {
    mpz_class step = rem_q < rem_p ? rem_q : rem_p;
    double vq = qe[iq].value();
    double vp = pe[ip].value();
    long double l2step = log2_mpz(step);
    if (qe[iq].log2_value != -kInf)
      sum_q += static_cast<double>(std::exp2l(l2step + static_cast<long double>(qe[iq].log2_value)));
    if (pe[ip].log2_value != -kInf)
      sum_p += static_cast<double>(std::exp2l(l2step + static_cast<long double>(pe[ip].log2_value)));
    pos += step;

    double diff = sum_q - sum_p;
    if (diff > kMajorizationSlack) {
      // partial sums are linear inside the segment; locate the first index
      // where the slack is actually crossed
      MajorizationResult r;
      r.more_mixed = false;
      mpz_class k = pos;
      double slope = vq - vp;
      if (slope > 0.0 && prev_diff <= kMajorizationSlack) {
        double need = (kMajorizationSlack - prev_diff) / slope;
        mpz_class offset(std::floor(std::max(need, 0.0)));
        mpz_class candidate = seg_start + offset + 1;
        if (candidate < k) k = candidate;
      }
      r.first_violation = k;
      return r;
    }
    prev_diff = diff;
    seg_start = pos;

    rem_q -= step;
    rem_p -= step;
    if (rem_q == 0 && ++iq < qe.size()) rem_q = qe[iq].multiplicity;
    if (rem_p == 0 && ++ip < pe.size()) rem_p = pe[ip].multiplicity;
  }
  return {true, std::nullopt};
}

bool more_mixed(const Spectrum& q, const Spectrum& p) { return compare_mixedness(q, p).more_mixed; }

double trace_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    raise(Errc::dimension_mismatch, "trace distance needs equal dimensions");
  double dist = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dist += std::abs(a[i] - b[i]);
  return dist;
}

double trace_distance(const Spectrum& a, const Spectrum& b) {
  if (a.dim() != b.dim())
    raise(Errc::dimension_mismatch, "trace distance needs equal dimensions");
  const auto& ae = a.entries();
  const auto& be = b.entries();
  std::size_t ia = 0, ib = 0;
  mpz_class rem_a = ae[0].multiplicity, rem_b = be[0].multiplicity;
  double dist = 0.0;
  while (ia < ae.size() && ib < be.size()) {
    mpz_class step = rem_a < rem_b ? rem_a : rem_b;
    long double l2step = log2_mpz(step);
    double wa = ae[ia].log2_value == -kInf
                    ? 0.0
                    : static_cast<double>(std::exp2l(l2step + static_cast<long double>(ae[ia].log2_value)));
    double wb = be[ib].log2_value == -kInf
                    ? 0.0
                    : static_cast<double>(std::exp2l(l2step + static_cast<long double>(be[ib].log2_value)));
    dist += std::abs(wa - wb);
    rem_a -= step;
    rem_b -= step;
    if (rem_a == 0 && ++ia < ae.size()) rem_a = ae[ia].multiplicity;
    if (rem_b == 0 && ++ib < be.size()) rem_b = be[ib].multiplicity;
  }
  return dist;
}

}  // namespace noisy
