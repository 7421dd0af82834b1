#include "protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "bigint.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace noisy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<long> largest_remainder_groups(const std::vector<double>& weights, long ancilla) {
  const std::size_t j = weights.size();
  std::vector<long> groups(j);
  std::vector<std::pair<double, std::size_t>> rem(j);
  long assigned = 0;
  for (std::size_t i = 0; i < j; ++i) {
    double exact = weights[i] * static_cast<double>(ancilla);
    groups[i] = static_cast<long>(std::floor(exact));
    assigned += groups[i];
    rem[i] = {exact - std::floor(exact), i};
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;  // ties keep lower index first (stable)
  });
  long leftover = ancilla - assigned;
  for (long k = 0; k < leftover; ++k) groups[rem[static_cast<std::size_t>(k)].second] += 1;
  return groups;
}

}  // namespace

NoisyProtocol synthesize(const Spectrum& p, const Spectrum& q, long ancilla_dim) {
  if (p.dim() != q.dim()) raise(Errc::dimension_mismatch, "synthesis needs equal dimensions");
  auto verdict = compare_mixedness(q, p);
  if (!verdict.more_mixed)
    raise(Errc::not_majorized, "target is not more mixed than the source (violated at k=" +
                                   verdict.first_violation->get_str() + ")");
  auto pv = p.materialize();
  auto qv = q.materialize();
  auto mixture = birkhoff(transfer_matrix(pv, qv));
  const long j = static_cast<long>(mixture.terms.size());
  if (ancilla_dim < j)
    raise(Errc::ancilla_too_small, "ancilla dim " + std::to_string(ancilla_dim) +
                                       " below the number of mixture terms " + std::to_string(j));

  std::vector<double> alphas(mixture.terms.size());
  for (std::size_t i = 0; i < mixture.terms.size(); ++i) alphas[i] = mixture.terms[i].weight;

  NoisyProtocol proto;
  proto.kind = NoisyProtocol::Kind::explicit_mixture;
  proto.input_dim = p.dim();
  proto.ancilla_dim = ancilla_dim;
  proto.group_sizes = largest_remainder_groups(alphas, ancilla_dim);
  proto.mixture = std::move(mixture);

  double weight_err = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    weight_err +=
        std::abs(static_cast<double>(proto.group_sizes[i]) / static_cast<double>(ancilla_dim) -
                 alphas[i]);
  double max_p = pv.empty() ? 0.0 : *std::max_element(pv.begin(), pv.end());
  proto.error_bound = weight_err * max_p * static_cast<double>(pv.size());
  return proto;
}

NoisyProtocol cyclic_protocol(const mpz_class& input_dim, const mpz_class& span) {
  if (span < 1 || span > input_dim)
    raise(Errc::invalid_argument, "cycle span must lie in [1, input_dim]");
  NoisyProtocol proto;
  proto.kind = NoisyProtocol::Kind::uniform_cyclic;
  proto.input_dim = input_dim;
  proto.ancilla_dim = span;
  proto.cycle_span = span;
  proto.error_bound = 0.0;  // weights 1/span are realized exactly by unit groups
  return proto;
}

namespace {

Spectrum simulate_explicit(const NoisyProtocol& proto, const Spectrum& p) {
  auto pv = p.materialize();
  const std::size_t d = pv.size();
  std::vector<double> out(d, 0.0);
  const double n = proto.ancilla_dim.get_d();
  for (std::size_t t = 0; t < proto.mixture.terms.size(); ++t) {
    if (proto.group_sizes[t] == 0) continue;
    double w = static_cast<double>(proto.group_sizes[t]) / n;
    const auto& perm = proto.mixture.terms[t].perm;
    for (std::size_t i = 0; i < d; ++i) out[i] += w * pv[perm[i]];
  }
  return Spectrum::from_values(out);
}

Spectrum simulate_cyclic(const NoisyProtocol& proto, const Spectrum& p) {
  const mpz_class& span = proto.cycle_span;
  double mass = ky_fan_at(p, span);
  std::vector<SpectrumEntry> groups;
  SpectrumEntry head;
  head.multiplicity = span;
  if (mass > 0.0) {
    head.weight = mass;
    head.log2_value = static_cast<double>(std::log2l(static_cast<long double>(mass)) - log2_mpz(span));
  } else {
    head.weight = 0.0;
    head.log2_value = -kInf;
  }
  groups.push_back(std::move(head));

  mpz_class pos = 0;
  for (const auto& e : p.entries()) {
    mpz_class end = pos + e.multiplicity;
    if (end > span) {
      mpz_class start = pos > span ? pos : span;
      mpz_class count = end - start;
      SpectrumEntry tail;
      tail.multiplicity = count;
      tail.log2_value = e.log2_value;
      tail.weight = e.log2_value == -kInf
                        ? 0.0
                        : static_cast<double>(std::exp2l(log2_mpz(count) +
                                                         static_cast<long double>(e.log2_value)));
      groups.push_back(std::move(tail));
    }
    pos = end;
  }
  return Spectrum::from_raw_groups(std::move(groups));
}

}  // namespace

Spectrum simulate(const NoisyProtocol& proto, const Spectrum& p) {
  if (p.dim() != proto.input_dim)
    raise(Errc::dimension_mismatch, "input dim does not match the protocol");
  switch (proto.kind) {
    case NoisyProtocol::Kind::explicit_mixture: return simulate_explicit(proto, p);
    case NoisyProtocol::Kind::uniform_cyclic: return simulate_cyclic(proto, p);
  }
  raise(Errc::internal, "unknown protocol kind");
}

std::vector<double> simulate_on_vector(const NoisyProtocol& proto,
                                       const std::vector<double>& values) {
  if (proto.input_dim != static_cast<unsigned long>(values.size()))
    raise(Errc::dimension_mismatch, "vector length does not match the protocol");
  if (proto.kind == NoisyProtocol::Kind::uniform_cyclic) {
    const std::size_t span = proto.cycle_span.get_ui();
    std::vector<double> out = values;
    double mass = 0.0;
    for (std::size_t i = 0; i < span; ++i) mass += values[i];
    double avg = mass / static_cast<double>(span);
    for (std::size_t i = 0; i < span; ++i) out[i] = avg;
    return out;
  }
  std::vector<double> out(values.size(), 0.0);
  const double n = proto.ancilla_dim.get_d();
  for (std::size_t t = 0; t < proto.mixture.terms.size(); ++t) {
    if (proto.group_sizes[t] == 0) continue;
    double w = static_cast<double>(proto.group_sizes[t]) / n;
    const auto& perm = proto.mixture.terms[t].perm;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] += w * values[perm[i]];
  }
  return out;
}

std::pair<Spectrum, Spectrum> pad_to_common_qubits(const Spectrum& a, const Spectrum& b) {
  if (a.dim() == b.dim()) return {a, b};
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.dim().get_mpz_t(), b.dim().get_mpz_t());
  mpz_class pad_a = l / a.dim();
  mpz_class pad_b = l / b.dim();
  Spectrum pa = pad_a == 1 ? a : a.tensor_with(Spectrum::maximally_mixed(pad_a));
  Spectrum pb = pad_b == 1 ? b : b.tensor_with(Spectrum::maximally_mixed(pad_b));
  return {std::move(pa), std::move(pb)};
}

long NoChannel::output_dim() const {
  if (input_dim < 1) raise(Errc::invalid_argument, "channel input dim must be >= 1");
  long dim = input_dim;
  for (const auto& step : steps) {
    switch (step.kind) {
      case ChannelStep::Kind::add_maximally_mixed:
        if (step.qubits < 0 || step.qubits > 20) raise(Errc::invalid_argument, "bad ancilla width");
        dim <<= step.qubits;
        break;
      case ChannelStep::Kind::permute: {
        if (static_cast<long>(step.perm.size()) != dim)
          raise(Errc::dimension_mismatch, "permutation size does not match channel dim");
        break;
      }
      case ChannelStep::Kind::trace_out_ancilla: {
        long block = 1L << step.qubits;
        if (step.qubits < 0 || dim % block != 0)
          raise(Errc::dimension_mismatch, "cannot trace a non-dividing ancilla");
        dim /= block;
        break;
      }
    }
    if (dim > (1L << 22)) raise(Errc::overflow, "channel dimension exceeds the explicit cap");
  }
  return dim;
}

std::vector<double> apply_channel(const NoChannel& chan, std::vector<double> state) {
  if (static_cast<long>(state.size()) != chan.input_dim)
    raise(Errc::dimension_mismatch, "state length does not match channel input dim");
  chan.output_dim();  // shape validation up front
  for (const auto& step : chan.steps) {
    switch (step.kind) {
      case ChannelStep::Kind::add_maximally_mixed: {
        long block = 1L << step.qubits;
        std::vector<double> next(state.size() * static_cast<std::size_t>(block));
        double inv = 1.0 / static_cast<double>(block);
        for (std::size_t i = 0; i < state.size(); ++i)
          for (long a = 0; a < block; ++a) next[i * block + a] = state[i] * inv;
        state = std::move(next);
        break;
      }
      case ChannelStep::Kind::permute: {
        std::vector<double> next(state.size());
        for (std::size_t i = 0; i < state.size(); ++i) next[i] = state[step.perm[i]];
        state = std::move(next);
        break;
      }
      case ChannelStep::Kind::trace_out_ancilla: {
        long block = 1L << step.qubits;
        std::vector<double> next(state.size() / static_cast<std::size_t>(block), 0.0);
        for (std::size_t b = 0; b < next.size(); ++b)
          for (long a = 0; a < block; ++a) next[b] += state[b * block + a];
        state = std::move(next);
        break;
      }
    }
  }
  return state;
}

DensityMatrix apply_channel(const NoChannel& chan, const DensityMatrix& m) {
  if (m.dim() != chan.input_dim)
    raise(Errc::dimension_mismatch, "matrix dim does not match channel input dim");
  std::vector<cplx> a = m.entries();
  long dim = m.dim();
  for (const auto& step : chan.steps) {
    switch (step.kind) {
      case ChannelStep::Kind::add_maximally_mixed: {
        long block = 1L << step.qubits;
        long nd = dim * block;
        if (nd > DensityMatrix::kMaxDim) raise(Errc::overflow, "dense channel exceeds dim 64");
        std::vector<cplx> next(static_cast<std::size_t>(nd) * nd, cplx(0, 0));
        double inv = 1.0 / static_cast<double>(block);
        for (long i = 0; i < dim; ++i)
          for (long j = 0; j < dim; ++j)
            for (long x = 0; x < block; ++x)
              next[static_cast<std::size_t>(i * block + x) * nd + (j * block + x)] =
                  a[static_cast<std::size_t>(i) * dim + j] * inv;
        a = std::move(next);
        dim = nd;
        break;
      }
      case ChannelStep::Kind::permute: {
        std::vector<cplx> next(a.size());
        for (long i = 0; i < dim; ++i)
          for (long j = 0; j < dim; ++j)
            next[static_cast<std::size_t>(i) * dim + j] =
                a[static_cast<std::size_t>(step.perm[i]) * dim + step.perm[j]];
        a = std::move(next);
        break;
      }
      case ChannelStep::Kind::trace_out_ancilla: {
        long block = 1L << step.qubits;
        long nd = dim / block;
        std::vector<cplx> next(static_cast<std::size_t>(nd) * nd, cplx(0, 0));
        for (long i = 0; i < nd; ++i)
          for (long j = 0; j < nd; ++j)
            for (long x = 0; x < block; ++x)
              next[static_cast<std::size_t>(i) * nd + j] +=
                  a[static_cast<std::size_t>(i * block + x) * dim + (j * block + x)];
        a = std::move(next);
        dim = nd;
        break;
      }
    }
  }
  return DensityMatrix(static_cast<int>(dim), std::move(a));
}

double vector_entropy_bits(std::span<const double> v) {
  double ent = 0.0;
  for (double x : v)
    if (x > 0.0) ent -= x * std::log2(x);
  return std::max(ent, 0.0);
}

double vector_info_bits(std::span<const double> v) {
  return std::log2(static_cast<double>(v.size())) - vector_entropy_bits(v);
}

ChannelAudit random_channel_audit(long trials, std::uint64_t seed) {
  ChannelAudit audit;
  audit.max_info_gain = -std::numeric_limits<double>::infinity();
  for (long t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed ^ 0x5bd1e995u, static_cast<std::uint64_t>(t));
    long dim = 2L << (rng() % 4);  // 2..16 to leave room for ancillas
    NoChannel chan{dim, {}};
    long cur = dim;
    int n_steps = 1 + static_cast<int>(rng() % 5);
    for (int s = 0; s < n_steps; ++s) {
      switch (rng() % 3) {
        case 0: {
          int width = 1 + static_cast<int>(rng() % 2);
          if (cur << width <= 64) {
            chan.steps.push_back(ChannelStep::add(width));
            cur <<= width;
          }
          break;
        }
        case 1: {
          std::vector<int> perm(static_cast<std::size_t>(cur));
          std::iota(perm.begin(), perm.end(), 0);
          std::shuffle(perm.begin(), perm.end(), rng);
          chan.steps.push_back(ChannelStep::permutation(std::move(perm)));
          break;
        }
        case 2:
          if (cur % 2 == 0 && cur >= 4) {
            chan.steps.push_back(ChannelStep::trace_out(1));
            cur >>= 1;
          }
          break;
      }
    }
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> in(static_cast<std::size_t>(dim));
    double total = 0.0;
    for (auto& x : in) total += (x = exp1(rng));
    for (auto& x : in) x /= total;
    auto out = apply_channel(chan, in);
    double gain = vector_info_bits(out) - vector_info_bits(in);
    audit.max_info_gain = std::max(audit.max_info_gain, gain);
    if (gain > 1e-9) audit.violations += 1;
    audit.samples += 1;
  }
  return audit;
}

ChannelAudit verify_no(const NoChannel& chan, long trials, std::uint64_t seed) {
  ChannelAudit audit;
  audit.max_info_gain = -std::numeric_limits<double>::infinity();
  for (long t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> in(static_cast<std::size_t>(chan.input_dim));
    double total = 0.0;
    for (auto& x : in) total += (x = exp1(rng));
    for (auto& x : in) x /= total;
    auto out = apply_channel(chan, in);
    double gain = vector_info_bits(out) - vector_info_bits(in);
    audit.max_info_gain = std::max(audit.max_info_gain, gain);
    if (gain > 1e-9) audit.violations += 1;
    audit.samples += 1;
  }
  return audit;
}

}  // namespace noisy
