#include "noisyops.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymptotic.hpp"
#include "density_matrix.hpp"
#include "errors.hpp"
#include "json_io.hpp"
#include "noiseless.hpp"
#include "protocol.hpp"
#include "spectrum.hpp"

using namespace noisy;

struct no_spectrum {
  Spectrum value;
};
struct no_densmat {
  DensityMatrix value;
};
struct no_protocol {
  NoisyProtocol value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

no_status map_code(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return NO_ERROR_INVALID_ARGUMENT;
    case Errc::parse: return NO_ERROR_PARSE;
    case Errc::dimension_mismatch: return NO_ERROR_DIMENSION_MISMATCH;
    case Errc::not_majorized: return NO_ERROR_NOT_MAJORIZED;
    case Errc::ancilla_too_small: return NO_ERROR_ANCILLA_TOO_SMALL;
    case Errc::insufficient_n: return NO_ERROR_INSUFFICIENT_N;
    case Errc::not_hermitian: return NO_ERROR_NOT_HERMITIAN;
    case Errc::not_positive: return NO_ERROR_NOT_POSITIVE;
    case Errc::target_no_information: return NO_ERROR_TARGET_NO_INFORMATION;
    case Errc::decomposition_stalled: return NO_ERROR_DECOMPOSITION_STALLED;
    case Errc::overflow: return NO_ERROR_OVERFLOW;
    case Errc::internal: return NO_ERROR_INTERNAL;
  }
  return NO_ERROR_INTERNAL;
}

template <typename F>
no_status wrap(F&& f) noexcept {
  try {
    f();
    return NO_OK;
  } catch (const Error& e) {
    set_error(e.what());
    return map_code(e.code());
  } catch (const std::exception& e) {
    set_error(e.what());
    return NO_ERROR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return NO_ERROR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

no_status require(bool ok, const char* what) {
  if (!ok) {
    set_error(what);
    return NO_ERROR_INVALID_ARGUMENT;
  }
  return NO_OK;
}

}  // namespace

extern "C" {

const char* no_version(void) { return "0.1.0"; }

const char* no_last_error(void) { return g_last_error.c_str(); }

void no_string_free(char* s) { std::free(s); }

/* ---- spectra ------------------------------------------------------------ */

no_status no_spectrum_parse(const char* json, no_spectrum** out) {
  if (auto st = require(json && out, "null argument")) return st;
  return wrap([&] { *out = new no_spectrum{spectrum_from_json(json)}; });
}

no_status no_spectrum_from_values(const double* values, size_t count, no_spectrum** out) {
  if (auto st = require(values && out && count > 0, "null argument")) return st;
  return wrap([&] {
    *out = new no_spectrum{Spectrum::from_values(std::span<const double>(values, count))};
  });
}

no_status no_spectrum_pure(int64_t dim, no_spectrum** out) {
  if (auto st = require(out != nullptr, "null argument")) return st;
  return wrap([&] { *out = new no_spectrum{Spectrum::pure(mpz_class(static_cast<long>(dim)))}; });
}

no_status no_spectrum_maximally_mixed(int64_t dim, no_spectrum** out) {
  if (auto st = require(out != nullptr, "null argument")) return st;
  return wrap(
      [&] { *out = new no_spectrum{Spectrum::maximally_mixed(mpz_class(static_cast<long>(dim)))}; });
}

void no_spectrum_free(no_spectrum* s) { delete s; }

no_status no_spectrum_json(const no_spectrum* s, char** out) {
  if (auto st = require(s && out, "null argument")) return st;
  return wrap([&] { *out = dup_string(to_json(s->value)); });
}

double no_spectrum_qubits(const no_spectrum* s) { return s ? s->value.qubits() : 0.0; }

no_status no_spectrum_entropy(const no_spectrum* s, double* bits) {
  if (auto st = require(s && bits, "null argument")) return st;
  return wrap([&] { *bits = entropy_bits(s->value); });
}

no_status no_spectrum_info(const no_spectrum* s, double* bits) {
  if (auto st = require(s && bits, "null argument")) return st;
  return wrap([&] { *bits = info_bits(s->value); });
}

no_status no_spectrum_tensor_power(const no_spectrum* s, int64_t n, no_spectrum** out) {
  if (auto st = require(s && out, "null argument")) return st;
  return wrap([&] { *out = new no_spectrum{s->value.tensor_power(static_cast<long>(n))}; });
}

no_status no_spectrum_ky_fan(const no_spectrum* s, double* buffer, size_t buffer_len,
                             size_t* written) {
  if (auto st = require(s && buffer && written, "null argument")) return st;
  return wrap([&] {
    std::size_t count = buffer_len;
    if (s->value.dim() < static_cast<unsigned long>(count)) count = s->value.dim().get_ui();
    double acc = 0.0;
    std::size_t idx = 0;
    for (const auto& e : s->value.entries()) {
      double v = e.value();
      for (unsigned long i = 0; i < e.multiplicity && idx < count; ++i) {
        acc += v;
        buffer[idx++] = acc;
      }
      if (idx >= count) break;
    }
    *written = idx;
  });
}

no_status no_more_mixed(const no_spectrum* q, const no_spectrum* p, int* verdict,
                        char** violated_k) {
  if (auto st = require(q && p && verdict, "null argument")) return st;
  return wrap([&] {
    auto r = compare_mixedness(q->value, p->value);
    *verdict = r.more_mixed ? 1 : 0;
    if (violated_k)
      *violated_k = r.first_violation ? dup_string(r.first_violation->get_str()) : nullptr;
  });
}

no_status no_trace_distance(const no_spectrum* a, const no_spectrum* b, double* out) {
  if (auto st = require(a && b && out, "null argument")) return st;
  return wrap([&] { *out = trace_distance(a->value, b->value); });
}

no_status no_pad_to_common_qubits(const no_spectrum* a, const no_spectrum* b,
                                  no_spectrum** out_a, no_spectrum** out_b) {
  if (auto st = require(a && b && out_a && out_b, "null argument")) return st;
  return wrap([&] {
    auto [pa, pb] = pad_to_common_qubits(a->value, b->value);
    *out_a = new no_spectrum{std::move(pa)};
    *out_b = new no_spectrum{std::move(pb)};
  });
}

/* ---- dense layer --------------------------------------------------------- */

no_status no_densmat_parse(const char* json, no_densmat** out) {
  if (auto st = require(json && out, "null argument")) return st;
  return wrap([&] { *out = new no_densmat{densmat_from_json(json)}; });
}

void no_densmat_free(no_densmat* m) { delete m; }

no_status no_densmat_spectrum(const no_densmat* m, no_spectrum** out) {
  if (auto st = require(m && out, "null argument")) return st;
  return wrap([&] { *out = new no_spectrum{eigen_spectrum(m->value)}; });
}

no_status no_densmat_trace_distance(const no_densmat* a, const no_densmat* b, double* out) {
  if (auto st = require(a && b && out, "null argument")) return st;
  return wrap([&] { *out = trace_distance(a->value, b->value); });
}

no_status no_densmat_purification(const no_densmat* m, char** json) {
  if (auto st = require(m && json, "null argument")) return st;
  return wrap([&] {
    auto p = minimal_purification(m->value);
    nlohmann::ordered_json j;
    j["systemQubits"] = p.system_qubits;
    j["ancillaQubits"] = p.ancilla_qubits;
    j["systemDim"] = p.system_dim;
    j["ancillaDim"] = p.ancilla_dim;
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (const auto& amp : p.amplitudes) {
      re.push_back(amp.real());
      im.push_back(amp.imag());
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    *json = dup_string(j.dump());
  });
}

/* ---- protocols ------------------------------------------------------------ */

no_status no_synthesize(const no_spectrum* source, const no_spectrum* target,
                        int64_t ancilla_dim, no_protocol** out) {
  if (auto st = require(source && target && out, "null argument")) return st;
  return wrap([&] {
    *out = new no_protocol{
        synthesize(source->value, target->value, static_cast<long>(ancilla_dim))};
  });
}

no_status no_protocol_parse(const char* json, no_protocol** out) {
  if (auto st = require(json && out, "null argument")) return st;
  return wrap([&] { *out = new no_protocol{protocol_from_json(json)}; });
}

void no_protocol_free(no_protocol* p) { delete p; }

no_status no_protocol_json(const no_protocol* p, char** out) {
  if (auto st = require(p && out, "null argument")) return st;
  return wrap([&] { *out = dup_string(to_json(p->value)); });
}

double no_protocol_error_bound(const no_protocol* p) { return p ? p->value.error_bound : 0.0; }

no_status no_protocol_simulate(const no_protocol* p, const no_spectrum* input,
                               no_spectrum** out) {
  if (auto st = require(p && input && out, "null argument")) return st;
  return wrap([&] { *out = new no_spectrum{simulate(p->value, input->value)}; });
}

/* ---- asymptotic experiments ----------------------------------------------- */

no_status no_distill_report(const no_spectrum* s, int64_t n, double delta, double epsilon,
                            char** report, char** protocol_json) {
  if (auto st = require(s && report, "null argument")) return st;
  return wrap([&] {
    auto res = distill(s->value, static_cast<long>(n), delta, epsilon);
    auto j = nlohmann::ordered_json::parse(to_json(res.report));
    j["log2D"] = static_cast<std::int64_t>(res.log2_d);
    j["typicalWeight"] = res.typical_weight;
    *report = dup_string(j.dump());
    if (protocol_json) *protocol_json = dup_string(to_json(res.protocol));
  });
}

no_status no_form_report(const no_spectrum* s, int64_t n, double delta, double epsilon,
                         char** report) {
  if (auto st = require(s && report, "null argument")) return st;
  return wrap([&] {
    auto res = form(s->value, static_cast<long>(n), delta, epsilon);
    auto j = nlohmann::ordered_json::parse(to_json(res.report));
    j["pureQubits"] = res.pure_qubits;
    j["noiseQubits"] = res.noise_qubits;
    j["log2DPrime"] = static_cast<std::int64_t>(res.log2_d_prime);
    j["typicalWeight"] = res.typical_weight;
    *report = dup_string(j.dump());
  });
}

no_status no_mixed_to_mixed_rate(const no_spectrum* a, const no_spectrum* b, double* rate) {
  if (auto st = require(a && b && rate, "null argument")) return st;
  return wrap([&] { *rate = mixed_to_mixed_rate(a->value, b->value); });
}

no_status no_fannes_bound(int qubits, double trace_distance, double* bound) {
  if (auto st = require(bound != nullptr, "null argument")) return st;
  return wrap([&] { *bound = fannes_bound(qubits, trace_distance).bound; });
}

no_status no_optimality_audit(const no_spectrum* s, const int64_t* ns, size_t count,
                              double delta, char** report) {
  if (auto st = require(s && ns && count > 0 && report, "null argument")) return st;
  return wrap([&] {
    std::vector<long> grid(ns, ns + count);
    *report = dup_string(to_json(optimality_audit(s->value, grid, delta)));
  });
}

no_status no_rigidity(const no_spectrum* free_ancilla, char** report) {
  if (auto st = require(free_ancilla && report, "null argument")) return st;
  return wrap([&] { *report = dup_string(to_json(rigidity_experiment(free_ancilla->value))); });
}

no_status no_channel_audit(int64_t trials, uint64_t seed, char** report) {
  if (auto st = require(report && trials > 0, "trials must be positive")) return st;
  return wrap([&] {
    *report = dup_string(to_json(random_channel_audit(static_cast<long>(trials), seed)));
  });
}

/* ---- noiseless accounting --------------------------------------------------- */

no_status no_preparation_cost(const no_spectrum* s, double* qubits) {
  if (auto st = require(s && qubits, "null argument")) return st;
  return wrap([&] { *qubits = preparation_cost(s->value); });
}

no_status no_mixed_to_mixed_cost(const no_spectrum* a, const no_spectrum* b, double* qubits) {
  if (auto st = require(a && b && qubits, "null argument")) return st;
  return wrap([&] { *qubits = mixed_to_mixed_cost(a->value, b->value).additional_pure_qubits; });
}

no_status no_garbage_bound(double input_entropy, double output_entropy, double* qubits) {
  if (auto st = require(qubits != nullptr, "null argument")) return st;
  return wrap([&] { *qubits = garbage_bound(input_entropy, output_entropy); });
}

no_status no_binomial_report(double a2, int64_t n, char** report) {
  if (auto st = require(report != nullptr, "null argument")) return st;
  return wrap([&] {
    auto res = binomial_protocol(a2, static_cast<long>(n));
    *report = dup_string(to_json(res, a2, static_cast<long>(n)));
  });
}

no_status no_erasure_scaling(double a2, const int64_t* ns, size_t count, char** report) {
  if (auto st = require(ns && count > 0 && report, "null argument")) return st;
  return wrap([&] {
    std::vector<long> grid(ns, ns + count);
    auto rep = erasure_cost_scaling(a2, grid);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : rep.rows) {
      nlohmann::ordered_json rj;
      rj["n"] = row.n;
      rj["erasureBits"] = row.erasure_bits;
      rj["perCopy"] = row.per_copy;
      rj["log2Bound"] = row.log_bound;
      rows.push_back(std::move(rj));
    }
    nlohmann::ordered_json j;
    j["a2"] = a2;
    j["rows"] = std::move(rows);
    *report = dup_string(j.dump());
  });
}

}  // extern "C"
