/* noisyops - majorization-based simulation of the noisy-operations resource
 * theory: single-copy transitions, protocol synthesis, asymptotic
 * distillation/formation rates, and noiseless-regime cost accounting.
 *
 * C API over an opaque-handle core. Every function that can fail returns a
 * no_status; NO_OK is zero. On failure, no_last_error() describes the
 * problem for the calling thread. Strings returned through char** are
 * heap-allocated and must be released with no_string_free().
 */

#ifndef NOISYOPS_H
#define NOISYOPS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef NOISYOPS_API
#if defined(_WIN32)
#define NOISYOPS_API __declspec(dllexport)
#else
#define NOISYOPS_API __attribute__((visibility("default")))
#endif
#endif

typedef struct no_spectrum no_spectrum;
typedef struct no_densmat no_densmat;
typedef struct no_protocol no_protocol;

typedef enum no_status {
  NO_OK = 0,
  NO_ERROR_INVALID_ARGUMENT = 1,
  NO_ERROR_PARSE = 2,
  NO_ERROR_DIMENSION_MISMATCH = 3,
  NO_ERROR_NOT_MAJORIZED = 4,
  NO_ERROR_ANCILLA_TOO_SMALL = 5,
  NO_ERROR_INSUFFICIENT_N = 6,
  NO_ERROR_NOT_HERMITIAN = 7,
  NO_ERROR_NOT_POSITIVE = 8,
  NO_ERROR_TARGET_NO_INFORMATION = 9,
  NO_ERROR_DECOMPOSITION_STALLED = 10,
  NO_ERROR_OVERFLOW = 11,
  NO_ERROR_INTERNAL = 12
} no_status;

NOISYOPS_API const char* no_version(void);
/* Message for the most recent failure on this thread. */
NOISYOPS_API const char* no_last_error(void);
NOISYOPS_API void no_string_free(char* s);

/* ---- spectra: exact eigenvalue multisets ------------------------------- */

/* {"entries": [[value, multiplicity], ...]}; multiplicities may be decimal
 * strings for big integers. */
NOISYOPS_API no_status no_spectrum_parse(const char* json, no_spectrum** out);
NOISYOPS_API no_status no_spectrum_from_values(const double* values, size_t count,
                                               no_spectrum** out);
NOISYOPS_API no_status no_spectrum_pure(int64_t dim, no_spectrum** out);
NOISYOPS_API no_status no_spectrum_maximally_mixed(int64_t dim, no_spectrum** out);
NOISYOPS_API void no_spectrum_free(no_spectrum* s);
NOISYOPS_API no_status no_spectrum_json(const no_spectrum* s, char** out);

NOISYOPS_API double no_spectrum_qubits(const no_spectrum* s);
NOISYOPS_API no_status no_spectrum_entropy(const no_spectrum* s, double* bits);
NOISYOPS_API no_status no_spectrum_info(const no_spectrum* s, double* bits);
NOISYOPS_API no_status no_spectrum_tensor_power(const no_spectrum* s, int64_t n,
                                                no_spectrum** out);

/* Partial sums of the k largest eigenvalues, k = 1..buffer_len (clamped to
 * the dimension); *written reports how many sums were produced. */
NOISYOPS_API no_status no_spectrum_ky_fan(const no_spectrum* s, double* buffer,
                                          size_t buffer_len, size_t* written);

/* verdict = 1 when q is more mixed than p. When 0, *violated_k (optional)
 * receives the first violated partial-sum index as a decimal string. */
NOISYOPS_API no_status no_more_mixed(const no_spectrum* q, const no_spectrum* p, int* verdict,
                                     char** violated_k);

/* l1 distance of the sorted eigenvalue vectors (commuting trace distance). */
NOISYOPS_API no_status no_trace_distance(const no_spectrum* a, const no_spectrum* b,
                                         double* out);

/* Tensor maximally mixed ancillas until both spectra share one dimension. */
NOISYOPS_API no_status no_pad_to_common_qubits(const no_spectrum* a, const no_spectrum* b,
                                               no_spectrum** out_a, no_spectrum** out_b);

/* ---- dense Hermitian layer --------------------------------------------- */

/* {"dim": d, "re": [[...]], "im": [[...]]} ("im" may be omitted). */
NOISYOPS_API no_status no_densmat_parse(const char* json, no_densmat** out);
NOISYOPS_API void no_densmat_free(no_densmat* m);
NOISYOPS_API no_status no_densmat_spectrum(const no_densmat* m, no_spectrum** out);
NOISYOPS_API no_status no_densmat_trace_distance(const no_densmat* a, const no_densmat* b,
                                                 double* out);
/* Minimal purification as JSON: system/ancilla qubit counts and the joint
 * amplitude vector. */
NOISYOPS_API no_status no_densmat_purification(const no_densmat* m, char** json);

/* ---- protocol synthesis and simulation --------------------------------- */

NOISYOPS_API no_status no_synthesize(const no_spectrum* source, const no_spectrum* target,
                                     int64_t ancilla_dim, no_protocol** out);
NOISYOPS_API no_status no_protocol_parse(const char* json, no_protocol** out);
NOISYOPS_API void no_protocol_free(no_protocol* p);
NOISYOPS_API no_status no_protocol_json(const no_protocol* p, char** out);
NOISYOPS_API double no_protocol_error_bound(const no_protocol* p);
NOISYOPS_API no_status no_protocol_simulate(const no_protocol* p, const no_spectrum* input,
                                            no_spectrum** out);

/* ---- asymptotic experiments (JSON reports) ------------------------------ */

/* Distillation of tensor_power(s, n) into pure qubits. The report carries
 * yieldPerCopy, traceError, epsilonMet and requiredN; protocol_json
 * (optional) receives the synthesized dilution protocol. */
NOISYOPS_API no_status no_distill_report(const no_spectrum* s, int64_t n, double delta,
                                         double epsilon, char** report, char** protocol_json);
NOISYOPS_API no_status no_form_report(const no_spectrum* s, int64_t n, double delta,
                                      double epsilon, char** report);
NOISYOPS_API no_status no_mixed_to_mixed_rate(const no_spectrum* a, const no_spectrum* b,
                                              double* rate);
NOISYOPS_API no_status no_fannes_bound(int qubits, double trace_distance, double* bound);
NOISYOPS_API no_status no_optimality_audit(const no_spectrum* s, const int64_t* ns, size_t count,
                                           double delta, char** report);
NOISYOPS_API no_status no_rigidity(const no_spectrum* free_ancilla, char** report);
/* Random composed noisy operations on random inputs: monotonicity audit. */
NOISYOPS_API no_status no_channel_audit(int64_t trials, uint64_t seed, char** report);

/* ---- noiseless-regime accounting ---------------------------------------- */

NOISYOPS_API no_status no_preparation_cost(const no_spectrum* s, double* qubits);
NOISYOPS_API no_status no_mixed_to_mixed_cost(const no_spectrum* a, const no_spectrum* b,
                                              double* qubits);
NOISYOPS_API no_status no_garbage_bound(double input_entropy, double output_entropy,
                                        double* qubits);
/* Binomial measurement protocol: outcome table plus the cost ledger. */
NOISYOPS_API no_status no_binomial_report(double a2, int64_t n, char** report);
NOISYOPS_API no_status no_erasure_scaling(double a2, const int64_t* ns, size_t count,
                                          char** report);

#ifdef __cplusplus
}
#endif

#endif /* NOISYOPS_H */
