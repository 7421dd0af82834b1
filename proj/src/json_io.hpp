#pragma once

#include <string>

#include "asymptotic.hpp"
#include "density_matrix.hpp"
#include "mixing.hpp"
#include "noiseless.hpp"
#include "protocol.hpp"
#include "spectrum.hpp"

namespace noisy {

// Spectra serialize as {"entries": [[value, "multiplicity"], ...]} with
// decimal doubles and decimal big-integer strings.
std::string to_json(const Spectrum& s);
Spectrum spectrum_from_json(const std::string& text);

// Dense matrices load from {"dim": d, "re": [[...]], "im": [[...]]}.
std::string to_json(const DensityMatrix& m);
DensityMatrix densmat_from_json(const std::string& text);

// {"terms": [{"w": weight, "perm": [indices]}]}
std::string to_json(const PermutationMixture& m);
PermutationMixture mixture_from_json(const std::string& text);

// {"inputDim", "ancillaDim", "groups", "mixture"}; cyclic protocols carry
// {"kind": "cyclic", "span": ...} in place of the explicit term list.
std::string to_json(const NoisyProtocol& p);
NoisyProtocol protocol_from_json(const std::string& text);

std::string to_json(const RateReport& r);
std::string rate_report_csv_header();
std::string to_csv_row(const RateReport& r);

std::string to_json(const BinomialProtocolResult& r, double a2, long n);
std::string outcome_csv_header();
std::string to_csv_row(const BinomialOutcome& o);

std::string to_json(const AuditReport& r);
std::string to_json(const RigidityReport& r);
std::string to_json(const ChannelAudit& r);

}  // namespace noisy
