#include "json_io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "bigint.hpp"
#include "errors.hpp"

namespace noisy {

namespace {

using json = nlohmann::ordered_json;

std::string g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

json parse_or_raise(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(Errc::parse, "malformed JSON");
  return j;
}

json dim_value(const mpz_class& z) {
  if (z.fits_slong_p()) return json(z.get_si());
  return json(z.get_str());
}

mpz_class mpz_from_json(const json& j) {
  try {
    if (j.is_number_unsigned()) return mpz_class(static_cast<unsigned long>(j.get<std::uint64_t>()));
    if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return mpz_class(j.get<std::string>());
  } catch (const std::exception&) {
  }
  raise(Errc::parse, "expected an integer or a decimal integer string");
}

}  // namespace

std::string to_json(const Spectrum& s) {
  json entries = json::array();
  for (const auto& e : s.entries())
    entries.push_back(json::array({e.value(), e.multiplicity.get_str()}));
  json j;
  j["entries"] = std::move(entries);
  return j.dump();
}

Spectrum spectrum_from_json(const std::string& text) {
  json j = parse_or_raise(text);
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].empty())
    raise(Errc::parse, "spectrum JSON needs a nonempty \"entries\" array");
  std::vector<std::pair<double, mpz_class>> entries;
  for (const auto& item : j["entries"]) {
    if (!item.is_array() || item.size() != 2)
      raise(Errc::parse, "each spectrum entry is [value, multiplicity]");
    if (!item[0].is_number()) raise(Errc::parse, "spectrum value must be a number");
    entries.emplace_back(item[0].get<double>(), mpz_from_json(item[1]));
  }
  try {
    return Spectrum::from_entries(entries);
  } catch (const Error& e) {
    if (e.code() == Errc::invalid_argument) raise(Errc::parse, e.what());
    throw;
  }
}

std::string to_json(const DensityMatrix& m) {
  const int d = m.dim();
  json re = json::array(), im = json::array();
  for (int i = 0; i < d; ++i) {
    json rrow = json::array(), irow = json::array();
    for (int jcol = 0; jcol < d; ++jcol) {
      rrow.push_back(m.at(i, jcol).real());
      irow.push_back(m.at(i, jcol).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  json j;
  j["dim"] = d;
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump();
}

DensityMatrix densmat_from_json(const std::string& text) {
  json j = parse_or_raise(text);
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    raise(Errc::parse, "density matrix JSON needs an integer \"dim\"");
  int d = j["dim"].get<int>();
  if (d < 1 || d > DensityMatrix::kMaxDim) raise(Errc::parse, "dim out of range [1,64]");
  auto read_grid = [&](const char* key, bool required) {
    std::vector<std::vector<double>> grid;
    if (!j.contains(key)) {
      if (required) raise(Errc::parse, std::string("missing \"") + key + "\" grid");
      grid.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d), 0.0));
      return grid;
    }
    if (!j[key].is_array() || static_cast<int>(j[key].size()) != d)
      raise(Errc::parse, std::string("\"") + key + "\" must be a dim x dim grid");
    for (const auto& row : j[key]) {
      if (!row.is_array() || static_cast<int>(row.size()) != d)
        raise(Errc::parse, std::string("\"") + key + "\" must be a dim x dim grid");
      std::vector<double> r;
      for (const auto& x : row) {
        if (!x.is_number()) raise(Errc::parse, "matrix entries must be numbers");
        r.push_back(x.get<double>());
      }
      grid.push_back(std::move(r));
    }
    return grid;
  };
  auto re = read_grid("re", true);
  auto im = read_grid("im", false);
  std::vector<cplx> entries(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int c = 0; c < d; ++c)
      entries[static_cast<std::size_t>(i) * d + c] = cplx(re[i][c], im[i][c]);
  try {
    return DensityMatrix(d, std::move(entries));
  } catch (const Error& e) {
    if (e.code() == Errc::invalid_argument) raise(Errc::parse, e.what());
    throw;
  }
}

std::string to_json(const PermutationMixture& m) {
  json terms = json::array();
  for (const auto& t : m.terms) {
    json term;
    term["w"] = t.weight;
    term["perm"] = t.perm;
    terms.push_back(std::move(term));
  }
  json j;
  j["terms"] = std::move(terms);
  return j.dump();
}

PermutationMixture mixture_from_json(const std::string& text) {
  json j = parse_or_raise(text);
  if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
    raise(Errc::parse, "mixture JSON needs a nonempty \"terms\" array");
  PermutationMixture m;
  for (const auto& item : j["terms"]) {
    if (!item.contains("w") || !item["w"].is_number() || !item.contains("perm") ||
        !item["perm"].is_array())
      raise(Errc::parse, "each mixture term is {\"w\": weight, \"perm\": [...]}");
    PermutationMixture::Term t;
    t.weight = item["w"].get<double>();
    for (const auto& x : item["perm"]) {
      if (!x.is_number_integer()) raise(Errc::parse, "permutation entries must be integers");
      t.perm.push_back(x.get<int>());
    }
    m.terms.push_back(std::move(t));
  }
  const std::size_t d = m.terms[0].perm.size();
  double total = 0.0;
  for (const auto& t : m.terms) {
    if (t.perm.size() != d) raise(Errc::parse, "mixture permutations must share one length");
    if (t.weight < -1e-12) raise(Errc::parse, "mixture weights must be nonnegative");
    total += t.weight;
    std::vector<char> seen(d, 0);
    for (int x : t.perm) {
      if (x < 0 || static_cast<std::size_t>(x) >= d || seen[static_cast<std::size_t>(x)])
        raise(Errc::parse, "term is not a permutation");
      seen[static_cast<std::size_t>(x)] = 1;
    }
  }
  if (std::abs(total - 1.0) > 1e-9) raise(Errc::parse, "mixture weights must sum to 1");
  return m;
}

std::string to_json(const NoisyProtocol& p) {
  json j;
  j["inputDim"] = dim_value(p.input_dim);
  j["ancillaDim"] = dim_value(p.ancilla_dim);
  if (p.kind == NoisyProtocol::Kind::uniform_cyclic) {
    j["groups"] = "uniform";
    json mix;
    mix["kind"] = "cyclic";
    mix["span"] = dim_value(p.cycle_span);
    j["mixture"] = std::move(mix);
  } else {
    j["groups"] = p.group_sizes;
    json terms = json::array();
    for (const auto& t : p.mixture.terms) {
      json term;
      term["w"] = t.weight;
      term["perm"] = t.perm;
      terms.push_back(std::move(term));
    }
    json mix;
    mix["terms"] = std::move(terms);
    j["mixture"] = std::move(mix);
  }
  j["errorBound"] = p.error_bound;
  return j.dump();
}

NoisyProtocol protocol_from_json(const std::string& text) {
  json j = parse_or_raise(text);
  for (const char* key : {"inputDim", "ancillaDim", "mixture"})
    if (!j.contains(key)) raise(Errc::parse, std::string("protocol JSON needs \"") + key + "\"");
  NoisyProtocol p;
  p.input_dim = mpz_from_json(j["inputDim"]);
  p.ancilla_dim = mpz_from_json(j["ancillaDim"]);
  p.error_bound = j.value("errorBound", 0.0);
  const auto& mix = j["mixture"];
  if (mix.is_object() && mix.contains("kind") && mix["kind"] == "cyclic") {
    p.kind = NoisyProtocol::Kind::uniform_cyclic;
    p.cycle_span = mpz_from_json(mix.at("span"));
    if (p.cycle_span < 1 || p.cycle_span > p.input_dim)
      raise(Errc::parse, "cyclic span out of range");
    return p;
  }
  p.kind = NoisyProtocol::Kind::explicit_mixture;
  if (!mix.is_object() || !mix.contains("terms"))
    raise(Errc::parse, "explicit protocol mixture needs \"terms\"");
  p.mixture = mixture_from_json(mix.dump());
  if (!j.contains("groups") || !j["groups"].is_array())
    raise(Errc::parse, "explicit protocol needs a \"groups\" array");
  long total = 0;
  for (const auto& x : j["groups"]) {
    if (!x.is_number_integer() || x.get<long>() < 0)
      raise(Errc::parse, "group sizes must be nonnegative integers");
    p.group_sizes.push_back(x.get<long>());
    total += p.group_sizes.back();
  }
  if (p.group_sizes.size() != p.mixture.terms.size())
    raise(Errc::parse, "one group size per mixture term");
  if (mpz_class(total) != p.ancilla_dim) raise(Errc::parse, "group sizes must sum to ancillaDim");
  for (const auto& t : p.mixture.terms)
    if (mpz_class(static_cast<long>(t.perm.size())) != p.input_dim)
      raise(Errc::parse, "permutation length must equal inputDim");
  return p;
}

std::string to_json(const RateReport& r) {
  json j;
  j["direction"] = direction_name(r.direction);
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["epsilon"] = r.epsilon;
  j["yieldPerCopy"] = r.yield_per_copy;
  j["traceError"] = r.trace_error;
  j["infoBefore"] = r.info_before;
  j["infoAfter"] = r.info_after;
  j["entropyBefore"] = r.entropy_before;
  j["entropyAfter"] = r.entropy_after;
  j["epsilonMet"] = r.epsilon_met;
  j["requiredN"] = r.required_n;
  return j.dump();
}

std::string rate_report_csv_header() {
  return "direction,n,delta,epsilon,yieldPerCopy,traceError,infoBefore,infoAfter";
}

std::string to_csv_row(const RateReport& r) {
  std::string row = direction_name(r.direction);
  row += ',' + std::to_string(r.n) + ',' + g(r.delta) + ',' + g(r.epsilon) + ',' +
         g(r.yield_per_copy) + ',' + g(r.trace_error) + ',' + g(r.info_before) + ',' +
         g(r.info_after);
  return row;
}

std::string to_json(const BinomialProtocolResult& r, double a2, long n) {
  json outs = json::array();
  for (const auto& o : r.outcomes) {
    json oj;
    oj["k"] = o.k;
    oj["p"] = o.probability;
    oj["log2_dk"] = o.log2_block_dim;
    oj["I"] = o.pure_yield;
    if (o.block_dim != 0) oj["dk"] = o.block_dim.get_str();
    outs.push_back(std::move(oj));
  }
  json j;
  j["a2"] = a2;
  j["n"] = n;
  j["outcomes"] = std::move(outs);
  j["expectedYield"] = r.expected_yield;
  j["erasureBits"] = r.erasure_bits;
  j["netPureStates"] = r.net_pure_states;
  j["perCopy"] = r.per_copy;
  json ledger;
  ledger["pureQubitsIn"] = r.ledger.pure_qubits_in;
  ledger["pureQubitsOut"] = r.ledger.pure_qubits_out;
  ledger["noiseProducedQubits"] = r.ledger.noise_produced_qubits;
  ledger["erasureBits"] = r.ledger.erasure_bits;
  ledger["perCopyIn"] = r.ledger.per_copy_in;
  ledger["perCopyOut"] = r.ledger.per_copy_out;
  j["ledger"] = std::move(ledger);
  return j.dump();
}

std::string outcome_csv_header() { return "k,p_k,log2_dk,I_k"; }

std::string to_csv_row(const BinomialOutcome& o) {
  return std::to_string(o.k) + ',' + g(o.probability) + ',' + g(o.log2_block_dim) + ',' +
         g(o.pure_yield);
}

std::string to_json(const AuditReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json rj;
    rj["n"] = row.n;
    rj["yield"] = row.yield;
    rj["cost"] = row.cost;
    rj["ratio"] = row.ratio;
    rows.push_back(std::move(rj));
  }
  json j;
  j["delta"] = r.delta;
  j["rows"] = std::move(rows);
  return j.dump();
}

std::string to_json(const RigidityReport& r) {
  json j;
  j["trivial"] = r.trivial;
  j["yieldPerCopy"] = r.yield_per_copy;
  j["verdict"] = r.verdict;
  return j.dump();
}

std::string to_json(const ChannelAudit& r) {
  json j;
  j["samples"] = r.samples;
  j["violations"] = r.violations;
  j["maxInfoGain"] = r.max_info_gain;
  return j.dump();
}

}  // namespace noisy
