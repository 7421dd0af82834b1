// Batch experiment runner for the noisyops library. Every subcommand loads
// spectra from JSON files, drives the C API, and emits JSON (machine) or CSV
// (plots). Reports embed the artifact version and a hash of the resolved
// configuration; a fixed --seed makes reruns byte-identical.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <noisyops.h>

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;
constexpr int kExitNotMajorized = 4;
constexpr int kExitInsufficientN = 5;

int exit_code_for(no_status st) {
  switch (st) {
    case NO_OK: return 0;
    case NO_ERROR_PARSE:
    case NO_ERROR_INVALID_ARGUMENT: return kExitParse;
    case NO_ERROR_DIMENSION_MISMATCH: return kExitDimension;
    case NO_ERROR_NOT_MAJORIZED: return kExitNotMajorized;
    case NO_ERROR_INSUFFICIENT_N: return kExitInsufficientN;
    default: return kExitError;
  }
}

[[noreturn]] void fail(no_status st, const std::string& context) {
  std::cerr << "error: " << context << ": " << no_last_error() << "\n";
  std::exit(exit_code_for(st));
}

struct Spectrum {
  no_spectrum* ptr = nullptr;
  ~Spectrum() { no_spectrum_free(ptr); }
};

struct CString {
  char* ptr = nullptr;
  ~CString() { no_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    std::exit(kExitParse);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void load_spectrum(const std::string& path, Spectrum& out) {
  auto text = read_file(path);
  if (auto st = no_spectrum_parse(text.c_str(), &out.ptr); st != NO_OK) fail(st, path);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// canonical key=value rendering of the resolved run configuration
std::string config_hash(const std::string& command,
                        const std::map<std::string, std::string>& kv) {
  std::string text = "command=" + command + "\n";
  for (const auto& [k, v] : kv) text += k + "=" + v + "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    std::exit(kExitError);
  }
  out << content;
}

ordered_json stamped(const std::string& command, const std::map<std::string, std::string>& kv) {
  ordered_json j;
  j["artifactVersion"] = no_version();
  j["configHash"] = config_hash(command, kv);
  return j;
}

std::string csv_stamp(const std::string& command, const std::map<std::string, std::string>& kv) {
  return "# artifactVersion=" + std::string(no_version()) +
         " configHash=" + config_hash(command, kv) + "\n";
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy-operations resource theory simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; flags override");

  std::string spectrum_path, target_path, protocol_path, out_path;
  long ancilla = 1000;
  std::vector<long> n_grid;
  double delta = 0.05, epsilon = 0.01, a2 = 0.75;
  long trials = 1000;
  std::uint64_t seed = 0;
  bool csv = false, channels = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output path (default: stdout)");
    cmd->add_option("--seed", seed, "seed for all sampling");
  };

  auto* majorize = app.add_subcommand("majorize", "is the target more mixed than the source?");
  majorize->add_option("-s,--spectrum", spectrum_path, "source spectrum JSON")->required();
  majorize->add_option("-t,--target", target_path, "target spectrum JSON")->required();
  add_common(majorize);

  auto* synth = app.add_subcommand("synthesize", "build the mixture-of-permutations protocol");
  synth->add_option("-s,--spectrum", spectrum_path, "source spectrum JSON")->required();
  synth->add_option("-t,--target", target_path, "target spectrum JSON")->required();
  synth->add_option("--ancilla", ancilla, "ancilla dimension")->required();
  add_common(synth);

  auto* sim = app.add_subcommand("simulate", "run a protocol on a spectrum");
  sim->add_option("--protocol", protocol_path, "protocol JSON")->required();
  sim->add_option("-s,--spectrum", spectrum_path, "input spectrum JSON")->required();
  add_common(sim);

  auto* rates = app.add_subcommand("rates", "distillation and formation rates over an n grid");
  rates->add_option("-s,--spectrum", spectrum_path, "spectrum JSON")->required();
  rates->add_option("--n", n_grid, "copy counts")->required();
  rates->add_option("--delta", delta, "typical-set band width");
  rates->add_option("--epsilon", epsilon, "typical-weight accuracy target");
  rates->add_flag("--csv", csv, "emit CSV on stdout instead of JSONL");
  add_common(rates);

  auto* noiseless = app.add_subcommand("noiseless", "binomial measurement protocol and costs");
  noiseless->add_option("--a2", a2, "squared amplitude of the |0> component");
  noiseless->add_option("-s,--spectrum", spectrum_path, "qubit spectrum JSON (alternative to --a2)");
  noiseless->add_option("--n", n_grid, "copy counts")->required();
  noiseless->add_flag("--csv", csv, "emit CSV on stdout instead of JSON");
  add_common(noiseless);

  auto* audit = app.add_subcommand("audit", "optimality round trips or channel monotone audits");
  audit->add_option("-s,--spectrum", spectrum_path, "spectrum JSON");
  audit->add_option("--n", n_grid, "copy counts (round-trip mode)");
  audit->add_option("--delta", delta, "typical-set band width");
  audit->add_flag("--channels", channels, "sample random channels instead of round trips");
  audit->add_option("--trials", trials, "channel samples (with --channels)");
  add_common(audit);

  auto* rigidity = app.add_subcommand("rigidity", "what if the free ancilla were this state?");
  rigidity->add_option("-s,--spectrum", spectrum_path, "free ancilla spectrum JSON")->required();
  add_common(rigidity);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParse;
  }

  if (majorize->parsed()) {
    Spectrum p, q;
    load_spectrum(spectrum_path, p);
    load_spectrum(target_path, q);
    int verdict = 0;
    CString violated;
    if (auto st = no_more_mixed(q.ptr, p.ptr, &verdict, &violated.ptr); st != NO_OK)
      fail(st, "majorize");
    std::map<std::string, std::string> kv{{"spectrum", spectrum_path}, {"target", target_path}};
    ordered_json j = stamped("majorize", kv);
    j["moreMixed"] = verdict == 1;
    if (verdict == 0) j["violatedAtK"] = violated.str();
    write_output(out_path, j.dump() + "\n");
    if (verdict == 1)
      std::cout << "true\n";
    else
      std::cout << "false, violated at k=" << violated.str() << "\n";
    return 0;
  }

  if (synth->parsed()) {
    Spectrum p, q;
    load_spectrum(spectrum_path, p);
    load_spectrum(target_path, q);
    no_protocol* proto = nullptr;
    if (auto st = no_synthesize(p.ptr, q.ptr, ancilla, &proto); st != NO_OK)
      fail(st, "synthesize");
    std::unique_ptr<no_protocol, decltype(&no_protocol_free)> guard(proto, no_protocol_free);
    Spectrum out;
    if (auto st = no_protocol_simulate(proto, p.ptr, &out.ptr); st != NO_OK)
      fail(st, "simulate");
    double measured = 0.0;
    if (auto st = no_trace_distance(out.ptr, q.ptr, &measured); st != NO_OK)
      fail(st, "trace distance");
    CString pj;
    if (auto st = no_protocol_json(proto, &pj.ptr); st != NO_OK) fail(st, "serialize");
    std::map<std::string, std::string> kv{{"spectrum", spectrum_path},
                                          {"target", target_path},
                                          {"ancilla", std::to_string(ancilla)}};
    ordered_json j = stamped("synthesize", kv);
    j["protocol"] = ordered_json::parse(pj.str());
    j["verification"] = {{"targetError", no_protocol_error_bound(proto)},
                         {"measuredError", measured}};
    write_output(out_path, j.dump() + "\n");
    return 0;
  }

  if (sim->parsed()) {
    Spectrum p;
    load_spectrum(spectrum_path, p);
    auto text = read_file(protocol_path);
    no_protocol* proto = nullptr;
    if (auto st = no_protocol_parse(text.c_str(), &proto); st != NO_OK) fail(st, protocol_path);
    std::unique_ptr<no_protocol, decltype(&no_protocol_free)> guard(proto, no_protocol_free);
    Spectrum out;
    if (auto st = no_protocol_simulate(proto, p.ptr, &out.ptr); st != NO_OK)
      fail(st, "simulate");
    CString sj;
    if (auto st = no_spectrum_json(out.ptr, &sj.ptr); st != NO_OK) fail(st, "serialize");
    std::map<std::string, std::string> kv{{"spectrum", spectrum_path},
                                          {"protocol", protocol_path}};
    ordered_json j = stamped("simulate", kv);
    j["output"] = ordered_json::parse(sj.str());
    write_output(out_path, j.dump() + "\n");
    return 0;
  }

  if (rates->parsed()) {
    Spectrum s;
    load_spectrum(spectrum_path, s);
    std::map<std::string, std::string> kv{{"spectrum", spectrum_path},
                                          {"delta", fmt_double(delta)},
                                          {"epsilon", fmt_double(epsilon)},
                                          {"seed", std::to_string(seed)}};
    {
      std::string grid;
      for (long n : n_grid) grid += std::to_string(n) + ";";
      kv["n"] = grid;
    }
    std::string jsonl = stamped("rates", kv).dump() + "\n";
    std::string csv_text = csv_stamp("rates", kv);
    csv_text += "direction,n,delta,epsilon,yieldPerCopy,traceError,infoBefore,infoAfter\n";
    bool all_met = true;
    long advisory = -1;
    for (long n : n_grid) {
      for (int dir = 0; dir < 2; ++dir) {
        CString rep;
        no_status st = dir == 0 ? no_distill_report(s.ptr, n, delta, epsilon, &rep.ptr, nullptr)
                                : no_form_report(s.ptr, n, delta, epsilon, &rep.ptr);
        if (st != NO_OK) fail(st, "rates");
        auto j = ordered_json::parse(rep.str());
        jsonl += rep.str() + "\n";
        csv_text += j["direction"].get<std::string>() + "," + std::to_string(n) + "," +
                    fmt_double(delta) + "," + fmt_double(epsilon) + "," +
                    fmt_double(j["yieldPerCopy"].get<double>()) + "," +
                    fmt_double(j["traceError"].get<double>()) + "," +
                    fmt_double(j["infoBefore"].get<double>()) + "," +
                    fmt_double(j["infoAfter"].get<double>()) + "\n";
        if (!j["epsilonMet"].get<bool>()) {
          all_met = false;
          advisory = std::max(advisory, j["requiredN"].get<long>());
        }
      }
    }
    if (out_path.empty()) {
      std::cout << (csv ? csv_text : jsonl);
    } else {
      write_output(out_path + ".jsonl", jsonl);
      write_output(out_path + ".csv", csv_text);
    }
    if (!all_met) {
      std::cerr << "insufficient n for epsilon=" << epsilon << "; advisory threshold n="
                << (advisory > 0 ? std::to_string(advisory) : std::string("beyond search limit"))
                << "\n";
      return kExitInsufficientN;
    }
    return 0;
  }

  if (noiseless->parsed()) {
    if (!spectrum_path.empty()) {
      Spectrum s;
      load_spectrum(spectrum_path, s);
      double qubits = no_spectrum_qubits(s.ptr);
      double entropy = 0.0;
      no_spectrum_entropy(s.ptr, &entropy);
      if (qubits != 1.0) {
        std::cerr << "error: --spectrum must describe a single qubit (use --a2 otherwise)\n";
        return kExitParse;
      }
      // a2 is the larger eigenvalue of the qubit source
      double kf[1];
      size_t written = 0;
      no_spectrum_ky_fan(s.ptr, kf, 1, &written);
      a2 = kf[0];
    }
    std::map<std::string, std::string> kv{{"a2", fmt_double(a2)}, {"seed", std::to_string(seed)}};
    {
      std::string grid;
      for (long n : n_grid) grid += std::to_string(n) + ";";
      kv["n"] = grid;
    }
    std::string json_text = stamped("noiseless", kv).dump() + "\n";
    std::string csv_text = csv_stamp("noiseless", kv);
    csv_text += "k,p_k,log2_dk,I_k\n";
    for (long n : n_grid) {
      CString rep;
      if (auto st = no_binomial_report(a2, n, &rep.ptr); st != NO_OK) fail(st, "noiseless");
      json_text += rep.str() + "\n";
      auto j = ordered_json::parse(rep.str());
      for (const auto& o : j["outcomes"])
        csv_text += std::to_string(o["k"].get<long>()) + "," +
                    fmt_double(o["p"].get<double>()) + "," +
                    fmt_double(o["log2_dk"].get<double>()) + "," +
                    fmt_double(o["I"].get<double>()) + "\n";
      csv_text += "# n=" + std::to_string(n) +
                  " netPureStates=" + fmt_double(j["netPureStates"].get<double>()) +
                  " perCopy=" + fmt_double(j["perCopy"].get<double>()) +
                  " erasureBits=" + fmt_double(j["erasureBits"].get<double>()) + "\n";
    }
    if (out_path.empty()) {
      std::cout << (csv ? csv_text : json_text);
    } else {
      write_output(out_path + ".jsonl", json_text);
      write_output(out_path + ".csv", csv_text);
    }
    return 0;
  }

  if (audit->parsed()) {
    if (channels) {
      std::map<std::string, std::string> kv{{"trials", std::to_string(trials)},
                                            {"seed", std::to_string(seed)}};
      CString rep;
      if (auto st = no_channel_audit(trials, seed, &rep.ptr); st != NO_OK) fail(st, "audit");
      ordered_json j = stamped("audit-channels", kv);
      j["audit"] = ordered_json::parse(rep.str());
      write_output(out_path, j.dump() + "\n");
      return j["audit"]["violations"].get<long>() == 0 ? 0 : kExitError;
    }
    if (spectrum_path.empty() || n_grid.empty()) {
      std::cerr << "error: audit needs --spectrum and --n (or --channels)\n";
      return kExitParse;
    }
    Spectrum s;
    load_spectrum(spectrum_path, s);
    std::vector<std::int64_t> grid(n_grid.begin(), n_grid.end());
    CString rep;
    if (auto st = no_optimality_audit(s.ptr, grid.data(), grid.size(), delta, &rep.ptr);
        st != NO_OK)
      fail(st, "audit");
    std::map<std::string, std::string> kv{{"spectrum", spectrum_path},
                                          {"delta", fmt_double(delta)},
                                          {"seed", std::to_string(seed)}};
    {
      std::string g;
      for (long n : n_grid) g += std::to_string(n) + ";";
      kv["n"] = g;
    }
    ordered_json j = stamped("audit", kv);
    j["audit"] = ordered_json::parse(rep.str());
    write_output(out_path, j.dump() + "\n");
    return 0;
  }

  if (rigidity->parsed()) {
    Spectrum s;
    load_spectrum(spectrum_path, s);
    CString rep;
    if (auto st = no_rigidity(s.ptr, &rep.ptr); st != NO_OK) fail(st, "rigidity");
    std::map<std::string, std::string> kv{{"spectrum", spectrum_path}};
    ordered_json j = stamped("rigidity", kv);
    j["report"] = ordered_json::parse(rep.str());
    write_output(out_path, j.dump() + "\n");
    return 0;
  }

  return kExitError;
}
