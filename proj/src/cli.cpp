#include "unihead/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include "unihead/artifact.hpp"
#include "unihead/errors.hpp"
#include "unihead/parallel.hpp"
#include "unihead/prefix.hpp"
#include "unihead/rng.hpp"
#include "unihead/seq2seq.hpp"
#include "unihead/targets.hpp"
#include "unihead/verify.hpp"

namespace unihead {

namespace {

struct UsageError : Error {
  using Error::Error;
};

const char* kFooter =
    "CSV schemas:\n"
    "  approximate, sweep: name,m,lambda,N,sup_error,mean_error,samples,seed,wall_time_ms\n"
    "    (wall_time_ms is 0 when record_timing is false)\n"
    "  bounds:             m,eps,sigma,lambda,log10N,lambda_overflow,permissive\n"
    "  seq2seq-demo:       sample,position,stage,index,value\n"
    "    stages: input, psi, R, R_ternary, output, reference\n"
    "Config file keys: target, m, lambda, N, samples, seed, mode, augmented, M, csv,\n"
    "  prefix_out, params, record_timing. Flags override the file.\n"
    "Exit codes: 0 ok, 2 usage or config error, 3 numerical failure, 4 verification failure.\n"
    "Environment: UNIHEAD_THREADS sets the worker thread count.";

template <class T>
std::vector<T> scalar_or_list(const nlohmann::json& v, const char* key) {
  if (v.is_array()) return v.get<std::vector<T>>();
  if (v.is_number()) return {v.get<T>()};
  throw SchemaError(std::string("config: '") + key + "' must be a number or a list");
}

BoundMode parse_mode(const std::string& s) {
  if (s == "strict") return BoundMode::Strict;
  if (s == "permissive") return BoundMode::Permissive;
  throw UsageError("mode must be 'strict' or 'permissive'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (target.empty()) throw UsageError("config: target name is required");
  if (lambdas.empty() || Ns.empty()) throw UsageError("config: lambda and N lists must be nonempty");
  if (samples < 1) throw UsageError("config: samples must be >= 1");
  if (m < 1) throw UsageError("config: m must be >= 1");
  for (double l : lambdas)
    if (!(l > 0.0)) throw UsageError("config: lambda values must be > 0");
  for (int n : Ns)
    if (n < 1) throw UsageError("config: N values must be >= 1");
  if (M && !(*M < 0.0)) throw UsageError("config: M must be negative");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("config: top level must be an object");
  static const std::set<std::string> known{"target", "m", "lambda", "N", "samples", "seed", "mode",
                                           "augmented", "M", "csv", "prefix_out", "params",
                                           "record_timing"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw SchemaError("config: unknown key '" + it.key() + "'");
  ExperimentConfig c;
  try {
    if (j.contains("target")) c.target = j["target"].get<std::string>();
    if (j.contains("m")) c.m = j["m"].get<int>();
    if (j.contains("lambda")) c.lambdas = scalar_or_list<double>(j["lambda"], "lambda");
    if (j.contains("N")) c.Ns = scalar_or_list<int>(j["N"], "N");
    if (j.contains("samples")) c.samples = j["samples"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("augmented")) c.augmented = j["augmented"].get<bool>();
    if (j.contains("M")) c.M = j["M"].get<double>();
    if (j.contains("csv")) c.csv = j["csv"].get<std::string>();
    if (j.contains("prefix_out")) c.prefix_out = j["prefix_out"].get<std::string>();
    if (j.contains("params")) c.params = j["params"];
    if (j.contains("record_timing")) c.record_timing = j["record_timing"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  return c;
}

namespace {

struct CommonFlags {
  std::string config;
  std::string target;
  int m = 2;
  std::vector<double> lambdas;
  std::vector<int> Ns;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string mode;
  bool augmented = false;
  double M = 0.0;
  std::string csv, prefix_out, params;
  bool no_timing = false;
  std::map<std::string, CLI::Option*> opts;
};

void add_common(CLI::App* sub, CommonFlags& f, bool with_lists) {
  f.opts["config"] = sub->add_option("--config", f.config, "JSON config file");
  f.opts["target"] = sub->add_option("--target", f.target, "target function name");
  f.opts["m"] = sub->add_option("--m", f.m, "sphere dimension");
  f.opts["lambda"] = sub->add_option("--lambda", f.lambdas, with_lists ? "lambda values" : "lambda")->delimiter(',');
  f.opts["N"] = sub->add_option("--N", f.Ns, with_lists ? "prefix lengths" : "prefix length")->delimiter(',');
  f.opts["samples"] = sub->add_option("--samples", f.samples, "evaluation samples");
  f.opts["seed"] = sub->add_option("--seed", f.seed, "64-bit seed");
  f.opts["augmented"] = sub->add_flag("--augmented", f.augmented, "augmented universal head in artifacts");
  f.opts["M"] = sub->add_option("--M", f.M, "suppression constant (negative)");
  f.opts["csv"] = sub->add_option("--csv", f.csv, "CSV output path (stdout when absent)");
  f.opts["prefix_out"] = sub->add_option("--prefix-out", f.prefix_out, "prefix artifact output path");
  f.opts["params"] = sub->add_option("--params", f.params, "target parameters as a JSON object");
  f.opts["no_timing"] = sub->add_flag("--no-timing", f.no_timing, "write wall_time_ms as 0");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("config '" + path + "': " + e.what());
  }
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig c = f.opts.at("config")->count() ? config_from_json(read_json_file(f.config)) : ExperimentConfig{};
  auto set = [&f](const char* k) { return f.opts.at(k)->count() > 0; };
  if (set("target")) c.target = f.target;
  if (set("m")) c.m = f.m;
  if (set("lambda")) c.lambdas = f.lambdas;
  if (set("N")) c.Ns = f.Ns;
  if (set("samples")) c.samples = f.samples;
  if (set("seed")) c.seed = f.seed;
  if (set("augmented")) c.augmented = f.augmented;
  if (set("M")) c.M = f.M;
  if (set("csv")) c.csv = f.csv;
  if (set("prefix_out")) c.prefix_out = f.prefix_out;
  if (set("no_timing")) c.record_timing = !f.no_timing;
  if (set("params")) {
    try {
      c.params = nlohmann::json::parse(f.params);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("--params: ") + e.what());
    }
    if (!c.params.is_object()) throw UsageError("--params must be a JSON object");
  }
  c.validate();
  return c;
}

TargetFunction target_of(const ExperimentConfig& c) {
  try {
    return make_target(c.target, c.m, c.params);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("target params: ") + e.what());
  }
}

// Writes to the named file, or to out when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out, bool append) : os_(&out) {
    if (path.empty()) return;
    bool fresh = true;
    if (append) {
      std::ifstream probe(path, std::ios::ate);
      fresh = !probe || probe.tellg() == 0;
    }
    file_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    os_ = &file_;
    fresh_ = fresh;
  }
  std::ostream& os() { return *os_; }
  bool fresh() const { return fresh_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
  bool fresh_ = true;
};

double suppression(const ExperimentConfig& c, double lambda, int N) {
  return c.M ? *c.M : default_suppression(lambda, static_cast<std::size_t>(N));
}

int cmd_approximate(const ExperimentConfig& c, std::ostream& out) {
  const TargetFunction f = target_of(c);
  const double lambda = c.lambdas.front();
  const int N = c.Ns.front();
  ControlPoints cp;
  const ApproximationReport r = approximate_budget(f, N, lambda, c.samples, c.seed, &cp);
  Sink sink(c.csv, out, true);
  if (sink.fresh()) sink.os() << csv_header() << '\n';
  sink.os() << csv_row(r, c.record_timing) << '\n';
  if (!c.prefix_out.empty()) {
    PrefixArtifact a = make_artifact(cp, suppression(c, lambda, N), c.augmented);
    a.target = c.target;
    a.params = c.params;
    export_prefix(c.prefix_out, a);
  }
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& c, std::ostream& out) {
  const TargetFunction f = target_of(c);
  std::vector<double> lams = c.lambdas;
  std::vector<int> Ns = c.Ns;
  std::sort(lams.begin(), lams.end());
  lams.erase(std::unique(lams.begin(), lams.end()), lams.end());
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  Sink sink(c.csv, out, false);
  sink.os() << csv_header() << '\n';
  for (double lam : lams)
    for (int N : Ns) sink.os() << csv_row(approximate_budget(f, N, lam, c.samples, c.seed), c.record_timing) << '\n';
  return kExitOk;
}

nlohmann::json error_json(const ErrorStats& st) {
  return {{"sup_error", format_double(st.sup)}, {"mean_error", format_double(st.mean)}, {"samples", st.samples}};
}

int cmd_export(const ExperimentConfig& c, const std::string& path, std::ostream& out) {
  if (path.empty()) throw UsageError("export-prefix: --out is required");
  const TargetFunction f = target_of(c);
  const double lambda = c.lambdas.front();
  const int N = c.Ns.front();
  PrefixArtifact a = make_artifact(synthesize_prefix(f, N, lambda, derive_seed(c.seed, 1)),
                                   suppression(c, lambda, N), c.augmented);
  a.target = c.target;
  a.params = c.params;
  export_prefix(path, a);
  out << error_json(artifact_error(a, f, c.samples, derive_seed(c.seed, 2))).dump() << '\n';
  return kExitOk;
}

int cmd_import(const std::string& path, const std::string& target_override, int samples,
               std::uint64_t seed, std::ostream& out) {
  const PrefixArtifact a = import_prefix(path);
  nlohmann::json j{{"d", a.prefix.d}, {"m", a.prefix.m}, {"tokens", a.prefix.tokens.size()},
                   {"lambda", format_double(a.prefix.lambda)}, {"M", format_double(a.prefix.M)},
                   {"augmented", a.prefix.augmented}};
  const std::string name = target_override.empty() ? a.target : target_override;
  if (!name.empty()) {
    TargetFunction f;
    try {
      f = make_target(name, a.prefix.m, a.params);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    j["target"] = name;
    j.update(error_json(artifact_error(a, f, samples, derive_seed(seed, 2))));
  }
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_bounds(const std::vector<int>& ms, const std::vector<double>& epss, const SmoothnessSpec& spec,
               BoundMode mode, const std::string& csv, std::ostream& out) {
  Sink sink(csv, out, false);
  sink.os() << "m,eps,sigma,lambda,log10N,lambda_overflow,permissive\n";
  for (int m : ms)
    for (double eps : epss) {
      NormalizedParameters p;
      try {
        p = theorem2_parameters(eps, spec, m, mode);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      sink.os() << m << ',' << format_double(eps) << ',' << format_double(p.sigma) << ','
                << format_double(p.lambda) << ',' << format_double(p.log10N) << ','
                << (p.lambda_overflow ? 1 : 0) << ',' << (p.permissive ? 1 : 0) << '\n';
    }
  return kExitOk;
}

int cmd_verify(const std::string& suite, const std::string& fault, const std::string& json_path,
               std::ostream& out, std::ostream& err) {
  const auto suites = verify_suites();
  if (std::find(suites.begin(), suites.end(), suite) == suites.end())
    throw UsageError("unknown suite '" + suite + "'");
  VerifyHooks hooks;
  if (!fault.empty()) {
    try {
      hooks = inject_fault(fault);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  const VerifyReport rep = run_verify(suite, hooks);
  for (const auto& c : rep.checks)
    err << (c.passed ? "PASS " : "FAIL ") << c.suite << '/' << c.name << ": " << c.detail << '\n';
  const auto j = rep.to_json();
  if (json_path.empty()) {
    out << j.dump(1) << '\n';
  } else {
    std::ofstream f(json_path);
    if (!f) throw UsageError("cannot open '" + json_path + "' for writing");
    f << j.dump(1) << '\n';
  }
  return rep.all_passed() ? kExitOk : kExitVerify;
}

struct DemoFlags {
  int T = 2, m = 1, digits = 4, samples = 4, N = 4096;
  double lambda = 2e5;
  std::uint64_t seed = 1;
  std::string function = "mean", mode = "hybrid", csv;
  bool nonterminating = false;
};

int cmd_demo(const DemoFlags& d, std::ostream& out) {
  SequenceFn f;
  try {
    f = make_sequence_function(d.function);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (d.mode != "hybrid" && d.mode != "full") throw UsageError("--mode must be 'hybrid' or 'full'");
  if (d.samples < 1) throw UsageError("--samples must be >= 1");
  const DigitConfig cfg{d.digits, !d.nonterminating};
  Seq2SeqOptions opt;
  opt.N = d.N;
  opt.lambda = d.lambda;
  const Seq2SeqModel model = build_seq2seq_transformer(
      f, d.T, d.m, cfg, d.mode == "full" ? Seq2SeqMode::Full : Seq2SeqMode::Hybrid, opt);
  const Seq2SeqLayout& L = model.layout;
  auto eng = make_engine(d.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Sink sink(d.csv, out, false);
  auto& os = sink.os();
  os << "sample,position,stage,index,value\n";
  for (int n = 0; n < d.samples; ++n) {
    SequenceSample s;
    s.T = d.T;
    s.m = d.m;
    for (int i = 0; i < d.T; ++i) {
      Vec x(d.m + 1);
      for (int p = 0; p <= d.m; ++p) x[p] = U(eng);
      s.elements.push_back(x);
    }
    std::vector<std::vector<Vec>> trace;
    const auto final_tokens = transformer_eval_trace(model.stack, model.embed(s), &trace);
    const auto outv = model.readout(final_tokens);
    const auto ref = reference_seq2seq(f, s, cfg);
    const std::string ternary = aggregate_R(s, cfg).ternary();
    auto row = [&](int i, const char* stage, int k, const std::string& v) {
      os << n << ',' << i << ',' << stage << ',' << k << ',' << v << '\n';
    };
    for (int i = 0; i < d.T; ++i) {
      for (int p = 0; p < L.e; ++p) row(i, "input", p, format_double(s.elements[i][p]));
      for (int p = 0; p < L.e; ++p) row(i, "psi", p, format_double(trace[0][i][L.PSI + p]));
      row(i, "R", 0, format_double(trace[1][i][L.RS]));
      row(i, "R_ternary", 0, ternary);
      for (int p = 0; p < L.e; ++p) row(i, "output", p, format_double(outv[i][p]));
      for (int p = 0; p < L.e; ++p) row(i, "reference", p, format_double(ref[i][p]));
    }
  }
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const DomainError*>(&e) || dynamic_cast<const DimensionMismatch*>(&e))
    return kExitUsage;
  return kExitNumeric;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  kernels::configure_threads_from_env();
  CLI::App app{"Prefix-driven attention heads approximating maps on the sphere", "unihead"};
  app.footer(kFooter);
  app.require_subcommand(1);

  CommonFlags fa, fs, fe;
  auto* approx = app.add_subcommand("approximate", "synthesize one prefix and measure its error");
  add_common(approx, fa, false);
  auto* sweep = app.add_subcommand("sweep", "one row per (lambda, N), sorted by lambda then N");
  add_common(sweep, fs, true);

  auto* bounds = app.add_subcommand("bounds", "bound-driven sizes for the normalized head");
  std::vector<int> b_m{8};
  std::vector<double> b_eps{0.5, 0.1};
  SmoothnessSpec b_spec;
  std::string b_mode = "strict", b_csv;
  bounds->add_option("--m", b_m, "sphere dimensions")->delimiter(',');
  bounds->add_option("--eps", b_eps, "accuracies")->delimiter(',');
  bounds->add_option("--L", b_spec.L, "Lipschitz constant");
  bounds->add_option("--C-H", b_spec.C_H, "C_H");
  bounds->add_option("--C-R", b_spec.C_R, "C_R");
  bounds->add_option("--f-sup", b_spec.f_sup, "sup norm of f");
  bounds->add_option("--mode", b_mode, "strict or permissive");
  bounds->add_option("--csv", b_csv, "CSV output path");

  auto* verify = app.add_subcommand("verify", "run invariant suites; JSON summary on stdout");
  std::string v_suite = "all", v_fault, v_json;
  verify->add_option("--suite", v_suite, "kernel, bounds, attention, prefix, seq2seq or all");
  verify->add_option("--inject-fault", v_fault, "deliberately break an entry point (eigenvalue-sign)");
  verify->add_option("--json", v_json, "write the JSON summary here instead of stdout");

  auto* demo = app.add_subcommand("seq2seq-demo", "per-stage traces of the sequence-to-sequence stack");
  DemoFlags dflags;
  demo->add_option("--T", dflags.T, "sequence length");
  demo->add_option("--m", dflags.m, "element dimension minus one");
  demo->add_option("--digits", dflags.digits, "binary digits per coordinate");
  demo->add_option("--function", dflags.function, "identity, mean or reverse");
  demo->add_option("--mode", dflags.mode, "hybrid or full");
  demo->add_option("--N", dflags.N, "control points per head (full mode)");
  demo->add_option("--lambda", dflags.lambda, "concentration (full mode)");
  demo->add_option("--samples", dflags.samples, "random sequences");
  demo->add_option("--seed", dflags.seed, "64-bit seed");
  demo->add_option("--csv", dflags.csv, "CSV output path");
  demo->add_flag("--nonterminating", dflags.nonterminating, "non-terminating expansion at dyadic ties");

  auto* exp = app.add_subcommand("export-prefix", "write a prefix artifact and report its error");
  add_common(exp, fe, false);
  std::string e_out;
  exp->add_option("--out", e_out, "artifact path")->required();

  auto* imp = app.add_subcommand("import-prefix", "read a prefix artifact and re-measure its error");
  std::string i_in, i_target;
  int i_samples = 2048;
  std::uint64_t i_seed = 1;
  imp->add_option("--in", i_in, "artifact path")->required();
  imp->add_option("--target", i_target, "target to measure against (default: the recorded one)");
  imp->add_option("--samples", i_samples, "evaluation samples");
  imp->add_option("--seed", i_seed, "64-bit seed");

  std::vector<const char*> argv{"unihead"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (approx->parsed()) return cmd_approximate(resolve(fa), out);
    if (sweep->parsed()) return cmd_sweep(resolve(fs), out);
    if (exp->parsed()) return cmd_export(resolve(fe), e_out, out);
    if (imp->parsed()) {
      if (i_samples < 1) throw UsageError("--samples must be >= 1");
      return cmd_import(i_in, i_target, i_samples, i_seed, out);
    }
    if (bounds->parsed()) return cmd_bounds(b_m, b_eps, b_spec, parse_mode(b_mode), b_csv, out);
    if (verify->parsed()) return cmd_verify(v_suite, v_fault, v_json, out, err);
    if (demo->parsed()) return cmd_demo(dflags, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace unihead
