/*
   Copyright 2026 The levyfn Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <boost/version.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mpfr.h>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "levyfn/cli.hpp"
#include "levyfn/error.hpp"
#include "levyfn/integral_tests.hpp"
#include "levyfn/model_io.hpp"
#include "levyfn/montecarlo.hpp"
#include "levyfn/scale_fn.hpp"
#include "levyfn/verification.hpp"

namespace levyfn {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string model;
  std::string out;
  bool force = false;
};

struct Loaded {
  LevyModel model;
  Json source;
};

/// --model accepts inline JSON, a path, or the name of a shipped model.
Loaded resolve_model(const std::string& spec) {
  if (spec.empty()) throw Error(ErrorCode::InvalidConfig, "--model is required");
  Json j;
  if (spec.front() == '{') {
    try {
      j = Json::parse(spec);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::InvalidConfig, std::string("inline model: ") + e.what());
    }
  } else {
    fs::path p(spec);
    if (!fs::exists(p) && fs::exists(fs::path(LEVYFN_MODEL_DIR) / p)) p = fs::path(LEVYFN_MODEL_DIR) / p;
    if (!fs::exists(p) && fs::exists(fs::path(LEVYFN_MODEL_DIR) / (spec + ".json"))) {
      p = fs::path(LEVYFN_MODEL_DIR) / (spec + ".json");
    }
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open model file " + spec);
    try {
      in >> j;
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::InvalidConfig, "model file " + spec + ": " + e.what());
    }
  }
  return {model_from_json(j), j};
}

Json manifest(const std::string& command, const LevyModel* model, std::optional<std::uint64_t> seed,
              const Json& flags) {
  Json m;
  m["tool"] = "levyfn";
  m["version"] = LEVYFN_VERSION;
  m["command"] = command;
  if (model) {
    m["model"] = triplet_to_json(model->triplet());
    m["model_hash"] = model_hash(model->triplet());
  }
  m["seed"] = seed ? Json(*seed) : Json(nullptr);
  m["flags"] = flags;
  m["versions"] = {{"boost", BOOST_LIB_VERSION}, {"mpfr", mpfr_get_version()}, {"nlohmann_json", "3.11.3"},
                   {"cli11", CLI11_VERSION}, {"compiler", __VERSION__}};
  return m;
}

/// Output sink: a directory of named files, or stdout when no directory is given.
class Sink {
 public:
  Sink(const Common& c, std::ostream& out) : dir_(c.out), force_(c.force), out_(out) {}

  /// Refuses to clobber any of the named files unless forced.
  void reserve(const std::vector<std::string>& names) const {
    if (dir_.empty()) return;
    fs::create_directories(dir_);
    for (const auto& n : names) {
      if (fs::exists(fs::path(dir_) / n) && !force_) {
        throw Error(ErrorCode::InvalidConfig, (fs::path(dir_) / n).string() + " exists; pass --force to overwrite");
      }
    }
  }

  void write(const std::string& name, const std::string& content) const {
    if (dir_.empty()) {
      out_ << content;
      return;
    }
    std::ofstream f(fs::path(dir_) / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidConfig, "cannot write " + (fs::path(dir_) / name).string());
    f << content;
  }

  bool to_stdout() const { return dir_.empty(); }

 private:
  std::string dir_;
  bool force_;
  std::ostream& out_;
};

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// --- classify ---------------------------------------------------------------

struct ClassifyArgs {
  double theta = 1.0;
  double weight = 1.0;
  double x = 1.0;
  double lambda = 1.0;
};

int cmd_classify(const Common& c, const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  const Loaded m = resolve_model(c.model);
  if (!(a.theta > 0.0)) throw Error(ErrorCode::InvalidConfig, "--theta must be > 0");
  if (!(a.x > 0.0)) throw Error(ErrorCode::InvalidConfig, "--x must be > 0");
  if (!(a.lambda > 0.0)) throw Error(ErrorCode::InvalidConfig, "--lambda must be > 0");
  const Sink sink(c, out);
  sink.reserve({"report.json", "manifest.json"});

  const PowerLaw f{a.theta, a.weight};
  const BoundaryReport report = classify_boundary(m.model, f, a.x);
  Json j = to_json(report);
  j["functional"] = describe(f);
  Json diag;
  try {
    const ScaleEvaluator ev(m.model);
    const ExpectationResult ce = conditional_exp_functional(ev, f, a.x, a.lambda);
    diag["lambda"] = a.lambda;
    diag["value"] = extended(ce.value);
    diag["finite"] = ce.finite();
    diag["agrees_with_extinction_test"] =
        report.extinction.verdict == Verdict::Inconclusive
            ? Json("n/a")
            : Json(ce.finite() == (report.extinction.verdict == Verdict::Converges));
  } catch (const Error& e) {
    diag["error"] = e.what();
  }
  j["conditional_functional"] = diag;

  const Json flags = {{"theta", a.theta}, {"weight", a.weight}, {"x", a.x}, {"lambda", a.lambda}};
  const Json man = manifest("classify", &m.model, std::nullopt, flags);
  if (sink.to_stdout()) j["manifest"] = man;
  sink.write("report.json", j.dump(2) + "\n");
  if (!sink.to_stdout()) sink.write("manifest.json", man.dump(2) + "\n");
  if (!report.decisive()) {
    err << "classification is inconclusive\n";
    return kExitInconclusive;
  }
  return kExitOk;
}

// --- scale ------------------------------------------------------------------

struct ScaleArgs {
  double min = 0.1;
  double max = 10.0;
  int count = 50;
  bool linear = false;
  int order = InversionOptions{}.order;
};

int cmd_scale(const Common& c, const ScaleArgs& a, std::ostream& out, std::ostream&) {
  const Loaded m = resolve_model(c.model);
  if (a.count < 1) throw Error(ErrorCode::InvalidConfig, "--count must be >= 1");
  if (!(a.min >= 0.0) || !std::isfinite(a.min)) throw Error(ErrorCode::InvalidConfig, "--min must be >= 0");
  if (!a.linear && !(a.min > 0.0)) throw Error(ErrorCode::InvalidConfig, "log grid needs --min > 0");
  if (!(a.max >= a.min) || !std::isfinite(a.max)) throw Error(ErrorCode::InvalidConfig, "--max must be >= --min");
  if (a.count > 1 && a.max == a.min) throw Error(ErrorCode::InvalidConfig, "--max must exceed --min for several points");
  InversionOptions io;
  io.order = a.order;
  const ScaleEvaluator ev(m.model, io);
  const Sink sink(c, out);
  sink.reserve({"scale.csv", "manifest.json"});

  std::ostringstream csv;
  csv << "x,W,W_closed_form,rel_err\n";
  for (int i = 0; i < a.count; ++i) {
    const double t = a.count == 1 ? 0.0 : double(i) / (a.count - 1);
    const double x = a.linear ? a.min + t * (a.max - a.min) : a.min * std::pow(a.max / a.min, t);
    const double w = ev.w_inverted(x);
    csv << num(x) << ',' << num(w) << ',';
    if (const auto cf = ev.closed_form(x)) {
      const double rel = *cf == 0.0 ? std::abs(w) : std::abs(w - *cf) / std::abs(*cf);
      csv << num(*cf) << ',' << num(rel);
    } else {
      csv << ',';
    }
    csv << '\n';
  }
  const Json flags = {{"min", a.min}, {"max", a.max}, {"count", a.count}, {"grid", a.linear ? "linear" : "log"},
                      {"order", a.order}};
  sink.write("scale.csv", csv.str());
  if (!sink.to_stdout()) sink.write("manifest.json", manifest("scale", &m.model, std::nullopt, flags).dump(2) + "\n");
  return kExitOk;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::size_t paths = 1000;
  double dt = 1e-3;
  double barrier = std::numeric_limits<double>::infinity();
  double eps = 1e-3;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta;
  std::string estimator = "hitprob";
  std::string f = "const";
  double x = 1.0;
  double y = 0.0;
  double lambda = 1.0;
  double horizon = 100.0;
  unsigned threads = 1;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LEVYFN_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw Error(ErrorCode::InvalidConfig, "LEVYFN_SEED must be an unsigned integer");
    return v;
  }
  return 0;
}

int cmd_simulate(const Common& c, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const Loaded m = resolve_model(c.model);
  const std::uint64_t seed = resolve_seed(a.seed);

  FunctionalSpec f = constant_functional();
  std::string f_name = "const";
  if (a.theta || a.f == "power") {
    const double th = a.theta.value_or(1.0);
    if (!(th > 0.0)) throw Error(ErrorCode::InvalidConfig, "--theta must be > 0");
    f = PowerLaw{th};
    f_name = "power";
  } else if (a.f != "const") {
    throw Error(ErrorCode::InvalidConfig, "--f must be const or power");
  }

  Estimator est;
  if (a.estimator == "hitprob") {
    est = HitProb{};
  } else if (a.estimator == "meanpassage") {
    est = MeanPassage{a.y};
  } else if (a.estimator == "condexp") {
    est = CondExpFunctional{a.lambda};
  } else if (a.estimator == "finiteness") {
    est = FunctionalFiniteness{};
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown estimator " + a.estimator);
  }

  PathConfig cfg;
  cfg.dt = a.dt;
  cfg.barrier = a.barrier;
  cfg.eps = a.eps;
  cfg.horizon = a.horizon;
  cfg.seed = seed;
  const Sink sink(c, out);
  sink.reserve({"paths.csv", "summary.json", "manifest.json"});

  const MCSummary s = mc_estimate(m.model, a.x, f, est, a.paths, cfg, a.threads);

  Json summary = to_json(s);
  summary["estimator"] = std::string(estimator_name(est));
  summary["functional"] = describe(f);
  // Analytic oracles where one is cheap and well defined.
  const LevyModel& model = m.model;
  const double phi = model.phi_zero().value;
  Json oracle = nullptr;
  try {
    if (std::holds_alternative<HitProb>(est)) {
      oracle = model.hit_probability(a.x);
    } else if (std::holds_alternative<MeanPassage>(est)) {
      const double slope = model.laplace_exponent_derivative(0.0);
      if (f_name == "const") {
        oracle = extended(phi > 0.0 || !(slope > 0.0) ? std::numeric_limits<double>::infinity() : (a.x - a.y) / slope);
      } else if (a.y > 0.0) {
        oracle = extended(occupation_expectation(ScaleEvaluator(model), f, a.x, a.y).value);
      }
    } else if (std::holds_alternative<CondExpFunctional>(est)) {
      oracle = extended(conditional_exp_functional(ScaleEvaluator(model), f, a.x, a.lambda).value);
    }
  } catch (const Error& e) {
    summary["oracle_error"] = e.what();
  }
  summary["oracle"] = oracle;
  if (oracle.is_number() && std::isfinite(s.std_error)) {
    const double gap = std::abs(s.estimate - oracle.get<double>());
    summary["oracle_gap"] = gap;
    summary["oracle_gap_in_se"] = s.std_error > 0.0 ? extended(gap / s.std_error) : Json(nullptr);
  }

  std::ostringstream csv;
  csv << "path_id,status,zeta,A_final,T_boundary\n";
  for (const auto& r : s.records) {
    csv << r.path_id << ',' << to_string(r.status) << ',' << num(r.zeta) << ',' << num(r.a_final) << ','
        << num(r.t_boundary) << '\n';
  }
  const Json flags = {{"paths", a.paths},         {"dt", a.dt},           {"barrier", extended(a.barrier)},
                      {"eps", a.eps},             {"estimator", a.estimator}, {"f", f_name},
                      {"theta", a.theta ? Json(*a.theta) : Json(nullptr)}, {"x", a.x},
                      {"y", a.y},                 {"lambda", a.lambda},   {"horizon", a.horizon},
                      {"threads", a.threads}};
  const Json man = manifest("simulate", &model, seed, flags);
  if (sink.to_stdout()) {
    summary["manifest"] = man;
    out << csv.str();
    std::istringstream lines(summary.dump(2));
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  } else {
    sink.write("paths.csv", csv.str());
    sink.write("summary.json", summary.dump(2) + "\n");
    sink.write("manifest.json", man.dump(2) + "\n");
  }
  err << "simulated " << s.n_paths << " paths in " << s.wall_clock_seconds << " s\n";
  return kExitOk;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  double tol = 1.0;
  unsigned threads = 1;
};

int cmd_verify(const Common& c, const VerifyArgs& a, std::ostream& out, std::ostream&) {
  VerifyOptions opts;
  if (a.suite == "all") {
    opts.suite = Suite::All;
  } else if (a.suite == "analytic") {
    opts.suite = Suite::Analytic;
  } else if (a.suite == "mc") {
    opts.suite = Suite::MonteCarlo;
  } else {
    throw Error(ErrorCode::InvalidConfig, "--suite must be all, analytic or mc");
  }
  if (!(a.tol >= 0.0)) throw Error(ErrorCode::InvalidConfig, "--tol must be >= 0");
  opts.tol_multiplier = a.tol;
  opts.workers = a.threads;
  const Sink sink(c, out);
  sink.reserve({"verify.txt", "manifest.json"});
  std::ostringstream table;
  opts.on_result = [&](const CriterionResult& r) {
    const std::string line = format_result(r) + "\n";
    table << line;
    out << line << std::flush;
  };
  const auto results = run_acceptance(opts);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  const std::string tail = std::to_string(results.size()) + " criteria, " + std::to_string(failed) + " failed\n";
  out << tail;
  if (!sink.to_stdout()) {
    sink.write("verify.txt", table.str() + tail);
    const Json flags = {{"suite", a.suite}, {"tol", a.tol}, {"threads", a.threads}};
    sink.write("manifest.json", manifest("verify", nullptr, std::nullopt, flags).dump(2) + "\n");
  }
  return failed == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"levyfn: scale functions, finiteness tests and path simulation for Levy models without negative jumps"};
  app.set_version_flag("--version", std::string(LEVYFN_VERSION));
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool with_model) {
    if (with_model) sub->add_option("--model", common.model, "model JSON file, shipped model name, or inline JSON")->required();
    sub->add_option("--out", common.out, "output directory (stdout when omitted)");
    sub->add_flag("--force", common.force, "overwrite existing output files");
  };

  ClassifyArgs ca;
  CLI::App* classify = app.add_subcommand("classify", "extinction / explosion classification for f(x) = w x^-theta");
  add_common(classify, true);
  classify->add_option("--theta", ca.theta, "power of f")->capture_default_str();
  classify->add_option("--weight", ca.weight, "weight w of f")->capture_default_str();
  classify->add_option("--x", ca.x, "starting point")->capture_default_str();
  classify->add_option("--lambda", ca.lambda, "lambda of the conditional functional diagnostic")->capture_default_str();

  ScaleArgs sa;
  CLI::App* scale = app.add_subcommand("scale", "table of the scale function W");
  scale->alias("scale-table");
  add_common(scale, true);
  scale->add_option("--min", sa.min)->capture_default_str();
  scale->add_option("--max", sa.max)->capture_default_str();
  scale->add_option("--count", sa.count)->capture_default_str();
  scale->add_flag("--linear,!--log", sa.linear, "linear grid instead of logarithmic");
  scale->add_option("--order", sa.order, "base Gaver-Stehfest order")->capture_default_str();

  SimulateArgs ma;
  std::uint64_t seed_value = 0;
  double theta_value = 1.0;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimates along time-changed paths");
  add_common(simulate, true);
  simulate->add_option("--paths", ma.paths)->capture_default_str();
  simulate->add_option("--dt", ma.dt)->capture_default_str();
  simulate->add_option("--barrier", ma.barrier, "survival barrier B (default: none)");
  simulate->add_option("--eps", ma.eps, "small-jump cutoff")->capture_default_str();
  CLI::Option* seed_opt = simulate->add_option("--seed", seed_value, "seed (falls back to LEVYFN_SEED, then 0)");
  CLI::Option* theta_opt = simulate->add_option("--theta", theta_value, "use f(x) = x^-theta");
  simulate->add_option("--estimator", ma.estimator)
      ->check(CLI::IsMember({"hitprob", "meanpassage", "condexp", "finiteness"}))
      ->capture_default_str();
  simulate->add_option("--f", ma.f)->check(CLI::IsMember({"const", "power"}))->capture_default_str();
  simulate->add_option("--x", ma.x, "starting point")->capture_default_str();
  simulate->add_option("--y", ma.y, "passage level for meanpassage")->capture_default_str();
  simulate->add_option("--lambda", ma.lambda)->capture_default_str();
  simulate->add_option("--horizon", ma.horizon, "censoring horizon")->capture_default_str();
  simulate->add_option("--threads", ma.threads, "worker threads (0 = all cores)")->capture_default_str();

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  add_common(verify, false);
  verify->add_option("--suite", va.suite)->check(CLI::IsMember({"all", "analytic", "mc"}))->capture_default_str();
  verify->add_option("--tol", va.tol, "tolerance multiplier")->capture_default_str();
  verify->add_option("--threads", va.threads)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*seed_opt) ma.seed = seed_value;
  if (*theta_opt) ma.theta = theta_value;

  try {
    if (classify->parsed()) return cmd_classify(common, ca, out, err);
    if (scale->parsed()) return cmd_scale(common, sa, out, err);
    if (simulate->parsed()) return cmd_simulate(common, ma, out, err);
    return cmd_verify(common, va, out, err);
  } catch (const Error& e) {
    err << "levyfn: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "levyfn: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace levyfn
