#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "msfpop/csv.hpp"
#include "msfpop/penalty.hpp"
#include "msfpop/simulate.hpp"
#include "msfpop/solver.hpp"
#include "msfpop/study.hpp"

using json = nlohmann::ordered_json;
using namespace msfpop;

namespace {

constexpr int kExitData = 2;    // unreadable or malformed input
constexpr int kExitUsage = 64;  // bad flags or config semantics

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return json::parse(in);
}

const json& require_key(const json& cfg, const char* key) {
  if (!cfg.contains(key))
    throw UsageError(std::string("config: missing key '") + key + "'");
  return cfg.at(key);
}

int positive_int(const json& v, const char* what, int min_value) {
  if (!v.is_number_integer() || v.get<long long>() < min_value)
    throw UsageError(std::string("config: ") + what + " must be an integer >= " +
                     std::to_string(min_value));
  return v.get<int>();
}

// Array of integers, or {"lo","hi","count"} for a log-spaced grid.
std::vector<int> int_grid(const json& j, const char* what, int min_value) {
  if (j.is_array()) {
    if (j.empty()) throw UsageError(std::string("config: ") + what + " must not be empty");
    std::vector<int> out;
    for (const json& v : j) out.push_back(positive_int(v, what, min_value));
    return out;
  }
  if (j.is_object())
    return log_spaced_integers(positive_int(require_key(j, "lo"), what, 1),
                               positive_int(require_key(j, "hi"), what, 1),
                               positive_int(require_key(j, "count"), what, 1));
  throw UsageError(std::string("config: ") + what +
                   " must be an array or an object {lo,hi,count}");
}

// Array of reals, or {"lo","hi","count"} for a linearly spaced grid.
std::vector<double> real_grid(const json& j, const char* what) {
  if (j.is_array()) {
    if (j.empty()) throw UsageError(std::string("config: ") + what + " must not be empty");
    std::vector<double> out;
    for (const json& v : j) {
      if (!v.is_number())
        throw UsageError(std::string("config: ") + what + " entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  if (j.is_object()) {
    double lo = require_key(j, "lo").get<double>();
    double hi = require_key(j, "hi").get<double>();
    int count = positive_int(require_key(j, "count"), what, 1);
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return out;
  }
  throw UsageError(std::string("config: ") + what +
                   " must be an array or an object {lo,hi,count}");
}

int parse_int_tail(const std::string& s, std::size_t from) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s.substr(from), &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != s.size() - from) throw UsageError("malformed number in '" + s + "'");
  return v;
}

SamplerSpec parse_sampling(const std::string& s, std::uint64_t seed) {
  if (s == "all") return SamplerSpec::all();
  if (s.rfind("rand:", 0) == 0) {
    int k = parse_int_tail(s, 5);
    if (k < 1) throw UsageError("--sampling rand:<k> needs k >= 1");
    return SamplerSpec::rand_k(k, seed);
  }
  throw UsageError("--sampling must be 'all' or 'rand:<k>'");
}

int resolve_threads(bool flag_given, int flag_value) {
  if (flag_given) {
    if (flag_value < 1) throw UsageError("--threads must be >= 1");
    return flag_value;
  }
  if (const char* env = std::getenv("MSFPOP_THREADS")) {
    try {
      std::string str(env);
      std::size_t used = 0;
      int v = std::stoi(str, &used);
      if (used == str.size() && v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("MSFPOP_THREADS must be an integer >= 1");
  }
  return 1;
}

double resolve_sigma2(const json& cfg) {
  double sigma2 = cfg.value("sigma2", 1.0);
  if (!(sigma2 >= 0.0)) throw UsageError("config: sigma2 must be >= 0");
  return sigma2;
}

std::vector<MethodSpec> parse_methods(const json& cfg) {
  const json& arr = require_key(cfg, "methods");
  if (!arr.is_array() || arr.empty())
    throw UsageError("config: methods must be a non-empty array of names");
  double beta = cfg.value("beta", 2.25);
  double gamma = cfg.value("gamma", 9.0);
  std::vector<MethodSpec> out;
  for (const json& v : arr) {
    if (!v.is_string()) throw UsageError("config: methods entries must be strings");
    MethodSpec m = parse_method(v.get<std::string>(), beta, gamma);
    if (cfg.contains("bic_alpha") && m.penalty == PenaltyKind::bic)
      m.bic_alpha = cfg.at("bic_alpha").get<double>();
    out.push_back(std::move(m));
  }
  return out;
}

struct SegmentArgs {
  std::string input;
  std::string output;
  std::string penalty = "multiscale";
  double beta = 2.25;
  double gamma = 9.0;
  double alpha = 0.0;
  std::string solver = "msfpop";
  std::string sampling = "rand:1";
  std::string pruning = "adaptive";
  std::uint64_t seed = 0;
  std::string variance = "fixed:1";
  CLI::Option* beta_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* sampling_opt = nullptr;
  CLI::Option* pruning_opt = nullptr;
};

int run_segment(const SegmentArgs& a) {
  // Flag validation first: a usage error beats an I/O error.
  if (a.penalty == "multiscale") {
    if (a.alpha_opt->count() > 0)
      throw UsageError("--alpha applies to --penalty bic only");
    if (!(a.beta > 0.0) || !(a.gamma > 0.0))
      throw UsageError("multiscale penalty needs --beta > 0 and --gamma > 0");
  } else if (a.beta_opt->count() > 0 || a.gamma_opt->count() > 0) {
    throw UsageError("--beta/--gamma apply to --penalty multiscale only");
  }
  if (a.solver == "msfpop" && a.pruning_opt->count() > 0)
    throw UsageError("--pruning applies to --solver mspelt only");
  if (a.solver == "mspelt" && a.sampling_opt->count() > 0)
    throw UsageError("--sampling applies to --solver msfpop only");
  if (a.solver == "op" && (a.sampling_opt->count() > 0 || a.pruning_opt->count() > 0))
    throw UsageError("op takes neither --sampling nor --pruning");
  SamplerSpec sampler = parse_sampling(a.solver == "msfpop" ? a.sampling : "all", a.seed);

  bool use_mad = a.variance == "mad";
  double fixed_variance = 1.0;
  if (!use_mad) {
    if (a.variance.rfind("fixed:", 0) != 0)
      throw UsageError("--variance must be 'fixed:<v>' or 'mad'");
    try {
      std::size_t used = 0;
      fixed_variance = std::stod(a.variance.substr(6), &used);
      if (used != a.variance.size() - 6) fixed_variance = -1.0;
    } catch (const std::exception&) {
      fixed_variance = -1.0;
    }
    if (!(fixed_variance > 0.0)) throw UsageError("--variance fixed:<v> needs v > 0");
  }

  Series series = read_series_csv(a.input);
  const int n = series.n();

  PenaltyModel model;
  if (a.penalty == "multiscale")
    model = PenaltyModel::multiscale(n, a.beta, a.gamma);
  else
    model = a.alpha_opt->count() > 0 ? PenaltyModel::bic(n, a.alpha) : PenaltyModel::bic(n);

  double sigma = 1.0;
  double sigma_hat = 1.0;
  if (use_mad) {
    SigmaEstimate est = estimate_sigma_mad(series);
    if (est.degenerate) {
      std::cerr << "warning: variance estimate is degenerate (zero spread of the "
                   "lag-1 differences); solving the unscaled series\n";
      sigma_hat = 0.0;
    } else {
      sigma = est.sigma;
      sigma_hat = est.sigma;
    }
  } else {
    sigma = std::sqrt(fixed_variance);
    sigma_hat = sigma;
  }

  Series scaled = series;
  if (sigma != 1.0)
    for (double& y : scaled.values) y /= sigma;

  std::string solver_label;
  Segmentation result;
  auto t0 = std::chrono::steady_clock::now();
  if (a.solver == "msfpop") {
    result = msfpop_segment(scaled, model, sampler);
    solver_label = sampler.mode == SamplerMode::all
                       ? "msfpop(all)"
                       : "msfpop(rand:" + std::to_string(sampler.k) + ")";
  } else if (a.solver == "mspelt") {
    PruningBound bound = PruningBound::adaptive();
    if (a.pruning == "constant")
      bound = PruningBound::constant(model);
    else if (a.pruning == "none")
      bound = PruningBound::none();
    result = pelt_segment(scaled, model, bound);
    solver_label = "mspelt(" + a.pruning + ")";
  } else {
    result = pelt_segment(scaled, model, PruningBound::none());
    solver_label = "op";
  }
  auto t1 = std::chrono::steady_clock::now();

  std::vector<double> means = result.means;
  for (double& m : means) m *= sigma;

  json doc;
  doc["changepoints"] = result.changepoints;
  doc["means"] = means;
  doc["objective"] = result.objective;
  doc["solver"] = solver_label;
  doc["penalty"] = {{"kind", a.penalty},
                    {"alpha", model.alpha},
                    {"beta", model.beta},
                    {"gamma", model.gamma},
                    {"n", model.n}};
  doc["runtime_s"] = std::chrono::duration<double>(t1 - t0).count();
  doc["sigma_hat"] = sigma_hat;
  write_text(a.output, doc.dump(2) + "\n");
  return 0;
}

struct StudyArgs {
  std::string config;
  std::string output;
  std::uint64_t seed = 0;
  int threads = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  std::uint64_t resolve_seed(const json& cfg) const {
    if (seed_opt->count() > 0) return seed;
    return cfg.value("seed", std::uint64_t{0});
  }
};

int run_calibrate(const StudyArgs& a) {
  json cfg = load_config(a.config);
  std::vector<double> gammas = real_grid(require_key(cfg, "gamma_grid"), "gamma_grid");
  std::vector<double> betas =
      cfg.contains("beta_grid") ? real_grid(cfg.at("beta_grid"), "beta_grid")
                                : std::vector<double>{2.25};
  std::vector<int> ns = int_grid(require_key(cfg, "n_grid"), "n_grid", 1);
  int reps = positive_int(require_key(cfg, "replicates"), "replicates", 1);
  std::string method_name = cfg.value("method", "msfpop");
  double sigma2 = resolve_sigma2(cfg);
  std::uint64_t seed = a.resolve_seed(cfg);
  int threads = resolve_threads(a.threads_opt->count() > 0, a.threads);

  std::ostringstream csv;
  csv << "gamma,beta,n,replicates,r_gt0\n";
  std::uint64_t group = 0;
  for (int n : ns) {
    for (double beta : betas) {
      // One seed stream per (n, beta): the gamma grid reuses the same
      // replicates, so detection rates are comparable down the column.
      ++group;
      for (double gamma : gammas) {
        MethodSpec method = parse_method(method_name, beta, gamma);
        ScenarioSpec scenario = ScenarioSpec::null_signal_spec(n, 0);
        scenario.sigma2 = sigma2;
        MetricsReport report = run_study(scenario, {method}, reps, seed, group, threads);
        csv << format_double(gamma) << ',' << format_double(beta) << ',' << n << ','
            << reps << ',' << format_double(report.methods[0].r_gt0) << '\n';
      }
    }
  }
  write_text(a.output, csv.str());
  return 0;
}

ScenarioSpec bench_scenario(int n, int d, double sigma2) {
  ScenarioSpec scenario =
      d == 0 ? ScenarioSpec::null_signal_spec(n, 0) : ScenarioSpec::alternating_spec(n, d, 0);
  scenario.sigma2 = sigma2;
  return scenario;
}

int run_bench(const StudyArgs& a) {
  json cfg = load_config(a.config);
  std::vector<MethodSpec> methods = parse_methods(cfg);
  std::vector<int> ns = int_grid(require_key(cfg, "n_grid"), "n_grid", 1);
  std::vector<int> ds = cfg.contains("d_grid")
                            ? int_grid(cfg.at("d_grid"), "d_grid", 0)
                            : std::vector<int>{0};
  int reps = cfg.contains("replicates")
                 ? positive_int(cfg.at("replicates"), "replicates", 1)
                 : 1;
  double sigma2 = resolve_sigma2(cfg);
  std::uint64_t seed = a.resolve_seed(cfg);
  int threads = resolve_threads(a.threads_opt->count() > 0, a.threads);

  std::ostringstream csv;
  csv << "method,n,d,replicate,runtime_s\n";
  std::uint64_t point = 0;
  for (int n : ns) {
    for (int d : ds) {
      MetricsReport report =
          run_study(bench_scenario(n, d, sigma2), methods, reps, seed, point++, threads);
      for (const MethodResult& mr : report.methods)
        for (int r = 0; r < reps; ++r)
          csv << mr.method.name << ',' << n << ',' << d << ',' << r << ','
              << format_double(mr.reps[r].runtime_s) << '\n';
    }
  }
  write_text(a.output, csv.str());
  return 0;
}

int run_simulate(const StudyArgs& a) {
  json cfg = load_config(a.config);
  std::string scenario_kind = require_key(cfg, "scenario").get<std::string>();
  int n = positive_int(require_key(cfg, "n"), "n", 1);
  std::vector<MethodSpec> methods = parse_methods(cfg);
  int reps = positive_int(require_key(cfg, "replicates"), "replicates", 1);
  double sigma2 = resolve_sigma2(cfg);
  std::uint64_t seed = a.resolve_seed(cfg);
  int threads = resolve_threads(a.threads_opt->count() > 0, a.threads);

  // (param, scenario) points; param is tau1 for hat/step, D for alternating.
  std::vector<std::pair<int, ScenarioSpec>> points;
  try {
    if (scenario_kind == "null") {
      points.emplace_back(0, ScenarioSpec::null_signal_spec(n, 0));
    } else if (scenario_kind == "alternating") {
      for (int d : int_grid(require_key(cfg, "d_grid"), "d_grid", 0))
        points.emplace_back(d, ScenarioSpec::alternating_spec(n, d, 0));
    } else if (scenario_kind == "step") {
      for (int tau1 : int_grid(require_key(cfg, "tau1_grid"), "tau1_grid", 1))
        points.emplace_back(tau1, ScenarioSpec::step_spec(n, tau1, 0));
    } else if (scenario_kind == "hat") {
      const json& grid = require_key(cfg, "tau1_grid");
      std::vector<int> taus;
      if (grid.is_object()) {
        int lo = grid.contains("lo") ? positive_int(grid.at("lo"), "tau1_grid.lo", 1) : 1;
        int count = positive_int(require_key(grid, "count"), "tau1_grid.count", 1);
        taus = hat_tau1_grid(n, lo, count, grid.value("mirror", false));
      } else {
        taus = int_grid(grid, "tau1_grid", 1);
      }
      for (int tau1 : taus) points.emplace_back(tau1, ScenarioSpec::hat_spec(n, tau1, 0));
    } else {
      throw UsageError("config: unknown scenario '" + scenario_kind +
                       "' (expected null, alternating, hat or step)");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }

  std::ostringstream csv;
  csv << "scenario,n,param,method,replicates,r_gt0,r_2,delta_d,mse,ari\n";
  for (std::size_t p = 0; p < points.size(); ++p) {
    ScenarioSpec scenario = points[p].second;
    scenario.sigma2 = sigma2;
    MetricsReport report = run_study(scenario, methods, reps, seed, p, threads);
    for (const MethodResult& mr : report.methods)
      csv << scenario_kind << ',' << n << ',' << points[p].first << ',' << mr.method.name
          << ',' << reps << ',' << format_double(mr.r_gt0) << ',' << format_double(mr.r_2)
          << ',' << format_double(mr.mean_delta_d) << ',' << format_double(mr.mean_mse)
          << ',' << format_double(mr.mean_ari) << '\n';
  }
  write_text(a.output, csv.str());
  return 0;
}

void add_study_flags(CLI::App* cmd, StudyArgs& a) {
  cmd->add_option("-c,--config", a.config, "study configuration JSON")->required();
  cmd->add_option("-o,--output", a.output, "write the CSV here (default: stdout)");
  a.seed_opt = cmd->add_option("--seed", a.seed, "master seed (overrides the config)");
  a.threads_opt = cmd->add_option("--threads", a.threads,
                                  "worker threads (default: MSFPOP_THREADS or 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact changepoint detection for piecewise-constant means under "
               "multiscale or BIC penalties"};
  app.require_subcommand(1);

  SegmentArgs seg;
  CLI::App* seg_cmd = app.add_subcommand("segment", "Segment one series from a CSV file");
  seg_cmd
      ->add_option("input,-i,--input", seg.input,
                   "input CSV: one value per line, optional positive weight column")
      ->required();
  seg_cmd->add_option("-o,--output", seg.output, "write the result JSON here (default: "
                                                 "stdout)");
  seg_cmd->add_option("--penalty", seg.penalty, "penalty family")
      ->check(CLI::IsMember({"multiscale", "bic"}));
  seg.beta_opt = seg_cmd->add_option("--beta", seg.beta,
                                     "multiscale length-term multiplier (default 2.25)");
  seg.gamma_opt = seg_cmd->add_option("--gamma", seg.gamma,
                                      "multiscale per-segment constant (default 9)");
  seg.alpha_opt = seg_cmd->add_option("--alpha", seg.alpha,
                                      "bic per-segment penalty (default 2 log n)");
  seg_cmd->add_option("--solver", seg.solver, "solver")
      ->check(CLI::IsMember({"msfpop", "mspelt", "op"}));
  seg.sampling_opt = seg_cmd->add_option("--sampling", seg.sampling,
                                         "msfpop future sampling: all or rand:<k> "
                                         "(default rand:1)");
  seg.pruning_opt = seg_cmd->add_option("--pruning", seg.pruning,
                                        "mspelt candidate elimination (default adaptive)")
                        ->check(CLI::IsMember({"none", "constant", "adaptive"}));
  seg_cmd->add_option("--seed", seg.seed, "sampler seed for rand:<k>");
  seg_cmd->add_option("--variance", seg.variance,
                      "noise variance: fixed:<v> or mad (default fixed:1)");

  StudyArgs cal, ben, sim;
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "Detection rate on pure-noise signals over a (gamma, beta, n) grid");
  add_study_flags(cal_cmd, cal);
  CLI::App* ben_cmd =
      app.add_subcommand("bench", "Wall-clock benchmark over an (n, D) grid");
  add_study_flags(ben_cmd, ben);
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Detection metrics for a simulated scenario over its parameter grid");
  add_study_flags(sim_cmd, sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (seg_cmd->parsed()) return run_segment(seg);
    if (cal_cmd->parsed()) return run_calibrate(cal);
    if (ben_cmd->parsed()) return run_bench(ben);
    if (sim_cmd->parsed()) return run_simulate(sim);
  } catch (const CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const json::parse_error& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitData;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
