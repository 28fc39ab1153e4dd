#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "msfpop/csv.hpp"
#include "msfpop/penalty.hpp"
#include "msfpop/solver.hpp"

using json = nlohmann::ordered_json;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

const std::string& cli_bin() {
  static std::string bin = [] {
    const char* env = std::getenv("MSFPOP_BIN");
    REQUIRE_MESSAGE(env != nullptr, "MSFPOP_BIN must point at the msfpop binary");
    return std::string(env);
  }();
  return bin;
}

// argv joined by the caller; optional "VAR=value " prefixes are allowed since
// the command line goes through /bin/sh.
CliResult run_cli(const std::string& args) {
  static int serial = 0;
  std::string out_path = "cli_out_" + std::to_string(++serial) + ".tmp";
  std::string err_path = "cli_err_" + std::to_string(serial) + ".tmp";
  std::string cmd = args + " >" + out_path + " 2>" + err_path;
  CliResult r;
  int rc = std::system(cmd.c_str());
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

CliResult msfpop_cli(const std::string& args, const std::string& env_prefix = "") {
  return run_cli(env_prefix + "\"" + cli_bin() + "\" " + args);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("segment emits the result document for the two-jump example") {
  write_file("cli_four.csv", "0\n0\n10\n10\n");
  CliResult r = msfpop_cli("segment cli_four.csv");
  REQUIRE(r.status == 0);
  json doc = json::parse(r.out);
  CHECK(doc.at("changepoints") == json::array({2}));
  CHECK(doc.at("means").size() == 2);
  CHECK(doc.at("means")[0].get<double>() == doctest::Approx(0.0));
  CHECK(doc.at("means")[1].get<double>() == doctest::Approx(10.0));
  CHECK(doc.at("objective").get<double>() == doctest::Approx(21.1191623).epsilon(1e-8));
  CHECK(doc.at("solver") == "msfpop(rand:1)");
  CHECK(doc.at("penalty").at("kind") == "multiscale");
  CHECK(doc.at("penalty").at("beta").get<double>() == 2.25);
  CHECK(doc.at("penalty").at("gamma").get<double>() == 9.0);
  CHECK(doc.at("penalty").at("n").get<int>() == 4);
  CHECK(doc.at("sigma_hat").get<double>() == 1.0);
  CHECK(doc.at("runtime_s").get<double>() > 0.0);

  // Field order is part of the output contract.
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"changepoints", "means", "objective", "solver",
                                         "penalty", "runtime_s", "sigma_hat"});
  std::remove("cli_four.csv");
}

TEST_CASE("solver choice changes only the solver and runtime fields") {
  write_file("cli_solvers.csv", "0\n0.5\n6\n6.5\n7\n");
  json docs[3];
  const char* flags[3] = {"--solver msfpop", "--solver mspelt", "--solver op"};
  for (int i = 0; i < 3; ++i) {
    CliResult r = msfpop_cli(std::string("segment cli_solvers.csv ") + flags[i]);
    REQUIRE(r.status == 0);
    docs[i] = json::parse(r.out);
  }
  for (int i = 1; i < 3; ++i) {
    CHECK(docs[i].at("changepoints") == docs[0].at("changepoints"));
    // The two solver families accumulate in different orders, so the real
    // numbers agree only to rounding.
    CHECK(docs[i].at("objective").get<double>() ==
          doctest::Approx(docs[0].at("objective").get<double>()).epsilon(1e-12));
    REQUIRE(docs[i].at("means").size() == docs[0].at("means").size());
    for (std::size_t m = 0; m < docs[0].at("means").size(); ++m)
      CHECK(docs[i].at("means")[m].get<double>() ==
            doctest::Approx(docs[0].at("means")[m].get<double>()).epsilon(1e-12));
    CHECK(docs[i].at("penalty").dump() == docs[0].at("penalty").dump());
    CHECK(docs[i].at("sigma_hat") == docs[0].at("sigma_hat"));
  }
  std::remove("cli_solvers.csv");
}

TEST_CASE("segment result round-trips against the criterion") {
  write_file("cli_round.csv", "1.25,2\n0.5,1\n-3,0.5\n-2.75,2\n4,1\n");
  CliResult r = msfpop_cli("segment cli_round.csv --solver mspelt --pruning constant");
  REQUIRE(r.status == 0);
  json doc = json::parse(r.out);
  msfpop::Series series = msfpop::read_series_csv("cli_round.csv");
  msfpop::PenaltyModel model = msfpop::PenaltyModel::multiscale(
      series.n(), doc.at("penalty").at("beta").get<double>(),
      doc.at("penalty").at("gamma").get<double>());
  std::vector<int> cps = doc.at("changepoints").get<std::vector<int>>();
  CHECK(msfpop::evaluate_criterion(series, cps, model) ==
        doctest::Approx(doc.at("objective").get<double>()).epsilon(1e-9));
  CHECK(msfpop::evaluate_criterion_at(series, cps,
                                      doc.at("means").get<std::vector<double>>(), model) ==
        doctest::Approx(doc.at("objective").get<double>()).epsilon(1e-9));
  std::remove("cli_round.csv");
}

TEST_CASE("constant series: no change, objective equals gamma") {
  write_file("cli_const.csv", "1\n1\n1\n");
  CliResult r = msfpop_cli("segment cli_const.csv");
  REQUIRE(r.status == 0);
  json doc = json::parse(r.out);
  CHECK(doc.at("changepoints").empty());
  CHECK(doc.at("objective").get<double>() == doctest::Approx(9.0).epsilon(1e-12));

  CliResult rb = msfpop_cli("segment cli_const.csv --penalty bic --alpha 0.5");
  REQUIRE(rb.status == 0);
  json db = json::parse(rb.out);
  CHECK(db.at("changepoints").empty());
  CHECK(db.at("penalty").at("alpha").get<double>() == 0.5);
  std::remove("cli_const.csv");
}

TEST_CASE("variance flag rescales before solving and is reported") {
  // Flag validation precedes input reading, so the missing file is moot.
  CHECK(msfpop_cli("segment cli_none.csv --variance fixed:0").status == 64);
  write_file("cli_var.csv", "0\n1\n0\n1\n0\n");
  CliResult r = msfpop_cli("segment cli_var.csv --variance mad");
  REQUIRE(r.status == 0);
  json doc = json::parse(r.out);
  CHECK(doc.at("sigma_hat").get<double>() == doctest::Approx(1.048357).epsilon(1e-6));

  CliResult rf = msfpop_cli("segment cli_var.csv --variance fixed:4");
  REQUIRE(rf.status == 0);
  CHECK(json::parse(rf.out).at("sigma_hat").get<double>() == doctest::Approx(2.0));

  write_file("cli_flat.csv", "5\n5\n5\n5\n");
  CliResult rd = msfpop_cli("segment cli_flat.csv --variance mad");
  REQUIRE(rd.status == 0);
  json dd = json::parse(rd.out);
  CHECK(dd.at("sigma_hat").get<double>() == 0.0);
  CHECK(dd.at("changepoints").empty());
  CHECK(rd.err.find("degenerate") != std::string::npos);
  std::remove("cli_var.csv");
  std::remove("cli_flat.csv");
}

TEST_CASE("exit codes: 0 ok, 2 data, 64 usage") {
  CHECK(msfpop_cli("--help").status == 0);
  CHECK(msfpop_cli("segment --help").status == 0);
  CHECK(msfpop_cli("").status == 64);
  CHECK(msfpop_cli("bogus").status == 64);
  CHECK(msfpop_cli("segment").status == 64);
  CHECK(msfpop_cli("segment missing_file.csv").status == 2);

  write_file("cli_bad.csv", "1\nabc\n");
  CliResult r = msfpop_cli("segment cli_bad.csv");
  CHECK(r.status == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  std::remove("cli_bad.csv");

  write_file("cli_ok.csv", "1\n2\n");
  CHECK(msfpop_cli("segment cli_ok.csv --penalty bic --gamma 3").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --penalty multiscale --alpha 3").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --solver msfpop --pruning constant").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --solver mspelt --sampling all").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --solver op --sampling all").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --sampling rand:0").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --sampling sometimes").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --variance guess").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --beta -1").status == 64);
  CHECK(msfpop_cli("segment cli_ok.csv --no-such-flag").status == 64);
  std::remove("cli_ok.csv");

  CHECK(msfpop_cli("calibrate --config missing.json").status == 2);
  write_file("cli_cfg_syntax.json", "{not json");
  CHECK(msfpop_cli("calibrate --config cli_cfg_syntax.json").status == 2);
  std::remove("cli_cfg_syntax.json");
  write_file("cli_cfg_semantic.json", "{\"gamma_grid\": [9], \"n_grid\": [50]}");
  CHECK(msfpop_cli("calibrate --config cli_cfg_semantic.json").status == 64);
  std::remove("cli_cfg_semantic.json");
  write_file("cli_cfg_reps.json",
             "{\"gamma_grid\": [9], \"n_grid\": [50], \"replicates\": 0}");
  CHECK(msfpop_cli("calibrate --config cli_cfg_reps.json").status == 64);
  std::remove("cli_cfg_reps.json");
}

TEST_CASE("calibrate: deterministic CSV, probabilities, single-replicate rates") {
  write_file("cli_cal.json",
             "{\"gamma_grid\": [5, 9, 14], \"n_grid\": [60], \"replicates\": 12}");
  CliResult a = msfpop_cli("calibrate --config cli_cal.json --seed 7");
  CliResult b = msfpop_cli("calibrate --config cli_cal.json --seed 7");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);

  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "gamma,beta,n,replicates,r_gt0");
  int rows = 0;
  double prev = 2.0;
  while (std::getline(lines, line)) {
    ++rows;
    double r_gt0 = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(r_gt0 >= 0.0);
    CHECK(r_gt0 <= 1.0);
    // Shared noise across the gamma grid: rates fall as gamma grows.
    CHECK(r_gt0 <= prev);
    prev = r_gt0;
  }
  CHECK(rows == 3);

  CliResult c = msfpop_cli("calibrate --config cli_cal.json --seed 8");
  REQUIRE(c.status == 0);
  CHECK(c.out != b.out);
  std::remove("cli_cal.json");

  write_file("cli_cal1.json",
             "{\"gamma_grid\": [1, 20], \"n_grid\": [40], \"replicates\": 1}");
  CliResult one = msfpop_cli("calibrate --config cli_cal1.json");
  REQUIRE(one.status == 0);
  std::istringstream l1(one.out);
  std::getline(l1, line);
  while (std::getline(l1, line)) {
    double r_gt0 = std::stod(line.substr(line.rfind(',') + 1));
    CHECK((r_gt0 == 0.0 || r_gt0 == 1.0));
  }
  std::remove("cli_cal1.json");
}

TEST_CASE("bench: schema and per-replicate rows") {
  write_file("cli_ben.json",
             "{\"methods\": [\"msfpop\", \"mspelt\"], \"n_grid\": [200], "
             "\"d_grid\": [0, 1], \"replicates\": 2}");
  CliResult r = msfpop_cli("bench --config cli_ben.json --seed 3");
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "method,n,d,replicate,runtime_s");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    double t = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(t > 0.0);
  }
  CHECK(rows == 2 * 2 * 2);  // methods x d values x replicates
  std::remove("cli_ben.json");

  write_file("cli_ben_bad.json",
             "{\"methods\": [\"mosum\"], \"n_grid\": [100], \"replicates\": 1}");
  CliResult bad = msfpop_cli("bench --config cli_ben_bad.json");
  CHECK(bad.status == 64);
  CHECK(bad.err.find("unknown method") != std::string::npos);
  std::remove("cli_ben_bad.json");
}

TEST_CASE("simulate: deterministic CSV over the scenario grid") {
  write_file("cli_sim.json",
             "{\"scenario\": \"step\", \"n\": 120, \"tau1_grid\": [30, 60], "
             "\"methods\": [\"msfpop\", \"fpop\"], \"replicates\": 5}");
  CliResult a = msfpop_cli("simulate --config cli_sim.json --seed 11");
  CliResult b = msfpop_cli("simulate --config cli_sim.json --seed 11");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "scenario,n,param,method,replicates,r_gt0,r_2,delta_d,mse,ari");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.rfind("step,120,", 0) == 0);
  }
  CHECK(rows == 2 * 2);  // grid points x methods
  std::remove("cli_sim.json");

  write_file("cli_sim_hat.json",
             "{\"scenario\": \"hat\", \"n\": 99, "
             "\"tau1_grid\": {\"count\": 3, \"mirror\": true}, "
             "\"methods\": [\"msfpop\"], \"replicates\": 2}");
  CliResult hat = msfpop_cli("simulate --config cli_sim_hat.json");
  REQUIRE(hat.status == 0);
  int hat_rows = 0;
  std::istringstream hat_lines(hat.out);
  std::getline(hat_lines, line);
  while (std::getline(hat_lines, line)) ++hat_rows;
  CHECK(hat_rows == 5);  // {1,6,33} mirrored about 66 -> {1,6,33,60,65}
  std::remove("cli_sim_hat.json");

  write_file("cli_sim_bad.json",
             "{\"scenario\": \"sawtooth\", \"n\": 50, \"methods\": [\"msfpop\"], "
             "\"replicates\": 1}");
  CHECK(msfpop_cli("simulate --config cli_sim_bad.json").status == 64);
  std::remove("cli_sim_bad.json");
}

TEST_CASE("thread count comes from the flag or MSFPOP_THREADS and never changes results") {
  write_file("cli_thr.json",
             "{\"scenario\": \"alternating\", \"n\": 80, \"d_grid\": [2], "
             "\"methods\": [\"msfpop\", \"mspelt\"], \"replicates\": 6, \"seed\": 5}");
  CliResult serial = msfpop_cli("simulate --config cli_thr.json --threads 1");
  CliResult forced = msfpop_cli("simulate --config cli_thr.json --threads 3");
  CliResult env = msfpop_cli("simulate --config cli_thr.json", "MSFPOP_THREADS=3 ");
  REQUIRE(serial.status == 0);
  REQUIRE(forced.status == 0);
  REQUIRE(env.status == 0);
  CHECK(serial.out == forced.out);
  CHECK(serial.out == env.out);

  CHECK(msfpop_cli("simulate --config cli_thr.json --threads 0").status == 64);
  CHECK(msfpop_cli("simulate --config cli_thr.json", "MSFPOP_THREADS=abc ").status == 64);
  std::remove("cli_thr.json");
}

TEST_CASE("output files are written when requested") {
  write_file("cli_out_in.csv", "3\n3\n8\n8\n");
  CliResult r = msfpop_cli("segment cli_out_in.csv --output cli_out_doc.json");
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  json doc = json::parse(read_file("cli_out_doc.json"));
  CHECK(doc.at("changepoints") == json::array({2}));
  std::remove("cli_out_in.csv");
  std::remove("cli_out_doc.json");

  CHECK(msfpop_cli("segment cli_missing.csv --output nested/dir/doc.json").status == 2);
}

TEST_SUITE_END();
