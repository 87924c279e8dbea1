#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli/cli.hpp"
#include "cli/io.hpp"
#include "oracles.hpp"

using namespace pta;
using namespace pta::cli;

namespace {

std::string tmp(const std::string& name) { return std::string(PTA_TEST_TMP) + "/" + name; }

std::string write_file(const std::string& name, const std::string& body) {
  const std::string path = tmp(name);
  std::ofstream(path) << body;
  return path;
}

struct Outcome {
  int code;
  std::string out;
  json doc() const { return json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str() + err.str()};
}

// Exit status of the installed binary, to check the process boundary.
int run_binary(const std::string& args) {
  const std::string cmd = std::string(PTA_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kHalfSwap = R"({"n": 2, "A": [[0, 0.5], [0.5, 0]], "b": [1, 1], "s": 1})";
const char* kHalfSwapNeg = R"({"n": 2, "A": [[0, 0.5], [0.5, 0]], "b": [1, 1], "s": -1})";
const char* kScalar = R"({"n": 1, "A": [[0.25]], "b": [1], "s": 2})";

std::string read_all(const std::string& path) {
  std::ifstream is(path);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check: verdicts and exit codes") {
  const std::string ok = write_file("half_swap.json", kHalfSwap);
  const std::string bad = write_file("half_swap_neg.json", kHalfSwapNeg);
  const std::string broken = write_file("broken.json", R"({"n": 2, "A": [[0, 1)");

  const Outcome a = run_cli({"check", ok});
  CHECK(a.code == 0);
  const json ca = a.doc();
  CHECK(ca["verdict"] == "UniqueSolution");
  CHECK(ca["r"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  for (const char* key : {"r", "s", "r_pow_s", "criterion", "verdict", "margin"}) {
    CHECK(ca.contains(key));
  }

  const Outcome b = run_cli({"check", bad});
  CHECK(b.code == 2);
  CHECK(b.doc()["verdict"] == "NoSolution");

  const Outcome c = run_cli({"check", broken});
  CHECK(c.code == 1);
  CHECK(c.doc()["error"]["kind"] == "ParseError");

  CHECK(run_binary("check " + ok) == 0);
  CHECK(run_binary("check " + bad) == 2);
  CHECK(run_binary("check " + broken) == 1);
  CHECK(run_binary("check " + tmp("does_not_exist.json")) == 1);
}

TEST_CASE("check: structured errors for invalid systems") {
  const auto kind = [](const std::string& name, const std::string& body) {
    const Outcome o = run_cli({"check", write_file(name, body)});
    CHECK(o.code == 1);
    return o.doc()["error"]["kind"].get<std::string>();
  };
  CHECK(kind("reducible.json", R"({"n": 2, "A": [[1, 0], [0, 1]], "b": [1, 1], "s": 1})") ==
        "NotIrreducible");
  CHECK(kind("negative.json", R"({"n": 2, "A": [[0, -1], [1, 0]], "b": [1, 1], "s": 1})") ==
        "NegativeEntry");
  CHECK(kind("zero_s.json", R"({"n": 2, "A": [[0, 1], [1, 0]], "b": [1, 1], "s": 0})") ==
        "ZeroExponent");
  CHECK(kind("zero_b.json", R"({"n": 2, "A": [[0, 1], [1, 0]], "b": [1, 0], "s": 1})") ==
        "NonPositiveB");
  CHECK(kind("n_mismatch.json", R"({"n": 3, "A": [[0, 1], [1, 0]], "b": [1, 1], "s": 1})") ==
        "DimensionMismatch");
  CHECK(kind("no_s.json", R"({"n": 2, "A": [[0, 1], [1, 0]], "b": [1, 1]})") == "ParseError");
}

TEST_CASE("solve: scalar closed form and infeasible file") {
  const std::string scalar = write_file("scalar.json", kScalar);
  const Outcome a = run_cli({"solve", scalar});
  REQUIRE(a.code == 0);
  const json d = a.doc();
  CHECK(d["status"] == "converged");
  CHECK(d["x_star"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(d["y_star"][0].get<double>() == doctest::Approx(4.0).epsilon(1e-9));
  for (const char* key : {"iterations", "residual_y", "residual_x", "certificate", "bracket"}) {
    CHECK(d.contains(key));
  }

  const Outcome b = run_cli({"solve", write_file("infeasible.json", kHalfSwapNeg)});
  CHECK(b.code == 2);
  CHECK_FALSE(b.doc().contains("x_star"));
  CHECK(b.doc()["certificate"]["verdict"] == "NoSolution");
  CHECK(run_binary("solve " + tmp("infeasible.json")) == 2);
}

TEST_CASE("solve: iteration budget exits 3") {
  const std::string path = write_file("slow.json",
                                      R"({"n": 2, "A": [[0, 0.999], [0.999, 0]], "b": [1, 1], "s": 1})");
  const Outcome o = run_cli({"solve", path, "--max-iters", "5"});
  CHECK(o.code == 3);
  CHECK(o.doc()["status"] == "MaxIterationsExceeded");
  CHECK(run_binary("solve " + path + " --max-iters 5") == 3);
  CHECK(run_cli({"solve", path, "--tol", "0"}).code == 1);
  CHECK(run_cli({"solve", path, "--max-iters", "0"}).code == 1);
}

TEST_CASE("solve: trace file contract") {
  const std::string path = write_file("trace_sys.json", kHalfSwap);
  const std::string trace = tmp("trace.csv");
  // the bracket midpoint of this symmetric system is already the fixed point
  REQUIRE(run_cli({"solve", path, "--start", "ones", "--trace", trace}).code == 0);
  std::istringstream is(read_all(trace));
  std::string line;
  std::getline(is, line);
  CHECK(line == "iter,residual_y");
  long expected = 0;
  double first = -1.0;
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stol(line.substr(0, comma)) == expected);
    const double r = std::stod(line.substr(comma + 1));
    if (expected == 0) first = r;
    CHECK(r >= 0.0);
    ++expected;
  }
  CHECK(expected >= 2);
  CHECK(first > 0.0);
  const json d = run_cli({"solve", path, "--start", "ones"}).doc();
  CHECK(expected == d["iterations"].get<long>() + 1);
}

TEST_CASE("solve: a report re-ingested as start converges in at most 2 iterations") {
  Rng rng(301);
  for (double s : {-2.0, 0.5, 1.0, 3.0}) {
    const PowerAffineSystem sys = testing::random_feasible(rng, 4, s);
    const std::string path = write_file("roundtrip.json", system_to_json(sys).dump());
    const Outcome first = run_cli({"solve", path});
    REQUIRE(first.code == 0);
    const std::string report = write_file("report.json", first.out);
    const Outcome second = run_cli({"solve", path, "--start-file", report});
    REQUIRE(second.code == 0);
    const json a = first.doc();
    const json b = second.doc();
    CHECK(b["iterations"].get<int>() <= 2);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(b["x_star"][i].get<double>() ==
            doctest::Approx(a["x_star"][i].get<double>()).epsilon(1e-9));
    }
    // bare array form
    const std::string bare = write_file("bare.json", a["y_star"].dump());
    CHECK(run_cli({"solve", path, "--start", "file", "--start-file", bare}).doc()["iterations"]
              .get<int>() <= 2);
  }
}

TEST_CASE("solve: start rules") {
  const std::string path = write_file("starts.json", kHalfSwap);
  for (const char* rule : {"bracket_mid", "ones", "perron"}) {
    const Outcome o = run_cli({"solve", path, "--start", rule});
    REQUIRE(o.code == 0);
    CHECK(o.doc()["x_star"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  }
  CHECK(run_cli({"solve", path, "--start", "file"}).code == 1);
  CHECK(run_cli({"solve", path, "--start", "nope"}).code == 1);
}

TEST_CASE("decimal strings are accepted for entries") {
  const std::string path = write_file(
      "decimal.json", R"({"n": 2, "A": [["0", "0.1"], ["0.1", "0"]], "b": ["0.9", "0.9"], "s": "1"})");
  const Outcome o = run_cli({"solve", path, "--tol", "1e-14"});
  REQUIRE(o.code == 0);
  // x = 0.1 x + 0.9 -> x = 1
  CHECK(o.doc()["x_star"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  const json sys = read_json_file(path);
  CHECK(system_from(sys).a()(0, 1) == 0.1);
  CHECK(run_cli({"check", write_file("bad_decimal.json",
                                      R"({"n": 1, "A": [["0.5x"]], "b": [1], "s": 1})")})
            .code == 1);
}

TEST_CASE("csv output format") {
  const std::string path = write_file("csv_sys.json", kHalfSwap);
  const Outcome c = run_cli({"check", path, "--format", "csv"});
  CHECK(c.code == 0);
  CHECK(c.out.rfind("r,s,r_pow_s,criterion,verdict,margin", 0) == 0);
  const Outcome s = run_cli({"solve", path, "--format", "csv"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("component,x_star,y_star\n0,", 0) == 0);
  CHECK(run_cli({"solve", path, "--format", "xml"}).code == 1);
}

TEST_CASE("props: feasible and infeasible systems") {
  const Outcome a = run_cli({"props", write_file("props_ok.json", kHalfSwap)});
  CHECK(a.code == 0);
  const json d = a.doc();
  CHECK(d["all_passed"] == true);
  std::vector<std::string> names;
  for (const auto& p : d["probes"]) names.push_back(p["probe_name"]);
  CHECK(std::find(names.begin(), names.end(), "fixed_point_inequality") != names.end());
  CHECK(std::find(names.begin(), names.end(), "bracket") != names.end());

  const Outcome b = run_cli({"props", write_file("props_bad.json", kHalfSwapNeg)});
  const json e = b.doc();
  names.clear();
  for (const auto& p : e["probes"]) names.push_back(p["probe_name"]);
  CHECK(std::find(names.begin(), names.end(), "nonexistence") != names.end());
  CHECK(std::find(names.begin(), names.end(), "order_preserving") != names.end());
  CHECK(std::find(names.begin(), names.end(), "shape") != names.end());
  CHECK(b.code == (e["all_passed"] == true ? 0 : 1));
}

TEST_CASE("props: byte-identical for a fixed seed") {
  const std::string path = write_file("props_det.json", kHalfSwap);
  const Outcome a = run_cli({"props", path, "--seed", "17", "--trials", "200"});
  const Outcome b = run_cli({"props", path, "--seed", "17", "--trials", "200"});
  CHECK(a.out == b.out);
  const std::string f1 = tmp("props1.json");
  const std::string f2 = tmp("props2.json");
  CHECK(std::system((std::string(PTA_BINARY) + " props " + path + " --seed 5 > " + f1).c_str()) == 0);
  CHECK(std::system((std::string(PTA_BINARY) + " props " + path + " --seed 5 > " + f2).c_str()) == 0);
  CHECK(read_all(f1) == read_all(f2));
  CHECK_FALSE(read_all(f1).empty());
}

TEST_CASE("app ez: constant consumption") {
  const Outcome o = run_cli({"app", "ez", "--beta", "0.95", "--rho", "0.5", "--alpha", "-2",
                             "--c", "1", "--chain", "[[0.6, 0.4], [0.3, 0.7]]"});
  REQUIRE(o.code == 0);
  const json d = o.doc();
  CHECK(d["model"] == "ez");
  for (const auto& v : d["output"]["values"]) CHECK(v.get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  const Outcome bad = run_cli({"app", "ez", "--beta", "1", "--rho", "0.5", "--alpha", "-2",
                               "--c", "1", "--chain", "[[0.6, 0.4], [0.3, 0.7]]"});
  CHECK(bad.code == 1);
  CHECK(bad.doc()["error"]["kind"] == "InvalidParameter");
  CHECK(bad.doc()["error"]["message"].get<std::string>().find("beta < 1") != std::string::npos);
}

TEST_CASE("app wc: beta r(Q) > 1 exits 2") {
  const std::string args = "--beta 1.01 --s 1 --Q '[[0.6, 0.4], [0.3, 0.7]]'";
  CHECK(run_binary("app wc " + args) == 2);
  const Outcome o = run_cli({"app", "wc", "--beta", "1.01", "--s", "1", "--Q",
                             "[[0.6, 0.4], [0.3, 0.7]]"});
  CHECK(o.code == 2);
  CHECK(o.doc()["status"] == "NoSolution");
  const Outcome ok = run_cli({"app", "wc", "--beta", "0.9", "--s", "1", "--Q",
                              "[[0.6, 0.4], [0.3, 0.7]]"});
  CHECK(ok.code == 0);
  // s = 1: w = 0.9 Q w + 1 -> w = 10
  for (const auto& v : ok.doc()["output"]["values"]) {
    CHECK(v.get<double>() == doctest::Approx(10.0).epsilon(1e-8));
  }
}

TEST_CASE("app toda matches solve on the hand-built system file") {
  // A = diag(beta R^{1-gamma}) q, b = 1, s = gamma
  const double beta[2] = {0.9, 0.95};
  const double R[2] = {1.02, 0.98};
  const double q[2][2] = {{0.7, 0.3}, {0.4, 0.6}};
  const double gamma = 2.0;
  json a = json::array();
  for (int i = 0; i < 2; ++i) {
    const double w = beta[i] * std::pow(R[i], 1.0 - gamma);
    a.push_back({w * q[i][0], w * q[i][1]});
  }
  const json sys = {{"n", 2}, {"A", a}, {"b", {1.0, 1.0}}, {"s", gamma}};
  const std::string path = write_file("toda_sys.json", sys.dump());

  const Outcome app = run_cli({"app", "toda", "--beta", "[0.9, 0.95]", "--R", "[1.02, 0.98]",
                               "--gamma", "2", "--chain", "[[0.7, 0.3], [0.4, 0.6]]"});
  const Outcome direct = run_cli({"solve", path});
  REQUIRE(app.code == 0);
  REQUIRE(direct.code == 0);
  const json da = app.doc();
  const json dd = direct.doc();
  CHECK(da["model"] == "toda");
  for (int i = 0; i < 2; ++i) {
    CHECK(da["y_star"][i].get<double>() ==
          doctest::Approx(dd["y_star"][i].get<double>()).epsilon(1e-12));
    CHECK(da["output"]["values"][i].get<double>() ==
          doctest::Approx(dd["y_star"][i].get<double>()).epsilon(1e-12));
  }
  CHECK(da["iterations"] == dd["iterations"]);
}

TEST_CASE("app: ces and parameter errors") {
  const Outcome o = run_cli({"app", "ces", "--savings", "0.3", "--theta", "0.4", "--rho", "0.5",
                             "--A", "[[0, 1], [1, 0]]"});
  REQUIRE(o.code == 0);
  CHECK(o.doc()["certificate"]["r"].get<double>() == doctest::Approx(0.108).epsilon(1e-12));
  CHECK(run_cli({"app", "ces", "--savings", "0.3", "--rho", "0.5", "--A", "[[0, 1], [1, 0]]"})
            .code == 1);
  CHECK(run_cli({"app", "toda", "--beta", "0.9", "--R", "1", "--gamma", "2", "--chain",
                 "[[0.5, 0.6], [0.4, 0.6]]"})
            .doc()["error"]["kind"] == "InvalidParameter");
  CHECK(run_cli({"app", "toda", "--beta", "0.9", "--R", "1", "--gamma", "2", "--chain",
                 "[[1, 0], [0, 1]]"})
            .doc()["error"]["kind"] == "NotIrreducible");
}

TEST_CASE("command line parse errors exit 1") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"solve"}).code == 1);
  CHECK(run_cli({"solve", tmp("scalar.json"), "--tol", "abc"}).code == 1);
  CHECK(run_binary("") == 1);
}

TEST_CASE("output documents keep a fixed schema") {
  const std::string path = write_file("schema.json", kScalar);
  const json a = run_cli({"solve", path}).doc();
  const json b = run_cli({"solve", path, "--start", "ones"}).doc();
  std::vector<std::string> ka, kb;
  for (auto it = a.begin(); it != a.end(); ++it) ka.push_back(it.key());
  for (auto it = b.begin(); it != b.end(); ++it) kb.push_back(it.key());
  CHECK(ka == kb);
  for (auto it = a.begin(); it != a.end(); ++it) CHECK(it->type() == b[it.key()].type());
}

}  // TEST_SUITE
