#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "clausenlab/cli.hpp"
#include "clausenlab/json_io.hpp"

using clausenlab::Json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "clausenlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = clausenlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const Json* find_check(const Json& rep, const std::string& name) {
  for (const auto& c : rep.at("checks"))
    if (c.at("name") == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("selftest passes") {
  const auto r = cli({"selftest", "--threads", "1"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("status") == "pass");
  CHECK(j.at("schema_version") == clausenlab::cli::kSchemaVersion);
  CHECK(j.at("checks").size() >= 10);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"clausen", "solve", "--bogus"}).code == 2);
  CHECK(cli({"markov", "verify"}).code == 2);
  CHECK(cli({"conv", "mc", "--lambda", "zeta7^1", "--gauss"}).code == 2);
  CHECK(cli({"d2", "verify", "--B", "0"}).code == 2);
  CHECK(cli({"spectral", "circle", "--q", "5"}).code == 2);
}

TEST_CASE("off-surface point is a named failure") {
  const auto r = cli({"markov", "verify", "--triple", "3,3,5"});
  CHECK(r.code == 1);
  const Json j = Json::parse(r.out);
  const Json* c = find_check(j, "point[3,3,5].reflection_triple");
  REQUIRE(c != nullptr);
  CHECK(c->at("status") == "fail");
  CHECK(c->at("data").at("error").get<std::string>().find("consistency identity fails") != std::string::npos);
  CHECK(r.err.find("point[3,3,5].reflection_triple") != std::string::npos);
}

TEST_CASE("clausen solve") {
  const auto r = cli({"clausen", "solve", "--n", "50"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(find_check(j, "solver")->at("data").at("equals_inverse_factorial_squares") == true);
  CHECK(find_check(j, "solver")->at("data").at("leading_coefficients")[3] == "1/36");
}

TEST_CASE("reports are byte-identical and record conventions") {
  const std::vector<std::string> args{"markov", "verify", "--random", "3", "--seed", "7"};
  const auto a = cli(args), b = cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Json j = Json::parse(a.out);
  CHECK(j.at("conventions").at("lambda_sign") == 1);
  CHECK(j.at("conventions").at("q_trace_sign") == -1);
  CHECK(j.at("conventions").at("det_convention") == "first-col-right");
  CHECK(j.at("conventions").at("d_convention") == "tddt");
  CHECK(j.at("seed") == 7);
  // Thread count does not change the report.
  CHECK(cli({"conv", "scan", "--max-len", "4", "--threads", "1"}).out ==
        cli({"conv", "scan", "--max-len", "4", "--threads", "3"}).out);
}

TEST_CASE("timings only when asked") {
  const auto plain = cli({"clausen", "solve", "--n", "5"});
  CHECK(plain.out.find("timing_ms") == std::string::npos);
  const auto timed = cli({"clausen", "solve", "--n", "5", "--timings"});
  CHECK(timed.out.find("timing_ms") != std::string::npos);
}

TEST_CASE("subcommand smoke runs") {
  CHECK(cli({"dn", "build", "--random", "4", "--seed", "2"}).code == 0);
  CHECK(cli({"dn", "build", "--random", "2", "--N", "3", "--det-convention", "last-row-left"}).code == 0);
  CHECK(cli({"d2", "verify", "--A", "1", "--B", "2", "--K", "3", "--trunc", "4", "--samples", "5"}).code == 0);
  CHECK(cli({"d2", "bessel-degenerate", "--order", "8"}).code == 0);
  CHECK(cli({"conv", "mc", "--gauss"}).code == 0);
  CHECK(cli({"markov", "tree", "--bound", "200"}).code == 0);
  CHECK(cli({"markov", "verify", "--triple", "3,3,6", "--max-word-len", "3"}).code == 0);
  CHECK(cli({"spectral", "maass", "--y", "0.1"}).code == 0);
  CHECK(cli({"spectral", "circle", "--q", "2,3", "--samples", "100"}).code == 0);
  CHECK(cli({"spectral", "sonine", "--grid", "1:2:0.5"}).code == 0);
  CHECK(cli({"spectral", "ap", "--pmax", "300"}).code == 0);
}
