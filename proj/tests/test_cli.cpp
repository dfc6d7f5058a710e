#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#ifndef GSLAB_CLI_PATH
#error "GSLAB_CLI_PATH must point at the gslab binary"
#endif

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("cli_scratch_") + name;
}

int run(const std::string& args) {
  const std::string cmd = std::string(GSLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  os << body;
}

} // namespace

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("--definitely-not-a-flag") == 1);
  CHECK(run("classify") == 1);                       // missing required --phi
  CHECK(run("no-such-subcommand") == 1);
  CHECK(run("residual --family no_such_family --p 2 --d 3") == 1);
}

TEST_CASE("malformed JSON input exits with code 1") {
  const auto bad = tmp_path("bad.json");
  write_file(bad, "{\"p\": 2, ");
  CHECK(run("nullseq --spec " + bad + " --v hardy_phi") == 1);
  std::remove(bad.c_str());
}

TEST_CASE("residual verdicts drive the exit code") {
  CHECK(run("residual --family hardy_phi --p 2 --d 3 --mode strong") == 0);
  CHECK(run("residual --family hardy_phi --p 2.5 --d 3 --mode weak") == 0);
  CHECK(run("residual --family mp_supersol --p 2 --d 3 --mode weak --lo 0.5 --hi 50") == 0);
  CHECK(run("residual --family psi_alpha --p 2.5 --d 3 --alpha 1 --mode strong") == 0);
}

TEST_CASE("classify emits the expected verdict JSON") {
  const auto out = tmp_path("classify.json");
  CHECK(run("classify --phi eta_phi --p 3 --d 5 --gamma 1 --out " + out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["M1"]["at_infinity"]["verdict"] == "Divergent");
  CHECK(j["M2"]["at_infinity"]["verdict"] == "Convergent");
  CHECK(j["verdict"] == "SpectralGap");
  CHECK(j["manifest"]["subcommand"] == "classify");
  std::remove(out.c_str());
}

TEST_CASE("nullseq writes the (k, Q, normalization) table and verdict code") {
  const auto spec = tmp_path("hardy_spec.json");
  write_file(spec, R"({"p": 2, "d": 3,
                      "domain": {"r_min": 0, "punctured": true},
                      "potential": {"kind": "closed_form", "name": "hardy",
                                    "params": {"p": 2, "d": 3}}})");
  const auto out = tmp_path("nullseq.csv");
  CHECK(run("nullseq --spec " + spec + " --v hardy_phi --K 8 --R-growth 4 --out " + out) ==
        0);
  const auto body = slurp(out);
  CHECK(body.find("# manifest_hash=") == 0);
  CHECK(body.find("k [1],Q [energy],normalization [Lp^p]") != std::string::npos);
  int lines = 0;
  for (char c : body)
    if (c == '\n') ++lines;
  CHECK(lines == 2 + 8);  // comment + header + 8 rows

  // the linear ramp schedule cannot reach the decay gate at K = 4
  CHECK(run("nullseq --spec " + spec + " --v hardy_phi --K 4 --R-growth 4 "
            "--schedule linear --out " +
            out) == 2);
  std::remove(spec.c_str());
  std::remove(out.c_str());
}

TEST_CASE("identical manifest and seed give byte-identical CSV output") {
  const auto out1 = tmp_path("det1.csv");
  const auto out2 = tmp_path("det2.csv");
  const std::string args =
      "picone-check --samples 20000 --p 1.5 3 --seed 424242 --out ";
  CHECK(run(args + out1) == 0);
  CHECK(run(args + out2) == 0);
  const auto a = slurp(out1);
  const auto b = slurp(out2);
  CHECK(!a.empty());
  CHECK(a == b);

  // a different seed changes the layout hash line
  const auto out3 = tmp_path("det3.csv");
  CHECK(run("picone-check --samples 20000 --p 1.5 3 --seed 7 --out " + out3) == 0);
  CHECK(slurp(out3) != a);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  std::remove(out3.c_str());
}

TEST_CASE("energy equivalence run against a spec file") {
  const auto spec = tmp_path("h35.json");
  write_file(spec, R"({"p": 3, "d": 5,
                      "domain": {"r_min": 0, "punctured": true},
                      "potential": {"kind": "closed_form", "name": "hardy",
                                    "params": {"p": 3, "d": 5}}})");
  const auto field = tmp_path("h35_field.json");
  write_file(field, R"({"kind": "closed_form", "name": "hardy_phi",
                       "params": {"p": 3, "d": 5}})");
  const auto fam = tmp_path("fam.json");
  write_file(fam, R"({"K": 5, "R_growth": 4.0, "schedule": "linear"})");
  const auto out = tmp_path("energy.json");
  CHECK(run("energy --spec " + spec + " --v " + field + " --w " + fam +
            " --mode two-sided --out " + out) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["pass"] == true);
  CHECK(j["ratios"].size() == 5);
  CHECK(j["inf"].get<double>() > 0.0);
  CHECK(j["sup"].get<double>() >= j["inf"].get<double>());
  std::remove(spec.c_str());
  std::remove(field.c_str());
  std::remove(fam.c_str());
  std::remove(out.c_str());
}

TEST_CASE("report aggregates pass/fail across JSON outputs") {
  const auto good = tmp_path("good.json");
  const auto bad = tmp_path("badpass.json");
  write_file(good, R"({"manifest": {"subcommand": "x"}, "pass": true})");
  write_file(bad, R"({"manifest": {"subcommand": "y"}, "pass": false})");
  const auto out = tmp_path("agg.json");

  CHECK(run("report " + good + " --out " + out) == 0);
  auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["overall"] == "pass");

  CHECK(run("report " + good + " " + bad + " --out " + out) == 2);
  j = nlohmann::json::parse(slurp(out));
  CHECK(j["overall"] == "fail");
  CHECK(j["items"].size() == 2);

  CHECK(run("report does_not_exist.json --out " + out) == 1);
  std::remove(good.c_str());
  std::remove(bad.c_str());
  std::remove(out.c_str());
}
