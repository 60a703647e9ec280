#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qtrotor/io.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QTROTOR_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

qtr::io::Json json_of(const std::string& args) {
  const auto r = run(args);
  REQUIRE(r.code == 0);
  return qtr::io::Json::parse(r.out);
}

}  // namespace

TEST_CASE("cli: flux report") {
  const auto j = json_of("--format json flux");
  CHECK(j.at("flux_quanta").get<double>() == doctest::Approx(1.52).epsilon(0.01));
  const auto off = json_of("--format json flux --fixed 0");
  CHECK(off.at("flux_quanta").get<double>() == 0.0);
}

TEST_CASE("cli: ab-scan fit finds one oscillation per flux quantum") {
  const auto j = json_of("--format json --seed 7 ab-scan --shots 800");
  const auto& params = j.at("fit").at("parameters");
  REQUIRE(params[1].at("name") == "xi");
  const double xi = params[1].at("value").get<double>();
  const double se = params[1].at("std_error").get<double>();
  CHECK(std::abs(xi - 1.0) < 3.0 * se);
  CHECK(j.at("series").at("shots")[0] == 800);
}

TEST_CASE("cli: golden-rule columns") {
  const auto j = json_of("--format json ab-scan --golden-rule --points 5");
  REQUIRE(j.at("envelope").size() == 5);
  // Added flux 0 puts the loop at 1.5 flux quanta, where the envelope vanishes.
  CHECK(j.at("total_flux_quanta")[2].get<double>() == doctest::Approx(1.5));
  CHECK(j.at("envelope")[2].get<double>() == doctest::Approx(0.0).scale(1.0));
  CHECK(j.at("envelope")[0].get<double>() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("cli: single-point mode sweep at wx = wz") {
  const auto j = json_of("--format json modes --omega-x-range 1.119 1.119 --steps 1");
  REQUIRE(j.at("rows").size() == 1);
  const double rot = j.at("rows")[0].at("frequencies").at("rotational_hz").get<double>();
  CHECK(std::abs(rot) < 10.0);
}

TEST_CASE("cli: usage errors exit with 2") {
  CHECK(run("modes --omega-x-range 2.0 1.0").code == 2);
  CHECK(run("crystal --no-such-option").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("rotor --basis 64").code == 2);
  CHECK(run("fit --input /nonexistent/file.csv").code == 2);
}

TEST_CASE("cli: output is deterministic for a fixed seed") {
  const auto a = run("--seed 11 time-scan --shots 200");
  const auto b = run("--seed 11 time-scan --shots 200");
  const auto c = run("--seed 12 time-scan --shots 200");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("cli: dumped configuration reproduces the run") {
  const auto dir = std::filesystem::temp_directory_path() / "qtrotor_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = (dir / "run.toml").string();
  const auto csv = (dir / "series.csv").string();

  const auto dumped = run("--seed 9 ab-scan --shots 300 --points 11 --dump-config");
  REQUIRE(dumped.code == 0);
  std::ofstream(cfg) << dumped.out;

  const auto direct = run("--seed 9 ab-scan --shots 300 --points 11");
  const auto from_file = run("--config " + cfg + " ab-scan");
  REQUIRE(direct.code == 0);
  CHECK(from_file.code == 0);
  CHECK(from_file.out == direct.out);

  // Refit the written series.
  REQUIRE(run("--seed 9 -o " + csv + " ab-scan --shots 300 --points 11").code == 0);
  const auto fit = json_of("fit --input " + csv);
  CHECK(fit.at("model") == "g");
  std::filesystem::remove_all(dir);
}
