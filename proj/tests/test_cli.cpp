#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mottlab/cli.hpp"
#include "mottlab/sweep.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mottlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mottlab::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  return {};
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "mottlab_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("basis reports dimension and partition count") {
  const auto r = run({"basis", "--n", "10", "--m", "10"});
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "D") == "92378");
  CHECK(value_of(r.out, "f(N)") == "42");
  CHECK(value_of(r.out, "N") == "10");

  const auto huge = run({"basis", "--n", "1000", "--m", "1000"});
  CHECK(huge.code == 0);
  CHECK(value_of(huge.out, "D") == "overflow");
}

TEST_CASE("basis dump") {
  const auto path = (scratch() / "basis.txt").string();
  CHECK(run({"basis", "--n", "2", "--m", "2", "--dump", path}).code == 0);
  CHECK(read_file(path) == "2 2 3\n2 0\n1 1\n0 2\n");
}

TEST_CASE("usage errors exit with 1") {
  const auto unknown = run({"basis", "--n", "3", "--m", "3", "--bogus"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("--bogus") != std::string::npos);
  CHECK(unknown.err.find("Usage:") != std::string::npos);
  CHECK(run({}).code == 1);
  CHECK(run({"basis", "--n", "3"}).code == 1);
  CHECK(run({"sweep", "--n", "3", "--m", "3", "--method", "exact"}).code == 1);
  CHECK(run({"sweep", "--n", "3", "--m", "3", "--steps", "1"}).code == 1);
  CHECK(run({"sweep", "--n", "3", "--m", "3", "--columns", "pressure"}).code == 1);
  CHECK(run({"basis", "--n", "-1", "--m", "3"}).code != 0);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("compare") != std::string::npos);
}

TEST_CASE("sweep writes a 102-line CSV") {
  const auto csv = (scratch() / "out.csv").string();
  const auto r = run({"sweep", "--n", "3", "--m", "3", "--geometry", "chain", "--method", "dense", "--lambda-min", "0",
                      "--lambda-max", "1", "--steps", "101", "--csv", csv});
  CHECK(r.code == 0);
  const auto text = read_file(csv);
  CHECK(count_lines(text) == 102);
  CHECK(value_of(r.out, "points") == "101");
  CHECK(value_of(r.out, "derivative_step") == "0.01");
  CHECK(mottlab::parse_csv(text).size() == 101);
}

TEST_CASE("sweep without outputs prints CSV") {
  const auto r = run({"sweep", "--n", "2", "--m", "2", "--steps", "5"});
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 6);
  CHECK(r.out.rfind("lambda,energy", 0) == 0);
}

TEST_CASE("perturbative sweeps warn past their range") {
  const auto r = run({"sweep", "--n", "3", "--m", "3", "--method", "perturb1", "--steps", "3"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch();
  const auto cfg = (dir / "sweep.cfg").string();
  {
    std::ofstream f(cfg);
    f << "# sweep settings\n"
         "n = 2\n"
         "m = 2\n"
         "lambda-max = 0.5\n"
         "steps = 6\n"
         "method = \"perturb2\"\n";
  }
  const auto from_file = run({"sweep", "--config", cfg});
  REQUIRE(from_file.code == 0);
  const auto records = mottlab::parse_csv(from_file.out);
  REQUIRE(records.size() == 6);
  CHECK(records.back().lambda == 0.5);
  CHECK(from_file.err.find("warning:") != std::string::npos);

  const auto overridden = run({"sweep", "--config", cfg, "--steps", "3", "--method", "dense"});
  REQUIRE(overridden.code == 0);
  const auto fewer = mottlab::parse_csv(overridden.out);
  CHECK(fewer.size() == 3);
  CHECK(overridden.err.empty());

  CHECK(run({"sweep", "--config", (dir / "missing.cfg").string()}).code == 1);
}

TEST_CASE("sweep CSV and SVG are reproducible") {
  const auto dir = scratch();
  std::vector<std::string> texts;
  for (int rep = 0; rep < 2; ++rep) {
    const auto csv = (dir / ("rep" + std::to_string(rep) + ".csv")).string();
    const auto svg = (dir / ("rep" + std::to_string(rep) + ".svg")).string();
    const auto r = run({"sweep", "--n", "4", "--m", "4", "--steps", "21", "--workers", "3", "--csv", csv, "--plot",
                        svg});
    REQUIRE(r.code == 0);
    texts.push_back(read_file(csv) + read_file(svg));
  }
  CHECK(texts[0] == texts[1]);
  CHECK(texts[0].find("<svg") != std::string::npos);
}

TEST_CASE("sweep runtime errors exit with 2 and keep a partial CSV") {
  const auto csv = (scratch() / "partial.csv").string();
  const auto r = run({"sweep", "--n", "8", "--m", "8", "--steps", "3", "--csv", csv});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(read_file(csv).find("# error:") != std::string::npos);
  CHECK(run({"sweep", "--n", "3", "--m", "3", "--steps", "3", "--csv", "/nonexistent-dir/x.csv"}).code == 2);
}

TEST_CASE("ground reports energy and observables") {
  const auto r = run({"ground", "--n", "2", "--m", "2", "--lambda", "0.1"});
  CHECK(r.code == 0);
  CHECK(std::stod(value_of(r.out, "energy")) == doctest::Approx(-0.019803902718557).epsilon(1e-12));
  CHECK(value_of(r.out, "method") == "dense");
  CHECK(!value_of(r.out, "linear_entropy").empty());
  CHECK(!value_of(r.out, "negativity_nn").empty());
  CHECK(!value_of(r.out, "delta_n2").empty());

  const auto ccg = run({"ground", "--n", "4", "--m", "4", "--geometry", "ccg", "--lambda", "0.05"});
  CHECK(value_of(ccg.out, "alpha_hierarchy") == "holds");

  const auto lanczos = run({"ground", "--n", "6", "--m", "6", "--method", "lanczos", "--lambda", "0.2"});
  CHECK(lanczos.code == 0);
  CHECK(std::stod(value_of(lanczos.out, "residual")) <= 1e-10);

  const auto state = (scratch() / "state.txt").string();
  const auto op = (scratch() / "op.txt").string();
  CHECK(run({"ground", "--n", "2", "--m", "2", "--lambda", "0.1", "--state", state, "--operator", op}).code == 0);
  CHECK(read_file(state).rfind("2 2 3 ", 0) == 0);
  CHECK(read_file(op).rfind("3 ", 0) == 0);
}

TEST_CASE("ground beyond the dense cap is a runtime error") {
  const auto r = run({"ground", "--n", "8", "--m", "8", "--lambda", "0.1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("compare reports bounded deviations") {
  const auto r = run({"compare", "--n", "2", "--m", "2", "--method", "perturb2", "--lambda-max", "0.1"});
  CHECK(r.code == 0);
  CHECK(std::stod(value_of(r.out, "max_abs_dS")) <= 1e-3);
  CHECK(r.out.rfind("lambda,energy_exact", 0) == 0);
  CHECK(run({"compare", "--n", "2", "--m", "2", "--method", "dense"}).code == 1);
}
