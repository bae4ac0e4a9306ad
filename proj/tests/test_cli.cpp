#include "doctest.h"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI; stderr is discarded unless merged into the output.
Run run(const std::string& args, bool with_stderr = false) {
  const std::string cmd = std::string(HILBERT_CLI) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string kDisk = "--spec '{\"type\":\"disk\"}'";
const std::string kSquare = "--spec '{\"type\":\"square\"}'";
const std::string kSymmetric = "--params 1.5707963267948966 3.6651914291880923 5.759586531581287";

}  // namespace

TEST_CASE("dist: examples") {
  const auto a = run("dist " + kDisk + " --p 0 0 --q 0.5 0");
  CHECK(a.code == 0);
  CHECK(a.out == "0.549306\n");
  const auto b = run("dist " + kDisk + " --p 0.3 -0.2 --q 0.3 -0.2");
  CHECK(b.code == 0);
  CHECK(b.out == "0\n");
  const auto c = run("dist " + kDisk + " --p 2 0 --q 0 0", true);
  CHECK(c.code == 2);
  CHECK(c.out.find("point not interior") != std::string::npos);
}

TEST_CASE("dist: spec from a file and usage errors") {
  const auto path = std::filesystem::temp_directory_path() / "hilbert_cli_spec.json";
  std::ofstream(path) << R"({"type":"ellipse","center":[0,0],"semi_axes":[2,1],"rotation":0})";
  const auto a = run("dist --spec " + path.string() + " --p 0 0 --q 1 0");
  CHECK(a.code == 0);
  CHECK(a.out == "0.549306\n");
  std::filesystem::remove(path);
  CHECK(run("dist --spec /nonexistent/spec.json --p 0 0 --q 0.5 0").code == 2);
  CHECK(run("dist " + kDisk + " --p 0 0").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("area: examples") {
  const auto disk = nlohmann::json::parse(run("area " + kDisk + " " + kSymmetric).out);
  CHECK(disk["value"].get<double>() == doctest::Approx(3.14159265358979).epsilon(1e-3));
  CHECK_FALSE(disk["diverged"].get<bool>());

  const auto corner = run("area " + kSquare + " --params 0 0.375 0.625");
  CHECK(corner.code == 0);
  CHECK(nlohmann::json::parse(corner.out)["diverged"].get<bool>());

  const auto coarse = nlohmann::json::parse(run("area " + kDisk + " --params 0.3 2.0 4.4 --tol 2e-3").out);
  const auto fine = nlohmann::json::parse(run("area " + kDisk + " --params 0.3 2.0 4.4 --tol 1e-3").out);
  CHECK(std::abs(fine["value"].get<double>() - coarse["value"].get<double>()) < coarse["error_bound"].get<double>());

  const auto report = nlohmann::json::parse(run("area " + kDisk + " " + kSymmetric + " --report").out);
  CHECK(report.contains("corners"));
  CHECK(run("area " + kSquare + " --params 0.05 0.2 0.6").code == 2);
}

TEST_CASE("sweep: schema, determinism and errors") {
  const std::string args = "sweep --family pball --grid 2,4 --budget 2 --delta-budget 3 --seed 5";
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "label,param,delta_thin,delta_4pt,sup_area,diverged,seed");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 2);
  CHECK(run("sweep --family pball --grid").code == 2);
  CHECK(run("sweep --family pball --grid 0.5").code == 2);
  CHECK(run("sweep --family polygon --grid 3.5").code == 2);
  CHECK(run("sweep --family smooth --grid 2").code == 2);
}

TEST_CASE("sweep: sup_area grows from the disk to the 4-ball") {
  const auto out = run("sweep --family pball --grid 2,4").out;
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  std::array<double, 2> sup{};
  for (double& s : sup) {
    std::getline(lines, line);
    std::istringstream fields(line);
    std::string field;
    for (int i = 0; i < 5; ++i) std::getline(fields, field, ',');
    s = std::stod(field);
  }
  CHECK(sup[1] > sup[0]);
}

TEST_CASE("verify and normalize: examples") {
  const auto graph = run("verify graph");
  CHECK(graph.code == 0);
  CHECK(graph.out.rfind("PASS graph", 0) == 0);
  CHECK(run("verify lemma-z9").code == 2);

  const auto n = nlohmann::json::parse(run("normalize " + kDisk + " " + kSymmetric).out);
  CHECK(n["alpha"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(run("normalize " + kSquare + " --params 0.05 0.2 0.6").code == 2);

  const auto path = std::filesystem::temp_directory_path() / "hilbert_cli_out.json";
  CHECK(run("normalize " + kDisk + " " + kSymmetric + " --out " + path.string()).out.empty());
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in)["alpha"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  std::filesystem::remove(path);
}

TEST_CASE("config file supplies defaults that flags override") {
  const auto path = std::filesystem::temp_directory_path() / "hilbert_cli.toml";
  std::ofstream(path) << "[dist]\nspec = '{\"type\":\"disk\"}'\n";
  CHECK(run("--config " + path.string() + " dist --p 0 0 --q 0.5 0").out == "0.549306\n");
  CHECK(run("--config " + path.string() + " dist --spec '{\"type\":\"disk\",\"radius\":2}' --p 0 0 --q 1 0").out ==
        "0.549306\n");
  std::filesystem::remove(path);
}
