// Runs the installed-layout flagcert binary; its path comes from the build.
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FLAGCERT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("flagcert_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("enumerate") {
  Run r = run("enumerate --order 5");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "582");
  r = run("enumerate --order 3 --type-order 1");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "15");
  r = run("enumerate --order 0");
  CHECK(r.status == 0);
  CHECK(r.out == "1\n0:\n");
  CHECK(run("enumerate --order 7").status == 2);
  CHECK(run("enumerate").status == 2);
  CHECK(run("frobnicate").status == 2);
}

TEST_CASE("verify builtins") {
  CHECK(run("verify --builtin p3").status == 0);
  CHECK(run("verify --builtin p3-order3").status == 0);
  const Run r = run("--format json verify --builtin k2e1");
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["bound"] == "3/4");
  CHECK(run("verify --builtin nope").status == 2);
  CHECK(run("verify").status == 2);
}

TEST_CASE("verify a file, then a lowered bound") {
  const fs::path dir = scratch_dir();
  const fs::path cert = dir / "p3.json";
  REQUIRE(run("verify --builtin p3 --write " + cert.string()).status == 0);
  CHECK(run("verify " + cert.string()).status == 0);

  nlohmann::json j;
  std::ifstream(cert) >> j;
  j["bound"] = "11/25";  // 0.44
  const fs::path lowered = dir / "lowered.json";
  std::ofstream(lowered) << j.dump();
  const Run r = run("--format json verify " + lowered.string());
  CHECK(r.status == 1);
  const auto out = nlohmann::json::parse(r.out);
  CHECK(out["ok"] == false);
  CHECK(out["min_slack"].get<std::string>().front() == '-');
  CHECK(out.contains("min_slack_graph"));

  std::ofstream(dir / "broken.json") << "{\"flags\": 3}";
  CHECK(run("verify " + (dir / "broken.json").string()).status == 2);
  CHECK(run("verify " + (dir / "missing.json").string()).status == 2);
  fs::remove_all(dir);
}

TEST_CASE("construct") {
  Run r = run("construct --builtin c4 --target 3:101");
  CHECK(r.status == 0);
  CHECK(first_line(r.out) == "2/5");
  r = run("construct --builtin c3 --target C3");
  CHECK(first_line(r.out) == "1/4");
  r = run("construct --builtin k12 --target K12");
  CHECK(r.status == 0);
  CHECK(std::abs(std::stod(first_line(r.out)) - (6 - 4 * std::sqrt(2.0))) < 1e-9);
  CHECK(run("construct --builtin nope").status == 2);
}

TEST_CASE("sdp export and round") {
  const fs::path dir = scratch_dir();
  const fs::path problem = dir / "p3.dat-s";
  const fs::path solution = dir / "a.txt";
  const fs::path cert = dir / "cert.json";
  REQUIRE(run("sdp export --target 3:101 --order 5 --out " + problem.string()).status == 0);
  CHECK(fs::file_size(problem) > 0);
  REQUIRE(run("sdp dump --builtin p3 --out " + solution.string()).status == 0);
  const Run r = run("sdp round --problem " + problem.string() + " --solution " + solution.string() +
                    " --denominators 100,10000 --ordered-flags --out " + cert.string());
  CHECK(r.status == 0);
  CHECK(run("verify " + cert.string()).status == 0);

  // Indefinite input.
  std::ofstream bad(dir / "bad.txt");
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 15; ++j) bad << (i == j ? (i == 4 ? -1 : 1) : 0) << ' ';
    bad << '\n';
  }
  bad << "1\n";
  bad.close();
  const Run f = run("sdp round --problem " + problem.string() + " --solution " + (dir / "bad.txt").string());
  CHECK(f.status == 1);
  CHECK(f.out.find("PSD") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("thread count does not change output") {
  const Run one = run("--threads 1 --format json verify --builtin c4");
  const Run many = run("--threads 4 --format json verify --builtin c4");
  CHECK(one.status == 0);
  CHECK(one.out == many.out);
}
