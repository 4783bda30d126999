#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" AUTOSAS_CLI "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

const fs::path kFixture = fs::path(AUTOSAS_FIXTURES) / "synthetic30";

double oracle_kappa(const std::vector<int>& h, const std::vector<int>& m, int n) {
  std::vector<std::vector<double>> o(n, std::vector<double>(n, 0.0));
  std::vector<double> rh(n, 0.0), rm(n, 0.0);
  for (std::size_t k = 0; k < h.size(); ++k) {
    o[h[k]][m[k]] += 1;
    rh[h[k]] += 1;
    rm[m[k]] += 1;
  }
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = (i - j) * (i - j) / double((n - 1) * (n - 1));
      num += w * o[i][j];
      den += w * rh[i] * rm[j] / h.size();
    }
  return 1 - num / den;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("evaluate on the bundled fixture matches the golden report") {
  const auto out = autosas::testing::scratch_dir("cli-golden");
  REQUIRE(run("evaluate --config " + quoted(kFixture / "config.json") + " --out " + quoted(out)) == 0);
  const std::string report = slurp(out / "report.json");
  CHECK(report == slurp(kFixture / "golden_report.json"));
  const auto j = nlohmann::json::parse(report);
  for (const auto& p : j["prompts"]) {
    std::vector<int> h, m;
    for (const auto& t : p["test_predictions"]) {
      h.push_back(t["human"].get<int>());
      m.push_back(t["predicted"].get<int>());
    }
    CHECK(std::abs(oracle_kappa(h, m, 4) - p["test_qwk"].get<double>()) < 1e-12);
  }
}

TEST_CASE("train then score is deterministic and in range") {
  const auto out = autosas::testing::scratch_dir("cli-score");
  REQUIRE(run("train --config " + quoted(kFixture / "config.json") + " --out " + quoted(out)) == 0);
  const std::string args = "score --model " + quoted(out / "models") + " --responses " + quoted(kFixture / "responses.tsv");
  REQUIRE(run(args + " --output " + quoted(out / "a.tsv")) == 0);
  REQUIRE(run(args + " --output " + quoted(out / "b.tsv")) == 0);
  const std::string a = slurp(out / "a.tsv");
  CHECK(a == slurp(out / "b.tsv"));
  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    std::string id, prompt;
    int grade;
    f >> id >> prompt >> grade;
    CHECK(grade >= 0);
    CHECK(grade <= 3);
    ++rows;
  }
  CHECK(rows == 30);
  const auto before = slurp(kFixture / "responses.tsv");
  CHECK(run("feedback --model " + quoted(out / "models" / "prompt-s1.json") + " --responses " +
            quoted(kFixture / "responses.tsv") + " --id 3 --format json --output " + quoted(out / "fb.json")) == 0);
  CHECK(nlohmann::json::parse(slurp(out / "fb.json")).size() == 1);
  CHECK(slurp(kFixture / "responses.tsv") == before);
}

TEST_CASE("disabling every group fails before any work") {
  const auto out = autosas::testing::scratch_dir("cli-none") / "never";
  std::string flags;
  for (const char* g : {"embeddings", "pos-ngrams", "weighted-keywords", "prompt-overlap", "lexical-overlap",
                        "logical-operators", "temporal", "length-stats", "word-freq-difficulty"})
    flags += std::string(" --disable-") + g;
  CHECK(run("evaluate --config " + quoted(kFixture / "config.json") + " --out " + quoted(out) + flags) == 2);
  CHECK(!fs::exists(out));
}

TEST_CASE("distinct exit codes") {
  const auto dir = autosas::testing::scratch_dir("cli-errors");
  CHECK(run("evaluate --config " + quoted(dir / "absent.json")) == 3);
  CHECK(run("score --model " + quoted(dir / "absent.json") + " --responses x.tsv") == 3);
  std::ofstream(dir / "garbage.json") << "{not json";
  CHECK(run("score --model " + quoted(dir / "garbage.json") + " --responses x.tsv") == 4);
  std::ofstream(dir / "future.json") << R"({"format": "autosas-model", "version": 99})";
  CHECK(run("score --model " + quoted(dir / "future.json") + " --responses x.tsv") == 5);
  CHECK(run("frobnicate") == 64);
  CHECK(run("evaluate --seed notanumber") == 64);
  CHECK(run("evaluate", "env -u AUTOSAS_CONFIG") == 2);
}

TEST_CASE("config path from the environment and overrides") {
  const auto out = autosas::testing::scratch_dir("cli-env");
  CHECK(run("train --seed 3 --prompt s1 --disable-temporal --out " + quoted(out),
            "AUTOSAS_CONFIG=" + quoted(kFixture / "config.json")) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(j["config"]["seed"] == 3);
  CHECK(j["prompts"].size() == 1);
  for (const auto& g : j["config"]["enabled_groups"]) CHECK(g != "temporal");
}

TEST_CASE("ablate writes a ranked report") {
  const auto out = autosas::testing::scratch_dir("cli-ablate");
  REQUIRE(run("ablate --config " + quoted(kFixture / "config.json") + " --out " + quoted(out)) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "ablation.json"));
  REQUIRE(j["rows"].size() == 9);
  for (std::size_t k = 1; k < j["rows"].size(); ++k)
    CHECK(j["rows"][k - 1]["fall"].get<double>() >= j["rows"][k]["fall"].get<double>());
}

}  // TEST_SUITE
