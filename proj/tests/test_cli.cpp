#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = GEVRE_CLI_PATH;

int run(const std::string& args, const std::string& stderr_file = "") {
  std::string cmd = kCli + " " + args;
  if (!stderr_file.empty()) cmd += " 2>" + stderr_file;
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

struct WorkDir {
  fs::path path;
  explicit WorkDir(const std::string& name) : path(fs::current_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~WorkDir() { fs::remove_all(path); }
  std::string str(const std::string& sub = "") const {
    return (sub.empty() ? path : path / sub).string();
  }
};

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += (c == '\n');
  return n;
}

}  // namespace

TEST_CASE("blocks: yearly rule on a three-row fixture") {
  WorkDir wd("cli_blocks_yearly");
  spit(wd.path / "raw.csv",
       "date,value\n1984-01-02,1.0\n1984-05-01,3.2\n1984-09-09,2.1\n");
  int rc = run("blocks --input " + wd.str("raw.csv") + " --rule year --out " +
               wd.str("out"));
  CHECK(rc == 0);
  std::string maxima = slurp(wd.path / "out" / "maxima.csv");
  CHECK(count_lines(maxima) == 2);  // header + one record
  CHECK(maxima.find("1984") != std::string::npos);
  CHECK(maxima.find("3.2") != std::string::npos);
  CHECK(fs::exists(wd.path / "out" / "summary.txt"));
  CHECK(fs::exists(wd.path / "out" / "manifest.txt"));
}

TEST_CASE("blocks: monthly rule matches brute force") {
  WorkDir wd("cli_blocks_monthly");
  std::ostringstream csv;
  csv << "date,value\n";
  double max_jan = -1e9, max_feb = -1e9;
  for (int d = 1; d <= 28; ++d) {
    double vj = std::sin(0.7 * d) * 3.0 + d * 0.01;
    double vf = std::cos(0.3 * d) * 2.0;
    max_jan = std::max(max_jan, vj);
    max_feb = std::max(max_feb, vf);
    char line[80];
    std::snprintf(line, sizeof(line), "1990-01-%02d,%.17g\n", d, vj);
    csv << line;
  }
  for (int d = 1; d <= 28; ++d) {
    char line[80];
    std::snprintf(line, sizeof(line), "1990-02-%02d,%.17g\n", d,
                  std::cos(0.3 * d) * 2.0);
    csv << line;
  }
  spit(wd.path / "raw.csv", csv.str());
  int rc = run("blocks --input " + wd.str("raw.csv") + " --rule month --out " +
               wd.str("out"));
  CHECK(rc == 0);
  std::string maxima = slurp(wd.path / "out" / "maxima.csv");
  CHECK(count_lines(maxima) == 3);
  std::ostringstream want_jan, want_feb;
  want_jan << "1990-01";
  CHECK(maxima.find(want_jan.str()) != std::string::npos);

  std::istringstream in(maxima);
  std::string line;
  std::getline(in, line);  // header
  std::getline(in, line);
  CHECK(std::stod(line.substr(line.rfind(',') + 1)) == doctest::Approx(max_jan));
  std::getline(in, line);
  CHECK(std::stod(line.substr(line.rfind(',') + 1)) == doctest::Approx(max_feb));
}

TEST_CASE("blocks: missing input exits 2 and names the path") {
  WorkDir wd("cli_blocks_missing");
  int rc = run("blocks --input " + wd.str("absent.csv") + " --out " + wd.str("out"),
               wd.str("err.txt"));
  CHECK(rc == 2);
  std::string err = slurp(wd.path / "err.txt");
  CHECK(err.find("absent.csv") != std::string::npos);
  CHECK(err.find("error: E_DATA") != std::string::npos);
}

TEST_CASE("fit: smoke run, determinism, and failure modes") {
  WorkDir wd("cli_fit");
  REQUIRE(run("simulate --mu 3 --sigma 1.5 --eps 0.1 --tau 0 --groups 1 "
              "--per-group 50 --seed 7 --out " + wd.str("sim")) == 0);

  std::string fit_args = "fit --input " + wd.str("sim") + "/panel.csv "
                         "--mode fixed --iterations 2000 --burn-in 400 "
                         "--thin 2 --seed 11 --out ";
  REQUIRE(run(fit_args + wd.str("fit1")) == 0);
  std::string summary = slurp(wd.path / "fit1" / "summary.txt");
  CHECK(summary.find("mu") != std::string::npos);
  CHECK(summary.find("sigma") != std::string::npos);
  CHECK(summary.find("eps") != std::string::npos);
  CHECK(fs::exists(wd.path / "fit1" / "chain.csv"));
  CHECK(fs::exists(wd.path / "fit1" / "diagnostics.json"));

  REQUIRE(run(fit_args + wd.str("fit2")) == 0);
  CHECK(slurp(wd.path / "fit1" / "chain.csv") == slurp(wd.path / "fit2" / "chain.csv"));

  // absent group tag names the tag
  int rc = run("fit --input " + wd.str("sim") + "/panel.csv --mode random "
               "--group-tag city --iterations 500 --burn-in 100 --out " +
               wd.str("fit3"), wd.str("err.txt"));
  CHECK(rc == 2);
  CHECK(slurp(wd.path / "err.txt").find("city") != std::string::npos);
}

TEST_CASE("fit: random mode writes tau and delta columns") {
  WorkDir wd("cli_fit_random");
  REQUIRE(run("simulate --mu 10 --sigma 2 --eps 0.1 --tau 3 --groups 4 "
              "--per-group 30 --seed 5 --out " + wd.str("sim")) == 0);
  REQUIRE(run("fit --input " + wd.str("sim") + "/panel.csv --mode random "
              "--group-tag group --iterations 1500 --burn-in 300 --thin 2 "
              "--seed 2 --out " + wd.str("fit")) == 0);
  std::string chain = slurp(wd.path / "fit" / "chain.csv");
  CHECK(chain.find("tau_sq") != std::string::npos);
  CHECK(chain.find("delta_g01") != std::string::npos);
  CHECK(chain.find("delta_g04") != std::string::npos);
}

TEST_CASE("returns: constant chain and gumbel oracle") {
  WorkDir wd("cli_returns");
  std::ostringstream chain;
  chain << "mu,sigma,eps\n";
  for (int i = 0; i < 50; ++i) chain << "0,1,0\n";
  spit(wd.path / "chain.csv", chain.str());
  spit(wd.path / "maxima.csv",
       "block,maximum\nb1,1\nb2,2\nb3,3\nb4,2.5\n");

  REQUIRE(run("returns --chain " + wd.str("chain.csv") + " --input " +
              wd.str("maxima.csv") + " --k 10 --out " + wd.str("out")) == 0);
  std::string j = slurp(wd.path / "out" / "report_k10.json");
  CHECK(j.find("\"sd\": 0.0") != std::string::npos);
  CHECK(j.find("2.2503673273124") != std::string::npos);
  CHECK(fs::exists(wd.path / "out" / "rk_draws_k10.csv"));

  // k = 1 is a usage error
  int rc = run("returns --chain " + wd.str("chain.csv") + " --input " +
               wd.str("maxima.csv") + " --k 1 --out " + wd.str("out2"),
               wd.str("err.txt"));
  CHECK(rc == 1);

  // chain with missing columns is a schema error
  spit(wd.path / "bad_chain.csv", "mu,sigma\n0,1\n0,1\n");
  rc = run("returns --chain " + wd.str("bad_chain.csv") + " --input " +
           wd.str("maxima.csv") + " --k 10 --out " + wd.str("out3"),
           wd.str("err.txt"));
  CHECK(rc == 2);
  CHECK(slurp(wd.path / "err.txt").find("eps") != std::string::npos);
}

TEST_CASE("simulate and mle round trip") {
  WorkDir wd("cli_sim_mle");
  REQUIRE(run("simulate --mu 3 --sigma 1.5 --eps 0.1 --tau 0 --groups 1 "
              "--per-group 100 --seed 7 --out " + wd.str("a")) == 0);
  std::string panel = slurp(wd.path / "a" / "panel.csv");
  CHECK(count_lines(panel) == 101);

  REQUIRE(run("simulate --mu 3 --sigma 1.5 --eps 0.1 --tau 0 --groups 1 "
              "--per-group 100 --seed 7 --out " + wd.str("b")) == 0);
  CHECK(panel == slurp(wd.path / "b" / "panel.csv"));  // replayable

  REQUIRE(run("mle --input " + wd.str("a") + "/panel.csv --out " + wd.str("mle")) == 0);
  std::string j = slurp(wd.path / "mle" / "mle.json");
  CHECK(j.find("\"converged\": true") != std::string::npos);

  spit(wd.path / "tiny.csv", "block,maximum\nb1,1\nb2,2\nb3,3\n");
  int rc = run("mle --input " + wd.str("tiny.csv") + " --out " + wd.str("mle2"),
               wd.str("err.txt"));
  CHECK(rc == 2);
}

TEST_CASE("config file supplies defaults, flags win") {
  WorkDir wd("cli_config");
  REQUIRE(run("simulate --mu 3 --sigma 1 --eps 0.1 --tau 0 --groups 1 "
              "--per-group 40 --seed 3 --out " + wd.str("sim")) == 0);
  spit(wd.path / "model.cfg",
       "mode=fixed\niterations=800\nburn-in=200\nthin=2\nseed=9\n");
  REQUIRE(run("fit --config " + wd.str("model.cfg") + " --input " +
              wd.str("sim") + "/panel.csv --out " + wd.str("f1")) == 0);
  std::string manifest = slurp(wd.path / "f1" / "manifest.txt");
  CHECK(manifest.find("iterations=800") != std::string::npos);
  CHECK(manifest.find("seed=9") != std::string::npos);

  // flag overrides the config value
  REQUIRE(run("fit --config " + wd.str("model.cfg") + " --seed 123 --input " +
              wd.str("sim") + "/panel.csv --out " + wd.str("f2")) == 0);
  CHECK(slurp(wd.path / "f2" / "manifest.txt").find("seed=123") != std::string::npos);
}

TEST_CASE("replicate-study merges deterministically") {
  WorkDir wd("cli_study");
  std::string args = "replicate-study --replicates 4 --method mle --mu 3 "
                     "--sigma 1.5 --eps 0.1 --tau 0 --groups 1 --per-group 150 "
                     "--seed 21 --out ";
  REQUIRE(run(args + wd.str("s1")) == 0);
  REQUIRE(run(args + wd.str("s2")) == 0);
  CHECK(slurp(wd.path / "s1" / "study.csv") == slurp(wd.path / "s2" / "study.csv"));
  std::string j = slurp(wd.path / "s1" / "study.json");
  CHECK(j.find("\"replicates\": 4") != std::string::npos);
  CHECK(j.find("coverage") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("frobnicate", "/dev/null") == 1);
  CHECK(run("blocks", "/dev/null") == 1);  // missing required flags
  CHECK(run("", "/dev/null") == 1);        // missing subcommand
}

TEST_CASE("end-to-end pipeline is byte-identical across runs") {
  WorkDir wd("cli_e2e");
  std::ostringstream csv;
  csv << "date,value\n";
  for (int y = 1990; y < 1996; ++y) {
    for (int m = 1; m <= 12; ++m) {
      for (int d = 1; d <= 28; d += 3) {
        char line[80];
        double v = std::sin(y * 0.9 + m * 0.31 + d * 0.13) * 4.0 +
                   std::cos(d * 1.7) * 1.5;
        std::snprintf(line, sizeof(line), "%04d-%02d-%02d,%.17g\n", y, m, d, v);
        csv << line;
      }
    }
  }
  spit(wd.path / "raw.csv", csv.str());

  auto pipeline = [&]() {
    REQUIRE(run("blocks --input " + wd.str("raw.csv") + " --rule year --out " +
                wd.str("p")) == 0);
    REQUIRE(run("fit --input " + wd.str("p") + "/maxima.csv --mode fixed "
                "--iterations 1200 --burn-in 300 --thin 3 --seed 77 --out " +
                wd.str("p")) == 0);
    REQUIRE(run("returns --chain " + wd.str("p") + "/chain.csv --input " +
                wd.str("p") + "/maxima.csv --k 10 --k 50 --out " + wd.str("p")) == 0);
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(wd.path / "p")) {
      files[entry.path().filename().string()] = slurp(entry.path());
    }
    fs::remove_all(wd.path / "p");
    return files;
  };

  auto first = pipeline();
  auto second = pipeline();
  CHECK(first.size() >= 9);
  CHECK(first == second);
}
