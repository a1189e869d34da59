#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "bivexit/io.hpp"
#include "bivexit/univariate.hpp"

using namespace bivexit;

namespace {

const std::string kCli = BIVEXIT_CLI_PATH;
const std::string kTmp = BIVEXIT_TMP_DIR;

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("csv ingest: happy path, degrees, wrapping") {
  std::string p = kTmp + "/ingest_ok.csv";
  spit(p, "theta_u,theta_v\n0.1,6.2\n7.0,0.0\n");
  AngleDataset ds = ingest_csv(p);
  REQUIRE(ds.size() == 2);
  CHECK(ds.rows[0].first == doctest::Approx(0.1));
  CHECK(ds.rows[0].second == doctest::Approx(6.2));
  CHECK(ds.rows[1].first == doctest::Approx(7.0 - kTwoPi).epsilon(1e-12));

  std::string pd = kTmp + "/ingest_deg.csv";
  spit(pd, "theta_u,theta_v\n180,90\n");
  AngleDataset deg = ingest_csv(pd, true);
  CHECK(deg.rows[0].first == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(deg.rows[0].second == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("csv ingest: error reporting with line numbers") {
  std::string p = kTmp + "/ingest_bad.csv";
  spit(p, "theta_u,theta_v\n0.1,0.2\nfoo,0.3\n");
  try {
    ingest_csv(p);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  spit(p, "wrong,header\n1,2\n");
  CHECK_THROWS_AS(ingest_csv(p), DataError);
  spit(p, "theta_u,theta_v\n1,2,3\n");
  CHECK_THROWS_AS(ingest_csv(p), DataError);
  spit(p, "theta_u,theta_v\nnan,2\n");
  CHECK_THROWS_AS(ingest_csv(p), DataError);
  CHECK_THROWS_AS(ingest_csv(kTmp + "/does_not_exist.csv"), DataError);
}

TEST_CASE("format_value round-trips doubles") {
  for (double v : {0.1, kPi, 1.0 / 3.0, 1e-300, -2.5e17}) {
    CHECK(std::stod(format_value(v)) == v);
  }
}

TEST_CASE("sample command is deterministic and re-ingestible") {
  std::string out1 = kTmp + "/s1.csv", out2 = kTmp + "/s2.csv";
  CHECK(run("sample --model bc+ --psi-abs 0.5 --n 100 --seed 1 --out " + out1) ==
        0);
  CHECK(run("sample --model bc+ --psi-abs 0.5 --n 100 --seed 1 --out " + out2) ==
        0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1).substr(0, 16) == "theta_u,theta_v\n");
  AngleDataset ds = ingest_csv(out1);
  CHECK(ds.size() == 100);
  // different seed changes the bytes
  CHECK(run("sample --model bc+ --psi-abs 0.5 --n 100 --seed 2 --out " + out2) ==
        0);
  CHECK(slurp(out1) != slurp(out2));
}

TEST_CASE("sample command covers every model") {
  for (std::string m :
       {"bs", "bc+", "bc-", "shifted", "mobius-marginal", "vm-copula", "plane",
        "cylinder"}) {
    std::string out = kTmp + "/model_out.csv";
    std::string extra;
    if (m == "shifted") extra = " --xi 0.1,0.0";
    CHECK(run("sample --model '" + m + "' --psi-abs 0.4 --rho 0.5 --n 20 --seed 3 --out " +
              out + extra) == 0);
  }
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("sample --model nosuch --n 10 --seed 1 --out " + kTmp + "/x.csv") ==
        1);
  CHECK(run("sample --model bc+ --psi-abs 1.5 --n 10 --seed 1 --out " + kTmp +
            "/x.csv") == 1);
  CHECK(run("nosuchcommand") == 1);
  CHECK(run("pivotal --simulate --rho 0.5 --n 5 --seed 1") == 1);
  CHECK(run("fit --in " + kTmp + "/missing.csv --models nosuchmodel") != 0);
}

TEST_CASE("data errors exit with code 2") {
  std::string bad = kTmp + "/bad_data.csv";
  spit(bad, "theta_u,theta_v\n0.4,oops\n");
  CHECK(run("fit --in " + bad) == 2);
  CHECK(run("gof --in " + kTmp + "/really_missing.csv --model bc+ --psi-abs 0.3") ==
        2);
}

TEST_CASE("simstudy output shape and worker independence") {
  std::string o1 = kTmp + "/ss1.csv", o2 = kTmp + "/ss2.csv";
  CHECK(run("simstudy --n 10,20 --psi 0.3,0.5 --replicates 40 --seed 9 "
            "--workers 1 --out " + o1) == 0);
  CHECK(run("simstudy --n 10,20 --psi 0.3,0.5 --replicates 40 --seed 9 "
            "--workers 4 --out " + o2) == 0);
  CHECK(slurp(o1) == slurp(o2));
  std::string body = slurp(o1);
  CHECK(body.substr(0, 12) == "n,0.3,0.5\n10");
  CHECK(body.find("\ninf,") != std::string::npos);
}

TEST_CASE("fit and gof reports on synthetic data") {
  std::string data = kTmp + "/fitdata.csv";
  REQUIRE(run("sample --model vm-copula --mu1 0.5 --mu2 1.5 --kappa1 2 "
              "--kappa2 1 --psi-abs 0.6 --n 150 --seed 5 --out " + data) == 0);
  std::string rep = kTmp + "/fit.json";
  CHECK(run("fit --in " + data + " --models vm-copula,shieh-johnson --seed 1 "
            "--starts 2 --out " + rep) == 0);
  std::string body = slurp(rep);
  for (const char* key : {"\"model\"", "\"loglik\"", "\"aic\"", "\"bic\"",
                          "\"converged\"", "\"seed\"", "\"version\"",
                          "\"ranking\"", "\"by_aic\"", "\"command\""})
    CHECK(body.find(key) != std::string::npos);

  std::string gof = kTmp + "/gof.json";
  CHECK(run("gof --in " + data + " --model vm-copula --mu1 0.5 --mu2 1.5 "
            "--kappa1 2 --kappa2 1 --psi-abs 0.6 --out " + gof) == 0);
  std::string gbody = slurp(gof);
  CHECK(gbody.find("\"normalization\"") != std::string::npos);
  CHECK(gbody.find("\"marginal_u_ks\"") != std::string::npos);
  CHECK(gbody.find("\"chi2\"") != std::string::npos);
}

TEST_CASE("fit requires at least ten rows and a model list") {
  std::string tiny = kTmp + "/tiny.csv";
  spit(tiny, "theta_u,theta_v\n0.1,0.2\n0.3,0.4\n");
  CHECK(run("fit --in " + tiny) == 1);
}

TEST_CASE("pivotal command on file data and simulated data") {
  std::string data = kTmp + "/pivdata.csv";
  REQUIRE(run("sample --model bc+ --psi-abs 0.5 --n 400 --seed 7 --out " +
              data) == 0);
  std::string rep = kTmp + "/piv.json";
  CHECK(run("pivotal --in " + data + " --rho 0.5 --out " + rep) == 0);
  std::string body = slurp(rep);
  CHECK(body.find("\"deciles\"") != std::string::npos);
  CHECK(body.find("\"ks\"") != std::string::npos);
  CHECK(run("pivotal --simulate --rho 0.5 --d 3 --n 500 --seed 8") == 0);
}

TEST_CASE("oracle command produces a report") {
  std::string rep = kTmp + "/oracle.json";
  CHECK(run("oracle --d 2 --rho 0.5 --dt 1e-4 --paths 150 --seed 9 --out " +
            rep) == 0);
  std::string body = slurp(rep);
  CHECK(body.find("\"mean_inner_product\"") != std::string::npos);
  CHECK(body.find("\"ks\"") != std::string::npos);
}

TEST_CASE("json sidecar accompanies samples") {
  std::string out = kTmp + "/side.csv";
  REQUIRE(run("sample --model plane --psi-abs 0.3 --n 25 --seed 4 --out " +
              out) == 0);
  std::string side = slurp(out + ".json");
  for (const char* key : {"\"model\"", "\"params\"", "\"seed\"", "\"version\"",
                          "\"command\"", "\"elapsed_seconds\""})
    CHECK(side.find(key) != std::string::npos);
  CHECK(slurp(out).substr(0, 4) == "x,y\n");
}
