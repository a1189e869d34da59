// Command-line toolkit for the Brownian-exit bivariate families:
// sampling, fitting with AIC/BIC ranking, the relative-MSE simulation
// study, the pivotal test, the path-simulation oracle, and GOF reports.

#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bivexit/bc_model.hpp"
#include "bivexit/brownian.hpp"
#include "bivexit/bs_model.hpp"
#include "bivexit/extended.hpp"
#include "bivexit/fitting.hpp"
#include "bivexit/io.hpp"
#include "bivexit/quadrature.hpp"
#include "bivexit/simstudy.hpp"
#include "bivexit/univariate.hpp"

namespace bx = bivexit;
using nlohmann::json;

static const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace {

std::string g_command_line;

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

json report_base(std::uint64_t seed, const Timer& timer) {
  json j;
  j["version"] = kVersion;
  j["command"] = g_command_line;
  j["seed"] = seed;
  j["elapsed_seconds"] = timer.elapsed();
  return j;
}

void emit_report(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw bx::DataError(out_path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
  if (!out) throw bx::DataError(out_path + ": write failed");
}

json ks_json(const bx::KsResult& r) {
  return {{"statistic", r.statistic}, {"p_value", r.p_value}};
}

// ---------------------------------------------------------------------
// sample

struct SampleOpts {
  std::string model, out;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  int d = 2;
  double rho = 0.5;
  double q_angle = 0.0;
  int q_det = +1;
  std::vector<double> xi;
  double psi_abs = 0.0, psi_arg = 0.0;
  double mu1 = 0.0, mu2 = 0.0, kappa1 = 1.0, kappa2 = 1.0;
  double alpha1_abs = 0.0, alpha1_arg = 0.0;
  double alpha2_abs = 0.0, alpha2_arg = 0.0;
};

bx::Matrix make_q(int d, double angle, int det_sign) {
  if (det_sign != 1 && det_sign != -1)
    throw UsageError("--q-det must be +1 or -1");
  if (d == 2) return bx::rotation2(angle, det_sign);
  if (angle != 0.0) throw UsageError("--q-angle requires --d 2");
  bx::Matrix q = bx::Matrix::identity(d);
  if (det_sign < 0) q(d - 1, d - 1) = -1.0;
  return q;
}

void run_sample(const SampleOpts& o) {
  Timer timer;
  bx::RngStream rng(o.seed, 0);
  std::complex<double> psi = std::polar(o.psi_abs, o.psi_arg);
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  json params;

  auto circle_rows = [&](const bx::CirclePairSample& s) {
    header = {"theta_u", "theta_v"};
    for (std::size_t j = 0; j < s.size(); ++j)
      rows.push_back({bx::wrap_angle(std::arg(s.zu[j])),
                      bx::wrap_angle(std::arg(s.zv[j]))});
  };
  auto vector_rows = [&](const bx::PairSample& s) {
    for (int i = 1; i <= s.d; ++i) header.push_back("u" + std::to_string(i));
    for (int i = 1; i <= s.d; ++i) header.push_back("v" + std::to_string(i));
    for (std::size_t j = 0; j < s.u.size(); ++j) {
      std::vector<double> row(s.u[j]);
      row.insert(row.end(), s.v[j].begin(), s.v[j].end());
      rows.push_back(std::move(row));
    }
  };

  if (o.model == "bs") {
    bx::BSParams p{o.rho, make_q(o.d, o.q_angle, o.q_det), o.d};
    vector_rows(bx::bs_sample(p, o.n, rng));
    params = {{"d", o.d}, {"rho", o.rho}, {"q_angle", o.q_angle},
              {"q_det", o.q_det}};
  } else if (o.model == "bc+" || o.model == "bc-") {
    bx::BCParams p{psi, o.model == "bc+" ? +1 : -1};
    circle_rows(bx::bc_sample(p, o.n, rng));
    params = {{"psi_abs", o.psi_abs}, {"psi_arg", o.psi_arg},
              {"sign", p.sign}};
  } else if (o.model == "shifted") {
    bx::Vec xi(o.d, 0.0);
    if (!o.xi.empty()) {
      if (static_cast<int>(o.xi.size()) != o.d)
        throw UsageError("--xi needs exactly d components");
      xi = o.xi;
    }
    bx::ShiftedParams p{o.rho, make_q(o.d, o.q_angle, o.q_det), o.d, xi};
    vector_rows(bx::shifted_sample(p, o.n, rng));
    params = {{"d", o.d}, {"rho", o.rho}, {"q_angle", o.q_angle},
              {"q_det", o.q_det}, {"xi", o.xi.empty() ? std::vector<double>(o.d, 0.0) : o.xi}};
  } else if (o.model == "mobius-marginal") {
    bx::MobiusMarginalParams p{psi, std::polar(o.alpha1_abs, o.alpha1_arg),
                               std::polar(o.alpha2_abs, o.alpha2_arg)};
    circle_rows(bx::mobius_marginal_sample(p, o.n, rng));
    params = {{"psi_abs", o.psi_abs},       {"psi_arg", o.psi_arg},
              {"alpha1_abs", o.alpha1_abs}, {"alpha1_arg", o.alpha1_arg},
              {"alpha2_abs", o.alpha2_abs}, {"alpha2_arg", o.alpha2_arg}};
  } else if (o.model == "vm-copula") {
    bx::VMCopulaParams p{o.mu1, o.mu2, o.kappa1, o.kappa2, psi};
    header = {"theta_u", "theta_v"};
    for (const auto& [a, b] : bx::vm_copula_sample(p, o.n, rng))
      rows.push_back({a, b});
    params = {{"mu1", o.mu1},       {"mu2", o.mu2},
              {"kappa1", o.kappa1}, {"kappa2", o.kappa2},
              {"psi_abs", o.psi_abs}, {"psi_arg", o.psi_arg}};
  } else if (o.model == "plane") {
    header = {"x", "y"};
    for (const auto& [x, y] : bx::plane_sample(psi, o.n, rng))
      rows.push_back({x, y});
    params = {{"psi_abs", o.psi_abs}, {"psi_arg", o.psi_arg}};
  } else if (o.model == "cylinder") {
    header = {"theta", "x"};
    for (const auto& [z, x] : bx::cylinder_sample(psi, o.n, rng))
      rows.push_back({bx::wrap_angle(std::arg(z)), x});
    params = {{"psi_abs", o.psi_abs}, {"psi_arg", o.psi_arg}};
  } else {
    throw UsageError("unknown model '" + o.model + "'");
  }

  bx::write_csv(o.out, header, rows);
  json sidecar = report_base(o.seed, timer);
  sidecar["model"] = o.model;
  sidecar["params"] = params;
  sidecar["n"] = o.n;
  sidecar["output"] = o.out;
  emit_report(sidecar, o.out + ".json");
  std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// ---------------------------------------------------------------------
// fit

struct FitOpts {
  std::string in, out;
  bool degrees = false;
  std::vector<std::string> models = {"vm-copula", "sengupta", "shieh-johnson"};
  std::uint64_t seed = 0;
  int starts = 5;
};

json fit_json(const bx::FitResult& f, std::uint64_t seed) {
  json params = json::object();
  for (const auto& [name, value] : f.params) params[name] = value;
  return {{"model", f.model},       {"params", params},
          {"loglik", f.loglik},     {"aic", f.aic},
          {"bic", f.bic},           {"converged", f.converged},
          {"seed", seed},           {"version", kVersion},
          {"k", f.k},               {"n", f.n},
          {"iterations", f.iterations}};
}

void run_fit(const FitOpts& o) {
  Timer timer;
  if (o.models.empty()) throw UsageError("empty model list");
  bx::AngleDataset ds = bx::ingest_csv(o.in, o.degrees);
  if (ds.size() < 10) throw UsageError("fit requires at least 10 rows");
  std::vector<bx::AnglePair> sample(ds.rows.begin(), ds.rows.end());

  std::vector<bx::FitResult> fits;
  json failures = json::array();
  for (const std::string& m : o.models) {
    try {
      if (m == "vm-copula")
        fits.push_back(bx::vm_copula_fit(sample, o.starts, o.seed));
      else if (m == "sengupta")
        fits.push_back(bx::sengupta_fit(sample, o.starts, o.seed));
      else if (m == "shieh-johnson")
        fits.push_back(bx::shieh_johnson_fit(sample, o.starts, o.seed));
      else
        throw UsageError("unknown model '" + m + "'");
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      failures.push_back({{"model", m}, {"error", e.what()}});
    }
  }
  if (fits.empty()) throw std::runtime_error("all model fits failed");

  json rep = report_base(o.seed, timer);
  rep["input"] = o.in;
  rep["n"] = ds.size();
  rep["fits"] = json::array();
  for (const auto& f : fits) rep["fits"].push_back(fit_json(f, o.seed));
  if (!failures.empty()) rep["failures"] = failures;

  bx::ModelRanking rank = bx::model_select(fits);
  json by_aic = json::array(), by_bic = json::array();
  for (std::size_t i : rank.by_aic) by_aic.push_back(fits[i].model);
  for (std::size_t i : rank.by_bic) by_bic.push_back(fits[i].model);
  rep["ranking"] = {{"by_aic", by_aic}, {"by_bic", by_bic}};
  rep["elapsed_seconds"] = timer.elapsed();
  emit_report(rep, o.out);
}

// ---------------------------------------------------------------------
// simstudy

struct SimstudyOpts {
  std::string out;
  std::vector<std::size_t> sizes = {10, 20, 30, 50, 100};
  std::vector<double> psi = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t replicates = 2000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

void run_simstudy(const SimstudyOpts& o) {
  Timer timer;
  bx::StudyGrid grid;
  grid.sample_sizes = o.sizes;
  grid.psi_values = o.psi;
  grid.replicates = o.replicates;
  grid.master_seed = o.seed;
  bx::StudyResult res = bx::run_simstudy(grid, o.workers);

  std::ostringstream csv;
  csv << "n";
  for (double p : grid.psi_values) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", p);
    csv << "," << buf;
  }
  csv << "\n";
  for (std::size_t i = 0; i < grid.sample_sizes.size(); ++i) {
    csv << grid.sample_sizes[i];
    for (double v : res.ratio[i]) csv << "," << bx::format_value(v);
    csv << "\n";
  }
  csv << "inf";
  for (double v : res.analytic_row) csv << "," << bx::format_value(v);
  csv << "\n";

  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(o.out);
    if (!out) throw bx::DataError(o.out + ": cannot open file for writing");
    out << csv.str();
    if (!out) throw bx::DataError(o.out + ": write failed");
    std::cout << "wrote " << o.out << " in " << timer.elapsed() << " s\n";
  }
}

// ---------------------------------------------------------------------
// pivotal

struct PivotalOpts {
  std::string in, out;
  bool degrees = false;
  bool simulate = false;
  int d = 2;
  double rho = 0.5;
  double true_rho = -1.0;  // simulate-only; defaults to rho
  double q_angle = 0.0;
  int q_det = +1;
  std::size_t n = 5000;
  std::uint64_t seed = 0;
};

double beta_quantile(double a, double b, double p) {
  return bx::find_root(
      [&](double x) { return bx::reg_inc_beta(x, a, b) - p; }, 1e-12,
      1.0 - 1e-12, 1e-12);
}

void run_pivotal(const PivotalOpts& o) {
  Timer timer;
  bx::PairSample sample;
  if (o.simulate) {
    double rho0 = o.true_rho >= 0.0 ? o.true_rho : o.rho;
    bx::BSParams gen{rho0, make_q(o.d, o.q_angle, o.q_det), o.d};
    bx::RngStream rng(o.seed, 0);
    sample = bx::bs_sample(gen, o.n, rng);
  } else {
    if (o.in.empty()) throw UsageError("pivotal needs --in or --simulate");
    bx::AngleDataset ds = bx::ingest_csv(o.in, o.degrees);
    sample.d = 2;
    for (const auto& [a, b] : ds.rows) {
      sample.u.push_back({std::cos(a), std::sin(a)});
      sample.v.push_back({std::cos(b), std::sin(b)});
    }
  }
  if (sample.u.size() < 10) throw UsageError("pivotal requires at least 10 pairs");

  bx::BSParams tested{o.rho, make_q(sample.d, o.q_angle, o.q_det), sample.d};
  bx::KsResult ks = bx::pivotal_test(sample, tested);

  std::vector<double> t(sample.u.size());
  for (std::size_t j = 0; j < t.size(); ++j)
    t[j] = bx::pivotal_statistic(sample.u[j], sample.v[j], tested);
  std::sort(t.begin(), t.end());
  double a = 0.5 * (sample.d - 1), b = 0.5;
  json emp = json::array(), theo = json::array();
  for (int k = 1; k <= 9; ++k) {
    double p = 0.1 * k;
    std::size_t idx = std::min<std::size_t>(
        t.size() - 1, static_cast<std::size_t>(p * t.size()));
    emp.push_back(t[idx]);
    theo.push_back(beta_quantile(a, b, p));
  }

  json rep = report_base(o.seed, timer);
  rep["n"] = sample.u.size();
  rep["d"] = sample.d;
  rep["rho"] = o.rho;
  rep["ks"] = ks_json(ks);
  rep["deciles"] = {{"empirical", emp}, {"theoretical", theo}};
  rep["elapsed_seconds"] = timer.elapsed();
  emit_report(rep, o.out);
}

// ---------------------------------------------------------------------
// oracle

struct OracleOpts {
  std::string out;
  int d = 2;
  double rho = 0.5;
  double dt = 1e-5;
  double q_angle = 0.0;
  int q_det = +1;
  std::vector<double> start;
  std::size_t paths = 20000;
  std::size_t bias_paths = 0;
  long max_steps = 200000000;
  std::uint64_t seed = 0;
};

void run_oracle(const OracleOpts& o) {
  Timer timer;
  bx::PathConfig cfg;
  cfg.d = o.d;
  cfg.rho = o.rho;
  cfg.dt = o.dt;
  cfg.max_steps = o.max_steps;
  cfg.q = make_q(o.d, o.q_angle, o.q_det);
  cfg.start = bx::Vec(o.d, 0.0);
  if (!o.start.empty()) {
    if (static_cast<int>(o.start.size()) != o.d)
      throw UsageError("--start needs exactly d components");
    cfg.start = o.start;
  }
  bx::RngStream rng(o.seed, 0);
  bx::OracleReport r = bx::oracle_compare(cfg, o.paths, rng, o.bias_paths);

  json rep = report_base(o.seed, timer);
  rep["d"] = o.d;
  rep["rho"] = o.rho;
  rep["dt"] = o.dt;
  rep["paths"] = r.paths;
  rep["start"] = cfg.start;
  rep["mean_inner_product"] = r.mean_inner_product;
  rep["ks"] = ks_json(r.ks);
  if (r.has_chi2)
    rep["chi2"] = {{"statistic", r.chi2.statistic},
                   {"p_value", r.chi2.p_value}};
  if (o.bias_paths > 0) {
    rep["dt_bias_shift"] = r.dt_bias_shift;
    rep["bias_paths"] = o.bias_paths;
  }
  rep["elapsed_seconds"] = timer.elapsed();
  emit_report(rep, o.out);
}

// ---------------------------------------------------------------------
// gof

struct GofOpts {
  std::string in, out, model;
  bool degrees = false;
  double psi_abs = 0.0, psi_arg = 0.0;
  double mu1 = 0.0, mu2 = 0.0, kappa1 = 1.0, kappa2 = 1.0;
  std::vector<double> m_entries;  // sengupta: m12 m13 m21 m22 m23 m31 m32 m33
  double mu3 = 0.0, kappa3 = 1.0;
  std::uint64_t seed = 0;
};

void run_gof(const GofOpts& o) {
  Timer timer;
  bx::AngleDataset ds = bx::ingest_csv(o.in, o.degrees);
  if (ds.size() < 10) throw UsageError("gof requires at least 10 rows");

  std::complex<double> psi = std::polar(o.psi_abs, o.psi_arg);
  std::function<double(double, double)> log_density;
  json params;
  if (o.model == "bc+" || o.model == "bc-") {
    bx::BCParams p{psi, o.model == "bc+" ? +1 : -1};
    p.validate();
    log_density = [p](double tu, double tv) {
      return bx::bc_log_density(std::polar(1.0, tu), std::polar(1.0, tv), p);
    };
    params = {{"psi_abs", o.psi_abs}, {"psi_arg", o.psi_arg},
              {"sign", p.sign}};
  } else if (o.model == "vm-copula") {
    bx::VMCopulaParams p{o.mu1, o.mu2, o.kappa1, o.kappa2, psi};
    auto dens = std::make_shared<bx::VMCopulaDensity>(p);
    log_density = [dens](double tu, double tv) {
      return dens->log_density(tu, tv);
    };
    params = {{"mu1", o.mu1},       {"mu2", o.mu2},
              {"kappa1", o.kappa1}, {"kappa2", o.kappa2},
              {"psi_abs", o.psi_abs}, {"psi_arg", o.psi_arg}};
  } else if (o.model == "sengupta") {
    if (o.m_entries.size() != 8)
      throw UsageError("--m needs the 8 entries m12 m13 m21 m22 m23 m31 m32 m33");
    bx::SenGuptaParams p;
    const int idx[8][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 1},
                           {1, 2}, {2, 0}, {2, 1}, {2, 2}};
    for (int i = 0; i < 8; ++i) p.m(idx[i][0], idx[i][1]) = o.m_entries[i];
    double logz = bx::sengupta_log_normalizer(p);
    log_density = [p, logz](double tu, double tv) {
      return p.exponent(tu, tv) - logz;
    };
    params = {{"m", o.m_entries}};
  } else if (o.model == "shieh-johnson") {
    bx::ShiehJohnsonParams p{o.mu1, o.mu2, o.mu3,
                             o.kappa1, o.kappa2, o.kappa3};
    auto dens = std::make_shared<bx::ShiehJohnsonDensity>(p);
    log_density = [dens](double tu, double tv) {
      return dens->log_density(tu, tv);
    };
    params = {{"mu1", o.mu1},       {"mu2", o.mu2},       {"mu3", o.mu3},
              {"kappa1", o.kappa1}, {"kappa2", o.kappa2}, {"kappa3", o.kappa3}};
  } else {
    throw UsageError("unknown model '" + o.model +
                     "' (gof supports bc+, bc-, vm-copula, sengupta, "
                     "shieh-johnson)");
  }

  // density on a torus grid: normalization self-check, marginal CDFs,
  // and cell probabilities for the chi-square histogram
  const int G = 256;
  const double h = bx::kTwoPi / G;
  std::vector<std::vector<double>> f(G, std::vector<double>(G));
  double total = 0.0;
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      f[i][j] = std::exp(log_density((i + 0.5) * h, (j + 0.5) * h));
      total += f[i][j];
    }
  double normalization = total * h * h;

  auto marginal_cdf = [&](bool first) {
    std::vector<double> cum(G + 1, 0.0);
    for (int i = 0; i < G; ++i) {
      double s = 0.0;
      for (int j = 0; j < G; ++j) s += first ? f[i][j] : f[j][i];
      cum[i + 1] = cum[i] + s;
    }
    for (double& c : cum) c /= cum[G];
    return [cum, h, G](double theta) {
      double x = theta / h;
      int i = std::min(static_cast<int>(x), G - 1);
      double frac = x - i;
      return cum[i] + frac * (cum[i + 1] - cum[i]);
    };
  };
  auto cdf_u = marginal_cdf(true);
  auto cdf_v = marginal_cdf(false);

  std::vector<double> tu, tv;
  for (const auto& [a, b] : ds.rows) {
    tu.push_back(a);
    tv.push_back(b);
  }
  bx::KsResult ks_u = bx::ks_test(tu, cdf_u);
  bx::KsResult ks_v = bx::ks_test(tv, cdf_v);

  // 2D histogram chi-square; bin count scales with n to keep expected
  // counts reasonable
  int bins = ds.size() >= 320 ? 8 : ds.size() >= 125 ? 5 : 3;
  const double bw = bx::kTwoPi / bins;
  std::vector<double> observed(bins * bins, 0.0), expected(bins * bins, 0.0);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    int bi = std::min(static_cast<int>(tu[r] / bw), bins - 1);
    int bj = std::min(static_cast<int>(tv[r] / bw), bins - 1);
    observed[bi * bins + bj] += 1.0;
  }
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      int bi = std::min(static_cast<int>((i + 0.5) * h / bw), bins - 1);
      int bj = std::min(static_cast<int>((j + 0.5) * h / bw), bins - 1);
      expected[bi * bins + bj] += f[i][j] / total * ds.size();
    }
  bx::Chi2Result chi2 = bx::chi2_from_counts(observed, expected, 0);

  json rep = report_base(o.seed, timer);
  rep["model"] = o.model;
  rep["params"] = params;
  rep["n"] = ds.size();
  rep["normalization"] = normalization;
  rep["marginal_u_ks"] = ks_json(ks_u);
  rep["marginal_v_ks"] = ks_json(ks_v);
  rep["chi2"] = {{"statistic", chi2.statistic},
                 {"p_value", chi2.p_value},
                 {"bins", bins * bins}};
  rep["elapsed_seconds"] = timer.elapsed();
  emit_report(rep, o.out);
}

}  // namespace

int main(int argc, char** argv) {
  g_command_line = join_args(argc, argv);
  CLI::App app{"Brownian-exit bivariate distribution toolkit"};
  app.require_subcommand(1);

  SampleOpts so;
  CLI::App* sample = app.add_subcommand("sample", "draw a seeded sample");
  sample->add_option("--model", so.model,
                     "bs | bc+ | bc- | shifted | mobius-marginal | "
                     "vm-copula | plane | cylinder")
      ->required();
  sample->add_option("--n", so.n, "sample size");
  sample->add_option("--seed", so.seed, "RNG seed");
  sample->add_option("--out", so.out, "output CSV path")->required();
  sample->add_option("--d", so.d, "dimension (bs, shifted)");
  sample->add_option("--rho", so.rho, "correlation in [0,1)");
  sample->add_option("--q-angle", so.q_angle, "rotation angle of Q (d=2)");
  sample->add_option("--q-det", so.q_det, "det Q: +1 or -1");
  sample->add_option("--xi", so.xi, "start point (shifted)")->delimiter(',');
  sample->add_option("--psi-abs", so.psi_abs, "|psi|");
  sample->add_option("--psi-arg", so.psi_arg, "arg(psi), radians");
  sample->add_option("--mu1", so.mu1);
  sample->add_option("--mu2", so.mu2);
  sample->add_option("--kappa1", so.kappa1);
  sample->add_option("--kappa2", so.kappa2);
  sample->add_option("--alpha1-abs", so.alpha1_abs);
  sample->add_option("--alpha1-arg", so.alpha1_arg);
  sample->add_option("--alpha2-abs", so.alpha2_abs);
  sample->add_option("--alpha2-arg", so.alpha2_arg);

  FitOpts fo;
  CLI::App* fit = app.add_subcommand("fit", "maximum likelihood fits + ranking");
  fit->add_option("--in", fo.in, "input CSV (theta_u,theta_v)")->required();
  fit->add_flag("--degrees", fo.degrees, "input angles in degrees");
  fit->add_option("--models", fo.models,
                  "subset of vm-copula,sengupta,shieh-johnson")
      ->delimiter(',');
  fit->add_option("--seed", fo.seed, "RNG seed for optimizer restarts");
  fit->add_option("--starts", fo.starts, "optimizer starts");
  fit->add_option("--out", fo.out, "report JSON path (default stdout)");

  SimstudyOpts yo;
  CLI::App* sim = app.add_subcommand("simstudy",
                                     "relative MSE grid, moments vs MLE");
  sim->add_option("--n", yo.sizes, "sample sizes")->delimiter(',');
  sim->add_option("--psi", yo.psi, "psi values in (0,1)")->delimiter(',');
  sim->add_option("--replicates", yo.replicates, "replicates per cell");
  sim->add_option("--seed", yo.seed, "master seed");
  sim->add_option("--workers", yo.workers, "worker threads (0 = auto)");
  sim->add_option("--out", yo.out, "output CSV path (default stdout)");

  PivotalOpts po;
  CLI::App* piv = app.add_subcommand("pivotal", "pivotal beta test for (rho, Q)");
  piv->add_option("--in", po.in, "input CSV (theta_u,theta_v; d=2)");
  piv->add_flag("--degrees", po.degrees, "input angles in degrees");
  piv->add_flag("--simulate", po.simulate, "simulate the data instead");
  piv->add_option("--d", po.d, "dimension (simulate)");
  piv->add_option("--rho", po.rho, "tested rho")->required();
  piv->add_option("--true-rho", po.true_rho, "generating rho (simulate)");
  piv->add_option("--q-angle", po.q_angle, "rotation angle of Q (d=2)");
  piv->add_option("--q-det", po.q_det, "det Q: +1 or -1");
  piv->add_option("--n", po.n, "sample size (simulate)");
  piv->add_option("--seed", po.seed, "RNG seed");
  piv->add_option("--out", po.out, "report JSON path (default stdout)");

  OracleOpts oo;
  CLI::App* orc = app.add_subcommand("oracle", "Brownian path-simulation check");
  orc->add_option("--d", oo.d, "dimension");
  orc->add_option("--rho", oo.rho, "inner sphere radius");
  orc->add_option("--dt", oo.dt, "Euler step size (<= 1e-3)");
  orc->add_option("--q-angle", oo.q_angle, "rotation angle of Q (d=2)");
  orc->add_option("--q-det", oo.q_det, "det Q: +1 or -1");
  orc->add_option("--start", oo.start, "start point (default origin)")
      ->delimiter(',');
  orc->add_option("--paths", oo.paths, "number of paths");
  orc->add_option("--bias-paths", oo.bias_paths,
                  "extra paired paths for the dt vs dt/4 bias estimate");
  orc->add_option("--max-steps", oo.max_steps, "per-path step cap");
  orc->add_option("--seed", oo.seed, "RNG seed");
  orc->add_option("--out", oo.out, "report JSON path (default stdout)");

  GofOpts go;
  CLI::App* gof = app.add_subcommand("gof", "goodness-of-fit report");
  gof->add_option("--in", go.in, "input CSV (theta_u,theta_v)")->required();
  gof->add_flag("--degrees", go.degrees, "input angles in degrees");
  gof->add_option("--model", go.model,
                  "bc+ | bc- | vm-copula | sengupta | shieh-johnson")
      ->required();
  gof->add_option("--psi-abs", go.psi_abs, "|psi|");
  gof->add_option("--psi-arg", go.psi_arg, "arg(psi), radians");
  gof->add_option("--mu1", go.mu1);
  gof->add_option("--mu2", go.mu2);
  gof->add_option("--mu3", go.mu3);
  gof->add_option("--kappa1", go.kappa1);
  gof->add_option("--kappa2", go.kappa2);
  gof->add_option("--kappa3", go.kappa3);
  gof->add_option("--m", go.m_entries, "sengupta matrix entries")
      ->delimiter(',');
  gof->add_option("--seed", go.seed, "report seed field");
  gof->add_option("--out", go.out, "report JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (sample->parsed()) run_sample(so);
    if (fit->parsed()) run_fit(fo);
    if (sim->parsed()) run_simstudy(yo);
    if (piv->parsed()) run_pivotal(po);
    if (orc->parsed()) run_oracle(oo);
    if (gof->parsed()) run_gof(go);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const bx::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
