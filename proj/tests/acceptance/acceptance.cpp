// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Pass criterion numbers to run a subset.
//
// Tolerances, seeds and thresholds below are pinned; the desk-scale ones
// (criteria 5-7) were frozen after a pilot run with these exact seeds.

#include <armadillo>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hsghs/distributions.hpp"
#include "hsghs/io.hpp"
#include "hsghs/linalg.hpp"
#include "hsghs/metrics.hpp"
#include "hsghs/sampler.hpp"
#include "hsghs/simulate.hpp"
#include "hsghs/summary.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace hsghs;

namespace {

// ---- pinned settings -------------------------------------------------------

constexpr double kSeAllowance = 4.0;  // criteria 1 and 4

constexpr int kBetaDraws = 20000;
constexpr double kBetaRuntime = 30.0;

constexpr int kPdSteps = 2000;
constexpr double kPdRuntime = 120.0;

constexpr int kKlInstances = 100;
constexpr double kKlRelTol = 1e-9;
constexpr double kKlIdenticalTol = 1e-12;

constexpr int kPrimitiveDraws = 100000;
constexpr double kKsAlpha = 0.001;

// Criterion 5/6 fixture. Pilot with these seeds: MSE(B) 0.0013-0.0023,
// Omega sensitivity 1.0 on all seeds, precision 0.75-1.0 (mean 0.857),
// KL fit/null about 0.03, TPR 1.0 at FPR 0.051-0.059; ~125 s per seed.
constexpr std::uint64_t kDeskSeeds[] = {501, 502, 503, 504, 505};
constexpr double kDeskMseB = 0.05;
constexpr double kDeskOmegaSen = 0.8;
constexpr double kDeskOmegaPrc = 0.8;
constexpr double kDeskLevel = 0.75;
constexpr double kDeskRuntime = 30.0 * 60.0;
constexpr double kRocFpr = 0.05;
constexpr double kRocTpr = 0.95;

// Criterion 7 fixture. Pilot: max |B| 0.020-0.101, nothing selected on 5/5.
constexpr std::uint64_t kNullSeeds[] = {701, 702, 703, 704, 705};
constexpr double kNullMaxAbs = 0.15;
constexpr int kNullCleanSeeds = 4;

// Criterion 9.
constexpr int kTimingWarmup = 20;
constexpr int kTimingSteps = 200;
constexpr double kScalingLo = 1.3;
constexpr double kScalingHi = 3.0;

// ---- reporting -------------------------------------------------------------

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: beta conditional ---------------------------------------------------

void beta_conditional(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(101);
  const arma::mat X = testing::random_matrix(5, 2, gen);
  const arma::mat Y = testing::random_matrix(5, 2, gen);
  const arma::mat omega{{1.5, 0.6}, {0.6, 0.8}};
  const arma::vec lambda_star{0.3, 2.0, 1.0, 0.05};

  const TransformedData td = transform_data(Dataset{X, Y}, omega);
  const arma::mat root = omega_sqrt(omega);

  arma::mat fast(kBetaDraws, 4), dense(kBetaDraws, 4);
  Rng rng(102);
  std::mt19937_64 oracle_rng(103);
  for (int i = 0; i < kBetaDraws; ++i) {
    fast.row(i) = sample_beta(td.y_tilde, td.design, lambda_star, rng).t();
    dense.row(i) = oracles::beta_conditional_direct(td.y_tilde, X, root, lambda_star, oracle_rng).t();
  }

  arma::vec m1, m2;
  arma::mat c1, c2;
  testing::sample_moments(fast, m1, c1);
  testing::sample_moments(dense, m2, c2);
  const double n = kBetaDraws;
  double worst = 0.0;
  for (arma::uword i = 0; i < 4; ++i) {
    const double se = std::sqrt((c1(i, i) + c2(i, i)) / n);
    worst = std::max(worst, std::abs(m1(i) - m2(i)) / se);
    for (arma::uword j = i; j < 4; ++j) {
      const double a = testing::cov_se(c1, i, j, n), b = testing::cov_se(c2, i, j, n);
      worst = std::max(worst, std::abs(c1(i, j) - c2(i, j)) / std::hypot(a, b));
    }
  }
  const double secs = seconds_since(t0);
  out.detail << "max |diff|/SE = " << worst << " over 4 means and 10 covariances, " << secs << " s";
  out.require(worst < kSeAllowance, "within 4 SE");
  out.require(secs < kBetaRuntime, "runtime");
}

// ---- 2: positive definiteness ----------------------------------------------

void positive_definiteness(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  SimulationConfig cfg;
  cfg.n = 50;
  cfg.p = 20;
  cfg.q = 5;
  cfg.structure = Structure::AR1;
  cfg.seed = 201;
  const SimulatedData sim = simulate(cfg);

  ChainState state = ChainState::initial(cfg.p, cfg.q);
  Rng rng(202);
  int failures = 0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (int step = 0; step < kPdSteps; ++step) {
    try {
      gibbs_step(sim.train, state, rng);
    } catch (const Error& e) {
      ++failures;
      out.detail << "step " << step << " threw: " << e.what() << "; ";
      break;
    }
    if (!linalg::cholesky_lower(state.omega)) ++failures;
    min_eig = std::min(min_eig, oracles::min_eigenvalue(state.omega));
  }
  const double secs = seconds_since(t0);
  out.detail << kPdSteps << " steps, " << failures << " Cholesky failures, min eigenvalue " << min_eig << ", "
             << secs << " s";
  out.require(failures == 0 && min_eig > 0.0, "Omega stays PD");
  out.require(secs < kPdRuntime, "runtime");
}

// ---- 3: KL equivalence -----------------------------------------------------

void kl_equivalence(Outcome& out) {
  std::mt19937_64 gen(301);
  std::uniform_int_distribution<int> n_dist(1, 4), p_dist(1, 3), q_dist(1, 3);
  double worst = 0.0, worst_identical = 0.0;
  for (int t = 0; t < kKlInstances; ++t) {
    const arma::uword n = n_dist(gen), p = p_dist(gen), q = q_dist(gen);
    const arma::mat X = testing::random_matrix(n, p, gen);
    const GroundTruth truth{testing::random_matrix(p, q, gen), testing::random_spd(q, gen)};
    const arma::mat B_hat = testing::random_matrix(p, q, gen);
    const arma::mat omega_hat = testing::random_spd(q, gen);
    const double fast = avg_kl(truth, B_hat, omega_hat, X);
    const double slow = oracles::kl_naive(truth, B_hat, omega_hat, X) / static_cast<double>(n);
    worst = std::max(worst, std::abs(fast - slow) / std::max(std::abs(slow), 1e-300));
    worst_identical = std::max(worst_identical, std::abs(avg_kl(truth, truth.B0, truth.Omega0, X)));
  }
  out.detail << kKlInstances << " instances, max relative error " << worst << ", max |KL(identical)| "
             << worst_identical;
  out.require(worst < kKlRelTol, "relative error");
  out.require(worst_identical <= kKlIdenticalTol, "identical parameters");
}

// ---- 4: distributional primitives ------------------------------------------

void primitives(Outcome& out) {
  Rng rng(401);
  std::vector<double> x(kPrimitiveDraws);
  for (auto& v : x) v = half_cauchy_draw(rng);
  const double p = testing::ks_pvalue(x, [](double v) { return 2.0 / std::numbers::pi * std::atan(v); });
  out.detail << "half-Cauchy KS p = " << p;
  out.require(p > kKsAlpha, "KS");

  double worst = 0.0;
  auto mean_z = [&](auto draw, double mean, double sd) {
    double sum = 0.0;
    for (int i = 0; i < kPrimitiveDraws; ++i) sum += draw();
    const double z = std::abs(sum / kPrimitiveDraws - mean) / (sd / std::sqrt(double(kPrimitiveDraws)));
    worst = std::max(worst, z);
  };
  for (const double shape : {0.5, 1.0, 2.0, 5.0}) {
    for (const double scale : {0.5, 1.0, 2.0}) {
      mean_z([&] { return gamma_draw(shape, scale, rng); }, shape * scale, std::sqrt(shape) * scale);
    }
  }
  // Inverse-gamma needs shape > 2 for a finite variance.
  for (const double shape : {3.0, 5.0, 10.0}) {
    for (const double scale : {0.5, 1.0, 4.0}) {
      const double mean = scale / (shape - 1.0);
      const double sd = mean / std::sqrt(shape - 2.0);
      mean_z([&] { return inv_gamma_draw(shape, scale, rng); }, mean, sd);
    }
  }
  out.detail << ", gamma/inverse-gamma grid (21 cells) max |z| = " << worst;
  out.require(worst < kSeAllowance, "moment grid");
}

// ---- 5, 6: desk-scale reproduction and ROC ---------------------------------

struct DeskReplicate {
  double mse_b, omega_sen, omega_prc, kl_fit, kl_null;
  double roc_fpr, roc_tpr;
};

const std::vector<DeskReplicate>& desk_runs(double& seconds) {
  static double secs = 0.0;
  static const std::vector<DeskReplicate> runs = [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<DeskReplicate> out;
    for (const std::uint64_t seed : kDeskSeeds) {
      SimulationConfig cfg;
      cfg.n = 100;
      cfg.p = 50;
      cfg.q = 10;
      cfg.structure = Structure::AR1;
      cfg.coef = CoefDist::Uniform;
      cfg.sparsity = 0.05;
      cfg.seed = seed;
      const SimulatedData sim = simulate(cfg);

      GibbsConfig g;
      g.burnin = 500;
      g.nmc = 2000;
      g.seed = seed + 1000;
      const PosteriorSamples samples = run_chain(sim.train, g);
      const PointEstimate est = posterior_mean(samples);
      const SelectionResult sel = select_by_interval(credible_interval(samples, kDeskLevel));
      const Confusion c = confusion(sel.omega_selected, sim.truth.support_omega(), Target::Omega);

      DeskReplicate r;
      r.mse_b = mse_elements(est.B, sim.truth.B0);
      r.omega_sen = c.sen.value_or(std::nan(""));
      r.omega_prc = c.prc.value_or(0.0);  // nothing selected counts as a miss here
      r.kl_fit = avg_kl(sim.truth, est.B, est.Omega, sim.train.X);
      r.kl_null = avg_kl(sim.truth, arma::zeros(cfg.p, cfg.q), arma::eye(cfg.q, cfg.q), sim.train.X);

      // Walk the curve by increasing FPR; the first point past kRocFpr decides.
      const std::vector<double> levels = default_level_grid();
      std::vector<RocPoint> roc = roc_sweep_bayes(samples, sim.truth.support_b(), Target::B, levels);
      std::stable_sort(roc.begin(), roc.end(), [](const RocPoint& a, const RocPoint& b) { return a.fpr < b.fpr; });
      const auto past = std::find_if(roc.begin(), roc.end(), [](const RocPoint& pt) { return pt.fpr > kRocFpr; });
      const RocPoint& at = past != roc.end() ? *past : roc.back();
      r.roc_fpr = at.fpr;
      r.roc_tpr = at.tpr;

      std::printf("  desk seed %llu: mse_b %.5f  omega sen %.3f prc %.3f  kl fit %.4f null %.4f  roc (%.3f, %.3f)  %.1f s\n",
                  static_cast<unsigned long long>(seed), r.mse_b, r.omega_sen, r.omega_prc, r.kl_fit, r.kl_null,
                  r.roc_fpr, r.roc_tpr, samples.seconds);
      std::fflush(stdout);
      out.push_back(r);
    }
    secs = seconds_since(t0);
    return out;
  }();
  seconds = secs;
  return runs;
}

void desk_reproduction(Outcome& out) {
  double secs = 0.0;
  const auto& runs = desk_runs(secs);
  double mse = 0.0, sen = 0.0, prc = 0.0;
  int kl_wins = 0;
  for (const auto& r : runs) {
    mse += r.mse_b / runs.size();
    sen += r.omega_sen / runs.size();
    prc += r.omega_prc / runs.size();
    kl_wins += r.kl_fit < r.kl_null;
  }
  out.detail << "mean over " << runs.size() << " seeds: MSE(B) " << mse << ", Omega sen " << sen << ", prc " << prc
             << "; KL fit < null on " << kl_wins << "/" << runs.size() << "; " << secs << " s";
  out.require(mse < kDeskMseB, "MSE(B)");
  out.require(sen >= kDeskOmegaSen, "sensitivity");
  out.require(prc >= kDeskOmegaPrc, "precision");
  out.require(kl_wins == static_cast<int>(runs.size()), "KL on every replicate");
  out.require(secs < kDeskRuntime, "runtime");
}

void roc_dominance(Outcome& out) {
  double secs = 0.0;
  const auto& runs = desk_runs(secs);
  double worst = 1.0;
  for (const auto& r : runs) worst = std::min(worst, r.roc_tpr);
  out.detail << "min TPR at first FPR > " << kRocFpr << " over " << runs.size() << " seeds: " << worst;
  out.require(worst >= kRocTpr, "TPR");
}

// ---- 7: null-data shrinkage ------------------------------------------------

void null_shrinkage(Outcome& out) {
  const arma::uword n = 100, p = 20, q = 3;
  double worst = 0.0;
  int clean = 0;
  for (const std::uint64_t seed : kNullSeeds) {
    Rng rng(seed);
    const arma::mat X = design_toeplitz(n, p, 0.7, rng);
    const arma::mat Y = gen_response(X, arma::zeros(p, q), arma::eye(q, q), rng);
    GibbsConfig g;
    g.burnin = 500;
    g.nmc = 2000;
    g.seed = seed + 1000;
    const PosteriorSamples samples = run_chain(Dataset{X, Y}, g);
    const double max_abs = arma::abs(posterior_mean(samples).B).max();
    const arma::uword picked = arma::accu(select_by_interval(credible_interval(samples, 0.75)).b_selected);
    worst = std::max(worst, max_abs);
    clean += picked == 0;
    out.detail << "seed " << seed << ": max|B| " << max_abs << ", selected " << picked << "; ";
  }
  out.detail << "clean " << clean << "/5";
  out.require(worst < kNullMaxAbs, "max |B| on every seed");
  out.require(clean >= kNullCleanSeeds, "zero selections");
}

// ---- 8: determinism and formats --------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + HSGHS_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism(Outcome& out) {
  const fs::path dir = fs::temp_directory_path() / ("hsghs_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };

  out.require(run_cli("simulate --n 40 --p 10 --q 4 --sparsity 0.2 --seed 801 --out-dir " + q(dir / "data")) == 0,
              "simulate");
  out.require(run_cli("fit --x " + q(dir / "data/X.csv") + " --y " + q(dir / "data/Y.csv") +
                      " --burnin 100 --nmc 300 --seed 802 --quiet --out-dir " + q(dir / "fit")) == 0,
              "fit");
  out.require(run_cli("replay " + q(dir / "fit/fit.manifest.json") + " --out-dir " + q(dir / "replay")) == 0,
              "replay");
  if (!out.pass) return;

  const std::string a = read_file(dir / "fit/samples.hsgs"), b = read_file(dir / "replay/samples.hsgs");
  out.detail << "replayed stream " << (a == b ? "identical" : "differs") << " (" << a.size() << " bytes)";
  out.require(a == b, "byte-identical replay");

  // Header bytes read by hand, independently of the decoder.
  auto u64 = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(a[off + k]);
    return v;
  };
  const bool header_ok = a.compare(0, 4, "HSGS") == 0 && static_cast<unsigned char>(a[4]) == 1 && a[5] == 0 &&
                         a[6] == 0 && a[7] == 0 && u64(8) == 40 && u64(16) == 10 && u64(24) == 4 &&
                         u64(32) == 300 && a.size() == 40 + 300 * (40 + 10) * 8;
  const SampleHeader h = decode_sample_header(a);
  out.detail << ", header " << (header_ok ? "ok" : "bad");
  out.require(header_ok && h.dims.n == 40 && h.dims.p == 10 && h.dims.q == 4 && h.nmc == 300, "header");

  // First record equals the first stored draw.
  const PosteriorSamples s = decode_samples(a);
  double first = 0.0;
  std::memcpy(&first, a.data() + 40, 8);
  out.require(first == s.beta_draws(0, 0), "record layout");

  // CSV round trip over awkward values.
  std::mt19937_64 gen(803);
  arma::mat m = testing::random_matrix(7, 5, gen) * 1e3;
  m(0, 0) = 4.9406564584124654e-324;
  m(1, 1) = -0.0;
  m(2, 2) = 1.7976931348623157e308;
  m(3, 3) = 0.1;
  write_csv(m, dir / "m.csv");
  const arma::mat back = read_csv(dir / "m.csv");
  bool same = back.n_rows == m.n_rows && back.n_cols == m.n_cols;
  for (arma::uword i = 0; same && i < m.n_elem; ++i) same = std::memcmp(&m(i), &back(i), sizeof(double)) == 0;
  out.detail << ", CSV round trip " << (same ? "bit-exact" : "lossy");
  out.require(same, "CSV round trip");
  fs::remove_all(dir);
}

// ---- 9: scaling ------------------------------------------------------------

double seconds_per_step(arma::uword p) {
  Rng data_rng(900 + p);
  const arma::uword n = 50, q = 5;
  const arma::mat X = design_toeplitz(n, p, 0.7, data_rng);
  const CoefMatrix B = coef_matrix(p, q, 0.05, CoefDist::Uniform, data_rng);
  const arma::mat Y = gen_response(X, B.B, precision_ar1(q), data_rng);
  const Dataset ds{X, Y};
  ChainState state = ChainState::initial(p, q);
  Rng rng(901);
  for (int i = 0; i < kTimingWarmup; ++i) gibbs_step(ds, state, rng);
  std::vector<double> times;
  for (int i = 0; i < kTimingSteps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    gibbs_step(ds, state, rng);
    times.push_back(seconds_since(t0));
  }
  return testing::median(times);
}

void scaling(Outcome& out) {
  const double t50 = seconds_per_step(50), t100 = seconds_per_step(100);
  const double ratio = t100 / t50;
  out.detail << "median step " << t50 * 1e3 << " ms at p=50, " << t100 * 1e3 << " ms at p=100, ratio " << ratio;
  out.require(ratio >= kScalingLo && ratio <= kScalingHi, "ratio in [1.3, 3]");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"beta conditional matches the dense oracle", beta_conditional},
      {"Omega stays positive definite", positive_definiteness},
      {"KL metric matches the naive form", kl_equivalence},
      {"distributional primitives", primitives},
      {"desk-scale reproduction", desk_reproduction},
      {"ROC dominance for B", roc_dominance},
      {"null-data shrinkage", null_shrinkage},
      {"determinism and file formats", determinism},
      {"per-iteration scaling in p", scaling},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome out;
    try {
      criteria[k].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    failed += !out.pass;
    std::printf("%s %d %s: %s\n", out.pass ? "PASS" : "FAIL", id, criteria[k].first, out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
