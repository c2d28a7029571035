// hsghs: simulate -> fit -> summarize -> metrics -> roc, plus replay of any
// command from its manifest. Links only the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <hsghs/hsghs.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(hsghs_status status, const std::string& context) {
  if (status != HSGHS_OK) {
    throw RuntimeFailure(context + ": " + hsghs_status_name(status) + ": " + hsghs_last_error());
  }
}

struct MatrixFree {
  void operator()(hsghs_matrix* m) const { hsghs_matrix_free(m); }
};
struct SamplesFree {
  void operator()(hsghs_samples* s) const { hsghs_samples_free(s); }
};
struct SimulationFree {
  void operator()(hsghs_simulation* s) const { hsghs_simulation_free(s); }
};
using Matrix = std::unique_ptr<hsghs_matrix, MatrixFree>;
using Samples = std::unique_ptr<hsghs_samples, SamplesFree>;
using Simulation = std::unique_ptr<hsghs_simulation, SimulationFree>;

Matrix read_matrix(const fs::path& path) {
  hsghs_matrix* m = nullptr;
  check(hsghs_matrix_read_csv(path.c_str(), &m), "reading " + path.string());
  return Matrix(m);
}

void write_matrix(const hsghs_matrix* m, const fs::path& path) {
  check(hsghs_matrix_write_csv(m, path.c_str()), "writing " + path.string());
}

Samples read_samples(const fs::path& path) {
  hsghs_samples* s = nullptr;
  check(hsghs_samples_read(path.c_str(), &s), "reading " + path.string());
  return Samples(s);
}

std::vector<double> row_major(const hsghs_matrix* m) {
  std::vector<double> v(hsghs_matrix_rows(m) * hsghs_matrix_cols(m));
  check(hsghs_matrix_copy_to(m, v.data(), v.size()), "copying matrix");
  return v;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_json(const hsghs_matrix* m) {
  const auto values = row_major(m);
  const std::size_t cols = hsghs_matrix_cols(m);
  json rows = json::array();
  for (std::size_t i = 0; i < hsghs_matrix_rows(m); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < cols; ++j) row.push_back(number(values[i * cols + j]));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write " + tmp.string());
    out << text;
    if (!out) throw RuntimeFailure("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw RuntimeFailure("cannot move " + tmp.string() + " into place: " + ec.message());
}

void write_json(const fs::path& path, const json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw RuntimeFailure(path.string() + ": " + e.what());
  }
}

fs::path absolute(const std::string& p) { return fs::absolute(fs::path(p)).lexically_normal(); }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create " + dir.string() + ": " + ec.message());
}

// Parameters are recorded under their long option names so a manifest
// can be turned back into a command line.
struct Manifest {
  std::string command;
  json parameters = json::object();
  json outputs = json::array();
  std::optional<std::uint64_t> seed;

  void write(const fs::path& path, double seconds) const {
    json j;
    j["command"] = command;
    j["version"] = hsghs_version();
    j["parameters"] = parameters;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["outputs"] = outputs;
    j["seconds"] = seconds;
    write_json(path, j);
  }
};

fs::path manifest_path(const fs::path& out_dir, const std::string& command) {
  // simulate shares its directory with the data it describes
  return out_dir / (command == "simulate" ? "manifest.json" : command + ".manifest.json");
}

// ---- simulate ----------------------------------------------------------

struct SimulateOptions {
  std::size_t n = 100, p = 200, q = 25, n_test = 0;
  std::string structure = "ar1", coef = "uniform";
  double sparsity = 0.05, design_rho = 0.7;
  std::size_t group_size = 3;
  bool strict_cliques = false;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

void add_simulate(CLI::App& app, SimulateOptions& o) {
  app.add_option("--n", o.n, "training rows")->capture_default_str();
  app.add_option("--p", o.p, "predictors")->capture_default_str();
  app.add_option("--q", o.q, "responses")->capture_default_str();
  app.add_option("--n-test", o.n_test, "test rows (0: same as n)")->capture_default_str();
  app.add_option("--structure", o.structure, "precision pattern")
      ->check(CLI::IsMember({"ar1", "cliques", "star"}))
      ->capture_default_str();
  app.add_option("--coef", o.coef, "nonzero coefficient law")
      ->check(CLI::IsMember({"uniform", "const5"}))
      ->capture_default_str();
  app.add_option("--sparsity", o.sparsity, "fraction of nonzero coefficients")->capture_default_str();
  app.add_option("--design-rho", o.design_rho, "Toeplitz design correlation")->capture_default_str();
  app.add_option("--group-size", o.group_size, "clique size")->capture_default_str();
  app.add_flag("--strict-cliques", o.strict_cliques, "reject q not divisible by the clique size");
  app.add_option("--seed", o.seed, "generator seed")->capture_default_str();
  app.add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
}

void run_simulate(const SimulateOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  hsghs_sim_config c;
  hsghs_sim_config_default(&c);
  c.n = o.n;
  c.p = o.p;
  c.q = o.q;
  c.n_test = o.n_test;
  c.structure = o.structure == "ar1" ? HSGHS_STRUCTURE_AR1
                : o.structure == "cliques" ? HSGHS_STRUCTURE_CLIQUES
                                           : HSGHS_STRUCTURE_STAR;
  c.coef = o.coef == "uniform" ? HSGHS_COEF_UNIFORM : HSGHS_COEF_CONST5;
  c.sparsity = o.sparsity;
  c.design_rho = o.design_rho;
  c.group_size = o.group_size;
  c.strict_cliques = o.strict_cliques ? 1 : 0;
  c.seed = o.seed;

  hsghs_simulation* raw = nullptr;
  check(hsghs_simulate(&c, &raw), "simulate");
  const Simulation sim(raw);

  const fs::path dir = absolute(o.out_dir);
  ensure_dir(dir);
  Manifest m;
  m.command = "simulate";
  m.seed = o.seed;
  m.parameters = {{"n", o.n},
                  {"p", o.p},
                  {"q", o.q},
                  {"n-test", o.n_test},
                  {"structure", o.structure},
                  {"coef", o.coef},
                  {"sparsity", o.sparsity},
                  {"design-rho", o.design_rho},
                  {"group-size", o.group_size},
                  {"strict-cliques", o.strict_cliques},
                  {"seed", o.seed},
                  {"out-dir", dir.string()}};
  const std::pair<hsghs_sim_part, const char*> parts[] = {
      {HSGHS_SIM_X, "X.csv"},           {HSGHS_SIM_Y, "Y.csv"},
      {HSGHS_SIM_B_TRUE, "B_true.csv"}, {HSGHS_SIM_OMEGA_TRUE, "Omega_true.csv"},
      {HSGHS_SIM_X_TEST, "X_test.csv"}, {HSGHS_SIM_Y_TEST, "Y_test.csv"}};
  for (const auto& [part, name] : parts) {
    hsghs_matrix* mat = nullptr;
    check(hsghs_simulation_get(sim.get(), part, &mat), name);
    const Matrix owned(mat);
    write_matrix(owned.get(), dir / name);
    m.outputs.push_back((dir / name).string());
  }
  const std::size_t isolated = hsghs_simulation_isolated_rows(sim.get());
  if (isolated > 0) {
    m.parameters["note"] = std::to_string(isolated) + " trailing row(s) of Omega_true left outside any clique (q mod group-size)";
  }
  m.write(manifest_path(dir, m.command),
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

// ---- fit ---------------------------------------------------------------

struct FitOptions {
  std::string x, y;
  std::uint64_t burnin = 1000, nmc = 5000, thin = 1, seed = 0;
  double pd_jitter = 0.0;
  unsigned chains = 1;
  std::string out_dir = ".", samples = "samples.hsgs", summary = "summary.json";
  bool quiet = false;
};

void add_fit(CLI::App& app, FitOptions& o) {
  app.add_option("--x", o.x, "design matrix CSV")->required();
  app.add_option("--y", o.y, "response matrix CSV")->required();
  app.add_option("--burnin", o.burnin, "discarded steps")->capture_default_str();
  app.add_option("--nmc", o.nmc, "stored draws")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--thin", o.thin, "steps per stored draw")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "generator seed; chain k uses seed + k")->capture_default_str();
  app.add_option("--pd-jitter", o.pd_jitter, "ridge added to Omega before its square root")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--chains", o.chains, "independent chains run in parallel")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  app.add_option("--samples", o.samples, "sample stream file name")->capture_default_str();
  app.add_option("--summary", o.summary, "summary JSON file name")->capture_default_str();
  app.add_flag("--quiet", o.quiet, "no progress on stderr");
}

fs::path chain_file(const fs::path& base, unsigned chain, unsigned chains) {
  if (chains == 1) return base;
  return base.parent_path() /
         (base.stem().string() + ".chain" + std::to_string(chain) + base.extension().string());
}

struct ChainResult {
  Samples samples;
  std::string error;
};

void print_progress(std::uint64_t step, std::uint64_t total, double loglik, void* user) {
  const auto chain = *static_cast<const unsigned*>(user);
  const std::uint64_t every = std::max<std::uint64_t>(1, total / 10);
  if (step % every == 0 || step == total) {
    std::fprintf(stderr, "chain %u: step %llu/%llu loglik %.6g\n", chain,
                 static_cast<unsigned long long>(step), static_cast<unsigned long long>(total), loglik);
  }
}

json chain_summary(const hsghs_samples* s, std::uint64_t burnin, std::uint64_t seed,
                   const fs::path& samples_path) {
  hsghs_matrix *b = nullptr, *omega = nullptr;
  check(hsghs_posterior_mean(s, &b, &omega), "posterior mean");
  const Matrix B(b), Omega(omega);

  std::vector<double> trace(hsghs_samples_trace_length(s));
  check(hsghs_samples_trace(s, trace.data(), trace.size()), "log-likelihood trace");
  const std::size_t kept = trace.size() > burnin ? trace.size() - burnin : 0;
  hsghs_trace_stats stats;
  check(hsghs_trace_summary(trace.data() + (trace.size() - kept), kept, &stats), "trace summary");

  json loglik;
  loglik["post_burnin"] = {{"mean", number(stats.mean)},
                           {"sd", number(stats.sd)},
                           {"geweke_z", number(stats.geweke_z)},
                           {"length", stats.length}};
  json values = json::array();
  for (const double v : trace) values.push_back(number(v));
  loglik["trace"] = std::move(values);

  json j;
  j["seed"] = seed;
  j["samples"] = samples_path.string();
  j["seconds"] = hsghs_samples_seconds(s);
  j["posterior_mean"] = {{"B", matrix_json(B.get())}, {"Omega", matrix_json(Omega.get())}};
  j["loglik"] = std::move(loglik);
  return j;
}

void run_fit(const FitOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path x_path = absolute(o.x), y_path = absolute(o.y), dir = absolute(o.out_dir);
  const Matrix X = read_matrix(x_path), Y = read_matrix(y_path);
  ensure_dir(dir);

  hsghs_gibbs_config base;
  hsghs_gibbs_config_default(&base);
  base.burnin = o.burnin;
  base.nmc = o.nmc;
  base.thin = o.thin;
  base.seed = o.seed;
  base.pd_jitter = o.pd_jitter;

  std::vector<ChainResult> results(o.chains);
  std::vector<unsigned> ids(o.chains);
  auto run_one = [&](unsigned k) {
    hsghs_gibbs_config cfg = base;
    cfg.seed = o.seed + k;
    ids[k] = k;
    hsghs_samples* s = nullptr;
    const hsghs_status st =
        hsghs_fit(X.get(), Y.get(), &cfg, o.quiet ? nullptr : print_progress, &ids[k], &s);
    if (st == HSGHS_OK) {
      results[k].samples.reset(s);
    } else {
      results[k].error = std::string(hsghs_status_name(st)) + ": " + hsghs_last_error();
    }
  };
  if (o.chains == 1) {
    run_one(0);
  } else {
    std::vector<std::thread> workers;
    for (unsigned k = 0; k < o.chains; ++k) workers.emplace_back(run_one, k);
    for (auto& w : workers) w.join();
  }
  for (unsigned k = 0; k < o.chains; ++k) {
    if (!results[k].error.empty()) {
      throw RuntimeFailure("fit chain " + std::to_string(k) + ": " + results[k].error);
    }
  }

  Manifest m;
  m.command = "fit";
  m.seed = o.seed;
  m.parameters = {{"x", x_path.string()},   {"y", y_path.string()},     {"burnin", o.burnin},
                  {"nmc", o.nmc},           {"thin", o.thin},           {"seed", o.seed},
                  {"pd-jitter", o.pd_jitter}, {"chains", o.chains},     {"out-dir", dir.string()},
                  {"samples", o.samples},   {"summary", o.summary},     {"quiet", o.quiet}};

  std::uint64_t n = 0, p = 0, q = 0, nmc = 0;
  check(hsghs_samples_dims(results[0].samples.get(), &n, &p, &q, &nmc), "dims");
  json summary;
  summary["dims"] = {{"n", n}, {"p", p}, {"q", q}};
  summary["config"] = {{"burnin", o.burnin}, {"nmc", o.nmc}, {"thin", o.thin},
                       {"seed", o.seed},     {"pd_jitter", o.pd_jitter}};
  summary["chains"] = json::array();
  for (unsigned k = 0; k < o.chains; ++k) {
    const fs::path path = chain_file(dir / o.samples, k, o.chains);
    check(hsghs_samples_write(results[k].samples.get(), path.c_str()), "writing " + path.string());
    m.outputs.push_back(path.string());
    summary["chains"].push_back(chain_summary(results[k].samples.get(), o.burnin, o.seed + k, path));
  }
  summary["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(dir / o.summary, summary);
  m.outputs.push_back((dir / o.summary).string());
  m.write(manifest_path(dir, m.command), summary["seconds"].get<double>());
}

// ---- summarize ---------------------------------------------------------

struct SummarizeOptions {
  std::string samples;
  double level = 0.75;
  std::string out_dir = ".";
  std::string out_b = "Bhat.csv", out_omega = "Omegahat.csv";
  std::string out_select_b = "select_B.csv", out_select_omega = "select_Omega.csv";
  bool intervals = false;
};

void add_summarize(CLI::App& app, SummarizeOptions& o) {
  app.add_option("--samples", o.samples, "sample stream")->required();
  app.add_option("--level", o.level, "credible level in (0, 1)")->capture_default_str();
  app.add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  app.add_option("--out-b", o.out_b, "posterior mean of B")->capture_default_str();
  app.add_option("--out-omega", o.out_omega, "posterior mean of Omega")->capture_default_str();
  app.add_option("--out-select-b", o.out_select_b, "0/1 mask for B")->capture_default_str();
  app.add_option("--out-select-omega", o.out_select_omega, "0/1 mask for Omega")->capture_default_str();
  app.add_flag("--intervals", o.intervals, "also write B_lo/B_hi/Omega_lo/Omega_hi.csv");
}

void run_summarize(const SummarizeOptions& o) {
  if (!(o.level > 0.0 && o.level < 1.0)) throw UsageFailure("--level must lie strictly between 0 and 1");
  const auto start = std::chrono::steady_clock::now();
  const fs::path samples_path = absolute(o.samples), dir = absolute(o.out_dir);
  const Samples s = read_samples(samples_path);
  ensure_dir(dir);
  Manifest m;
  m.command = "summarize";
  m.parameters = {{"samples", samples_path.string()}, {"level", o.level},
                  {"out-dir", dir.string()},           {"out-b", o.out_b},
                  {"out-omega", o.out_omega},          {"out-select-b", o.out_select_b},
                  {"out-select-omega", o.out_select_omega}, {"intervals", o.intervals}};
  auto emit = [&](hsghs_matrix* raw, const std::string& name) {
    const Matrix owned(raw);
    write_matrix(owned.get(), dir / name);
    m.outputs.push_back((dir / name).string());
  };

  hsghs_matrix *b = nullptr, *omega = nullptr;
  check(hsghs_posterior_mean(s.get(), &b, &omega), "posterior mean");
  emit(b, o.out_b);
  emit(omega, o.out_omega);

  hsghs_matrix *b_mask = nullptr, *omega_mask = nullptr;
  check(hsghs_select(s.get(), o.level, &b_mask, &omega_mask), "selection");
  emit(b_mask, o.out_select_b);
  emit(omega_mask, o.out_select_omega);

  if (o.intervals) {
    hsghs_matrix *blo = nullptr, *bhi = nullptr, *olo = nullptr, *ohi = nullptr;
    check(hsghs_credible_interval(s.get(), o.level, &blo, &bhi, &olo, &ohi), "credible intervals");
    emit(blo, "B_lo.csv");
    emit(bhi, "B_hi.csv");
    emit(olo, "Omega_lo.csv");
    emit(ohi, "Omega_hi.csv");
  }
  m.write(manifest_path(dir, m.command),
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

// ---- metrics -----------------------------------------------------------

struct MetricsOptions {
  std::string truth_dir, estimate_dir, test_dir;
  std::string out_dir = ".", out = "metrics.json";
};

void add_metrics(CLI::App& app, MetricsOptions& o) {
  app.add_option("--truth-dir", o.truth_dir, "B_true.csv, Omega_true.csv and training X.csv")->required();
  app.add_option("--estimate-dir", o.estimate_dir, "Bhat.csv, Omegahat.csv, select_B.csv, select_Omega.csv")
      ->required();
  app.add_option("--test-dir", o.test_dir, "X_test.csv and Y_test.csv (default: truth dir)");
  app.add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  app.add_option("--out", o.out, "report file name")->capture_default_str();
}

void run_metrics(const MetricsOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path truth = absolute(o.truth_dir), est = absolute(o.estimate_dir),
                 test = absolute(o.test_dir.empty() ? o.truth_dir : o.test_dir), dir = absolute(o.out_dir);
  const Matrix B_true = read_matrix(truth / "B_true.csv"), Omega_true = read_matrix(truth / "Omega_true.csv"),
               X = read_matrix(truth / "X.csv");
  const Matrix B_hat = read_matrix(est / "Bhat.csv"), Omega_hat = read_matrix(est / "Omegahat.csv"),
               b_sel = read_matrix(est / "select_B.csv"), omega_sel = read_matrix(est / "select_Omega.csv");
  const Matrix X_test = read_matrix(test / "X_test.csv"), Y_test = read_matrix(test / "Y_test.csv");

  hsghs_metrics_report r;
  check(hsghs_metrics(B_true.get(), Omega_true.get(), B_hat.get(), Omega_hat.get(), b_sel.get(),
                      omega_sel.get(), X.get(), X_test.get(), Y_test.get(), &r),
        "metrics");
  const json report = {{"mse_b", number(r.mse_b)},         {"mse_omega", number(r.mse_omega)},
                       {"prediction_mse", number(r.prediction_mse)}, {"avg_kl", number(r.avg_kl)},
                       {"b_sen", number(r.b_sen)},         {"b_spe", number(r.b_spe)},
                       {"b_prc", number(r.b_prc)},         {"omega_sen", number(r.omega_sen)},
                       {"omega_spe", number(r.omega_spe)}, {"omega_prc", number(r.omega_prc)}};
  ensure_dir(dir);
  write_json(dir / o.out, report);

  Manifest m;
  m.command = "metrics";
  m.parameters = {{"truth-dir", truth.string()}, {"estimate-dir", est.string()},
                  {"test-dir", test.string()},   {"out-dir", dir.string()},
                  {"out", o.out}};
  m.outputs.push_back((dir / o.out).string());
  m.write(manifest_path(dir, m.command),
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

// ---- roc ---------------------------------------------------------------

struct RocOptions {
  std::string samples, estimate_dir, truth_dir, mode = "bayes";
  std::string out_dir = ".";
};

void add_roc(CLI::App& app, RocOptions& o) {
  auto* samples = app.add_option("--samples", o.samples, "sample stream (bayes mode, or threshold on its mean)");
  auto* estimate = app.add_option("--estimate-dir", o.estimate_dir, "Bhat.csv and Omegahat.csv (threshold mode)");
  samples->excludes(estimate);
  app.add_option("--truth-dir", o.truth_dir, "B_true.csv and Omega_true.csv")->required();
  app.add_option("--mode", o.mode, "bayes: credible levels 0.01..0.99; threshold: |estimate| > t")
      ->check(CLI::IsMember({"bayes", "threshold"}))
      ->capture_default_str();
  app.add_option("--out-dir", o.out_dir, "writes roc_B.csv and roc_Omega.csv")->capture_default_str();
}

// cutoff,fpr,tpr per line with the 17-digit convention of the matrix files.
std::string roc_csv(const std::vector<hsghs_roc_point>& points) {
  std::string out;
  char buf[40];
  for (const auto& pt : points) {
    const double row[3] = {pt.cutoff, pt.fpr, pt.tpr};
    for (int k = 0; k < 3; ++k) {
      if (k > 0) out.push_back(',');
      const auto res = std::to_chars(buf, buf + sizeof buf, row[k], std::chars_format::general, 17);
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void run_roc(const RocOptions& o) {
  if (o.samples.empty() && o.estimate_dir.empty()) throw UsageFailure("one of --samples or --estimate-dir is required");
  if (o.mode == "bayes" && o.samples.empty()) throw UsageFailure("bayes mode needs --samples");
  const auto start = std::chrono::steady_clock::now();
  const fs::path truth = absolute(o.truth_dir), dir = absolute(o.out_dir);
  const Matrix B_true = read_matrix(truth / "B_true.csv"), Omega_true = read_matrix(truth / "Omega_true.csv");
  ensure_dir(dir);

  Manifest m;
  m.command = "roc";
  m.parameters = {{"truth-dir", truth.string()}, {"mode", o.mode}, {"out-dir", dir.string()}};

  Samples samples;
  Matrix B_est, Omega_est;
  if (!o.samples.empty()) {
    const fs::path path = absolute(o.samples);
    m.parameters["samples"] = path.string();
    samples = read_samples(path);
    if (o.mode == "threshold") {
      hsghs_matrix *b = nullptr, *omega = nullptr;
      check(hsghs_posterior_mean(samples.get(), &b, &omega), "posterior mean");
      B_est.reset(b);
      Omega_est.reset(omega);
    }
  } else {
    const fs::path est = absolute(o.estimate_dir);
    m.parameters["estimate-dir"] = est.string();
    B_est = read_matrix(est / "Bhat.csv");
    Omega_est = read_matrix(est / "Omegahat.csv");
  }

  const std::pair<hsghs_target, const char*> targets[] = {{HSGHS_TARGET_B, "roc_B.csv"},
                                                          {HSGHS_TARGET_OMEGA, "roc_Omega.csv"}};
  for (const auto& [target, name] : targets) {
    const hsghs_matrix* truth_m = target == HSGHS_TARGET_B ? B_true.get() : Omega_true.get();
    std::vector<hsghs_roc_point> points;
    if (o.mode == "bayes") {
      std::vector<double> levels;
      for (int i = 1; i <= 99; ++i) levels.push_back(i / 100.0);
      points.resize(levels.size());
      check(hsghs_roc_bayes(samples.get(), truth_m, target, levels.data(), levels.size(), points.data()),
            name);
    } else {
      const hsghs_matrix* est_m = target == HSGHS_TARGET_B ? B_est.get() : Omega_est.get();
      std::size_t size = 0;
      check(hsghs_threshold_grid(est_m, target, nullptr, 0, &size), "threshold grid");
      std::vector<double> grid(size);
      check(hsghs_threshold_grid(est_m, target, grid.data(), grid.size(), &size), "threshold grid");
      points.resize(grid.size());
      check(hsghs_roc_threshold(est_m, truth_m, target, grid.data(), grid.size(), points.data()), name);
    }
    write_text_atomic(dir / name, roc_csv(points));
    m.outputs.push_back((dir / name).string());
  }
  m.write(manifest_path(dir, m.command),
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

// ---- replay ------------------------------------------------------------

std::vector<std::string> replay_args(const json& manifest, const std::string& out_dir) {
  if (!manifest.contains("command") || !manifest.contains("parameters")) {
    throw RuntimeFailure("manifest lacks command or parameters");
  }
  std::vector<std::string> args{manifest["command"].get<std::string>()};
  for (const auto& [key, value] : manifest["parameters"].items()) {
    if (key == "note") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    if (key == "out-dir" && !out_dir.empty()) {
      args.push_back(absolute(out_dir).string());
    } else if (value.is_string()) {
      args.push_back(value.get<std::string>());
    } else {
      args.push_back(value.dump());
    }
  }
  return args;
}

struct Cli {
  CLI::App app{"HS-GHS: joint mean and precision estimation for multivariate regression"};
  SimulateOptions simulate;
  FitOptions fit;
  SummarizeOptions summarize;
  MetricsOptions metrics;
  RocOptions roc;
  std::string replay_manifest, replay_out_dir;

  CLI::App* simulate_cmd;
  CLI::App* fit_cmd;
  CLI::App* summarize_cmd;
  CLI::App* metrics_cmd;
  CLI::App* roc_cmd;
  CLI::App* replay_cmd;

  Cli() {
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hsghs_version()));
    simulate_cmd = app.add_subcommand("simulate", "generate a synthetic data set");
    add_simulate(*simulate_cmd, simulate);
    fit_cmd = app.add_subcommand("fit", "run the Gibbs sampler");
    add_fit(*fit_cmd, fit);
    summarize_cmd = app.add_subcommand("summarize", "posterior means, intervals and selection");
    add_summarize(*summarize_cmd, summarize);
    metrics_cmd = app.add_subcommand("metrics", "score an estimate against the truth");
    add_metrics(*metrics_cmd, metrics);
    roc_cmd = app.add_subcommand("roc", "ROC tables for B and Omega");
    add_roc(*roc_cmd, roc);
    replay_cmd = app.add_subcommand("replay", "rerun a command from its manifest");
    replay_cmd->add_option("manifest", replay_manifest, "manifest JSON")->required();
    replay_cmd->add_option("--out-dir", replay_out_dir, "write outputs here instead");
  }

  void dispatch(int depth) {
    if (simulate_cmd->parsed()) return run_simulate(simulate);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (summarize_cmd->parsed()) return run_summarize(summarize);
    if (metrics_cmd->parsed()) return run_metrics(metrics);
    if (roc_cmd->parsed()) return run_roc(roc);
    if (replay_cmd->parsed()) {
      if (depth > 0) throw UsageFailure("a manifest cannot replay another replay");
      auto args = replay_args(read_json(replay_manifest), replay_out_dir);
      Cli inner;
      std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
      inner.app.parse(args);
      inner.dispatch(depth + 1);
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  try {
    cli.app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return cli.app.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.app.exit(e);
    return kExitUsage;
  }
  try {
    cli.dispatch(0);
  } catch (const UsageFailure& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "manifest does not form a valid command: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
