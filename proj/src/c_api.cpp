#include "hsghs/hsghs.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include "hsghs/diagnostics.hpp"
#include "hsghs/io.hpp"
#include "hsghs/metrics.hpp"
#include "hsghs/sampler.hpp"
#include "hsghs/simulate.hpp"
#include "hsghs/summary.hpp"
#include "hsghs/version.hpp"

struct hsghs_matrix {
  arma::mat value;
};

struct hsghs_samples {
  hsghs::PosteriorSamples value;
};

struct hsghs_simulation {
  hsghs::SimulatedData value;
};

namespace {

thread_local std::string g_last_error;

hsghs_status to_status(hsghs::ErrorCode code) {
  using hsghs::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return HSGHS_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return HSGHS_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NonFiniteEntry: return HSGHS_ERR_NON_FINITE;
    case ErrorCode::NotPositiveDefinite: return HSGHS_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::DegenerateResidual: return HSGHS_ERR_DEGENERATE_RESIDUAL;
    case ErrorCode::NumericalFailure: return HSGHS_ERR_NUMERICAL;
    case ErrorCode::Io: return HSGHS_ERR_IO;
    case ErrorCode::Format: return HSGHS_ERR_FORMAT;
  }
  return HSGHS_ERR_INTERNAL;
}

hsghs_status fail(hsghs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename Fn>
hsghs_status guarded(Fn&& body) {
  g_last_error.clear();
  try {
    body();
    return HSGHS_OK;
  } catch (const hsghs::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HSGHS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HSGHS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HSGHS_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) {
    throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, std::string(name) + " is NULL");
  }
}

hsghs_matrix* wrap(arma::mat m) { return new hsghs_matrix{std::move(m)}; }

arma::mat to_double(const arma::umat& mask) { return arma::conv_to<arma::mat>::from(mask); }

arma::umat positives(const arma::mat& truth, hsghs::Target target) {
  arma::umat mask = truth != 0.0;
  if (target == hsghs::Target::Omega) mask.diag().zeros();
  return mask;
}

hsghs::Target to_target(hsghs_target t) {
  if (t == HSGHS_TARGET_B) return hsghs::Target::B;
  if (t == HSGHS_TARGET_OMEGA) return hsghs::Target::Omega;
  throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "unknown target");
}

double or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

void copy_points(const std::vector<hsghs::RocPoint>& points, hsghs_roc_point* out) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = {points[i].cutoff, points[i].fpr, points[i].tpr};
  }
}

}  // namespace

extern "C" {

const char* hsghs_version(void) { return hsghs::kVersion; }

const char* hsghs_last_error(void) { return g_last_error.c_str(); }

const char* hsghs_status_name(hsghs_status status) {
  switch (status) {
    case HSGHS_OK: return "ok";
    case HSGHS_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case HSGHS_ERR_DIMENSION_MISMATCH: return "dimension-mismatch";
    case HSGHS_ERR_NON_FINITE: return "non-finite-entry";
    case HSGHS_ERR_NOT_POSITIVE_DEFINITE: return "not-positive-definite";
    case HSGHS_ERR_DEGENERATE_RESIDUAL: return "degenerate-residual";
    case HSGHS_ERR_NUMERICAL: return "numerical-failure";
    case HSGHS_ERR_IO: return "io";
    case HSGHS_ERR_FORMAT: return "format";
    case HSGHS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

hsghs_status hsghs_matrix_create(size_t rows, size_t cols, const double* row_major,
                                 hsghs_matrix** out) {
  return guarded([&] {
    require(out, "out");
    arma::mat m(rows, cols, arma::fill::zeros);
    if (row_major != nullptr) {
      for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) m(i, j) = row_major[i * cols + j];
      }
    }
    *out = wrap(std::move(m));
  });
}

void hsghs_matrix_free(hsghs_matrix* m) { delete m; }

size_t hsghs_matrix_rows(const hsghs_matrix* m) { return m ? m->value.n_rows : 0; }

size_t hsghs_matrix_cols(const hsghs_matrix* m) { return m ? m->value.n_cols : 0; }

hsghs_status hsghs_matrix_copy_to(const hsghs_matrix* m, double* row_major, size_t capacity) {
  return guarded([&] {
    require(m, "matrix");
    require(row_major, "row_major");
    if (capacity < m->value.n_elem) {
      throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "output buffer too small");
    }
    const arma::mat t = m->value.t();  // column-major of the transpose is row-major
    std::copy(t.begin(), t.end(), row_major);
  });
}

hsghs_status hsghs_matrix_get(const hsghs_matrix* m, size_t row, size_t col, double* out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    if (row >= m->value.n_rows || col >= m->value.n_cols) {
      throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "index out of range");
    }
    *out = m->value(row, col);
  });
}

hsghs_status hsghs_matrix_read_csv(const char* path, hsghs_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(hsghs::read_csv(path));
  });
}

hsghs_status hsghs_matrix_write_csv(const hsghs_matrix* m, const char* path) {
  return guarded([&] {
    require(m, "matrix");
    require(path, "path");
    hsghs::write_csv(m->value, path);
  });
}

void hsghs_sim_config_default(hsghs_sim_config* config) {
  if (config == nullptr) return;
  const hsghs::SimulationConfig d;
  *config = {d.n,   d.p,          d.q,          d.n_test, HSGHS_STRUCTURE_AR1, HSGHS_COEF_UNIFORM,
             d.sparsity, d.design_rho, d.group_size, 0,        d.seed};
}

hsghs_status hsghs_simulate(const hsghs_sim_config* config, hsghs_simulation** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    hsghs::SimulationConfig c;
    c.n = config->n;
    c.p = config->p;
    c.q = config->q;
    c.n_test = config->n_test;
    switch (config->structure) {
      case HSGHS_STRUCTURE_AR1: c.structure = hsghs::Structure::AR1; break;
      case HSGHS_STRUCTURE_CLIQUES: c.structure = hsghs::Structure::Cliques; break;
      case HSGHS_STRUCTURE_STAR: c.structure = hsghs::Structure::Star; break;
      default: throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "unknown structure");
    }
    switch (config->coef) {
      case HSGHS_COEF_UNIFORM: c.coef = hsghs::CoefDist::Uniform; break;
      case HSGHS_COEF_CONST5: c.coef = hsghs::CoefDist::Constant5; break;
      default: throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "unknown coefficient law");
    }
    c.sparsity = config->sparsity;
    c.design_rho = config->design_rho;
    c.group_size = config->group_size;
    c.strict_cliques = config->strict_cliques != 0;
    c.seed = config->seed;
    *out = new hsghs_simulation{hsghs::simulate(c)};
  });
}

void hsghs_simulation_free(hsghs_simulation* sim) { delete sim; }

hsghs_status hsghs_simulation_get(const hsghs_simulation* sim, hsghs_sim_part part,
                                  hsghs_matrix** out) {
  return guarded([&] {
    require(sim, "simulation");
    require(out, "out");
    const auto& v = sim->value;
    switch (part) {
      case HSGHS_SIM_X: *out = wrap(v.train.X); break;
      case HSGHS_SIM_Y: *out = wrap(v.train.Y); break;
      case HSGHS_SIM_B_TRUE: *out = wrap(v.truth.B0); break;
      case HSGHS_SIM_OMEGA_TRUE: *out = wrap(v.truth.Omega0); break;
      case HSGHS_SIM_X_TEST: *out = wrap(v.test.X); break;
      case HSGHS_SIM_Y_TEST: *out = wrap(v.test.Y); break;
      default: throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "unknown simulation part");
    }
  });
}

size_t hsghs_simulation_isolated_rows(const hsghs_simulation* sim) {
  return sim ? sim->value.precision.isolated_rows : 0;
}

void hsghs_gibbs_config_default(hsghs_gibbs_config* config) {
  if (config == nullptr) return;
  const hsghs::GibbsConfig d;
  *config = {d.burnin, d.nmc, d.thin, d.seed, d.pd_jitter};
}

hsghs_status hsghs_fit(const hsghs_matrix* X, const hsghs_matrix* Y,
                       const hsghs_gibbs_config* config, hsghs_progress_fn progress, void* user,
                       hsghs_samples** out) {
  return guarded([&] {
    require(X, "X");
    require(Y, "Y");
    require(config, "config");
    require(out, "out");
    hsghs::GibbsConfig c;
    c.burnin = config->burnin;
    c.nmc = config->nmc;
    c.thin = config->thin;
    c.seed = config->seed;
    c.pd_jitter = config->pd_jitter;
    hsghs::ProgressFn fn;
    if (progress != nullptr) {
      fn = [progress, user](std::uint64_t step, std::uint64_t total, double ll) {
        progress(step, total, ll, user);
      };
    }
    const hsghs::Dataset ds{X->value, Y->value};
    *out = new hsghs_samples{hsghs::run_chain(ds, c, fn)};
  });
}

void hsghs_samples_free(hsghs_samples* s) { delete s; }

hsghs_status hsghs_samples_dims(const hsghs_samples* s, uint64_t* n, uint64_t* p, uint64_t* q,
                                uint64_t* nmc) {
  return guarded([&] {
    require(s, "samples");
    if (n) *n = s->value.dims.n;
    if (p) *p = s->value.dims.p;
    if (q) *q = s->value.dims.q;
    if (nmc) *nmc = s->value.draws();
  });
}

hsghs_status hsghs_samples_write(const hsghs_samples* s, const char* path) {
  return guarded([&] {
    require(s, "samples");
    require(path, "path");
    hsghs::write_samples(s->value, path);
  });
}

hsghs_status hsghs_samples_read(const char* path, hsghs_samples** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new hsghs_samples{hsghs::read_samples(path)};
  });
}

hsghs_status hsghs_samples_draw(const hsghs_samples* s, uint64_t index, hsghs_matrix** B,
                                hsghs_matrix** omega) {
  return guarded([&] {
    require(s, "samples");
    if (index >= s->value.draws()) {
      throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "draw index out of range");
    }
    if (B) *B = wrap(s->value.coef_draw(index));
    if (omega) *omega = wrap(s->value.omega_draw(index));
  });
}

double hsghs_samples_seconds(const hsghs_samples* s) { return s ? s->value.seconds : 0.0; }

size_t hsghs_samples_trace_length(const hsghs_samples* s) {
  return s ? s->value.loglik_trace.size() : 0;
}

hsghs_status hsghs_samples_trace(const hsghs_samples* s, double* out, size_t capacity) {
  return guarded([&] {
    require(s, "samples");
    const auto& trace = s->value.loglik_trace;
    if (trace.empty()) return;
    require(out, "out");
    if (capacity < trace.size()) {
      throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "output buffer too small");
    }
    std::copy(trace.begin(), trace.end(), out);
  });
}

hsghs_status hsghs_trace_summary(const double* trace, size_t length, hsghs_trace_stats* out) {
  return guarded([&] {
    require(out, "out");
    if (length > 0) require(trace, "trace");
    const auto stats = hsghs::trace_stats(std::span<const double>(trace, length));
    *out = {stats.mean, stats.sd, stats.geweke_z, stats.length};
  });
}

hsghs_status hsghs_posterior_mean(const hsghs_samples* s, hsghs_matrix** B, hsghs_matrix** omega) {
  return guarded([&] {
    require(s, "samples");
    auto est = hsghs::posterior_mean(s->value);
    if (B) *B = wrap(std::move(est.B));
    if (omega) *omega = wrap(std::move(est.Omega));
  });
}

hsghs_status hsghs_credible_interval(const hsghs_samples* s, double level, hsghs_matrix** b_lo,
                                     hsghs_matrix** b_hi, hsghs_matrix** omega_lo,
                                     hsghs_matrix** omega_hi) {
  return guarded([&] {
    require(s, "samples");
    auto ci = hsghs::credible_interval(s->value, level);
    if (b_lo) *b_lo = wrap(std::move(ci.b_lo));
    if (b_hi) *b_hi = wrap(std::move(ci.b_hi));
    if (omega_lo) *omega_lo = wrap(std::move(ci.omega_lo));
    if (omega_hi) *omega_hi = wrap(std::move(ci.omega_hi));
  });
}

hsghs_status hsghs_select(const hsghs_samples* s, double level, hsghs_matrix** b_mask,
                          hsghs_matrix** omega_mask) {
  return guarded([&] {
    require(s, "samples");
    const auto sel = hsghs::select_by_interval(hsghs::credible_interval(s->value, level));
    if (b_mask) *b_mask = wrap(to_double(sel.b_selected));
    if (omega_mask) *omega_mask = wrap(to_double(sel.omega_selected));
  });
}

hsghs_status hsghs_roc_bayes(const hsghs_samples* s, const hsghs_matrix* truth,
                             hsghs_target target, const double* levels, size_t count,
                             hsghs_roc_point* out) {
  return guarded([&] {
    require(s, "samples");
    require(truth, "truth");
    if (count == 0) return;
    require(levels, "levels");
    require(out, "out");
    const auto t = to_target(target);
    const auto points = hsghs::roc_sweep_bayes(s->value, positives(truth->value, t), t,
                                               std::span<const double>(levels, count));
    copy_points(points, out);
  });
}

hsghs_status hsghs_roc_threshold(const hsghs_matrix* estimate, const hsghs_matrix* truth,
                                 hsghs_target target, const double* thresholds, size_t count,
                                 hsghs_roc_point* out) {
  return guarded([&] {
    require(estimate, "estimate");
    require(truth, "truth");
    if (count == 0) return;
    require(thresholds, "thresholds");
    require(out, "out");
    const auto t = to_target(target);
    const auto points = hsghs::roc_sweep_threshold(estimate->value, positives(truth->value, t), t,
                                                   std::span<const double>(thresholds, count));
    copy_points(points, out);
  });
}

hsghs_status hsghs_threshold_grid(const hsghs_matrix* estimate, hsghs_target target, double* out,
                                  size_t capacity, size_t* written) {
  return guarded([&] {
    require(estimate, "estimate");
    require(written, "written");
    const auto grid = hsghs::default_threshold_grid(estimate->value, to_target(target));
    *written = grid.size();
    if (out == nullptr) return;
    std::copy_n(grid.begin(), std::min(capacity, grid.size()), out);
  });
}

hsghs_status hsghs_metrics(const hsghs_matrix* B_true, const hsghs_matrix* omega_true,
                           const hsghs_matrix* B_hat, const hsghs_matrix* omega_hat,
                           const hsghs_matrix* b_select, const hsghs_matrix* omega_select,
                           const hsghs_matrix* X_train, const hsghs_matrix* X_test,
                           const hsghs_matrix* Y_test, hsghs_metrics_report* out) {
  return guarded([&] {
    for (const auto* m : {B_true, omega_true, B_hat, omega_hat, b_select, omega_select, X_train,
                          X_test, Y_test}) {
      require(m, "matrix argument");
    }
    require(out, "out");
    const hsghs::GroundTruth truth{B_true->value, omega_true->value};
    const hsghs::PointEstimate estimate{B_hat->value, omega_hat->value};
    hsghs::SelectionResult selection;
    selection.b_selected = b_select->value != 0.0;
    selection.omega_selected = omega_select->value != 0.0;
    const auto r = hsghs::evaluate(truth, estimate, selection, X_train->value, X_test->value,
                                   Y_test->value);
    *out = {r.mse_b,        r.mse_omega,          r.prediction_mse,     r.avg_kl,
            or_nan(r.b_sen), or_nan(r.b_spe),     or_nan(r.b_prc),      or_nan(r.omega_sen),
            or_nan(r.omega_spe), or_nan(r.omega_prc)};
  });
}

hsghs_status hsghs_r_squared(const hsghs_matrix* B_hat, const hsghs_matrix* X_test,
                             const hsghs_matrix* Y_test, double* out, size_t capacity) {
  return guarded([&] {
    require(B_hat, "B_hat");
    require(X_test, "X_test");
    require(Y_test, "Y_test");
    require(out, "out");
    const arma::vec r2 = hsghs::r_squared(B_hat->value, X_test->value, Y_test->value);
    if (capacity < r2.n_elem) {
      throw hsghs::Error(hsghs::ErrorCode::InvalidArgument, "output buffer too small");
    }
    std::copy(r2.begin(), r2.end(), out);
  });
}

}  // extern "C"
