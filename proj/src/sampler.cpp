#include "hsghs/sampler.hpp"

#include <chrono>
#include <cmath>

#include "hsghs/linalg.hpp"

namespace hsghs {

namespace {

arma::uvec all_but(arma::uword q, arma::uword k) {
  arma::uvec idx(q - 1);
  arma::uword at = 0;
  for (arma::uword i = 0; i < q; ++i) {
    if (i != k) idx(at++) = i;
  }
  return idx;
}


}  // namespace

KroneckerDesign::KroneckerDesign(arma::mat X, arma::mat omega_sqrt, Materialize policy)
    : X_(std::move(X)), root_(std::move(omega_sqrt)) {
  if (!root_.is_square()) throw Error(ErrorCode::DimensionMismatch, "omega_sqrt must be square");
  const double entries = static_cast<double>(rows()) * static_cast<double>(cols());
  const bool build = policy == Materialize::Always ||
                     (policy == Materialize::Auto && entries <= kMaterializeLimit);
  if (build) dense_ = arma::kron(X_, root_);
}

arma::vec KroneckerDesign::apply(const arma::vec& beta) const {
  if (beta.n_elem != cols()) throw Error(ErrorCode::DimensionMismatch, "beta length != pq");
  if (dense_) return *dense_ * beta;
  // (X (x) R) vec(B') = vec(R B' X')
  const arma::mat Bt = arma::reshape(beta, q(), p());
  return arma::vectorise(root_ * Bt * X_.t());
}

arma::vec KroneckerDesign::apply_transpose(const arma::vec& w) const {
  if (w.n_elem != rows()) throw Error(ErrorCode::DimensionMismatch, "w length != nq");
  if (dense_) return dense_->t() * w;
  // (X' (x) R) vec(W) = vec(R W X), R symmetric
  const arma::mat W = arma::reshape(w, q(), n());
  return arma::vectorise(root_ * W * X_);
}

arma::mat KroneckerDesign::weighted_gram(const arma::vec& weights) const {
  if (weights.n_elem != cols()) throw Error(ErrorCode::DimensionMismatch, "weights length != pq");
  if (dense_) {
    arma::mat scaled = *dense_;
    scaled.each_row() %= arma::sqrt(weights).t();
    return scaled * scaled.t();
  }
  // sum_l kron(X diag(w_{.l}) X', r_l r_l') with r_l the l-th column of R
  const arma::mat by_response = arma::reshape(weights, q(), p()).t();  // p x q
  arma::mat gram(rows(), rows(), arma::fill::zeros);
  for (arma::uword l = 0; l < q(); ++l) {
    arma::mat xw = X_;
    xw.each_row() %= by_response.col(l).t();
    const arma::mat h = xw * X_.t();
    gram += arma::kron(h, root_.col(l) * root_.col(l).t());
  }
  return gram;
}

arma::mat KroneckerDesign::dense() const {
  if (dense_) return *dense_;
  return arma::kron(X_, root_);
}

arma::mat omega_sqrt(const arma::mat& omega, double jitter) {
  if (!omega.is_square()) throw Error(ErrorCode::DimensionMismatch, "omega must be square");
  if (!omega.is_finite()) throw Error(ErrorCode::NonFiniteEntry, "omega is not finite");
  arma::mat shifted = 0.5 * (omega + omega.t());
  if (jitter > 0.0) shifted.diag() += jitter;
  arma::vec eigval;
  arma::mat eigvec;
  linalg::eig_sym(shifted, eigval, eigvec);
  if (eigval.min() <= 0.0) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "omega has nonpositive eigenvalue " + std::to_string(eigval.min()));
  }
  const arma::mat root = eigvec * arma::diagmat(arma::sqrt(eigval)) * eigvec.t();
  return 0.5 * (root + root.t());
}

TransformedData transform_data(const Dataset& ds, const arma::mat& omega, double jitter,
                               Materialize policy) {
  if (omega.n_rows != ds.q()) throw Error(ErrorCode::DimensionMismatch, "omega must be q x q");
  arma::mat root = omega_sqrt(omega, jitter);
  arma::vec y_tilde = arma::vectorise(root * ds.Y.t());
  return TransformedData{std::move(y_tilde), KroneckerDesign(ds.X, std::move(root), policy)};
}

arma::vec sample_beta(const arma::vec& y_tilde, const KroneckerDesign& design,
                      const arma::vec& lambda_star, Rng& rng) {
  if (y_tilde.n_elem != design.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "y_tilde length != nq");
  }
  if (lambda_star.n_elem != design.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "lambda_star length != pq");
  }
  if (!lambda_star.is_finite() || lambda_star.min() <= 0.0) {
    throw Error(ErrorCode::NonFiniteEntry, "lambda_star must be finite and positive");
  }

  const arma::vec u = arma::sqrt(lambda_star) % std_normal_vec(design.cols(), rng);
  const arma::vec delta = std_normal_vec(design.rows(), rng);
  const arma::vec v = design.apply(u) + delta;

  arma::mat system = design.weighted_gram(lambda_star);
  system.diag() += 1.0;
  const auto L = linalg::cholesky_lower(system);
  if (!L) {
    throw Error(ErrorCode::NumericalFailure,
                "(X~ L X~' + I) factorization failed; state is contaminated");
  }
  const arma::vec w = linalg::cholesky_solve(*L, y_tilde - v);
  return u + lambda_star % design.apply_transpose(w);
}

void update_lambda_nu(ChainState& state, Rng& rng) {
  const arma::uword pq = state.beta.n_elem;
  const double two_tau2 = 2.0 * state.tau2;
  for (arma::uword j = 0; j < pq; ++j) {
    const double b = state.beta(j);
    state.lambda2(j) = inv_gamma_draw(1.0, 1.0 / state.nu(j) + b * b / two_tau2, rng);
  }
  for (arma::uword j = 0; j < pq; ++j) {
    state.nu(j) = inv_gamma_draw(1.0, 1.0 + 1.0 / state.lambda2(j), rng);
  }
}

void update_tau_xi(ChainState& state, Rng& rng) {
  const double pq = static_cast<double>(state.beta.n_elem);
  const double scale =
      1.0 / state.xi + arma::accu(arma::square(state.beta) / (2.0 * state.lambda2));
  state.tau2 = inv_gamma_draw((pq + 1.0) / 2.0, scale, rng);
  state.xi = inv_gamma_draw(1.0, 1.0 + 1.0 / state.tau2, rng);
}

void ghs_sweep_omega(const arma::mat& S, arma::uword n, ChainState& state, Rng& rng) {
  const arma::uword q = S.n_rows;
  if (!S.is_square() || state.omega.n_rows != q || state.omega.n_cols != q) {
    throw Error(ErrorCode::DimensionMismatch, "scatter matrix and omega must both be q x q");
  }
  if (!S.is_finite()) throw Error(ErrorCode::NonFiniteEntry, "scatter matrix is not finite");
  const double floor = 1e-12 * arma::trace(S) / static_cast<double>(q);
  const double gamma_shape = static_cast<double>(n) / 2.0 + 1.0;

  for (arma::uword k = 0; k < q; ++k) {
    const double skk = S(k, k);
    if (!(skk > floor) || !(skk > 0.0)) {
      throw Error(ErrorCode::DegenerateResidual,
                  "residual column " + std::to_string(k) + " has degenerate scatter " +
                      std::to_string(skk));
    }
    const double gamma = gamma_draw(gamma_shape, 2.0 / skk, rng);
    if (q == 1) {
      state.omega(0, 0) = gamma;
      continue;
    }

    const arma::uvec others = all_but(q, k);
    const arma::uvec col_k = {k};
    const arma::mat omega11 = state.omega(others, others);
    const arma::mat omega11_inv = linalg::inverse_spd(omega11, "omega block");
    const arma::vec s12 = S(others, col_k);
    const arma::vec eta = state.eta2(others, col_k);

    // C^-1 = s_kk Omega11^-1 + diag(eta2 zeta2)^-1
    arma::mat precision = skk * omega11_inv;
    precision.diag() += 1.0 / (eta * state.zeta2);
    const arma::mat L = linalg::cholesky_lower(precision, "column precision C^-1");
    const arma::vec mean = -linalg::cholesky_solve(L, s12);
    const arma::vec upsilon = mean + linalg::solve_lower_transpose(L, std_normal_vec(q - 1, rng));

    for (arma::uword i = 0; i < others.n_elem; ++i) {
      state.omega(others(i), k) = upsilon(i);
      state.omega(k, others(i)) = upsilon(i);
    }
    state.omega(k, k) = gamma + arma::dot(upsilon, omega11_inv * upsilon);

    const double two_zeta2 = 2.0 * state.zeta2;
    for (arma::uword i = 0; i < others.n_elem; ++i) {
      const arma::uword l = others(i);
      const double w = upsilon(i);
      const double e = inv_gamma_draw(1.0, 1.0 / state.rho(l, k) + w * w / two_zeta2, rng);
      state.eta2(l, k) = e;
      state.eta2(k, l) = e;
    }
    for (arma::uword i = 0; i < others.n_elem; ++i) {
      const arma::uword l = others(i);
      const double r = inv_gamma_draw(1.0, 1.0 + 1.0 / state.eta2(l, k), rng);
      state.rho(l, k) = r;
      state.rho(k, l) = r;
    }
  }
}

void update_zeta_phi(ChainState& state, Rng& rng) {
  const arma::uword q = state.omega.n_rows;
  const double pairs = static_cast<double>(q * (q - 1) / 2);
  double scale = 1.0 / state.phi;
  for (arma::uword k = 0; k < q; ++k) {
    for (arma::uword l = k + 1; l < q; ++l) {
      const double w = state.omega(k, l);
      scale += w * w / (2.0 * state.eta2(k, l));
    }
  }
  state.zeta2 = inv_gamma_draw((pairs + 1.0) / 2.0, scale, rng);
  state.phi = inv_gamma_draw(1.0, 1.0 + 1.0 / state.zeta2, rng);
}

double neg_log_likelihood(const arma::mat& B, const arma::mat& omega, const Dataset& ds) {
  if (B.n_rows != ds.p() || B.n_cols != ds.q() || omega.n_rows != ds.q() ||
      omega.n_cols != ds.q()) {
    throw Error(ErrorCode::DimensionMismatch, "B must be p x q and omega q x q");
  }
  const arma::mat resid = ds.Y - ds.X * B;
  const arma::mat scatter = resid.t() * resid;
  const double n = static_cast<double>(ds.n());
  return arma::accu(scatter % omega) / n - linalg::log_det_spd(omega, "omega");
}

double log_likelihood(const arma::mat& B, const arma::mat& omega, const Dataset& ds) {
  return -0.5 * static_cast<double>(ds.n()) * neg_log_likelihood(B, omega, ds);
}

void gibbs_step(const Dataset& ds, ChainState& state, Rng& rng, double pd_jitter) {
  const TransformedData data = transform_data(ds, state.omega, pd_jitter);
  state.beta = sample_beta(data.y_tilde, data.design, state.lambda2 * state.tau2, rng);
  update_lambda_nu(state, rng);
  update_tau_xi(state, rng);

  const arma::mat B = unvec_transpose(state.beta, ds.p(), ds.q());
  const arma::mat resid = ds.Y - ds.X * B;
  arma::mat scatter = resid.t() * resid;
  scatter = 0.5 * (scatter + scatter.t());
  ghs_sweep_omega(scatter, ds.n(), state, rng);
  update_zeta_phi(state, rng);

  if (!linalg::cholesky_lower(state.omega)) {
    throw Error(ErrorCode::NotPositiveDefinite, "omega lost positive definiteness");
  }
}

PosteriorSamples run_chain(const Dataset& ds, const GibbsConfig& config, Rng& rng,
                           const ProgressFn& progress) {
  validate_dataset(ds);
  validate_config(config);
  const auto started = std::chrono::steady_clock::now();

  const arma::uword p = ds.p();
  const arma::uword q = ds.q();
  PosteriorSamples out;
  out.dims = {ds.n(), p, q};
  out.config = config;
  out.beta_draws.set_size(config.nmc, p * q);
  out.omega_draws.set_size(config.nmc, q * (q + 1) / 2);
  out.loglik_trace.reserve(config.total_steps());

  ChainState state = ChainState::initial(p, q);
  const std::uint64_t total = config.total_steps();
  arma::uword stored = 0;
  for (std::uint64_t step = 1; step <= total; ++step) {
    gibbs_step(ds, state, rng, config.pd_jitter);
    const double ll =
        log_likelihood(unvec_transpose(state.beta, p, q), state.omega, ds);
    out.loglik_trace.push_back(ll);
    if (step > config.burnin && (step - config.burnin) % config.thin == 0) {
      out.beta_draws.row(stored) = state.beta.t();
      out.omega_draws.row(stored) = compress_triangle(state.omega).t();
      ++stored;
    }
    if (progress) progress(step, total, ll);
  }

  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

PosteriorSamples run_chain(const Dataset& ds, const GibbsConfig& config,
                           const ProgressFn& progress) {
  Rng rng(config.seed);
  return run_chain(ds, config, rng, progress);
}

}  // namespace hsghs
