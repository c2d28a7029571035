#pragma once

// HS-GHS Gibbs sampler: horseshoe prior on beta = vec(B'), graphical
// horseshoe prior on the off-diagonal entries of the error precision Omega.
//
// One step conditions on Omega to whiten the data (y~ = vec(R Y'),
// X~ = X (x) R with R = Omega^{1/2}), draws beta with the exact
// Bhattacharya-Chakraborty-Mallick scheme, refreshes the horseshoe scales
// and then sweeps the columns of Omega given the residual scatter matrix.

#include <armadillo>

#include <cstdint>
#include <functional>
#include <optional>

#include "hsghs/distributions.hpp"
#include "hsghs/types.hpp"

namespace hsghs {

// Materialize X~ when nq * pq is at most this many entries.
inline constexpr double kMaterializeLimit = 2e7;

enum class Materialize { Auto, Always, Never };

// The Kronecker-structured design X~ = X (x) R, of size nq x pq.
class KroneckerDesign {
 public:
  KroneckerDesign(arma::mat X, arma::mat omega_sqrt, Materialize policy = Materialize::Auto);

  arma::uword n() const { return X_.n_rows; }
  arma::uword p() const { return X_.n_cols; }
  arma::uword q() const { return root_.n_rows; }
  arma::uword rows() const { return n() * q(); }
  arma::uword cols() const { return p() * q(); }

  const arma::mat& X() const { return X_; }
  const arma::mat& omega_sqrt() const { return root_; }
  bool materialized() const { return dense_.has_value(); }

  // X~ * beta
  arma::vec apply(const arma::vec& beta) const;
  // X~' * w
  arma::vec apply_transpose(const arma::vec& w) const;
  // X~ diag(weights) X~', nq x nq.
  arma::mat weighted_gram(const arma::vec& weights) const;
  // Explicit X~ (a copy when materialized).
  arma::mat dense() const;

 private:
  arma::mat X_;
  arma::mat root_;
  std::optional<arma::mat> dense_;
};

// Symmetric square root V diag(sqrt(d)) V' of omega + jitter * I.
// Throws NotPositiveDefinite when an eigenvalue is <= 0.
arma::mat omega_sqrt(const arma::mat& omega, double jitter = 0.0);

struct TransformedData {
  arma::vec y_tilde;  // vec(R Y'), length nq
  KroneckerDesign design;
};

TransformedData transform_data(const Dataset& ds, const arma::mat& omega, double jitter = 0.0,
                               Materialize policy = Materialize::Auto);

// Exact draw from N((X~'X~ + L^-1)^-1 X~'y~, (X~'X~ + L^-1)^-1) with
// L = diag(lambda_star), using nq x nq solves only.
arma::vec sample_beta(const arma::vec& y_tilde, const KroneckerDesign& design,
                      const arma::vec& lambda_star, Rng& rng);

// lambda2_j ~ InvGamma(1, 1/nu_j + beta_j^2 / (2 tau2)), then
// nu_j ~ InvGamma(1, 1 + 1/lambda2_j), for every j.
void update_lambda_nu(ChainState& state, Rng& rng);

// tau2 ~ InvGamma((pq+1)/2, 1/xi + sum beta_j^2 / (2 lambda2_j)), then
// xi ~ InvGamma(1, 1 + 1/tau2).
void update_tau_xi(ChainState& state, Rng& rng);

// Column-by-column graphical horseshoe update of omega, eta2 and rho given
// the residual scatter matrix S = Yres' Yres over n observations.
// Throws DegenerateResidual when s_kk falls below 1e-12 tr(S)/q.
void ghs_sweep_omega(const arma::mat& S, arma::uword n, ChainState& state, Rng& rng);

// zeta2 ~ InvGamma((q(q-1)/2 + 1)/2, 1/phi + sum_{k<l} omega_kl^2 / (2 eta2_kl)),
// then phi ~ InvGamma(1, 1 + 1/zeta2).
void update_zeta_phi(ChainState& state, Rng& rng);

// l(B, Omega) = tr{n^-1 (Y-XB)'(Y-XB) Omega} - log|Omega|; smaller is better.
double neg_log_likelihood(const arma::mat& B, const arma::mat& omega, const Dataset& ds);

// -(n/2) l(B, Omega): the Gaussian log-likelihood without its additive
// constant -(nq/2) log(2 pi). Larger is better; exact fit with Omega = I
// gives 0.
double log_likelihood(const arma::mat& B, const arma::mat& omega, const Dataset& ds);

// One full sweep: transform, beta, lambda/nu, tau/xi, residual scatter,
// omega columns, zeta/phi. Throws NotPositiveDefinite if omega loses
// definiteness.
void gibbs_step(const Dataset& ds, ChainState& state, Rng& rng, double pd_jitter = 0.0);

using ProgressFn = std::function<void(std::uint64_t step, std::uint64_t total, double loglik)>;

// Runs burnin + nmc * thin steps from ChainState::initial and keeps every
// thin-th post-burn-in draw. The log-likelihood of every step is recorded.
PosteriorSamples run_chain(const Dataset& ds, const GibbsConfig& config, Rng& rng,
                           const ProgressFn& progress = {});

// Same as above with the generator seeded from config.seed.
PosteriorSamples run_chain(const Dataset& ds, const GibbsConfig& config,
                           const ProgressFn& progress = {});

}  // namespace hsghs
