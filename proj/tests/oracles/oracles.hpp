#pragma once

// Slow reference implementations for tests. They depend on core types only
// and draw randomness straight from <random>, never from the library's Rng.

#include <armadillo>

#include <random>

#include "hsghs/types.hpp"

namespace hsghs::oracles {

// Dense draw from N(P^-1 X~'y~, P^-1), P = X~'X~ + diag(lambda_star)^-1,
// with X~ = kron(X, omega_root) built explicitly. pq must be <= 200.
arma::vec beta_conditional_direct(const arma::vec& y_tilde, const arma::mat& X,
                                  const arma::mat& omega_root, const arma::vec& lambda_star,
                                  std::mt19937_64& rng);

// Conditional mean and covariance of beta under the same model.
void beta_conditional_moments(const arma::vec& y_tilde, const arma::mat& X,
                              const arma::mat& omega_root, const arma::vec& lambda_star,
                              arma::vec& mean, arma::mat& cov);

// n * avg KL via an explicit Omega (x) I_n quadratic form and dense
// determinants. nq must be <= 500.
double kl_naive(const GroundTruth& truth, const arma::mat& B_hat, const arma::mat& omega_hat,
                const arma::mat& X);

// Smallest eigenvalue of a symmetric matrix; throws for asymmetry > 1e-8.
double min_eigenvalue(const arma::mat& M);

struct GhsOracleState {
  arma::mat omega, eta2, rho;
  double zeta2 = 1.0;
};

// One column sweep of the graphical horseshoe conditionals written with
// explicit inverses and an eigen square root of the column covariance.
void ghs_sweep_dense(const arma::mat& S, arma::uword n, GhsOracleState& state,
                     std::mt19937_64& rng);

}  // namespace hsghs::oracles
