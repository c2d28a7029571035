#pragma once

#include <armadillo>

#include <optional>

#include "hsghs/summary.hpp"
#include "hsghs/types.hpp"

namespace hsghs {

// Mean of squared differences over all entries.
double mse_elements(const arma::mat& est, const arma::mat& truth);

// Mean over n_test * q entries of (Y_test - X_test B)^2.
double prediction_mse(const arma::mat& B, const arma::mat& X_test, const arma::mat& Y_test);

// (1/n) D(p_{B0,Omega0} || p_{B,Omega}) for n conditionally independent rows:
//   (1/2)(log|Omega^-1 Omega0| + tr(Omega Omega0^-1) - q)
//   + (1/(2n)) tr(Omega D'D),  D = X(B - B0).
// The second term equals vec(D)'(Omega (x) I_n)vec(D) / (2n).
// Throws NotPositiveDefinite when omega_hat is not PD.
double avg_kl(const GroundTruth& truth, const arma::mat& B_hat, const arma::mat& omega_hat,
              const arma::mat& X);

// Rates are missing when their denominator is zero; an empty selection
// therefore has no precision.
struct Confusion {
  std::optional<double> sen;
  std::optional<double> spe;
  std::optional<double> prc;
};

// Target::Omega scores the strict upper triangle only.
Confusion confusion(const arma::umat& selected, const arma::umat& truth, Target target);

// Per column: 1 - RSS/TSS. Throws InvalidArgument when a column has TSS = 0.
arma::vec r_squared(const arma::mat& B, const arma::mat& X_test, const arma::mat& Y_test);

struct MetricsReport {
  double mse_b = 0.0;
  double mse_omega = 0.0;
  double prediction_mse = 0.0;
  double avg_kl = 0.0;
  std::optional<double> b_sen, b_spe, b_prc;
  std::optional<double> omega_sen, omega_spe, omega_prc;
};

MetricsReport evaluate(const GroundTruth& truth, const PointEstimate& estimate,
                       const SelectionResult& selection, const arma::mat& X_train,
                       const arma::mat& X_test, const arma::mat& Y_test);

}  // namespace hsghs
