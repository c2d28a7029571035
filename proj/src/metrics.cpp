#include "hsghs/metrics.hpp"

#include <cmath>

#include "hsghs/linalg.hpp"

namespace hsghs {

namespace {

void same_shape(const arma::mat& a, const arma::mat& b, const char* what) {
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": shape mismatch");
  }
}

}  // namespace

double mse_elements(const arma::mat& est, const arma::mat& truth) {
  same_shape(est, truth, "mse_elements");
  if (est.n_elem == 0) throw Error(ErrorCode::DimensionMismatch, "mse_elements: empty matrices");
  return arma::accu(arma::square(est - truth)) / static_cast<double>(est.n_elem);
}

double prediction_mse(const arma::mat& B, const arma::mat& X_test, const arma::mat& Y_test) {
  if (X_test.n_cols != B.n_rows || X_test.n_rows != Y_test.n_rows || Y_test.n_cols != B.n_cols) {
    throw Error(ErrorCode::DimensionMismatch, "prediction_mse: shape mismatch");
  }
  return mse_elements(X_test * B, Y_test);
}

double avg_kl(const GroundTruth& truth, const arma::mat& B_hat, const arma::mat& omega_hat,
              const arma::mat& X) {
  same_shape(B_hat, truth.B0, "avg_kl B");
  same_shape(omega_hat, truth.Omega0, "avg_kl Omega");
  if (X.n_cols != B_hat.n_rows) throw Error(ErrorCode::DimensionMismatch, "avg_kl: X columns != p");
  const double n = static_cast<double>(X.n_rows);
  const double q = static_cast<double>(omega_hat.n_rows);

  const arma::mat L_hat = linalg::cholesky_lower(omega_hat, "estimated omega");
  const arma::mat L_true = linalg::cholesky_lower(truth.Omega0, "true omega");
  // log|Omega_hat^-1 Omega0| = log|Omega0| - log|Omega_hat|
  const double log_ratio =
      2.0 * (arma::accu(arma::log(L_true.diag())) - arma::accu(arma::log(L_hat.diag())));
  // tr(Omega_hat Omega0^-1) = ||L_true^-1 L_hat||_F^2
  const arma::mat M = linalg::solve_lower(L_true, L_hat);
  const double trace_term = arma::accu(arma::square(M));
  const double covariance_part = 0.5 * (log_ratio + trace_term - q);

  const arma::mat D = X * (B_hat - truth.B0);
  const double mean_part = arma::accu((D.t() * D) % omega_hat) / (2.0 * n);
  return covariance_part + mean_part;
}

Confusion confusion(const arma::umat& selected, const arma::umat& truth, Target target) {
  if (selected.n_rows != truth.n_rows || selected.n_cols != truth.n_cols) {
    throw Error(ErrorCode::DimensionMismatch, "confusion: mask shapes differ");
  }
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (arma::uword i = 0; i < selected.n_rows; ++i) {
    for (arma::uword j = (target == Target::Omega ? i + 1 : 0); j < selected.n_cols; ++j) {
      const bool s = selected(i, j) != 0;
      const bool t = truth(i, j) != 0;
      if (s && t) tp += 1;
      else if (s) fp += 1;
      else if (t) fn += 1;
      else tn += 1;
    }
  }
  Confusion out;
  if (tp + fn > 0) out.sen = tp / (tp + fn);
  if (tn + fp > 0) out.spe = tn / (tn + fp);
  if (tp + fp > 0) out.prc = tp / (tp + fp);
  return out;
}

arma::vec r_squared(const arma::mat& B, const arma::mat& X_test, const arma::mat& Y_test) {
  if (X_test.n_cols != B.n_rows || X_test.n_rows != Y_test.n_rows || Y_test.n_cols != B.n_cols) {
    throw Error(ErrorCode::DimensionMismatch, "r_squared: shape mismatch");
  }
  const arma::mat resid = Y_test - X_test * B;
  arma::vec out(Y_test.n_cols);
  for (arma::uword j = 0; j < Y_test.n_cols; ++j) {
    const arma::vec y = Y_test.col(j);
    const double tss = arma::accu(arma::square(y - arma::mean(y)));
    if (!(tss > 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "r_squared: response column " + std::to_string(j) + " is constant");
    }
    out(j) = 1.0 - arma::accu(arma::square(resid.col(j))) / tss;
  }
  return out;
}

MetricsReport evaluate(const GroundTruth& truth, const PointEstimate& estimate,
                       const SelectionResult& selection, const arma::mat& X_train,
                       const arma::mat& X_test, const arma::mat& Y_test) {
  MetricsReport r;
  r.mse_b = mse_elements(estimate.B, truth.B0);
  r.mse_omega = mse_elements(estimate.Omega, truth.Omega0);
  r.prediction_mse = prediction_mse(estimate.B, X_test, Y_test);
  r.avg_kl = avg_kl(truth, estimate.B, estimate.Omega, X_train);
  const Confusion b = confusion(selection.b_selected, truth.support_b(), Target::B);
  const Confusion o = confusion(selection.omega_selected, truth.support_omega(), Target::Omega);
  r.b_sen = b.sen;
  r.b_spe = b.spe;
  r.b_prc = b.prc;
  r.omega_sen = o.sen;
  r.omega_spe = o.spe;
  r.omega_prc = o.prc;
  return r;
}

}  // namespace hsghs
