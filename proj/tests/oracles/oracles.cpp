#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace hsghs::oracles {

namespace {

arma::vec normals(arma::uword len, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  arma::vec z(len);
  for (auto& v : z) v = dist(rng);
  return z;
}

double inv_gamma(double shape, double scale, std::mt19937_64& rng) {
  std::gamma_distribution<double> dist(shape, 1.0 / scale);
  return 1.0 / dist(rng);
}

// Factorizations use Eigen directly with algorithms the library does not use
// (LU inverses and determinants, eigen roots instead of Cholesky factors).
Eigen::Map<const Eigen::MatrixXd> view(const arma::mat& m) {
  return {m.memptr(), static_cast<Eigen::Index>(m.n_rows), static_cast<Eigen::Index>(m.n_cols)};
}

arma::mat to_arma(const Eigen::MatrixXd& m) {
  arma::mat out(m.rows(), m.cols());
  Eigen::Map<Eigen::MatrixXd>(out.memptr(), m.rows(), m.cols()) = m;
  return out;
}

arma::mat lu_inverse(const arma::mat& m) { return to_arma(view(m).fullPivLu().inverse()); }

double lu_det(const arma::mat& m) { return view(m).fullPivLu().determinant(); }

// V diag(sqrt(d)): a square root of cov that is not triangular.
arma::mat eigen_root(const arma::mat& cov) {
  const arma::mat sym = 0.5 * (cov + cov.t());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(view(sym));
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return to_arma(es.eigenvectors() * d.asDiagonal());
}

}  // namespace

void beta_conditional_moments(const arma::vec& y_tilde, const arma::mat& X,
                              const arma::mat& omega_root, const arma::vec& lambda_star,
                              arma::vec& mean, arma::mat& cov) {
  const arma::mat Xt = arma::kron(X, omega_root);
  if (Xt.n_cols > 200) throw Error(ErrorCode::InvalidArgument, "oracle size guard: pq > 200");
  const arma::mat precision = Xt.t() * Xt + arma::diagmat(1.0 / lambda_star);
  cov = lu_inverse(precision);
  cov = 0.5 * (cov + cov.t());
  mean = cov * (Xt.t() * y_tilde);
}

arma::vec beta_conditional_direct(const arma::vec& y_tilde, const arma::mat& X,
                                  const arma::mat& omega_root, const arma::vec& lambda_star,
                                  std::mt19937_64& rng) {
  const arma::mat Xt = arma::kron(X, omega_root);
  if (Xt.n_cols > 200) throw Error(ErrorCode::InvalidArgument, "oracle size guard: pq > 200");
  const arma::mat precision = Xt.t() * Xt + arma::diagmat(1.0 / lambda_star);
  const arma::mat cov = lu_inverse(precision);
  const arma::vec mean = cov * (Xt.t() * y_tilde);
  return mean + eigen_root(cov) * normals(Xt.n_cols, rng);
}

double kl_naive(const GroundTruth& truth, const arma::mat& B_hat, const arma::mat& omega_hat,
                const arma::mat& X) {
  const arma::uword n = X.n_rows;
  const arma::uword q = omega_hat.n_rows;
  if (n * q > 500) throw Error(ErrorCode::InvalidArgument, "oracle size guard: nq > 500");

  const arma::mat sigma_hat = lu_inverse(omega_hat);
  const double term1 =
      0.5 * static_cast<double>(n) *
      (std::log(lu_det(sigma_hat * truth.Omega0)) +
       arma::trace(omega_hat * lu_inverse(truth.Omega0)) - static_cast<double>(q));

  const arma::vec d = arma::vectorise(X * B_hat - X * truth.B0);  // column stacking
  const arma::mat big = arma::kron(omega_hat, arma::eye<arma::mat>(n, n));
  const double term2 = 0.5 * arma::as_scalar(d.t() * big * d);
  return term1 + term2;
}

double min_eigenvalue(const arma::mat& M) {
  if (!M.is_square() || arma::abs(M - M.t()).max() > 1e-8) {
    throw Error(ErrorCode::InvalidArgument, "min_eigenvalue needs a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(view(M), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void ghs_sweep_dense(const arma::mat& S, arma::uword n, GhsOracleState& st, std::mt19937_64& rng) {
  const arma::uword q = S.n_rows;
  for (arma::uword k = 0; k < q; ++k) {
    std::gamma_distribution<double> gamma_dist(static_cast<double>(n) / 2.0 + 1.0, 2.0 / S(k, k));
    const double gamma = gamma_dist(rng);
    if (q == 1) {
      st.omega(0, 0) = gamma;
      continue;
    }
    std::vector<arma::uword> rest;
    for (arma::uword i = 0; i < q; ++i) {
      if (i != k) rest.push_back(i);
    }
    const arma::uvec idx(rest);
    const arma::mat inv11 = lu_inverse(arma::mat(st.omega(idx, idx)));
    arma::vec s12(rest.size()), prior_var(rest.size());
    for (arma::uword i = 0; i < rest.size(); ++i) {
      s12(i) = S(rest[i], k);
      prior_var(i) = st.eta2(rest[i], k) * st.zeta2;
    }
    const arma::mat cov = lu_inverse(S(k, k) * inv11 + arma::diagmat(1.0 / prior_var));
    const arma::vec mean = -cov * s12;
    const arma::vec ups = mean + eigen_root(cov) * normals(rest.size(), rng);

    for (arma::uword i = 0; i < rest.size(); ++i) {
      st.omega(rest[i], k) = st.omega(k, rest[i]) = ups(i);
    }
    st.omega(k, k) = gamma + arma::as_scalar(ups.t() * inv11 * ups);
    for (arma::uword i = 0; i < rest.size(); ++i) {
      const arma::uword l = rest[i];
      st.eta2(l, k) = st.eta2(k, l) =
          inv_gamma(1.0, 1.0 / st.rho(l, k) + ups(i) * ups(i) / (2.0 * st.zeta2), rng);
    }
    for (arma::uword i = 0; i < rest.size(); ++i) {
      const arma::uword l = rest[i];
      st.rho(l, k) = st.rho(k, l) = inv_gamma(1.0, 1.0 + 1.0 / st.eta2(l, k), rng);
    }
  }
}

}  // namespace hsghs::oracles
