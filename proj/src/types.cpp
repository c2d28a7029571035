#include "hsghs/types.hpp"

#include <cmath>

#include "hsghs/linalg.hpp"

namespace hsghs {

void validate_dataset(const Dataset& ds) {
  if (ds.X.n_rows != ds.Y.n_rows) {
    throw Error(ErrorCode::DimensionMismatch,
                "X has " + std::to_string(ds.X.n_rows) + " rows but Y has " +
                    std::to_string(ds.Y.n_rows));
  }
  if (ds.X.n_rows < 1 || ds.X.n_cols < 1 || ds.Y.n_cols < 1) {
    throw Error(ErrorCode::DimensionMismatch, "dataset needs n >= 1, p >= 1 and q >= 1");
  }
  if (!ds.X.is_finite()) throw Error(ErrorCode::NonFiniteEntry, "X contains a non-finite entry");
  if (!ds.Y.is_finite()) throw Error(ErrorCode::NonFiniteEntry, "Y contains a non-finite entry");
}

arma::vec vec_transpose(const arma::mat& B) { return arma::vectorise(B.t()); }

arma::mat unvec_transpose(const arma::vec& beta, arma::uword p, arma::uword q) {
  if (beta.n_elem != p * q) {
    throw Error(ErrorCode::DimensionMismatch, "beta length does not equal p*q");
  }
  return arma::reshape(beta, q, p).t();
}

arma::uword triangle_order(std::size_t len) {
  // q(q+1)/2 = len  =>  q = (sqrt(8 len + 1) - 1) / 2
  const auto q = static_cast<arma::uword>(
      std::llround((std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0));
  if (q < 1 || q * (q + 1) / 2 != len) {
    throw Error(ErrorCode::InvalidArgument,
                "length " + std::to_string(len) + " is not a triangular number");
  }
  return q;
}

arma::vec compress_triangle(const arma::mat& sym) {
  if (!sym.is_square()) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  const arma::uword q = sym.n_rows;
  arma::vec tri(q * (q + 1) / 2);
  arma::uword at = 0;
  for (arma::uword k = 0; k < q; ++k) {
    for (arma::uword l = k; l < q; ++l) tri(at++) = sym(k, l);
  }
  return tri;
}

arma::mat expand_triangle(const arma::vec& tri) {
  const arma::uword q = triangle_order(tri.n_elem);
  arma::mat sym(q, q);
  arma::uword at = 0;
  for (arma::uword k = 0; k < q; ++k) {
    for (arma::uword l = k; l < q; ++l) {
      sym(k, l) = tri(at);
      sym(l, k) = tri(at);
      ++at;
    }
  }
  return sym;
}

ChainState ChainState::initial(arma::uword p, arma::uword q) {
  ChainState s;
  s.beta = arma::zeros<arma::vec>(p * q);
  s.omega = arma::eye<arma::mat>(q, q);
  s.lambda2 = arma::ones<arma::vec>(p * q);
  s.nu = arma::ones<arma::vec>(p * q);
  s.eta2 = arma::ones<arma::mat>(q, q);
  s.rho = arma::ones<arma::mat>(q, q);
  return s;
}

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

bool positive_finite(const arma::mat& m) {
  return m.is_finite() && (m.n_elem == 0 || m.min() > 0.0);
}

}  // namespace

void validate_state(const ChainState& s, arma::uword p, arma::uword q) {
  const arma::uword pq = p * q;
  if (s.beta.n_elem != pq || s.lambda2.n_elem != pq || s.nu.n_elem != pq) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient state vectors must have length p*q");
  }
  if (s.omega.n_rows != q || s.omega.n_cols != q || s.eta2.n_rows != q || s.eta2.n_cols != q ||
      s.rho.n_rows != q || s.rho.n_cols != q) {
    throw Error(ErrorCode::DimensionMismatch, "precision state matrices must be q x q");
  }
  if (!s.beta.is_finite()) throw Error(ErrorCode::NonFiniteEntry, "beta is not finite");
  if (!positive_finite(s.lambda2) || !positive_finite(s.nu) || !positive_finite(s.tau2) ||
      !positive_finite(s.xi) || !positive_finite(s.zeta2) || !positive_finite(s.phi)) {
    throw Error(ErrorCode::NonFiniteEntry, "shrinkage scalars must be finite and positive");
  }
  if (q > 1) {
    const arma::mat off_eta = s.eta2 + arma::diagmat(arma::ones<arma::vec>(q) - s.eta2.diag());
    const arma::mat off_rho = s.rho + arma::diagmat(arma::ones<arma::vec>(q) - s.rho.diag());
    if (!positive_finite(off_eta) || !positive_finite(off_rho)) {
      throw Error(ErrorCode::NonFiniteEntry, "eta2/rho must be finite and positive off the diagonal");
    }
  }
  if (!s.omega.is_finite()) throw Error(ErrorCode::NonFiniteEntry, "omega is not finite");
  if (arma::abs(s.omega - s.omega.t()).max() > 1e-10) {
    throw Error(ErrorCode::NotPositiveDefinite, "omega is not symmetric");
  }
  if (!linalg::cholesky_lower(s.omega)) {
    throw Error(ErrorCode::NotPositiveDefinite, "omega is not positive definite");
  }
}

void validate_config(const GibbsConfig& config) {
  if (config.nmc < 1) throw Error(ErrorCode::InvalidArgument, "nmc must be at least 1");
  if (config.thin < 1) throw Error(ErrorCode::InvalidArgument, "thin must be at least 1");
  if (!(config.pd_jitter >= 0.0) || !std::isfinite(config.pd_jitter)) {
    throw Error(ErrorCode::InvalidArgument, "pd_jitter must be a finite nonnegative number");
  }
}

arma::mat PosteriorSamples::coef_draw(arma::uword i) const {
  return unvec_transpose(beta_draws.row(i).t(), dims.p, dims.q);
}

arma::mat PosteriorSamples::omega_draw(arma::uword i) const {
  return expand_triangle(omega_draws.row(i).t());
}

arma::umat GroundTruth::support_b() const { return B0 != 0.0; }

arma::umat GroundTruth::support_omega() const {
  arma::umat mask = Omega0 != 0.0;
  mask.diag().zeros();
  return mask;
}

}  // namespace hsghs
