#include "hsghs/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "hsghs/types.hpp"

namespace hsghs::linalg {

namespace {

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;
using Map = Eigen::Map<Eigen::MatrixXd>;

ConstMap view(const arma::mat& m) { return ConstMap(m.memptr(), m.n_rows, m.n_cols); }
Map view(arma::mat& m) { return Map(m.memptr(), m.n_rows, m.n_cols); }

void require_square(const arma::mat& A, const char* fn) {
  if (!A.is_square()) throw Error(ErrorCode::DimensionMismatch, std::string(fn) + ": not square");
}

void require_rows(const arma::mat& L, const arma::mat& B, const char* fn) {
  require_square(L, fn);
  if (B.n_rows != L.n_rows) throw Error(ErrorCode::DimensionMismatch, std::string(fn) + ": row mismatch");
}

}  // namespace

std::optional<arma::mat> cholesky_lower(const arma::mat& A) {
  require_square(A, "cholesky_lower");
  if (!A.is_finite()) return std::nullopt;
  arma::mat L = A;
  Eigen::Ref<Eigen::MatrixXd> storage(view(L));
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>, Eigen::Lower> llt(storage);  // factorizes in place
  if (llt.info() != Eigen::Success) return std::nullopt;
  return arma::trimatl(L);
}

arma::mat cholesky_lower(const arma::mat& A, const std::string& what) {
  auto L = cholesky_lower(A);
  if (!L) throw Error(ErrorCode::NotPositiveDefinite, what + " is not positive definite");
  return std::move(*L);
}

arma::mat solve_lower(const arma::mat& L, const arma::mat& B) {
  require_rows(L, B, "solve_lower");
  arma::mat X = B;
  view(L).triangularView<Eigen::Lower>().solveInPlace(view(X));
  return X;
}

arma::mat solve_lower_transpose(const arma::mat& L, const arma::mat& B) {
  require_rows(L, B, "solve_lower_transpose");
  arma::mat X = B;
  view(L).transpose().triangularView<Eigen::Upper>().solveInPlace(view(X));
  return X;
}

arma::mat cholesky_solve(const arma::mat& L, const arma::mat& B) {
  return solve_lower_transpose(L, solve_lower(L, B));
}

arma::mat inverse_spd(const arma::mat& A, const std::string& what) {
  const arma::mat L = cholesky_lower(A, what);
  arma::mat inv = cholesky_solve(L, arma::eye<arma::mat>(A.n_rows, A.n_rows));
  return 0.5 * (inv + inv.t());
}

double log_det_spd(const arma::mat& A, const std::string& what) {
  return 2.0 * arma::accu(arma::log(cholesky_lower(A, what).diag()));
}

void eig_sym(const arma::mat& A, arma::vec& values, arma::mat& vectors) {
  require_square(A, "eig_sym");
  if (!A.is_finite()) throw Error(ErrorCode::NonFiniteEntry, "eig_sym: non-finite entry");
  const arma::mat sym = 0.5 * (A + A.t());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(view(sym));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "symmetric eigendecomposition failed");
  }
  values.set_size(A.n_rows);
  vectors.set_size(A.n_rows, A.n_rows);
  Eigen::Map<Eigen::VectorXd>(values.memptr(), values.n_elem) = solver.eigenvalues();
  view(vectors) = solver.eigenvectors();
}

arma::vec eigenvalues_sym(const arma::mat& A) {
  require_square(A, "eigenvalues_sym");
  if (!A.is_finite()) throw Error(ErrorCode::NonFiniteEntry, "eigenvalues_sym: non-finite entry");
  const arma::mat sym = 0.5 * (A + A.t());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(view(sym), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "symmetric eigendecomposition failed");
  }
  arma::vec values(A.n_rows);
  Eigen::Map<Eigen::VectorXd>(values.memptr(), values.n_elem) = solver.eigenvalues();
  return values;
}

}  // namespace hsghs::linalg
