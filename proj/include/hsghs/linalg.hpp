#pragma once

// Dense factorizations. Armadillo handles storage and matrix products; every
// factorization and triangular solve goes through these functions, which do
// not touch the BLAS/LAPACK backend (see README, "Linear algebra backend").

#include <armadillo>

#include <optional>
#include <string>

namespace hsghs::linalg {

// Lower L with A = L L', reading only the lower triangle of A.
// nullopt when A is not numerically positive definite.
std::optional<arma::mat> cholesky_lower(const arma::mat& A);

// As above; throws NotPositiveDefinite naming `what`.
arma::mat cholesky_lower(const arma::mat& A, const std::string& what);

// L X = B and L' X = B for lower-triangular L.
arma::mat solve_lower(const arma::mat& L, const arma::mat& B);
arma::mat solve_lower_transpose(const arma::mat& L, const arma::mat& B);

// (L L')^-1 B
arma::mat cholesky_solve(const arma::mat& L, const arma::mat& B);

arma::mat inverse_spd(const arma::mat& A, const std::string& what = "matrix");
double log_det_spd(const arma::mat& A, const std::string& what = "matrix");

// Ascending eigenvalues and orthonormal eigenvectors of the symmetric part of A.
void eig_sym(const arma::mat& A, arma::vec& values, arma::mat& vectors);
arma::vec eigenvalues_sym(const arma::mat& A);

}  // namespace hsghs::linalg
