#pragma once

// Shared data model for the HS-GHS sampler.
//
// Ordering contract: a p x q coefficient matrix B is flattened as
// beta = vec(B'), i.e. row-major over B with the response index fastest:
//
//   beta = [B(0,0), B(0,1), ..., B(0,q-1), B(1,0), ..., B(p-1,q-1)]
//
// so B(i,j) lives at beta[i*q + j]. Every module (the Kronecker transform,
// the shrinkage updates, the sample stream) assumes this layout.

#include <armadillo>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsghs {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch,
  NonFiniteEntry,
  NotPositiveDefinite,
  DegenerateResidual,
  NumericalFailure,
  Io,
  Format,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Dataset {
  arma::mat X;  // n x p
  arma::mat Y;  // n x q

  arma::uword n() const { return X.n_rows; }
  arma::uword p() const { return X.n_cols; }
  arma::uword q() const { return Y.n_cols; }
};

// Throws DimensionMismatch or NonFiniteEntry.
void validate_dataset(const Dataset& ds);

inline arma::uword beta_index(arma::uword row, arma::uword col, arma::uword q) {
  return row * q + col;
}

// B (p x q) -> vec(B').
arma::vec vec_transpose(const arma::mat& B);
// Inverse of vec_transpose.
arma::mat unvec_transpose(const arma::vec& beta, arma::uword p, arma::uword q);

// Upper triangle (diagonal included), row-major over k <= l.
arma::vec compress_triangle(const arma::mat& sym);
arma::mat expand_triangle(const arma::vec& tri);
// q such that q(q+1)/2 == len; throws InvalidArgument otherwise.
arma::uword triangle_order(std::size_t len);

struct ChainState {
  arma::vec beta;     // pq
  arma::mat omega;    // q x q, symmetric PD
  arma::vec lambda2;  // local scales of beta, pq
  arma::vec nu;       // auxiliaries of lambda2, pq
  double tau2 = 1.0;
  double xi = 1.0;
  arma::mat eta2;  // local scales of off-diagonal omega; diagonal unused
  arma::mat rho;   // auxiliaries of eta2; diagonal unused
  double zeta2 = 1.0;
  double phi = 1.0;

  // beta = 0, omega = I, every scale and auxiliary = 1.
  static ChainState initial(arma::uword p, arma::uword q);
};

void validate_state(const ChainState& state, arma::uword p, arma::uword q);

struct GibbsConfig {
  std::uint64_t burnin = 1000;
  std::uint64_t nmc = 5000;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;
  double pd_jitter = 0.0;

  std::uint64_t total_steps() const { return burnin + nmc * thin; }
};

void validate_config(const GibbsConfig& config);

struct Dims {
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  std::uint64_t q = 0;
};

struct PosteriorSamples {
  arma::mat beta_draws;   // nmc x pq
  arma::mat omega_draws;  // nmc x q(q+1)/2
  Dims dims;
  GibbsConfig config;
  std::vector<double> loglik_trace;  // one entry per executed step (burn-in included)
  double seconds = 0.0;

  arma::uword draws() const { return beta_draws.n_rows; }
  arma::mat coef_draw(arma::uword i) const;
  arma::mat omega_draw(arma::uword i) const;
};

struct GroundTruth {
  arma::mat B0;
  arma::mat Omega0;

  arma::umat support_b() const;
  // Off-diagonal support only; the diagonal is always zero in the mask.
  arma::umat support_omega() const;
};

}  // namespace hsghs
