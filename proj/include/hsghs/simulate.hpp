#pragma once

// Simulation designs: structured precision matrices, sparse coefficient
// matrices, Toeplitz-correlated designs and matrix-normal responses.

#include <armadillo>

#include <cstdint>
#include <string>

#include "hsghs/distributions.hpp"
#include "hsghs/types.hpp"

namespace hsghs {

enum class Structure { AR1, Cliques, Star };
enum class CoefDist { Uniform, Constant5 };

Structure parse_structure(const std::string& name);
std::string to_string(Structure s);
CoefDist parse_coef_dist(const std::string& name);
std::string to_string(CoefDist d);

struct PrecisionMatrix {
  arma::mat omega;
  bool positive_definite = true;
  // Rows left outside any clique when q is not a multiple of the group size.
  arma::uword isolated_rows = 0;
};

// Unit diagonal, first off-diagonals = value. Requires |value| < 0.5.
arma::mat precision_ar1(arma::uword q, double value = 0.45);

// Block diagonal cliques of size group_size with off-diagonal `value`.
// With strict = true an indivisible q is an error; otherwise the trailing
// q mod group_size rows stay isolated with unit diagonal.
PrecisionMatrix precision_cliques(arma::uword q, arma::uword group_size = 3, double value = 0.75,
                                  bool strict = false);

// Hub on the first row/column. Not PD when value^2 (q-1) >= 1; the matrix is
// still returned with positive_definite = false.
PrecisionMatrix precision_star(arma::uword q, double value = 0.25);

struct CoefMatrix {
  arma::mat B;
  arma::umat support;
};

// Exactly round(sparsity * p * q) nonzeros at uniformly chosen positions.
// Uniform magnitudes are drawn from (-2, -0.5) U (0.5, 2).
CoefMatrix coef_matrix(arma::uword p, arma::uword q, double sparsity, CoefDist dist, Rng& rng);

// Rows i.i.d. N(0, T), T_ij = rho^|i-j|.
arma::mat design_toeplitz(arma::uword n, arma::uword p, double rho, Rng& rng);

// Y = X B + E, rows of E i.i.d. N(0, omega^-1).
arma::mat gen_response(const arma::mat& X, const arma::mat& B, const arma::mat& omega, Rng& rng);

struct SimulationConfig {
  arma::uword n = 100;
  arma::uword p = 200;
  arma::uword q = 25;
  arma::uword n_test = 0;  // 0 means n_test = n
  Structure structure = Structure::AR1;
  CoefDist coef = CoefDist::Uniform;
  double sparsity = 0.05;
  double design_rho = 0.7;
  arma::uword group_size = 3;
  bool strict_cliques = false;
  std::uint64_t seed = 0;
};

struct SimulatedData {
  Dataset train;
  Dataset test;
  GroundTruth truth;
  arma::umat support_b;
  PrecisionMatrix precision;
};

// Draw order: B, X, Y, X_test, Y_test, all from one generator seeded with
// config.seed. Throws NotPositiveDefinite for a non-PD structure.
SimulatedData simulate(const SimulationConfig& config);

}  // namespace hsghs
