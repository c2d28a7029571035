#include "hsghs/simulate.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "hsghs/linalg.hpp"

namespace hsghs {

Structure parse_structure(const std::string& name) {
  if (name == "ar1") return Structure::AR1;
  if (name == "cliques") return Structure::Cliques;
  if (name == "star") return Structure::Star;
  throw Error(ErrorCode::InvalidArgument, "unknown structure '" + name + "'");
}

std::string to_string(Structure s) {
  switch (s) {
    case Structure::AR1: return "ar1";
    case Structure::Cliques: return "cliques";
    case Structure::Star: return "star";
  }
  return "?";
}

CoefDist parse_coef_dist(const std::string& name) {
  if (name == "uniform") return CoefDist::Uniform;
  if (name == "const5") return CoefDist::Constant5;
  throw Error(ErrorCode::InvalidArgument, "unknown coefficient distribution '" + name + "'");
}

std::string to_string(CoefDist d) { return d == CoefDist::Uniform ? "uniform" : "const5"; }

arma::mat precision_ar1(arma::uword q, double value) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "q must be at least 1");
  if (!(std::abs(value) < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "AR1 value must satisfy |value| < 0.5");
  }
  arma::mat omega = arma::eye<arma::mat>(q, q);
  for (arma::uword k = 0; k + 1 < q; ++k) {
    omega(k, k + 1) = value;
    omega(k + 1, k) = value;
  }
  return omega;
}

PrecisionMatrix precision_cliques(arma::uword q, arma::uword group_size, double value,
                                  bool strict) {
  if (q < 1 || group_size < 1) {
    throw Error(ErrorCode::InvalidArgument, "q and group_size must be at least 1");
  }
  const arma::uword leftover = q % group_size;
  if (strict && leftover != 0) {
    throw Error(ErrorCode::InvalidArgument, "q = " + std::to_string(q) +
                                                " is not divisible by group size " +
                                                std::to_string(group_size));
  }
  PrecisionMatrix out;
  out.omega = arma::eye<arma::mat>(q, q);
  out.isolated_rows = leftover;
  for (arma::uword start = 0; start + group_size <= q; start += group_size) {
    for (arma::uword k = start; k < start + group_size; ++k) {
      for (arma::uword l = start; l < start + group_size; ++l) {
        if (k != l) out.omega(k, l) = value;
      }
    }
  }
  out.positive_definite = linalg::cholesky_lower(out.omega).has_value();
  return out;
}

PrecisionMatrix precision_star(arma::uword q, double value) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "q must be at least 1");
  PrecisionMatrix out;
  out.omega = arma::eye<arma::mat>(q, q);
  for (arma::uword k = 1; k < q; ++k) {
    out.omega(0, k) = value;
    out.omega(k, 0) = value;
  }
  // eigenvalues are 1 and 1 +- value sqrt(q-1)
  out.positive_definite = value * value * static_cast<double>(q - 1) < 1.0;
  return out;
}

CoefMatrix coef_matrix(arma::uword p, arma::uword q, double sparsity, CoefDist dist, Rng& rng) {
  if (!(sparsity > 0.0 && sparsity <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "sparsity must lie in (0, 1]");
  }
  const arma::uword total = p * q;
  const auto nonzero = static_cast<arma::uword>(std::llround(sparsity * static_cast<double>(total)));

  // Partial Fisher-Yates over row-major cell indices.
  std::vector<arma::uword> cells(total);
  std::iota(cells.begin(), cells.end(), arma::uword{0});
  for (arma::uword i = 0; i < nonzero; ++i) {
    const auto j = i + static_cast<arma::uword>(rng.below(total - i));
    std::swap(cells[i], cells[j]);
  }

  CoefMatrix out;
  out.B.zeros(p, q);
  out.support.zeros(p, q);
  for (arma::uword i = 0; i < nonzero; ++i) {
    const arma::uword row = cells[i] / q;
    const arma::uword col = cells[i] % q;
    double value = 5.0;
    if (dist == CoefDist::Uniform) {
      const double magnitude = 0.5 + 1.5 * rng.uniform();
      value = rng.uniform() < 0.5 ? -magnitude : magnitude;
    }
    out.B(row, col) = value;
    out.support(row, col) = 1;
  }
  return out;
}

arma::mat design_toeplitz(arma::uword n, arma::uword p, double rho, Rng& rng) {
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorCode::InvalidArgument, "|rho| must be < 1");
  arma::mat T(p, p);
  for (arma::uword i = 0; i < p; ++i) {
    for (arma::uword j = 0; j < p; ++j) {
      T(i, j) = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
    }
  }
  const auto L = linalg::cholesky_lower(T);
  if (!L) throw Error(ErrorCode::NumericalFailure, "Toeplitz factorization failed");
  arma::mat Z(n, p);
  for (arma::uword i = 0; i < n; ++i) {
    for (arma::uword j = 0; j < p; ++j) Z(i, j) = rng.normal();
  }
  return Z * L->t();  // rows z' L', covariance L L' = T
}

arma::mat gen_response(const arma::mat& X, const arma::mat& B, const arma::mat& omega, Rng& rng) {
  if (X.n_cols != B.n_rows || B.n_cols != omega.n_rows || !omega.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "X, B and omega shapes are inconsistent");
  }
  const arma::uword n = X.n_rows;
  const arma::uword q = omega.n_rows;
  const arma::mat L = linalg::cholesky_lower(omega, "omega");
  // omega = L L'; e = L'^-1 z has covariance (L L')^-1.
  arma::mat Z(q, n);
  for (arma::uword i = 0; i < n; ++i) {
    for (arma::uword k = 0; k < q; ++k) Z(k, i) = rng.normal();
  }
  const arma::mat E = linalg::solve_lower_transpose(L, Z).t();
  return X * B + E;
}

SimulatedData simulate(const SimulationConfig& config) {
  if (config.n < 1 || config.p < 1 || config.q < 1) {
    throw Error(ErrorCode::InvalidArgument, "n, p and q must be at least 1");
  }
  SimulatedData out;
  switch (config.structure) {
    case Structure::AR1: out.precision.omega = precision_ar1(config.q); break;
    case Structure::Cliques:
      out.precision = precision_cliques(config.q, config.group_size, 0.75, config.strict_cliques);
      break;
    case Structure::Star: out.precision = precision_star(config.q); break;
  }
  if (!out.precision.positive_definite) {
    throw Error(ErrorCode::NotPositiveDefinite,
                to_string(config.structure) + " precision with q = " + std::to_string(config.q) +
                    " is not positive definite");
  }

  Rng rng(config.seed);
  CoefMatrix coef = coef_matrix(config.p, config.q, config.sparsity, config.coef, rng);
  out.truth.B0 = coef.B;
  out.truth.Omega0 = out.precision.omega;
  out.support_b = std::move(coef.support);

  const arma::uword n_test = config.n_test == 0 ? config.n : config.n_test;
  out.train.X = design_toeplitz(config.n, config.p, config.design_rho, rng);
  out.train.Y = gen_response(out.train.X, out.truth.B0, out.truth.Omega0, rng);
  out.test.X = design_toeplitz(n_test, config.p, config.design_rho, rng);
  out.test.Y = gen_response(out.test.X, out.truth.B0, out.truth.Omega0, rng);
  return out;
}

}  // namespace hsghs
