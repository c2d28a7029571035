#pragma once

// Seedable random primitives. Gamma and inverse-gamma use the shape-scale
// convention throughout: Gamma(a, s) has mean a*s and InvGamma(a, s) has
// density proportional to x^(-a-1) exp(-s/x).

#include <armadillo>

#include <cstdint>
#include <random>

namespace hsghs {

// Single-owner generator. Equal seeds give bit-identical sequences on the
// same build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  // Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Seed for replicate r of a study seeded with `seed`.
inline std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t r) { return seed + r; }

arma::vec std_normal_vec(arma::uword len, Rng& rng);

// Throws InvalidArgument for nonpositive or non-finite parameters.
double gamma_draw(double shape, double scale, Rng& rng);
double inv_gamma_draw(double shape, double scale, Rng& rng);

// Standard half-Cauchy through its inverse-gamma mixture:
// a ~ InvGamma(1/2, 1), x^2 | a ~ InvGamma(1/2, 1/a).
double half_cauchy_draw(Rng& rng);

}  // namespace hsghs
