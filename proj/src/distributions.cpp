#include "hsghs/distributions.hpp"

#include <cmath>

#include "hsghs/types.hpp"

namespace hsghs {

namespace {

void check_parameters(double shape, double scale, const char* what) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + ": shape and scale must be finite and positive (got " +
                    std::to_string(shape) + ", " + std::to_string(scale) + ")");
  }
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

arma::vec std_normal_vec(arma::uword len, Rng& rng) {
  arma::vec out(len);
  for (auto& x : out) x = rng.normal();
  return out;
}

double gamma_draw(double shape, double scale, Rng& rng) {
  check_parameters(shape, scale, "gamma_draw");
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(rng.engine()) * scale;
}

double inv_gamma_draw(double shape, double scale, Rng& rng) {
  check_parameters(shape, scale, "inv_gamma_draw");
  std::gamma_distribution<double> dist(shape, 1.0);
  double g = dist(rng.engine());
  // Gamma(a, 1) underflows to 0 for tiny shapes; keep the draw finite.
  while (g <= 0.0) g = dist(rng.engine());
  return scale / g;
}

double half_cauchy_draw(Rng& rng) {
  const double a = inv_gamma_draw(0.5, 1.0, rng);
  const double x2 = inv_gamma_draw(0.5, 1.0 / a, rng);
  return std::sqrt(x2);
}

}  // namespace hsghs
