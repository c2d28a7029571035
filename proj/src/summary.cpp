#include "hsghs/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsghs {

namespace {

void require_draws(const PosteriorSamples& s, arma::uword at_least) {
  if (s.draws() < at_least) {
    throw Error(ErrorCode::InvalidArgument,
                "need at least " + std::to_string(at_least) + " posterior draws");
  }
  if (s.beta_draws.n_cols != s.dims.p * s.dims.q ||
      s.omega_draws.n_cols != s.dims.q * (s.dims.q + 1) / 2 ||
      s.omega_draws.n_rows != s.beta_draws.n_rows) {
    throw Error(ErrorCode::DimensionMismatch, "sample matrices do not match their dims");
  }
}

// Each column sorted ascending.
arma::mat sorted_columns(const arma::mat& draws) { return arma::sort(draws, "ascend", 0); }

// Cells scored for a target: every cell of B, strict upper triangle of Omega.
template <typename Fn>
void for_each_scored(arma::uword rows, arma::uword cols, Target target, Fn&& fn) {
  for (arma::uword i = 0; i < rows; ++i) {
    for (arma::uword j = (target == Target::Omega ? i + 1 : 0); j < cols; ++j) fn(i, j);
  }
}

struct Counts {
  double tp = 0, fp = 0, tn = 0, fn = 0;

  RocPoint point(double cutoff) const {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {cutoff, (fp + tn) > 0 ? fp / (fp + tn) : nan, (tp + fn) > 0 ? tp / (tp + fn) : nan};
  }
};

void tally(Counts& c, bool selected, bool truth) {
  if (truth) {
    (selected ? c.tp : c.fn) += 1;
  } else {
    (selected ? c.fp : c.tn) += 1;
  }
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "credible level must lie strictly between 0 and 1");
  }
}

// Triangle position of (k, l), k <= l, in row-major upper storage.
arma::uword tri_index(arma::uword k, arma::uword l, arma::uword q) {
  return k * q - k * (k - 1) / 2 + (l - k);
}

}  // namespace

PointEstimate posterior_mean(const PosteriorSamples& samples) {
  require_draws(samples, 1);
  const arma::vec beta = arma::mean(samples.beta_draws, 0).t();
  const arma::vec tri = arma::mean(samples.omega_draws, 0).t();
  return {unvec_transpose(beta, samples.dims.p, samples.dims.q), expand_triangle(tri)};
}

PointEstimate posterior_point(const PosteriorSamples& samples, PointSummary summary) {
  if (summary == PointSummary::Mean) return posterior_mean(samples);
  require_draws(samples, 1);
  const arma::vec beta = arma::median(samples.beta_draws, 0).t();
  const arma::vec tri = arma::median(samples.omega_draws, 0).t();
  return {unvec_transpose(beta, samples.dims.p, samples.dims.q), expand_triangle(tri)};
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CredibleIntervals credible_interval(const PosteriorSamples& samples, double level) {
  check_level(level);
  require_draws(samples, 2);
  const arma::uword p = samples.dims.p;
  const arma::uword q = samples.dims.q;
  const double lo_prob = (1.0 - level) / 2.0;
  const double hi_prob = (1.0 + level) / 2.0;

  auto column_quantiles = [&](const arma::mat& draws, arma::vec& lo, arma::vec& hi) {
    const arma::mat sorted = sorted_columns(draws);
    lo.set_size(draws.n_cols);
    hi.set_size(draws.n_cols);
    for (arma::uword c = 0; c < draws.n_cols; ++c) {
      const std::span<const double> col(sorted.colptr(c), sorted.n_rows);
      lo(c) = quantile_sorted(col, lo_prob);
      hi(c) = quantile_sorted(col, hi_prob);
    }
  };

  CredibleIntervals out;
  out.level = level;
  arma::vec lo, hi;
  column_quantiles(samples.beta_draws, lo, hi);
  out.b_lo = unvec_transpose(lo, p, q);
  out.b_hi = unvec_transpose(hi, p, q);
  column_quantiles(samples.omega_draws, lo, hi);
  out.omega_lo = expand_triangle(lo);
  out.omega_hi = expand_triangle(hi);
  return out;
}

SelectionResult select_by_interval(const CredibleIntervals& intervals) {
  SelectionResult out;
  out.level = intervals.level;
  out.b_selected = (intervals.b_lo > 0.0) + (intervals.b_hi < 0.0);
  out.omega_selected = (intervals.omega_lo > 0.0) + (intervals.omega_hi < 0.0);
  out.omega_selected.diag().zeros();
  return out;
}

std::vector<RocPoint> roc_sweep_bayes(const PosteriorSamples& samples, const arma::umat& truth_mask,
                                      Target target, std::span<const double> levels) {
  require_draws(samples, 2);
  const arma::uword p = samples.dims.p;
  const arma::uword q = samples.dims.q;
  const bool is_b = target == Target::B;
  const arma::uword rows = is_b ? p : q;
  if (truth_mask.n_rows != rows || truth_mask.n_cols != q) {
    throw Error(ErrorCode::DimensionMismatch, "truth mask shape does not match the target");
  }
  const arma::mat sorted = sorted_columns(is_b ? samples.beta_draws : samples.omega_draws);

  std::vector<RocPoint> out;
  out.reserve(levels.size());
  for (const double level : levels) {
    check_level(level);
    const double lo_prob = (1.0 - level) / 2.0;
    const double hi_prob = (1.0 + level) / 2.0;
    Counts counts;
    for_each_scored(rows, q, target, [&](arma::uword i, arma::uword j) {
      const arma::uword c = is_b ? beta_index(i, j, q) : tri_index(i, j, q);
      const std::span<const double> col(sorted.colptr(c), sorted.n_rows);
      const bool selected = quantile_sorted(col, lo_prob) > 0.0 || quantile_sorted(col, hi_prob) < 0.0;
      tally(counts, selected, truth_mask(i, j) != 0);
    });
    out.push_back(counts.point(level));
  }
  return out;
}

std::vector<RocPoint> roc_sweep_threshold(const arma::mat& estimate, const arma::umat& truth_mask,
                                          Target target, std::span<const double> thresholds) {
  if (estimate.n_rows != truth_mask.n_rows || estimate.n_cols != truth_mask.n_cols) {
    throw Error(ErrorCode::DimensionMismatch, "estimate and truth mask shapes differ");
  }
  if (target == Target::Omega && !estimate.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "omega estimate must be square");
  }
  std::vector<RocPoint> out;
  out.reserve(thresholds.size());
  for (const double t : thresholds) {
    Counts counts;
    for_each_scored(estimate.n_rows, estimate.n_cols, target, [&](arma::uword i, arma::uword j) {
      tally(counts, std::abs(estimate(i, j)) > t, truth_mask(i, j) != 0);
    });
    out.push_back(counts.point(t));
  }
  return out;
}

std::vector<double> default_level_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  return grid;
}

std::vector<double> default_threshold_grid(const arma::mat& estimate, Target target) {
  std::vector<double> grid{0.0};
  for_each_scored(estimate.n_rows, estimate.n_cols, target,
                  [&](arma::uword i, arma::uword j) { grid.push_back(std::abs(estimate(i, j))); });
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace hsghs
