#pragma once

// Point estimates, equal-tailed credible intervals, interval-based
// selection and ROC sweeps over stored posterior draws.

#include <armadillo>

#include <span>
#include <vector>

#include "hsghs/types.hpp"

namespace hsghs {

enum class PointSummary { Mean, Median };
enum class Target { B, Omega };

struct PointEstimate {
  arma::mat B;      // p x q
  arma::mat Omega;  // q x q, symmetric
};

PointEstimate posterior_mean(const PosteriorSamples& samples);
// Mean is what the metrics score; Median is available for comparison.
PointEstimate posterior_point(const PosteriorSamples& samples, PointSummary summary);

// Linear interpolation between order statistics ("type 7"): h = (m-1) prob.
// `sorted` must be ascending and nonempty.
double quantile_sorted(std::span<const double> sorted, double prob);

struct CredibleIntervals {
  arma::mat b_lo, b_hi;          // p x q
  arma::mat omega_lo, omega_hi;  // q x q, diagonal included
  double level = 0.0;
};

// Equal-tailed: quantiles (1-level)/2 and (1+level)/2 per element.
// Requires 0 < level < 1 and at least two draws.
CredibleIntervals credible_interval(const PosteriorSamples& samples, double level);

struct SelectionResult {
  arma::umat b_selected;      // p x q
  arma::umat omega_selected;  // q x q, symmetric, zero diagonal
  double level = 0.0;
};

// An element is selected iff its interval excludes zero.
SelectionResult select_by_interval(const CredibleIntervals& intervals);

struct RocPoint {
  double cutoff = 0.0;  // credible level or magnitude threshold
  double fpr = 0.0;
  double tpr = 0.0;     // NaN when the truth has no positives
};

// Rates over all p*q entries for B and over the strict upper triangle for Omega.
std::vector<RocPoint> roc_sweep_bayes(const PosteriorSamples& samples, const arma::umat& truth_mask,
                                      Target target, std::span<const double> levels);
std::vector<RocPoint> roc_sweep_threshold(const arma::mat& estimate, const arma::umat& truth_mask,
                                          Target target, std::span<const double> thresholds);

// 0.01, 0.02, ..., 0.99
std::vector<double> default_level_grid();
// Sorted distinct |estimate| values over the scored entries, preceded by 0.
std::vector<double> default_threshold_grid(const arma::mat& estimate, Target target);

}  // namespace hsghs
