#pragma once

#include <span>

namespace hsghs {

struct TraceStats {
  double mean = 0.0;
  double sd = 0.0;
  double geweke_z = 0.0;
  std::size_t length = 0;
};

// Geweke z-score comparing the first `first` and last `last` fractions of a
// trace. Long-run variances come from non-overlapping batch means with about
// sqrt(m) batches per window of m values. Needs at least 20 values.
double geweke_z(std::span<const double> trace, double first = 0.1, double last = 0.5);

// geweke_z is NaN for traces shorter than 20 values.
TraceStats trace_stats(std::span<const double> trace);

}  // namespace hsghs
