#include "hsghs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hsghs/types.hpp"

namespace hsghs {

namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Variance of the window mean, estimated by batch means.
double mean_variance(std::span<const double> x) {
  const std::size_t m = x.size();
  std::size_t batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(m))));
  if (batches < 2) batches = 2;
  const std::size_t size = m / batches;
  const double overall = mean_of(x.first(batches * size));
  double ss = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    const double d = mean_of(x.subspan(b * size, size)) - overall;
    ss += d * d;
  }
  // var(batch mean) / batches
  return ss / static_cast<double>(batches - 1) / static_cast<double>(batches);
}

}  // namespace

double geweke_z(std::span<const double> trace, double first, double last) {
  if (trace.size() < 20) throw Error(ErrorCode::InvalidArgument, "geweke_z needs at least 20 values");
  if (!(first > 0.0 && last > 0.0 && first + last <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "geweke_z window fractions must be positive and sum to <= 1");
  }
  const auto n = trace.size();
  const auto na = std::max<std::size_t>(4, static_cast<std::size_t>(std::floor(first * n)));
  const auto nb = std::max<std::size_t>(4, static_cast<std::size_t>(std::floor(last * n)));
  const auto a = trace.first(na);
  const auto b = trace.last(nb);
  const double var = mean_variance(a) + mean_variance(b);
  const double diff = mean_of(a) - mean_of(b);
  if (var <= 0.0) return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
  return diff / std::sqrt(var);
}

TraceStats trace_stats(std::span<const double> trace) {
  TraceStats s;
  s.length = trace.size();
  if (trace.empty()) return s;
  s.mean = mean_of(trace);
  double ss = 0.0;
  for (const double v : trace) ss += (v - s.mean) * (v - s.mean);
  s.sd = trace.size() > 1 ? std::sqrt(ss / static_cast<double>(trace.size() - 1)) : 0.0;
  s.geweke_z = trace.size() >= 20 ? geweke_z(trace) : std::nan("");
  return s;
}

}  // namespace hsghs
