#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace superhedge {

enum class SeriesVerdict { kFinite, kInfinite, kUnknown };

std::string_view series_verdict_name(SeriesVerdict v);

struct SeriesResult {
  SeriesVerdict verdict = SeriesVerdict::kUnknown;
  double partial_sum = 0.0;
  std::int64_t n_terms = 0;
  std::vector<double> window_sums;  // complete dyadic windows [2^j, 2^{j+1})
  double limit_ratio = 0.0;         // extrapolated ratio of consecutive windows
};

/// Heuristic convergence verdict for a series of nonnegative terms
/// term(1), term(2), ..., term(n_max), based on the dyadic window sums
/// W_j = sum_{2^j <= k < 2^{j+1}} term(k) (Cauchy condensation).
///
/// Over the last four complete windows:
///  - all zero, or the three consecutive ratios and their extrapolated limit
///    (model rho_j = rho - c/j) are <= 0.95: finite;
///  - all three ratios >= 0.95 (the windows do not decay): infinite;
///  - anything else, or fewer than five complete windows: unknown.
/// A +inf term is infinite outright; a NaN term makes the verdict unknown.
SeriesResult classify_series(const std::function<double(std::int64_t)>& term,
                             std::int64_t n_max);

}  // namespace superhedge
