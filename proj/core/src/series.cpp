#include "superhedge/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace superhedge {

std::string_view series_verdict_name(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::kFinite: return "finite";
    case SeriesVerdict::kInfinite: return "infinite";
    case SeriesVerdict::kUnknown: return "unknown";
  }
  return "unknown";
}

namespace {

constexpr double kRatioThreshold = 0.95;

double window_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

SeriesResult classify_series(const std::function<double(std::int64_t)>& term,
                             std::int64_t n_max) {
  SeriesResult out;
  out.n_terms = n_max;
  bool saw_nan = false;
  bool saw_inf = false;
  double sum = 0.0;
  double window = 0.0;
  std::int64_t window_end = 2;  // exclusive end of window j = 0
  for (std::int64_t k = 1; k <= n_max; ++k) {
    const double t = term(k);
    if (std::isnan(t)) {
      saw_nan = true;
      break;
    }
    if (std::isinf(t)) {
      saw_inf = true;
      break;
    }
    sum += t;
    window += t;
    if (k + 1 == window_end) {
      out.window_sums.push_back(window);
      window = 0.0;
      window_end *= 2;
    }
  }
  out.partial_sum = sum;
  if (saw_inf) {
    out.partial_sum = std::numeric_limits<double>::infinity();
    out.verdict = SeriesVerdict::kInfinite;
    return out;
  }
  if (saw_nan || out.window_sums.size() < 5) {
    out.verdict = SeriesVerdict::kUnknown;
    return out;
  }

  const std::size_t last = out.window_sums.size() - 1;
  const auto& w = out.window_sums;
  if (w[last] == 0.0 && w[last - 1] == 0.0 && w[last - 2] == 0.0 && w[last - 3] == 0.0) {
    out.verdict = SeriesVerdict::kFinite;
    return out;
  }

  double ratios[3];
  for (int i = 0; i < 3; ++i) {
    const std::size_t j = last - 2 + static_cast<std::size_t>(i);
    ratios[i] = window_ratio(w[j], w[j - 1]);
  }
  const double first = ratios[0], final_ratio = ratios[2];
  const double j1 = static_cast<double>(last - 2), j2 = static_cast<double>(last);
  double limit = final_ratio;
  if (std::isfinite(first) && std::isfinite(final_ratio) && final_ratio > first) {
    limit = (j2 * final_ratio - j1 * first) / (j2 - j1);
  }
  out.limit_ratio = limit;

  const bool all_low = std::all_of(std::begin(ratios), std::end(ratios),
                                   [](double r) { return r <= kRatioThreshold; });
  const bool all_high = std::all_of(std::begin(ratios), std::end(ratios),
                                    [](double r) { return r >= kRatioThreshold; });
  if (all_high) {
    out.verdict = SeriesVerdict::kInfinite;
  } else if (all_low && limit <= kRatioThreshold) {
    out.verdict = SeriesVerdict::kFinite;
  } else {
    out.verdict = SeriesVerdict::kUnknown;
  }
  return out;
}

}  // namespace superhedge
