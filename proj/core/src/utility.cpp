#include "superhedge/utility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "superhedge/error.hpp"

namespace superhedge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = 2.718281828459045235360287;

double log_positive(double v) { return v > 0.0 ? std::log(v) : -kInf; }

// ln(t - 1 + e^{-t}) + t: ln of 1 - y + y ln y at y = e^t, stable for large t.
double log_exponential_conjugate(double t) {
  if (t > 30.0) return t + std::log(t - 1.0 + std::exp(-t));
  const double y = std::exp(t);
  return log_positive(1.0 - y + y * t);
}

}  // namespace

std::string_view utility_kind_name(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::kExponential: return "exponential";
    case UtilityKind::kLog: return "log";
    case UtilityKind::kPower: return "power";
    case UtilityKind::kGluedUnbounded: return "glued_unbounded";
    case UtilityKind::kSlowLoss: return "slow_loss";
    case UtilityKind::kCustom: return "custom";
  }
  return "custom";
}

std::string_view elasticity_verdict_name(ElasticityVerdict v) {
  switch (v) {
    case ElasticityVerdict::kNotRequired: return "not_required";
    case ElasticityVerdict::kHolds: return "holds";
    case ElasticityVerdict::kFails: return "fails";
  }
  return "not_required";
}

UtilityFunction exponential_utility(double risk_aversion) {
  if (!(risk_aversion > 0.0)) {
    throw Error(ErrorCode::kValidationError, "exponential utility needs gamma > 0");
  }
  const double g = risk_aversion;
  UtilityFunction out;
  out.kind = UtilityKind::kExponential;
  out.param = g;
  out.u = [g](double x) { return -std::expm1(-g * x) / g; };
  out.u_prime = [g](double x) { return std::exp(-g * x); };
  return out;
}

UtilityFunction log_utility() {
  UtilityFunction out;
  out.kind = UtilityKind::kLog;
  out.critical_wealth = 0.0;
  out.u = [](double x) { return std::log(x); };
  out.u_prime = [](double x) { return 1.0 / x; };
  return out;
}

UtilityFunction power_utility(double p) {
  if (!(p < 1.0) || p == 0.0) {
    throw Error(ErrorCode::kValidationError, "power utility needs p < 1, p != 0");
  }
  UtilityFunction out;
  out.kind = UtilityKind::kPower;
  out.param = p;
  out.critical_wealth = 0.0;
  out.u = [p](double x) { return std::pow(x, p) / p; };
  out.u_prime = [p](double x) { return std::pow(x, p - 1.0); };
  return out;
}

UtilityFunction glued_unbounded_utility() {
  UtilityFunction out;
  out.kind = UtilityKind::kGluedUnbounded;
  out.u = [](double x) {
    return x >= 0.0 ? 2.0 * std::sqrt(1.0 + x) - 2.0 : -std::expm1(-x);
  };
  out.u_prime = [](double x) {
    return x >= 0.0 ? 1.0 / std::sqrt(1.0 + x) : std::exp(-x);
  };
  return out;
}

UtilityFunction slow_loss_utility() {
  UtilityFunction out;
  out.kind = UtilityKind::kSlowLoss;
  out.u = [](double x) {
    return x <= -kE ? x * std::log(-x) : 2.0 - kE - 2.0 * std::exp(-(x + kE));
  };
  out.u_prime = [](double x) {
    return x <= -kE ? std::log(-x) + 1.0 : 2.0 * std::exp(-(x + kE));
  };
  return out;
}

UtilityFunction custom_utility(double critical_wealth, RealFunction u,
                               RealFunction u_prime, double upper) {
  UtilityFunction out;
  out.kind = UtilityKind::kCustom;
  out.critical_wealth = critical_wealth;
  out.upper = upper;
  out.u = std::move(u);
  out.u_prime = std::move(u_prime);
  return out;
}

UtilityFunction tabulated_utility(std::vector<double> x, std::vector<double> u,
                                  std::vector<double> u_prime) {
  if (x.size() < 2 || u.size() != x.size() || u_prime.size() != x.size()) {
    throw Error(ErrorCode::kValidationError,
                "tabulated utility needs at least two rows of (x, u, uprime)");
  }
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i] < x[i + 1])) {
      throw Error(ErrorCode::kValidationError, "tabulated x must be strictly increasing");
    }
  }
  struct Table {
    std::vector<double> x, u, d;
    std::size_t segment(double t) const {
      auto it = std::upper_bound(x.begin(), x.end(), t);
      std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
      return std::min(i, x.size() - 2);
    }
  };
  auto table = std::make_shared<Table>(Table{std::move(x), std::move(u), std::move(u_prime)});

  UtilityFunction out;
  out.kind = UtilityKind::kCustom;
  out.critical_wealth = table->x.front();
  out.upper = table->x.back();
  out.u = [table](double t) {
    if (t < table->x.front() || t > table->x.back()) return std::nan("");
    const std::size_t i = table->segment(t);
    const double h = table->x[i + 1] - table->x[i];
    const double s = (t - table->x[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * table->u[i] + h10 * h * table->d[i] + h01 * table->u[i + 1] +
           h11 * h * table->d[i + 1];
  };
  out.u_prime = [table](double t) {
    if (t < table->x.front() || t > table->x.back()) return std::nan("");
    const std::size_t i = table->segment(t);
    const double h = table->x[i + 1] - table->x[i];
    const double s = (t - table->x[i]) / h;
    const double d00 = 6 * s * s - 6 * s;
    const double d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -6 * s * s + 6 * s;
    const double d11 = 3 * s * s - 2 * s;
    return (d00 * table->u[i] + d01 * table->u[i + 1]) / h + d10 * table->d[i] +
           d11 * table->d[i + 1];
  };
  return out;
}

UtilityFunction tabulated_utility_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, path + ": empty file");
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "x,u,uprime") {
    throw Error(ErrorCode::kParseError, path + ":1: expected header x,u,uprime");
  }
  std::vector<double> xs, us, ds;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    double vals[3];
    int k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= 3) break;
      try {
        std::size_t used = 0;
        vals[k] = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParseError,
                    path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      ++k;
    }
    if (k != 3 || std::getline(ss, cell, ',')) {
      throw Error(ErrorCode::kParseError,
                  path + ":" + std::to_string(lineno) + ": expected 3 columns");
    }
    xs.push_back(vals[0]);
    us.push_back(vals[1]);
    ds.push_back(vals[2]);
  }
  return tabulated_utility(std::move(xs), std::move(us), std::move(ds));
}

std::vector<double> default_utility_grid(const UtilityFunction& u) {
  std::vector<double> grid;
  if (u.whole_line()) {
    for (double t = 1.25; t >= -3.0; t -= 0.125) grid.push_back(-std::pow(10.0, t));
    grid.push_back(0.0);
    for (double t = -3.0; t <= 1.25; t += 0.125) grid.push_back(std::pow(10.0, t));
  } else {
    for (double t = -6.0; t <= 4.0; t += 0.125) grid.push_back(u.critical_wealth + std::pow(10.0, t));
  }
  grid.erase(std::remove_if(grid.begin(), grid.end(),
                            [&](double x) { return !u.in_domain(x); }),
             grid.end());
  if (std::isfinite(u.upper) && (grid.empty() || grid.back() < u.upper)) grid.push_back(u.upper);
  return grid;
}

UtilityInvariantReport check_utility_invariants(const UtilityFunction& u,
                                                std::span<const double> grid) {
  UtilityInvariantReport r;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double x1 = grid[i], x2 = grid[i + 1];
    const double u1 = u.u(x1), u2 = u.u(x2);
    const double d1 = u.u_prime(x1), d2 = u.u_prime(x2);
    if (!(u1 < u2)) r.increasing = false;
    if (!(u.u(0.5 * (x1 + x2)) > 0.5 * (u1 + u2))) r.strictly_concave = false;
    if (!(d1 > 0.0 && d2 > 0.0 && d1 > d2)) r.derivative_positive_decreasing = false;
  }
  return r;
}

namespace {

// Finds x in the domain with u'(x) = y. u' is strictly decreasing.
double solve_marginal(const UtilityFunction& u, double y) {
  const auto residual = [&](double x) { return u.u_prime(x) - y; };
  const double a = u.critical_wealth;
  double anchor;
  if (std::isfinite(a)) {
    anchor = std::isfinite(u.upper) ? 0.5 * (a + u.upper) : a + 1.0;
  } else {
    anchor = std::isfinite(u.upper) ? std::min(0.0, u.upper) : 0.0;
  }

  double lo = anchor, hi = anchor;
  double r0 = residual(anchor);
  if (r0 == 0.0) return anchor;
  if (r0 > 0.0) {
    // u' too large: move right.
    bool found = false;
    for (int k = 0; k < 1100; ++k) {
      double cand = anchor + std::ldexp(1.0, k - 4);
      if (cand > u.upper) cand = u.upper;
      const double r = residual(cand);
      if (!std::isfinite(cand)) break;
      if (r <= 0.0) {
        hi = cand;
        found = true;
        break;
      }
      lo = cand;
      if (cand == u.upper) break;
    }
    if (!found) {
      throw Error(ErrorCode::kNonInada,
                  "u' stays above " + std::to_string(y) + " on the domain");
    }
  } else {
    bool found = false;
    for (int k = 0; k < 1100; ++k) {
      const double cand = std::isfinite(a) ? a + (anchor - a) * std::ldexp(1.0, -k - 1)
                                           : anchor - std::ldexp(1.0, k - 4);
      if (!std::isfinite(cand) || !u.in_domain(cand)) break;
      const double r = residual(cand);
      if (r >= 0.0) {
        lo = cand;
        found = true;
        break;
      }
      hi = cand;
    }
    if (!found) {
      throw Error(ErrorCode::kNonInada,
                  "u' stays below " + std::to_string(y) + " on the domain");
    }
  }

  // residual(lo) >= 0 >= residual(hi)
  boost::uintmax_t max_iter = 200;
  const auto stop = [&](double l, double h) {
    if (boost::math::tools::eps_tolerance<double>(52)(l, h)) return true;
    const double m = 0.5 * (l + h);
    return std::abs(residual(m)) <= 1e-12 * std::max(1.0, y);
  };
  const auto [l, h] = boost::math::tools::toms748_solve(residual, lo, hi, stop, max_iter);
  // The stop test may accept on the midpoint, so it competes with the ends.
  double best = 0.5 * (l + h);
  double rbest = std::abs(residual(best));
  for (double x : {l, h}) {
    const double r = std::abs(residual(x));
    if (r < rbest) {
      best = x;
      rbest = r;
    }
  }
  return best;
}

ConjugatePair numeric_pair(const UtilityFunction& u) {
  ConjugatePair pair;
  pair.source = u;
  pair.v = [u](double y) {
    const double x = solve_marginal(u, y);
    return u.u(x) - x * y;
  };
  pair.v_prime = [u](double y) { return -solve_marginal(u, y); };
  pair.log_v_plus = [v = pair.v](double t) { return log_positive(v(std::exp(t))); };
  if (std::isfinite(u.upper)) {
    pair.v_at_zero = u.u(u.upper);
  } else {
    const double far = std::ldexp(1.0, 40) + std::max(0.0, u.critical_wealth);
    const double top = u.u(far);
    const double step = top - u.u(0.5 * far);
    pair.v_at_zero = step > 1e-9 * std::max(1.0, std::abs(top)) ? kInf : top;
  }
  return pair;
}

}  // namespace

ConjugatePair numeric_conjugate(const UtilityFunction& u) { return numeric_pair(u); }

ConjugatePair conjugate(const UtilityFunction& u, double working_lo, double working_hi) {
  ConjugatePair pair;
  pair.source = u;
  switch (u.kind) {
    case UtilityKind::kExponential: {
      // V(y) = (1 - y + y ln y) / gamma
      const double g = u.param;
      pair.v = [g](double y) { return (1.0 - y + y * std::log(y)) / g; };
      pair.v_prime = [g](double y) { return std::log(y) / g; };
      pair.log_v_plus = [g](double t) { return log_exponential_conjugate(t) - std::log(g); };
      pair.v_at_zero = 1.0 / g;
      return pair;
    }
    case UtilityKind::kLog: {
      // V(y) = -ln y - 1
      pair.v = [](double y) { return -std::log(y) - 1.0; };
      pair.v_prime = [](double y) { return -1.0 / y; };
      pair.log_v_plus = [](double t) { return -t - 1.0 > 0.0 ? std::log(-t - 1.0) : -kInf; };
      pair.v_at_zero = kInf;
      return pair;
    }
    case UtilityKind::kPower: {
      // V(y) = (1-p)/p * y^{-p/(1-p)}
      const double p = u.param;
      const double c = (1.0 - p) / p;
      const double e = -p / (1.0 - p);
      pair.v = [c, e](double y) { return c * std::pow(y, e); };
      pair.v_prime = [p](double y) { return -std::pow(y, -1.0 / (1.0 - p)); };
      pair.log_v_plus = [c, e](double t) { return c > 0.0 ? std::log(c) + e * t : -kInf; };
      pair.v_at_zero = c > 0.0 ? kInf : 0.0;
      return pair;
    }
    case UtilityKind::kGluedUnbounded: {
      // V(y) = 1 - y + y ln y for y >= 1, 1/y + y - 2 for y < 1
      pair.v = [](double y) {
        return y >= 1.0 ? 1.0 - y + y * std::log(y) : 1.0 / y + y - 2.0;
      };
      pair.v_prime = [](double y) { return y >= 1.0 ? std::log(y) : 1.0 - 1.0 / (y * y); };
      pair.log_v_plus = [](double t) {
        if (t >= 0.0) return log_exponential_conjugate(t);
        return -t + 2.0 * std::log1p(-std::exp(t));
      };
      pair.v_at_zero = kInf;
      return pair;
    }
    case UtilityKind::kSlowLoss: {
      // V(y) = e^{y-1} for y >= 2, 2 - e + (e-1) y + y ln(y/2) for y < 2
      const auto v = [](double y) {
        return y >= 2.0 ? std::exp(y - 1.0)
                        : 2.0 - kE + (kE - 1.0) * y + y * std::log(0.5 * y);
      };
      pair.v = v;
      pair.v_prime = [](double y) {
        return y >= 2.0 ? std::exp(y - 1.0) : kE + std::log(0.5 * y);
      };
      pair.log_v_plus = [v](double t) {
        const double y = std::exp(t);
        return y >= 2.0 ? y - 1.0 : log_positive(v(y));
      };
      pair.v_at_zero = 2.0 - kE;
      return pair;
    }
    case UtilityKind::kCustom:
      break;
  }
  ConjugatePair numeric = numeric_pair(u);
  for (double y : {working_lo, std::sqrt(working_lo), 1.0, std::sqrt(working_hi), working_hi}) {
    (void)numeric.v(y);  // throws NonInada when the bracket fails
  }
  return numeric;
}

double v_plus(const ConjugatePair& pair, double y) {
  if (y < 0.0 || std::isnan(y)) {
    throw Error(ErrorCode::kDomainError, "v_plus needs y >= 0");
  }
  if (y == 0.0) return std::max(pair.v_at_zero, 0.0);
  return std::max(pair.v(y), 0.0);
}

InadaReport check_inada(const UtilityFunction& u) {
  InadaReport r;
  r.lower_sample = -kInf;
  r.upper_sample = kInf;
  for (int j = 1; j <= 40; ++j) {
    const double x = u.whole_line() ? -std::ldexp(1.0, j)
                                    : u.critical_wealth + std::ldexp(1.0, -j);
    if (!u.in_domain(x)) continue;
    const double d = u.u_prime(x);
    if (!std::isnan(d)) r.lower_sample = std::max(r.lower_sample, d);
  }
  const double base = u.whole_line() ? 0.0 : std::max(u.critical_wealth, 0.0);
  for (int j = 0; j <= 40; ++j) {
    const double x = base + std::ldexp(1.0, j);
    if (!u.in_domain(x)) continue;
    const double d = u.u_prime(x);
    if (!std::isnan(d)) r.upper_sample = std::min(r.upper_sample, d);
  }
  r.lower_limit_ok = r.lower_sample > 1e6;
  r.upper_limit_ok = r.upper_sample < 1e-6;
  return r;
}

ElasticityReport asymptotic_elasticity_minus(const UtilityFunction& u) {
  ElasticityReport report;
  if (!u.whole_line()) {
    report.verdict = ElasticityVerdict::kNotRequired;
    return report;
  }

  std::vector<std::pair<double, double>> points;  // (j, ratio)
  bool hit_zero = false;
  for (double offset : {0.0, 0.5}) {
    points.clear();
    hit_zero = false;
    for (int j = 1; j <= 40; ++j) {
      const double jj = j + offset;
      const double x = -std::exp2(jj);
      const double ux = u.u(x);
      const double dx = u.u_prime(x);
      if (ux == 0.0) {
        hit_zero = true;
        break;
      }
      const double ratio = x * dx / ux;
      if (!std::isfinite(ux) || !std::isfinite(dx) || !std::isfinite(ratio)) continue;
      points.emplace_back(jj, ratio);
    }
    if (!hit_zero) break;
  }
  if (hit_zero) {
    throw Error(ErrorCode::kDomainError, "u vanishes on the elasticity grid");
  }
  if (points.size() < 2) {
    throw Error(ErrorCode::kDomainError, "too few finite points on the elasticity grid");
  }

  const std::size_t start = points.size() / 2;
  double tail_min = kInf;
  for (std::size_t i = start; i < points.size(); ++i) tail_min = std::min(tail_min, points[i].second);
  const auto [j1, r1] = points[start];
  const auto [j2, r2] = points.back();
  const double extrapolated = j2 > j1 ? (j2 * r2 - j1 * r1) / (j2 - j1) : r2;

  report.grid_points = static_cast<int>(points.size());
  report.tail_minimum = tail_min;
  report.extrapolated = extrapolated;
  report.estimate = std::min(tail_min, extrapolated);
  report.verdict = report.estimate > 1.0 + 1e-6 ? ElasticityVerdict::kHolds
                                                 : ElasticityVerdict::kFails;
  return report;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int n, double shift = 0.0) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) {
    out.push_back(std::exp(std::log(lo) + (i + shift) * step));
  }
  return out;
}

}  // namespace

GrowthCertificate growth_constants(const UtilityFunction& u, double alpha,
                                   std::optional<double> b) {
  if (!(alpha > 1.0)) throw Error(ErrorCode::kPreconditionError, "alpha must exceed 1");
  const ElasticityReport ae = asymptotic_elasticity_minus(u);
  if (ae.verdict != ElasticityVerdict::kHolds) {
    throw Error(ErrorCode::kPreconditionError,
                "growth constants need reasonable asymptotic elasticity at -inf (verdict: " +
                    std::string(elasticity_verdict_name(ae.verdict)) + ")");
  }
  const ConjugatePair pair = conjugate(u);
  constexpr int kGrid = 10000;
  constexpr double kTop = 1e8;

  GrowthCertificate cert;
  cert.alpha = alpha;
  if (b) {
    if (!(*b > 0.0) || !(pair.v(*b) > 0.0) || !(pair.v_prime(*b) > 0.0)) {
      throw Error(ErrorCode::kPreconditionError, "V must be positive and increasing at b");
    }
    cert.b = *b;
  } else {
    double found = 0.0;
    for (double y : log_grid(1e-8, kTop, kGrid)) {
      if (pair.v(y) > 0.0 && pair.v_prime(y) > 0.0) {
        found = y;
        break;
      }
    }
    if (found == 0.0) {
      throw Error(ErrorCode::kNoPositiveRegion, "V is never positive and increasing on [1e-8, 1e8]");
    }
    cert.b = 2.0 * found;
  }

  double sup = 0.0;
  for (double y : log_grid(cert.b, kTop, kGrid)) {
    sup = std::max(sup, pair.v(alpha * y) / pair.v(y));
  }
  cert.sup_ratio = sup;
  cert.d_const = 1.05 * sup;

  // Independent check on a grid shifted by half a step, strictly inside (b, top).
  const std::vector<double> check = log_grid(cert.b, kTop, kGrid, 0.5);
  cert.verification_grid_size = static_cast<int>(check.size()) - 1;
  double prev = pair.v(cert.b);
  for (std::size_t i = 0; i + 1 < check.size(); ++i) {
    const double y = check[i];
    const double vy = pair.v(y);
    if (!(vy > 0.0) || !(vy > prev) || !(pair.v(alpha * y) <= cert.d_const * vy)) {
      ++cert.violations;
    }
    prev = vy;
  }
  if (cert.violations > 0) {
    throw Error(ErrorCode::kDomainError, "growth certificate failed verification on " +
                                             std::to_string(cert.violations) + " points");
  }
  return cert;
}

}  // namespace superhedge
