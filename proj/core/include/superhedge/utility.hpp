#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace superhedge {

enum class UtilityKind {
  kExponential,
  kLog,
  kPower,
  kGluedUnbounded,
  kSlowLoss,
  kCustom,
};

std::string_view utility_kind_name(UtilityKind kind);

using RealFunction = std::function<double(double)>;

/// An increasing, strictly concave C^1 utility on (a, upper].
///
/// `upper` is +inf for every catalog entry; tabulated utilities end at their
/// last knot. `param` carries the catalog parameter (risk aversion for
/// exponential, exponent for power) and is unused otherwise.
struct UtilityFunction {
  double critical_wealth = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  RealFunction u;
  RealFunction u_prime;
  UtilityKind kind = UtilityKind::kCustom;
  double param = 0.0;

  bool whole_line() const { return critical_wealth == -std::numeric_limits<double>::infinity(); }
  bool in_domain(double x) const { return x > critical_wealth && x <= upper; }
};

// Catalog. Closed forms are documented next to each conjugate in utility.cpp.
UtilityFunction exponential_utility(double risk_aversion = 1.0);
UtilityFunction log_utility();
UtilityFunction power_utility(double p);
// 1 - e^{-x} for x < 0 glued C^1 to 2 sqrt(1+x) - 2 for x >= 0: whole real
// line, unbounded above, conjugate ~ 1/y near zero.
UtilityFunction glued_unbounded_utility();
// x ln(-x) for x <= -e glued C^1 to 2 - e - 2 e^{-(x+e)} for x > -e:
// asymptotic elasticity at -infinity equals one.
UtilityFunction slow_loss_utility();

UtilityFunction custom_utility(double critical_wealth, RealFunction u,
                               RealFunction u_prime,
                               double upper = std::numeric_limits<double>::infinity());

/// Cubic Hermite interpolant through tabulated (x, u, u') knots. The domain
/// is [x_0, x_n]; x_0 plays the role of the critical wealth.
UtilityFunction tabulated_utility(std::vector<double> x, std::vector<double> u,
                                  std::vector<double> u_prime);

/// Reads a CSV with header `x,u,uprime`.
UtilityFunction tabulated_utility_from_csv(const std::string& path);

struct UtilityInvariantReport {
  bool increasing = true;
  bool strictly_concave = true;
  bool derivative_positive_decreasing = true;
  bool ok() const { return increasing && strictly_concave && derivative_positive_decreasing; }
};

/// Checks monotonicity, midpoint concavity and the sign/monotonicity of u'
/// on the given grid (sorted ascending, inside the domain).
UtilityInvariantReport check_utility_invariants(const UtilityFunction& u,
                                                std::span<const double> grid);

/// Default sampling grid used by validation: geometric points around the
/// domain, clipped to it.
std::vector<double> default_utility_grid(const UtilityFunction& u);

/// Convex conjugate V(y) = sup_x {U(x) - x y} and its derivative.
struct ConjugatePair {
  RealFunction v;
  RealFunction v_prime;
  // ln max(V(e^t), 0), evaluated without overflow where a closed form exists.
  RealFunction log_v_plus;
  // lim_{y -> 0} V(y) = sup U, possibly +inf.
  double v_at_zero = 0.0;
  UtilityFunction source;
};

/// Closed-form conjugate for catalog kinds, numeric Legendre transform for
/// custom ones. Throws NonInada when the root of u'(x) = y cannot be
/// bracketed for some y in [working_lo, working_hi].
ConjugatePair conjugate(const UtilityFunction& u, double working_lo = 1e-4,
                        double working_hi = 1e4);

/// Always uses the numeric Legendre transform: v(y) = u(x*) - x* y with
/// u'(x*) = y found by bracketed root finding (residual 1e-12, 200 iterations).
ConjugatePair numeric_conjugate(const UtilityFunction& u);

/// max(V(y), 0); y = 0 maps to the closure value sup U.
double v_plus(const ConjugatePair& pair, double y);

struct InadaReport {
  bool lower_limit_ok = false;
  bool upper_limit_ok = false;
  double lower_sample = 0.0;  // largest u' seen approaching a
  double upper_sample = 0.0;  // smallest u' seen approaching +inf
};

InadaReport check_inada(const UtilityFunction& u);

enum class ElasticityVerdict { kNotRequired, kHolds, kFails };

std::string_view elasticity_verdict_name(ElasticityVerdict v);

struct ElasticityReport {
  ElasticityVerdict verdict = ElasticityVerdict::kNotRequired;
  double estimate = 0.0;
  double tail_minimum = 0.0;
  double extrapolated = 0.0;
  int grid_points = 0;  // finite evaluations used
};

/// Estimates liminf_{x -> -inf} x u'(x) / u(x) on x = -2^j, j = 1..40.
/// The estimate is the smaller of the running minimum over the tail half of
/// the finite grid points and a limit extrapolated under a c / ln|x| model
/// from the first and last tail points.
ElasticityReport asymptotic_elasticity_minus(const UtilityFunction& u);

struct GrowthCertificate {
  double alpha = 0.0;
  double b = 0.0;
  double d_const = 0.0;
  double sup_ratio = 0.0;
  int verification_grid_size = 0;
  int violations = 0;
};

/// Constants (b, D) with V positive and increasing on (b, inf) and
/// V(alpha y) <= D V(y) there. If b is not given it is the first point of
/// a log grid on [1e-8, 1e8] where V > 0 and V' > 0, doubled.
GrowthCertificate growth_constants(const UtilityFunction& u, double alpha,
                                   std::optional<double> b = std::nullopt);

}  // namespace superhedge
