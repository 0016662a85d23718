#include "superhedge/cones.hpp"

#include <algorithm>
#include <cmath>

#include "superhedge/double_description.hpp"
#include "superhedge/error.hpp"
#include "superhedge/lp.hpp"

namespace superhedge {

namespace {

Eigen::VectorXd unit_max(const Eigen::VectorXd& v) {
  const double m = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  return m > 0.0 ? Eigen::VectorXd(v / m) : v;
}

void check_dim(const PolyCone& c, const Eigen::VectorXd& x) {
  if (x.size() != c.dim) {
    throw Error(ErrorCode::kDimensionError, "vector of size " + std::to_string(x.size()) +
                                                " tested against a cone in dimension " +
                                                std::to_string(c.dim));
  }
}

PolyCone from_generators(int dim, const ConeGenerators& g) {
  PolyCone c;
  c.dim = dim;
  for (const auto& r : g.rays) c.add_generator(r, false);
  for (const auto& l : g.lineality) c.add_generator(l, true);
  return c;
}

// Minimizes sum |r| over x = sum_j lambda_j g_j + r restricted to the
// given coordinates, lambda_j >= 0 unless linear.
double restricted_residual(const PolyCone& c, const Eigen::VectorXd& x,
                           const std::vector<int>& coords) {
  const std::size_t ng = c.generators.size();
  const std::size_t rows = coords.size();
  LinearProgram lp(ng + 2 * rows);
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ng + 2 * rows));
  obj.tail(static_cast<Eigen::Index>(2 * rows)).setOnes();
  lp.set_objective(obj);
  for (std::size_t j = 0; j < ng; ++j) {
    if (c.linear[j]) lp.set_bound(j, VarBound::kFree);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ng + 2 * rows));
    for (std::size_t j = 0; j < ng; ++j) row(static_cast<Eigen::Index>(j)) = c.generators[j](coords[r]);
    row(static_cast<Eigen::Index>(ng + 2 * r)) = 1.0;
    row(static_cast<Eigen::Index>(ng + 2 * r + 1)) = -1.0;
    lp.add_row(row, RowSense::kEqual, x(coords[r]));
  }
  const LpSolution s = solve_lp(lp);
  if (s.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInfeasible, "membership LP did not reach optimality");
  }
  return std::max(s.objective, 0.0);
}

std::vector<int> all_coords(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

void push_check(DualityReport& r, std::string name, double violation) {
  r.chain_equalities.push_back({std::move(name), violation <= kMembershipTol, violation});
}

void push_check(DualityReport& r, std::string name, const ConeComparison& c) {
  r.claims_checked += c.checked;
  push_check(r, std::move(name), c.max_violation);
}

MeasurePolytope polytope_or_empty(const MarketModel& m) {
  try {
    return separating_polytope(m);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNoMeasure) {
      throw Error(ErrorCode::kEmptyMeasureSet, "the set of separating measures is empty");
    }
    throw;
  }
}

PolyCone density_cone(const MarketModel& m, const MeasurePolytope& poly) {
  const Eigen::VectorXd& p = m.reference_probabilities();
  PolyCone c;
  c.dim = m.num_states();
  for (const auto& q : poly.vertices) c.add_generator(q.cwiseQuotient(p));
  return c;
}

}  // namespace

void PolyCone::add_generator(Eigen::VectorXd g, bool is_linear) {
  if (g.size() != dim) {
    throw Error(ErrorCode::kDimensionError, "generator of size " + std::to_string(g.size()) +
                                                " added to a cone in dimension " +
                                                std::to_string(dim));
  }
  generators.push_back(std::move(g));
  linear.push_back(is_linear);
}

double membership_residual(const PolyCone& c, const Eigen::VectorXd& x) {
  check_dim(c, x);
  if (c.generators.empty()) return x.cwiseAbs().sum();
  return restricted_residual(c, x, all_coords(c.dim));
}

bool contains(const PolyCone& c, const Eigen::VectorXd& x, double tol) {
  return membership_residual(c, x) <= tol;
}

double halfspace_violation(const PolyCone& c, const Eigen::VectorXd& x) {
  check_dim(c, x);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.halfspaces.size(); ++i) {
    const double s = c.halfspaces[i].dot(x);
    worst = std::max(worst, c.halfspace_equality[i] ? std::abs(s) : s);
  }
  return worst;
}

PolyCone with_halfspaces(PolyCone c) {
  std::vector<Eigen::VectorXd> rays, lin;
  for (std::size_t j = 0; j < c.generators.size(); ++j) {
    (c.linear[j] ? lin : rays).push_back(c.generators[j]);
  }
  c.halfspaces.clear();
  c.halfspace_equality.clear();
  for (auto& h : generators_to_halfspaces(c.dim, rays, lin)) {
    c.halfspaces.push_back(std::move(h.normal));
    c.halfspace_equality.push_back(h.equality);
  }
  c.halfspaces_known = true;
  return c;
}

PolyCone polar(const PolyCone& c, const Eigen::VectorXd& weights) {
  if (weights.size() != c.dim) {
    throw Error(ErrorCode::kDimensionError, "pairing weights do not match the cone dimension");
  }
  if (c.dim > kMaxConeDim) {
    throw Error(ErrorCode::kDimensionError,
                "cone dimension " + std::to_string(c.dim) + " exceeds " +
                    std::to_string(kMaxConeDim));
  }
  std::vector<ConeConstraint> constraints;
  for (std::size_t j = 0; j < c.generators.size(); ++j) {
    constraints.push_back({weights.cwiseProduct(c.generators[j]), static_cast<bool>(c.linear[j])});
  }
  PolyCone out = from_generators(c.dim, halfspaces_to_generators(c.dim, constraints));
  for (auto& h : constraints) {
    out.halfspaces.push_back(std::move(h.normal));
    out.halfspace_equality.push_back(h.equality);
  }
  out.halfspaces_known = true;
  return out;
}

ConeComparison cone_subset(const PolyCone& a, const PolyCone& b, double tol) {
  if (a.dim != b.dim) throw Error(ErrorCode::kDimensionError, "cones differ in dimension");
  ConeComparison out;
  for (std::size_t j = 0; j < a.generators.size(); ++j) {
    const Eigen::VectorXd g = unit_max(a.generators[j]);
    for (int sign : {1, -1}) {
      if (sign < 0 && !a.linear[j]) break;
      const Eigen::VectorXd v = static_cast<double>(sign) * g;
      const double r = membership_residual(b, v);
      ++out.checked;
      if (r > out.max_violation) {
        out.max_violation = r;
        if (r > tol) out.witness = v;
      }
    }
  }
  out.equal = out.max_violation <= tol;
  return out;
}

ConeComparison compare_cones(const PolyCone& a, const PolyCone& b, double tol) {
  ConeComparison ab = cone_subset(a, b, tol);
  ConeComparison ba = cone_subset(b, a, tol);
  ConeComparison out;
  out.max_violation = std::max(ab.max_violation, ba.max_violation);
  out.equal = ab.equal && ba.equal;
  out.checked = ab.checked + ba.checked;
  out.witness = ab.witness ? ab.witness : ba.witness;
  return out;
}

BipolarReport bipolar_check(const PolyCone& c, const Eigen::VectorXd& weights) {
  BipolarReport r;
  const PolyCone p = polar(c, weights);
  const PolyCone pp = polar(p, weights);
  r.bipolar = compare_cones(pp, c);

  // The conic hull in canonical form: extreme rays and lineality recovered
  // from the H-representation.
  const PolyCone hull_h = with_halfspaces(c);
  std::vector<ConeConstraint> h;
  for (std::size_t i = 0; i < hull_h.halfspaces.size(); ++i) {
    h.push_back({hull_h.halfspaces[i], static_cast<bool>(hull_h.halfspace_equality[i])});
  }
  const PolyCone hull = from_generators(c.dim, halfspaces_to_generators(c.dim, h));
  r.hull_polar = compare_cones(polar(hull, weights), p);
  r.holds = r.bipolar.equal && r.hull_polar.equal;
  return r;
}

BipolarReport bipolar_check(const PolyCone& c) {
  return bipolar_check(c, Eigen::VectorXd::Constant(c.dim, 1.0 / std::max(c.dim, 1)));
}

PolyCone build_ku(const MarketModel& m) {
  PolyCone c;
  c.dim = m.num_states();
  for (const auto& g : gains_space(m).generators) c.add_generator(g.payoff, true);
  for (int i = 0; i < c.dim; ++i) c.add_generator(-Eigen::VectorXd::Unit(c.dim, i));
  return c;
}

CuResult build_cu(const MarketModel& m, const MeasurePolytope& measures) {
  if (measures.dim != m.num_states()) {
    throw Error(ErrorCode::kDimensionError, "measure polytope does not match the market");
  }
  CuResult out;
  out.closure_of_ku = build_ku(m);  // finitely generated, hence closed
  const Eigen::VectorXd& p = m.reference_probabilities();

  PolyCone densities;
  if (measures.vertices_enumerated) {
    if (measures.vertices.empty()) {
      throw Error(ErrorCode::kEmptyMeasureSet, "the set of separating measures is empty");
    }
    densities = density_cone(m, measures);
  } else {
    if (measures.feasible_point.size() != measures.dim) {
      throw Error(ErrorCode::kEmptyMeasureSet, "the set of separating measures is empty");
    }
    densities = polar(out.closure_of_ku, p);
  }
  out.cone = polar(densities, p);
  out.consistency = compare_cones(out.cone, out.closure_of_ku);
  return out;
}

bool DualityReport::all_hold() const {
  return std::all_of(chain_equalities.begin(), chain_equalities.end(),
                     [](const ChainCheck& c) { return c.holds; });
}

DualityReport verify_duality_chain(const MarketModel& m) {
  const MeasurePolytope poly = polytope_or_empty(m);
  const Eigen::VectorXd& p = m.reference_probabilities();
  DualityReport report;

  const PolyCone ku = build_ku(m);
  const PolyCone ku_polar = polar(ku, p);
  const CuResult cu = build_cu(m, poly);
  const PolyCone cu_polar = polar(cu.cone, p);

  if (poly.vertices_enumerated) {
    push_check(report, "K_U_polar == cone(vertex densities)",
               compare_cones(ku_polar, density_cone(m, poly)));
  }
  push_check(report, "C_U_polar == K_U_polar", compare_cones(cu_polar, ku_polar));

  // Sandwich: every generator of K_U's polar is a nonnegative density
  // orthogonal to K under the weighted pairing.
  const GainsSpace k = gains_space(m);
  double sandwich = 0.0;
  for (std::size_t j = 0; j < ku_polar.generators.size(); ++j) {
    const Eigen::VectorXd h = unit_max(ku_polar.generators[j]);
    if (ku_polar.linear[j]) {
      sandwich = std::max(sandwich, h.cwiseAbs().maxCoeff());
    } else {
      sandwich = std::max(sandwich, std::max(0.0, -h.minCoeff()));
    }
    for (const auto& g : k.generators) {
      sandwich = std::max(sandwich, std::abs(p.cwiseProduct(h).dot(g.payoff)));
    }
  }
  push_check(report, "K_U_polar subset of orthant and K_perp", sandwich);
  push_check(report, "C_U paths (closure of K_U, polar of densities) agree", cu.consistency);
  push_check(report, "C_U == K_U_polar_polar", compare_cones(polar(ku_polar, p), cu.cone));

  // On a finite state space every density is bounded, so each separating
  // measure has finite loss entropy; record the vertex densities' size.
  double nonfinite = 0.0;
  for (const auto& q : poly.vertices) {
    if (!q.cwiseQuotient(p).allFinite()) nonfinite = 1.0;
  }
  push_check(report, "cone(M_1) == cone(hat M_V) on finite states", nonfinite);
  return report;
}

std::vector<MeasureDensity> default_sample_measures(const MarketModel& m) {
  const MeasurePolytope poly = polytope_or_empty(m);
  const Eigen::VectorXd& p = m.reference_probabilities();
  std::vector<MeasureDensity> out;
  for (const auto& v : poly.vertices) out.push_back(MeasureDensity::from_probabilities(v, p));
  Eigen::VectorXd bary = poly.barycenter();
  bary /= bary.sum();
  out.push_back(MeasureDensity::from_probabilities(bary, p));
  return out;
}

RepresentationReport verify_representation(const MarketModel& m,
                                           const std::vector<Claim>& claims,
                                           const std::vector<MeasureDensity>& measures) {
  const int n = m.num_states();
  const PolyCone ku = build_ku(m);
  const MeasurePolytope poly = polytope_or_empty(m);

  std::vector<std::vector<int>> supports;
  for (const auto& q : measures) {
    if (q.is_countable() || q.dim() != n) {
      throw Error(ErrorCode::kDimensionError, "sampled measure does not match the market");
    }
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (q.density()(i) > 1e-12) s.push_back(i);
    }
    supports.push_back(std::move(s));
  }

  RepresentationReport report;
  report.measures_sampled = static_cast<int>(measures.size());
  for (const auto& c : claims) {
    if (c.payoff.size() != n) {
      throw Error(ErrorCode::kDimensionError, "claim does not match the market");
    }
    RepresentationEntry e;
    e.claim = c.payoff;
    const double scale = std::max(1.0, c.payoff.cwiseAbs().maxCoeff());
    const Eigen::VectorXd x = c.payoff / scale;
    e.membership_residual = membership_residual(ku, x);
    e.in_cu = e.membership_residual <= kMembershipTol;
    e.projections_pass = true;
    for (std::size_t i = 0; i < supports.size(); ++i) {
      if (restricted_residual(ku, x, supports[i]) > kMembershipTol) {
        e.projections_pass = false;
        e.failing_measure = static_cast<int>(i);
        break;
      }
    }
    e.agree = e.in_cu == e.projections_pass;
    if (!e.in_cu) {
      for (const auto& v : poly.vertices) {
        const double val = v.dot(c.payoff);
        if (val > e.separating_value) {
          e.separating_value = val;
          e.separating_measure = v;
        }
      }
      if (!(e.separating_value > 1e-9 * scale)) report.all_rejections_separated = false;
    }
    report.all_agree = report.all_agree && e.agree;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace superhedge
