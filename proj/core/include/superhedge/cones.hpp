#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "superhedge/market.hpp"
#include "superhedge/measures.hpp"

namespace superhedge {

inline constexpr double kMembershipTol = 1e-8;
inline constexpr int kMaxConeDim = 12;

/// A polyhedral cone in R^n. Generators span it (linear[j] means both signs
/// of generators[j]); halfspaces h hold {x : h'x <= 0} with the Euclidean
/// inner product, or h'x == 0 when the matching equality flag is set.
/// Either representation may be empty; an empty generator list is {0}.
struct PolyCone {
  int dim = 0;
  std::vector<Eigen::VectorXd> generators;
  std::vector<bool> linear;
  std::vector<Eigen::VectorXd> halfspaces;
  std::vector<bool> halfspace_equality;

  bool has_halfspaces() const { return !halfspaces.empty() || halfspaces_known; }
  // True once the H-representation has been computed (it may legitimately be
  // empty, for the whole space).
  bool halfspaces_known = false;

  void add_generator(Eigen::VectorXd g, bool is_linear = false);
};

/// L1 distance from x to the cone spanned by the generators, by LP.
double membership_residual(const PolyCone& c, const Eigen::VectorXd& x);
bool contains(const PolyCone& c, const Eigen::VectorXd& x, double tol = kMembershipTol);

/// Largest constraint violation of x against the H-representation.
double halfspace_violation(const PolyCone& c, const Eigen::VectorXd& x);

/// Fills in the H-representation from the generators by double description.
PolyCone with_halfspaces(PolyCone c);

/// Polar cone under the weighted pairing <x, h> = sum_i w_i x_i h_i. Its
/// halfspaces are w o g for each generator g (equalities for linear ones);
/// its generators come from the H-to-V conversion.
PolyCone polar(const PolyCone& c, const Eigen::VectorXd& weights);

struct ConeComparison {
  bool equal = false;
  double max_violation = 0.0;  // worst normalized generator residual, both ways
  int checked = 0;             // generator membership tests performed
  std::optional<Eigen::VectorXd> witness;
};

/// Equality of two cones by mutual generator membership. Generators are
/// scaled to unit max-norm before testing.
ConeComparison compare_cones(const PolyCone& a, const PolyCone& b, double tol = kMembershipTol);
/// One-sided: every generator of a (both signs when linear) lies in b.
ConeComparison cone_subset(const PolyCone& a, const PolyCone& b, double tol = kMembershipTol);

struct BipolarReport {
  bool holds = false;
  ConeComparison bipolar;       // polar(polar(c)) vs cone(c)
  ConeComparison hull_polar;    // polar(cone(c)) vs polar(c)
};

BipolarReport bipolar_check(const PolyCone& c, const Eigen::VectorXd& weights);
BipolarReport bipolar_check(const PolyCone& c);  // uniform weights

/// K_U = K - R^n_+: gains generators (linear) and -e_i for each state.
PolyCone build_ku(const MarketModel& m);

struct CuResult {
  PolyCone cone;             // path (b): polar of the cone of vertex densities
  PolyCone closure_of_ku;    // path (a)
  ConeComparison consistency;
};

/// C_U computed as the closure of K_U (a) and as the polar of
/// cone(vertex densities) (b). Throws EmptyMeasureSet when the polytope has
/// no points.
CuResult build_cu(const MarketModel& m, const MeasurePolytope& measures);

struct ChainCheck {
  std::string name;
  bool holds = false;
  double max_violation = 0.0;
};

struct DualityReport {
  std::vector<ChainCheck> chain_equalities;
  int claims_checked = 0;  // membership tests behind the cone comparisons
  bool all_hold() const;
};

/// Checks the polar-cone identities linking K_U, C_U and the separating
/// measures at tolerance 1e-8. Throws EmptyMeasureSet if the market admits
/// arbitrage.
DualityReport verify_duality_chain(const MarketModel& m);

struct RepresentationEntry {
  Eigen::VectorXd claim;
  bool in_cu = false;            // direct membership in K - R^n_+
  bool projections_pass = false; // every sampled Q accepts the restricted claim
  bool agree = false;
  double membership_residual = 0.0;
  std::optional<Eigen::VectorXd> separating_measure;  // probabilities
  double separating_value = 0.0;                      // E_Q[X] > 0
  int failing_measure = -1;  // index of the first sampled Q that rejects X
};

struct RepresentationReport {
  std::vector<RepresentationEntry> entries;
  int measures_sampled = 0;
  bool all_agree = true;
  bool all_rejections_separated = true;
  bool partial = true;  // only finitely many Q are sampled
};

/// Compares membership of each claim in C_U with the intersection test over
/// the sampled measures: X restricted to supp(Q) must lie in the projection
/// of K - R^n_+ onto those coordinates. Rejected claims get a separating
/// vertex with E_Q[X] > 0.
RepresentationReport verify_representation(const MarketModel& m,
                                           const std::vector<Claim>& claims,
                                           const std::vector<MeasureDensity>& measures);

/// Vertices of the separating polytope plus its barycenter, as densities.
std::vector<MeasureDensity> default_sample_measures(const MarketModel& m);

}  // namespace superhedge
