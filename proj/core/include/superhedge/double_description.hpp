#pragma once

#include <vector>

#include <Eigen/Dense>

namespace superhedge {

/// A polyhedral cone in generator form: cone(rays) + span(lineality).
struct ConeGenerators {
  std::vector<Eigen::VectorXd> rays;
  std::vector<Eigen::VectorXd> lineality;  // orthonormal basis
};

/// A homogeneous constraint normal'x <= 0, or normal'x == 0 when equality.
struct ConeConstraint {
  Eigen::VectorXd normal;
  bool equality = false;
};

/// Converts {x : constraints} into generators by the double description
/// method (incremental, combinatorial adjacency test). Rays are returned
/// with unit max-norm, orthogonal to the lineality space, in lexicographic
/// order.
ConeGenerators halfspaces_to_generators(
    int dim, const std::vector<ConeConstraint>& constraints,
    double tol = 1e-10);

/// Converts cone(rays) + span(lineality) into constraint form. The returned
/// normals are the generators of the (Euclidean) polar cone; lineality of
/// the polar becomes equality constraints.
std::vector<ConeConstraint> generators_to_halfspaces(
    int dim, const std::vector<Eigen::VectorXd>& rays,
    const std::vector<Eigen::VectorXd>& lineality, double tol = 1e-10);

}  // namespace superhedge
