#pragma once

#include <vector>

#include <Eigen/Dense>

#include "superhedge/utility.hpp"

// Reference computations used only by the tests. None of them calls into the
// simplex solver or the double description code of the library.
namespace superhedge::oracle {

struct EliminationResult {
  int rank = 0;
  bool consistent = false;
  Eigen::VectorXd solution;  // valid when consistent and rank == cols
};

// Gaussian elimination with partial pivoting on [a | rhs].
EliminationResult eliminate(Eigen::MatrixXd a, Eigen::VectorXd rhs, double tol = 1e-10);

// Basis of the null space of a, from the reduced row echelon form.
std::vector<Eigen::VectorXd> null_space(const Eigen::MatrixXd& a, double tol = 1e-10);

// Vertices of {q >= 0, sum q = 1, g' q = 0} where the columns of g are gains
// payoffs. Every support set is tried; a vertex is the unique solution on a
// support with independent columns and strictly positive entries.
std::vector<Eigen::VectorXd> measure_vertices(const Eigen::MatrixXd& gains);

// max over vertices of q'x.
double vertex_price(const std::vector<Eigen::VectorXd>& vertices, const Eigen::VectorXd& x);

// Extreme rays of the pointed cone {x : a_i'x <= 0} by trying every subset of
// dim - 1 constraints. Rays are scaled to unit max-norm.
std::vector<Eigen::VectorXd> extreme_rays(const std::vector<Eigen::VectorXd>& normals, int dim);

// True when both lists hold the same directions up to positive scaling.
bool same_rays(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b,
               double tol = 1e-7);

struct LegendreValue {
  double value = 0.0;
  bool representable = true;  // false when U(x) - xy left double range on the search
};

// V(y) = sup_x U(x) - xy by a signed log grid over the domain followed by
// golden-section refinement on the bracketing cell.
LegendreValue legendre(const UtilityFunction& u, double y);

}  // namespace superhedge::oracle
