#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace annealfem {

// Nodal values of a piecewise-linear trial function, one entry per mesh node.
using NodalState = std::vector<double>;

// Per-element decomposition of the discrete energy functional.
// Entry order: [stiffness(left,left), stiffness(right,right),
//               stiffness(left,right), load(left), load(right)].
// The first two entries are non-negative for admissible coefficients.
using ElementVector = std::array<double, 5>;

// Quadratic/linear monomials of a node pair, ordered to pair with
// ElementVector: [a_l^2, a_r^2, a_l*a_r, a_l, a_r].
std::array<double, 5> pair_monomials(double a_left, double a_right);

// Scalar coefficient of the differential operator. Either a closed-form
// callable or a piecewise-linear table; tables clamp outside their range.
class Coefficient {
 public:
  Coefficient(double value);  // constant, implicit on purpose

  static Coefficient constant(double value);
  static Coefficient function(std::function<double(double)> fn);
  static Coefficient table(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;

 private:
  Coefficient() = default;
  std::function<double(double)> fn_;
  std::vector<double> xs_, ys_;
};

// Strictly increasing node list over [x_left, x_right], at least one element.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> nodes);
  static Mesh1D uniform(double x_left, double x_right, int elements);

  int num_elements() const { return static_cast<int>(nodes_.size()) - 1; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  double node(int i) const { return nodes_[static_cast<size_t>(i)]; }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
};

// Two-point boundary-value problem -(p u')' + q u = f on (x_left, x_right)
// with Dirichlet data u(x_left) = u_left, u(x_right) = u_right.
// Well-posedness (p > 0, q >= 0) is checked at quadrature points.
struct Problem1D {
  double x_left;
  double x_right;
  Coefficient p;
  Coefficient q;
  Coefficient f;
  double u_left = 0.0;
  double u_right = 0.0;

  Problem1D(double xl, double xr, Coefficient p_, Coefficient q_,
            Coefficient f_, double ul = 0.0, double ur = 0.0);
};

// Gauss-Legendre element integration of the energy functional against the
// hat-function basis. quad_order is the point count per element (2..6);
// order 2 is exact for piecewise-linear coefficients. Throws
// std::invalid_argument naming the element if p <= 0 or q < 0 at a
// quadrature point, or if the mesh does not span the problem domain.
std::vector<ElementVector> compute_element_vectors(const Problem1D& problem,
                                                   const Mesh1D& mesh,
                                                   int quad_order = 2);

// Discrete energy of a nodal state: sum over elements of
// pair_monomials(a_i, a_{i+1}) . S_i. Requires a.size() == S.size() + 1.
double functional_value(const std::vector<ElementVector>& element_vectors,
                        const NodalState& a);

// Direct minimizer of the discrete energy with both end values prescribed:
// assembles the reduced tridiagonal system and solves it with the Thomas
// algorithm. Serves as the classical reference for the annealing path.
NodalState classical_fem_solve(const std::vector<ElementVector>& element_vectors,
                               double u_left, double u_right);

// Element vectors for an axially loaded bar on the unit domain with N
// uniform elements, per-element stiffness EA_i > 0 and body force f_i:
// S_i = [N*EA_i/2, N*EA_i/2, -N*EA_i, -f_i/(2N), -f_i/(2N)].
std::vector<ElementVector> truss_functional_vectors(
    const std::vector<double>& ea, const std::vector<double>& f);

// Symmetric tridiagonal matrix, diag.size() == n, off.size() == n - 1.
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> off;
};

// Quadratic-form matrix M of the energy restricted to the interior nodes
// (both ends eliminated): functional = a^T M a + linear terms. Empty for a
// single-element mesh.
TridiagonalMatrix reduced_stiffness(const std::vector<ElementVector>& element_vectors);

// Extreme eigenvalues of a symmetric tridiagonal matrix by bisection on the
// Sturm sign-change count. Returns {lambda_min, lambda_max}.
std::pair<double, double> tridiagonal_eigen_extremes(const TridiagonalMatrix& m);

}  // namespace annealfem
