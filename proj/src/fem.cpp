#include "annealfem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace annealfem {
namespace {

struct QuadRule {
  const double* points;
  const double* weights;
  int n;
};

// Gauss-Legendre abscissae/weights on [-1, 1].
const double kP2[] = {-0.5773502691896257645, 0.5773502691896257645};
const double kW2[] = {1.0, 1.0};
const double kP3[] = {-0.7745966692414833770, 0.0, 0.7745966692414833770};
const double kW3[] = {0.5555555555555555556, 0.8888888888888888889,
                      0.5555555555555555556};
const double kP4[] = {-0.8611363115940525752, -0.3399810435848562648,
                      0.3399810435848562648, 0.8611363115940525752};
const double kW4[] = {0.3478548451374538574, 0.6521451548625461426,
                      0.6521451548625461426, 0.3478548451374538574};
const double kP5[] = {-0.9061798459386639928, -0.5384693101056830910, 0.0,
                      0.5384693101056830910, 0.9061798459386639928};
const double kW5[] = {0.2369268850561890875, 0.4786286704993664680,
                      0.5688888888888888889, 0.4786286704993664680,
                      0.2369268850561890875};
const double kP6[] = {-0.9324695142031520278, -0.6612093864662645137,
                      -0.2386191860831969086, 0.2386191860831969086,
                      0.6612093864662645137, 0.9324695142031520278};
const double kW6[] = {0.1713244923791703450, 0.3607615730481386076,
                      0.4679139345726910474, 0.4679139345726910474,
                      0.3607615730481386076, 0.1713244923791703450};

QuadRule quad_rule(int order) {
  switch (order) {
    case 2: return {kP2, kW2, 2};
    case 3: return {kP3, kW3, 3};
    case 4: return {kP4, kW4, 4};
    case 5: return {kP5, kW5, 5};
    case 6: return {kP6, kW6, 6};
    default:
      throw std::invalid_argument("quad_order must be between 2 and 6, got " +
                                  std::to_string(order));
  }
}

}  // namespace

std::array<double, 5> pair_monomials(double a_left, double a_right) {
  return {a_left * a_left, a_right * a_right, a_left * a_right, a_left,
          a_right};
}

Coefficient::Coefficient(double value) { fn_ = [value](double) { return value; }; }

Coefficient Coefficient::constant(double value) { return Coefficient(value); }

Coefficient Coefficient::function(std::function<double(double)> fn) {
  if (!fn) throw std::invalid_argument("coefficient callable is empty");
  Coefficient c;
  c.fn_ = std::move(fn);
  return c;
}

Coefficient Coefficient::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || xs.size() != ys.size())
    throw std::invalid_argument("coefficient table needs matching non-empty x/y lists");
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw std::invalid_argument("coefficient table x values must be strictly increasing");
  Coefficient c;
  c.xs_ = std::move(xs);
  c.ys_ = std::move(ys);
  return c;
}

double Coefficient::operator()(double x) const {
  if (fn_) return fn_(x);
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  size_t hi = static_cast<size_t>(it - xs_.begin());
  double t = (x - xs_[hi - 1]) / (xs_[hi] - xs_[hi - 1]);
  return ys_[hi - 1] + t * (ys_[hi] - ys_[hi - 1]);
}

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2)
    throw std::invalid_argument("mesh needs at least two nodes");
  for (size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("mesh nodes must be strictly increasing at index " +
                                  std::to_string(i));
}

Mesh1D Mesh1D::uniform(double x_left, double x_right, int elements) {
  if (elements < 1) throw std::invalid_argument("mesh needs at least one element");
  if (!(x_left < x_right))
    throw std::invalid_argument("mesh interval is empty: x_left >= x_right");
  std::vector<double> nodes(static_cast<size_t>(elements) + 1);
  for (int i = 0; i <= elements; ++i)
    nodes[static_cast<size_t>(i)] = x_left + (x_right - x_left) * i / elements;
  nodes.front() = x_left;
  nodes.back() = x_right;
  return Mesh1D(std::move(nodes));
}

Problem1D::Problem1D(double xl, double xr, Coefficient p_, Coefficient q_,
                     Coefficient f_, double ul, double ur)
    : x_left(xl), x_right(xr), p(std::move(p_)), q(std::move(q_)),
      f(std::move(f_)), u_left(ul), u_right(ur) {
  if (!(x_left < x_right))
    throw std::invalid_argument("problem domain is empty: x_left >= x_right");
}

std::vector<ElementVector> compute_element_vectors(const Problem1D& problem,
                                                   const Mesh1D& mesh,
                                                   int quad_order) {
  if (mesh.node(0) != problem.x_left || mesh.node(mesh.num_elements()) != problem.x_right)
    throw std::invalid_argument("mesh endpoints do not match the problem domain");
  QuadRule rule = quad_rule(quad_order);

  std::vector<ElementVector> out(static_cast<size_t>(mesh.num_elements()));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double xl = mesh.node(e), xr = mesh.node(e + 1);
    double h = xr - xl;
    double mid = 0.5 * (xl + xr), half = 0.5 * h;
    double dl = -1.0 / h, dr = 1.0 / h;  // hat-function slopes

    ElementVector s{};
    for (int g = 0; g < rule.n; ++g) {
      double x = mid + half * rule.points[g];
      double w = half * rule.weights[g];
      double pv = problem.p(x), qv = problem.q(x), fv = problem.f(x);
      if (!(pv > 0.0))
        throw std::invalid_argument("p(x) must be positive; violated in element " +
                                    std::to_string(e));
      if (qv < 0.0)
        throw std::invalid_argument("q(x) must be non-negative; violated in element " +
                                    std::to_string(e));
      double phil = (xr - x) / h, phir = (x - xl) / h;
      s[0] += w * (0.5 * pv * dl * dl + 0.5 * qv * phil * phil);
      s[1] += w * (0.5 * pv * dr * dr + 0.5 * qv * phir * phir);
      s[2] += w * (pv * dl * dr + qv * phil * phir);
      s[3] -= w * fv * phil;
      s[4] -= w * fv * phir;
    }
    out[static_cast<size_t>(e)] = s;
  }
  return out;
}

double functional_value(const std::vector<ElementVector>& element_vectors,
                        const NodalState& a) {
  if (a.size() != element_vectors.size() + 1)
    throw std::invalid_argument("state has " + std::to_string(a.size()) +
                                " nodes but the mesh has " +
                                std::to_string(element_vectors.size() + 1));
  double total = 0.0;
  for (size_t e = 0; e < element_vectors.size(); ++e) {
    auto m = pair_monomials(a[e], a[e + 1]);
    const ElementVector& s = element_vectors[e];
    for (int k = 0; k < 5; ++k) total += m[static_cast<size_t>(k)] * s[static_cast<size_t>(k)];
  }
  return total;
}

NodalState classical_fem_solve(const std::vector<ElementVector>& element_vectors,
                               double u_left, double u_right) {
  size_t ne = element_vectors.size();
  if (ne == 0) throw std::invalid_argument("no elements to solve");
  size_t n = ne - 1;  // interior unknowns
  NodalState a(ne + 1);
  a.front() = u_left;
  a.back() = u_right;
  if (n == 0) return a;

  // Stationarity of the discrete energy at interior node k:
  // 2(s1_{k-1} + s0_k) a_k + s2_{k-1} a_{k-1} + s2_k a_{k+1} + s4_{k-1} + s3_k = 0.
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0), rhs(n);
  for (size_t m = 0; m < n; ++m) {
    diag[m] = 2.0 * (element_vectors[m][1] + element_vectors[m + 1][0]);
    rhs[m] = -(element_vectors[m][4] + element_vectors[m + 1][3]);
  }
  for (size_t m = 0; m + 1 < n; ++m) off[m] = element_vectors[m + 1][2];
  rhs[0] -= element_vectors[0][2] * u_left;
  rhs[n - 1] -= element_vectors[ne - 1][2] * u_right;

  // Thomas sweep; the system is symmetric positive definite for admissible
  // coefficients, so no pivoting is needed.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  double pivot = diag[0];
  if (!(std::abs(pivot) > 0.0)) throw std::runtime_error("singular reduced system");
  if (n > 1) c[0] = off[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (size_t m = 1; m < n; ++m) {
    pivot = diag[m] - off[m - 1] * c[m - 1];
    if (!(std::abs(pivot) > 0.0)) throw std::runtime_error("singular reduced system");
    if (m + 1 < n) c[m] = off[m] / pivot;
    d[m] = (rhs[m] - off[m - 1] * d[m - 1]) / pivot;
  }
  a[n] = d[n - 1];
  for (size_t m = n - 1; m-- > 0;) a[m + 1] = d[m] - c[m] * a[m + 2];
  return a;
}

std::vector<ElementVector> truss_functional_vectors(const std::vector<double>& ea,
                                                    const std::vector<double>& f) {
  if (ea.empty() || ea.size() != f.size())
    throw std::invalid_argument("truss needs matching non-empty EA and load lists");
  double n = static_cast<double>(ea.size());
  std::vector<ElementVector> out(ea.size());
  for (size_t i = 0; i < ea.size(); ++i) {
    if (!(ea[i] > 0.0))
      throw std::invalid_argument("EA must be positive; violated in element " +
                                  std::to_string(i));
    double k = n * ea[i];
    out[i] = {0.5 * k, 0.5 * k, -k, -f[i] / (2.0 * n), -f[i] / (2.0 * n)};
  }
  return out;
}

TridiagonalMatrix reduced_stiffness(const std::vector<ElementVector>& element_vectors) {
  size_t ne = element_vectors.size();
  TridiagonalMatrix m;
  if (ne < 2) return m;
  size_t n = ne - 1;
  m.diag.resize(n);
  m.off.resize(n - 1);
  for (size_t k = 0; k < n; ++k)
    m.diag[k] = element_vectors[k][1] + element_vectors[k + 1][0];
  for (size_t k = 0; k + 1 < n; ++k) m.off[k] = element_vectors[k + 1][2] / 2.0;
  return m;
}

namespace {

// Sturm sequence: number of eigenvalues strictly below sigma.
int count_below(const TridiagonalMatrix& m, double sigma) {
  const double tiny = 1e-300;
  int count = 0;
  double d = 1.0;
  for (size_t i = 0; i < m.diag.size(); ++i) {
    double e2 = i == 0 ? 0.0 : m.off[i - 1] * m.off[i - 1];
    d = m.diag[i] - sigma - e2 / d;
    if (std::abs(d) < tiny) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

double bisect_for(const TridiagonalMatrix& m, int want, double lo, double hi) {
  // Smallest sigma with count_below(sigma) >= want.
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_below(m, mid) >= want)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::pair<double, double> tridiagonal_eigen_extremes(const TridiagonalMatrix& m) {
  size_t n = m.diag.size();
  if (n == 0) throw std::invalid_argument("empty matrix has no eigenvalues");
  if (m.off.size() + 1 != n)
    throw std::invalid_argument("off-diagonal size must be n - 1");
  if (n == 1) return {m.diag[0], m.diag[0]};

  double lo = m.diag[0], hi = m.diag[0];
  for (size_t i = 0; i < n; ++i) {
    double radius = (i > 0 ? std::abs(m.off[i - 1]) : 0.0) +
                    (i + 1 < n ? std::abs(m.off[i]) : 0.0);
    lo = std::min(lo, m.diag[i] - radius);
    hi = std::max(hi, m.diag[i] + radius);
  }
  double lmin = bisect_for(m, 1, lo, hi);
  double lmax = bisect_for(m, static_cast<int>(n), lo, hi);
  return {lmin, lmax};
}

}  // namespace annealfem
