#include "annealfem/ising.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace annealfem {
namespace {

// Spin patterns of the three one-hot states, slot j of state k is
// kOneHot[k][j].
constexpr int kOneHot[3][3] = {{+1, -1, -1}, {-1, +1, -1}, {-1, -1, +1}};

// Coefficient matrix of the 9x9 coupling system. Row 3*l + k holds the spin
// products of the feasible pair (left state k, right state l); column
// 3*a + b multiplies the coupling between left slot a and right slot b. The
// matrix is constant because the one-hot patterns are; a test regenerates it
// from kOneHot.
constexpr double kPairSigns[9][9] = {
    {+1, -1, -1, -1, +1, +1, -1, +1, +1},
    {-1, +1, +1, +1, -1, -1, -1, +1, +1},
    {-1, +1, +1, -1, +1, +1, +1, -1, -1},
    {-1, +1, -1, +1, -1, +1, +1, -1, +1},
    {+1, -1, +1, -1, +1, -1, +1, -1, +1},
    {+1, -1, +1, +1, -1, +1, -1, +1, -1},
    {-1, -1, +1, +1, +1, -1, +1, +1, -1},
    {+1, +1, -1, -1, -1, +1, +1, +1, -1},
    {+1, +1, -1, +1, +1, -1, -1, -1, +1},
};

}  // namespace

NodeCandidates::NodeCandidates(double v0, double v1, double v2) : v{v0, v1, v2} {
  if (!(v0 < v1 && v1 < v2))
    throw std::invalid_argument("node candidates must be strictly increasing");
}

IsingGraph::IsingGraph(int n_qubits) {
  if (n_qubits < 0) throw std::invalid_argument("negative qubit count");
  fields_.assign(static_cast<size_t>(n_qubits), 0.0);
  by_qubit_.resize(static_cast<size_t>(n_qubits));
}

void IsingGraph::add_field(int i, double h) {
  fields_.at(static_cast<size_t>(i)) += h;
}

void IsingGraph::add_coupling(int i, int j, double value) {
  if (i == j) throw std::invalid_argument("coupling needs two distinct qubits");
  if (i < 0 || j < 0 || i >= num_qubits() || j >= num_qubits())
    throw std::invalid_argument("coupling qubit index out of range");
  if (i > j) std::swap(i, j);
  for (int idx : by_qubit_[static_cast<size_t>(i)]) {
    Coupling& c = couplings_[static_cast<size_t>(idx)];
    if (c.i == i && c.j == j) {
      c.value += value;
      return;
    }
  }
  couplings_.push_back({i, j, value});
  int idx = static_cast<int>(couplings_.size()) - 1;
  by_qubit_[static_cast<size_t>(i)].push_back(idx);
  by_qubit_[static_cast<size_t>(j)].push_back(idx);
}

double IsingGraph::coupling(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const Coupling& c : couplings_)
    if (c.i == i && c.j == j) return c.value;
  return 0.0;
}

DecodedState decode_state(const QubitLabeling& labeling,
                          const std::vector<NodeCandidates>& candidates) {
  if (labeling.size() != 3 * candidates.size())
    throw std::invalid_argument("labeling length must be 3 * node count");
  DecodedState out;
  out.a.resize(candidates.size());
  out.feasible = true;
  for (size_t n = 0; n < candidates.size(); ++n) {
    double value = 0.0;
    int ups = 0;
    for (int s = 0; s < 3; ++s) {
      int q = labeling[3 * n + static_cast<size_t>(s)];
      if (q == 1) ++ups;
      value += candidates[n].v[static_cast<size_t>(s)] * (q + 1) * 0.5;
    }
    out.a[n] = value;
    if (ups != 1) out.feasible = false;
  }
  return out;
}

NodalGraph nodal_graph(double scale, std::optional<int> dirichlet_slot) {
  if (!(scale > 0.0)) throw std::invalid_argument("nodal scale must be positive");
  NodalGraph g;
  g.field = {scale, scale, scale};
  g.coupling = {scale, scale, scale};
  if (dirichlet_slot) {
    if (*dirichlet_slot < 0 || *dirichlet_slot > 2)
      throw std::invalid_argument("dirichlet slot must be 0, 1 or 2");
    g.field[static_cast<size_t>(*dirichlet_slot)] = -scale;
  }
  return g;
}

ElementCoupling estimate_element_coupling(const ElementVector& element_vector,
                                          const NodeCandidates& left,
                                          const NodeCandidates& right) {
  double m[9][10];
  for (int row = 0; row < 9; ++row) {
    int k = row % 3, l = row / 3;
    for (int col = 0; col < 9; ++col) m[row][col] = kPairSigns[row][col];
    auto mono = pair_monomials(left.v[static_cast<size_t>(k)],
                               right.v[static_cast<size_t>(l)]);
    double rhs = 0.0;
    for (int t = 0; t < 5; ++t)
      rhs += mono[static_cast<size_t>(t)] * element_vector[static_cast<size_t>(t)];
    m[row][9] = rhs;
  }

  // Gaussian elimination with partial pivoting; the sign matrix is
  // unconditionally invertible so a vanishing pivot cannot happen.
  for (int col = 0; col < 9; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 9; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-12)
      throw std::runtime_error("degenerate coupling system");
    if (pivot != col)
      for (int c = col; c < 10; ++c) std::swap(m[pivot][c], m[col][c]);
    for (int r = col + 1; r < 9; ++r) {
      double factor = m[r][col] / m[col][col];
      for (int c = col; c < 10; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  double x[9];
  for (int row = 8; row >= 0; --row) {
    double acc = m[row][9];
    for (int c = row + 1; c < 9; ++c) acc -= m[row][c] * x[c];
    x[row] = acc / m[row][row];
  }

  ElementCoupling out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      out.j[static_cast<size_t>(a)][static_cast<size_t>(b)] = x[3 * a + b];
  return out;
}

IsingGraph assemble(const std::vector<NodeCandidates>& candidates,
                    const std::vector<ElementCoupling>& couplings,
                    const std::vector<DirichletSpec>& dirichlet,
                    double penalty_scale, double coupling_scale) {
  if (candidates.empty()) throw std::invalid_argument("assemble needs at least one node");
  if (couplings.size() + 1 != candidates.size())
    throw std::invalid_argument("element coupling count must be node count - 1");
  if (penalty_scale < 0.0)
    throw std::invalid_argument("penalty_scale must be non-negative");
  if (!(coupling_scale > 0.0))
    throw std::invalid_argument("coupling_scale must be positive");

  int n_nodes = static_cast<int>(candidates.size());
  std::map<int, int> pinned_slot;
  for (const DirichletSpec& d : dirichlet) {
    if (d.node < 0 || d.node >= n_nodes)
      throw std::invalid_argument("dirichlet node out of range");
    if (d.slot < 0 || d.slot > 2)
      throw std::invalid_argument("dirichlet slot must be 0, 1 or 2");
    if (!pinned_slot.emplace(d.node, d.slot).second)
      throw std::invalid_argument("duplicate dirichlet node " + std::to_string(d.node));
  }

  IsingGraph graph(3 * n_nodes);
  graph.num_nodes = n_nodes;
  graph.penalty_scale = penalty_scale;
  graph.coupling_scale = coupling_scale;

  if (penalty_scale > 0.0) {
    for (int n = 0; n < n_nodes; ++n) {
      std::optional<int> slot;
      if (auto it = pinned_slot.find(n); it != pinned_slot.end()) slot = it->second;
      NodalGraph ng = nodal_graph(penalty_scale, slot);
      for (int s = 0; s < 3; ++s)
        graph.add_field(qubit_index(n, s), ng.field[static_cast<size_t>(s)]);
      graph.add_coupling(qubit_index(n, 0), qubit_index(n, 1), ng.coupling[0]);
      graph.add_coupling(qubit_index(n, 0), qubit_index(n, 2), ng.coupling[1]);
      graph.add_coupling(qubit_index(n, 1), qubit_index(n, 2), ng.coupling[2]);
    }
  }
  for (size_t e = 0; e < couplings.size(); ++e) {
    int left = static_cast<int>(e), right = left + 1;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        graph.add_coupling(qubit_index(left, a), qubit_index(right, b),
                           coupling_scale *
                               couplings[e].j[static_cast<size_t>(a)][static_cast<size_t>(b)]);
  }
  return graph;
}

double ising_energy(const IsingGraph& graph, const QubitLabeling& labeling) {
  if (static_cast<int>(labeling.size()) != graph.num_qubits())
    throw std::invalid_argument("labeling length does not match the graph");
  double energy = 0.0;
  const std::vector<double>& h = graph.fields();
  for (size_t i = 0; i < h.size(); ++i) energy += h[i] * labeling[i];
  for (const IsingGraph::Coupling& c : graph.couplings())
    energy += c.value * labeling[static_cast<size_t>(c.i)] *
              labeling[static_cast<size_t>(c.j)];
  return energy;
}

IsingGraph apply_energy_rescale(const IsingGraph& graph, double ceiling) {
  if (!(ceiling > 0.0)) throw std::invalid_argument("rescale ceiling must be positive");
  double max_j = 0.0;
  for (const IsingGraph::Coupling& c : graph.couplings())
    max_j = std::max(max_j, std::abs(c.value));
  if (max_j == 0.0) return graph;

  double factor = ceiling / max_j;
  IsingGraph out(graph.num_qubits());
  out.num_nodes = graph.num_nodes;
  out.penalty_scale = graph.penalty_scale;
  out.coupling_scale = graph.coupling_scale;
  out.energy_rescale = graph.energy_rescale * factor;
  for (int i = 0; i < graph.num_qubits(); ++i) {
    double h = graph.field(i);
    if (h != 0.0) out.add_field(i, h * factor);
  }
  for (const IsingGraph::Coupling& c : graph.couplings())
    out.add_coupling(c.i, c.j, c.value * factor);
  return out;
}

void write_edge_list(const IsingGraph& graph, std::ostream& out) {
  char buf[64];
  out << graph.num_qubits() << "\n";
  for (int i = 0; i < graph.num_qubits(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", graph.field(i));
    out << "h " << i << " " << buf << "\n";
  }
  for (const IsingGraph::Coupling& c : graph.couplings()) {
    std::snprintf(buf, sizeof buf, "%.17g", c.value);
    out << "j " << c.i << " " << c.j << " " << buf << "\n";
  }
}

}  // namespace annealfem
