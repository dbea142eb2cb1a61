#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "annealfem/fem.hpp"

namespace annealfem {

// Spin assignment, one value in {-1,+1} per qubit, three qubits per node.
// Qubit (node, slot) lives at index 3*node + slot with slot in {0,1,2}.
using QubitLabeling = std::vector<std::int8_t>;

inline int qubit_index(int node, int slot) { return 3 * node + slot; }

// The three candidate values a node may take, strictly increasing.
struct NodeCandidates {
  std::array<double, 3> v;
  NodeCandidates(double v0, double v1, double v2);
};

// Pairwise coupling block between the qubit triples of an element's two
// nodes; j[k][l] couples left slot k to right slot l.
struct ElementCoupling {
  std::array<std::array<double, 3>, 3> j;
};

// Field/coupling triple of a single node's one-hot constraint graph.
// coupling[i] pairs slots (0,1), (0,2), (1,2) in that order.
struct NodalGraph {
  std::array<double, 3> field;
  std::array<double, 3> coupling;
};

struct DirichletSpec {
  int node;
  int slot;
};

// Ising hamiltonian E(q) = sum_i H_i q_i + sum_{i<j} J_ij q_i q_j with
// sparse symmetric couplings stored once per pair.
class IsingGraph {
 public:
  struct Coupling {
    int i, j;
    double value;
  };

  explicit IsingGraph(int n_qubits);

  int num_qubits() const { return static_cast<int>(fields_.size()); }
  void add_field(int i, double h);
  void add_coupling(int i, int j, double value);  // accumulates, i != j

  const std::vector<double>& fields() const { return fields_; }
  const std::vector<Coupling>& couplings() const { return couplings_; }
  double field(int i) const { return fields_[static_cast<size_t>(i)]; }
  double coupling(int i, int j) const;  // 0 when the pair is absent

  // Assembly metadata; num_nodes stays 0 for hand-built graphs.
  int num_nodes = 0;
  double penalty_scale = 0.0;
  double coupling_scale = 0.0;
  double energy_rescale = 1.0;

 private:
  std::vector<double> fields_;
  std::vector<Coupling> couplings_;
  std::vector<std::vector<int>> by_qubit_;  // coupling indices touching i
};

struct DecodedState {
  NodalState a;
  bool feasible;  // true iff every node triple is one-hot
};

// Maps a labeling to nodal values: a_i = sum_j v_ij (q_ij + 1) / 2.
// Never fails; non-one-hot triples are summed as written and flagged.
DecodedState decode_state(const QubitLabeling& labeling,
                          const std::vector<NodeCandidates>& candidates);

// One-hot constraint graph for a single node: all fields and pair couplings
// equal to scale, so each one-hot state sits at -2*scale and every other
// labeling at >= 0. A Dirichlet assignment flips the pinned slot's field to
// -scale, lowering that state to -4*scale.
NodalGraph nodal_graph(double scale, std::optional<int> dirichlet_slot = {});

// Coupling block reproducing the element's energy on all nine feasible slot
// pairs: solves the fixed 9x9 sign-matrix system (dense Gaussian elimination
// with partial pivoting) for rhs values pair_monomials(v_left[k], v_right[l])
// . S, rows ordered with the left slot cycling fastest.
ElementCoupling estimate_element_coupling(const ElementVector& element_vector,
                                          const NodeCandidates& left,
                                          const NodeCandidates& right);

// Full problem graph: one nodal one-hot graph per node at penalty_scale
// (>= 0), one 3x3 coupling block per element at coupling_scale (> 0),
// Dirichlet field flips applied per assignment. 3*(nodes) qubits.
IsingGraph assemble(const std::vector<NodeCandidates>& candidates,
                    const std::vector<ElementCoupling>& couplings,
                    const std::vector<DirichletSpec>& dirichlet,
                    double penalty_scale, double coupling_scale);

double ising_energy(const IsingGraph& graph, const QubitLabeling& labeling);

// Uniform rescaling of every field and coupling so the largest |J| equals
// ceiling; argmin-invariant, factor recorded in energy_rescale so energies
// can be mapped back. No-op when the graph has no couplings.
IsingGraph apply_energy_rescale(const IsingGraph& graph, double ceiling);

// Plain-text edge list: first line the qubit count, then "h <i> <val>" per
// qubit and "j <i> <k> <val>" per stored coupling, 17 significant digits.
void write_edge_list(const IsingGraph& graph, std::ostream& out);

}  // namespace annealfem
