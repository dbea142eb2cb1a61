#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "annealfem/ising.hpp"

namespace annealfem {

// Raised when a request exceeds a hard resource limit (exhaustive solve on
// too many qubits). Maps to its own process exit code in the CLI.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SampleResult {
  QubitLabeling labeling;
  double energy;  // always recomputed from the labeling on receipt
  int num_occurrences = 1;
};

struct AnnealSchedule {
  int sweeps = 2000;
  double beta_start = 0.1;
  double beta_end = 10.0;
  int reads = 50;
  std::uint64_t seed = 0;

  void validate() const;  // sweeps >= 1, reads >= 1, 0 < beta_start <= beta_end
  friend bool operator==(const AnnealSchedule&, const AnnealSchedule&) = default;
};

enum class SamplerKind { exact, sa };

SamplerKind parse_sampler_kind(const std::string& name);  // "exact" | "sa"
std::string sampler_kind_name(SamplerKind kind);

// Exhaustive ground-state search, at most 24 qubits (CapacityError beyond;
// use the simulated annealer instead). Ties on bit-equal energy are broken
// by the lexicographically lowest labeling (-1 < +1, qubit 0 first), so the
// result is deterministic.
SampleResult solve_exact(const IsingGraph& graph);

// Single-spin-flip Metropolis annealing: `reads` independent restarts, each
// sweeping qubits in index order under a geometric beta ramp from beta_start
// to beta_end. Every read derives its generator state from (seed, read
// index), so a fixed seed gives bit-identical results. Returns one result
// per read (best state visited), sorted by energy.
std::vector<SampleResult> solve_sa(const IsingGraph& graph,
                                   const AnnealSchedule& schedule);

struct FeasibleSample {
  NodalState a;
  double functional;
};

struct PinnedValue {
  int node;
  double value;
};

// Decodes each result, drops infeasible labelings (and, when pinned values
// are given, states whose pinned nodes moved), and returns the decoded state
// with the lowest functional value; ties keep the earlier result. Empty when
// nothing feasible was sampled.
std::optional<FeasibleSample> best_feasible(
    const std::vector<SampleResult>& results,
    const std::vector<NodeCandidates>& candidates,
    const std::vector<ElementVector>& element_vectors,
    const std::vector<PinnedValue>& pinned = {});

}  // namespace annealfem
