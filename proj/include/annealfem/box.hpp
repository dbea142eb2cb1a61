#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "annealfem/sampler.hpp"

namespace annealfem {

// Search box: per-node candidate values are center +/- slack, with the two
// boundary nodes pinned to the prescribed values at all times.
struct BoxState {
  NodalState center;
  double slack;
};

enum class MoveKind { translate, contract };

struct IterationRecord {
  int iteration;
  MoveKind move;
  double slack_before;
  double slack_after;
  double functional_before;  // at center
  double functional_after;
  std::optional<NodalState> minimizer;  // decoded a_min, absent if no feasible read
  double feasible_fraction;             // feasible reads / total reads
};

struct BoxConfig {
  double r_init = 0.2;
  double r_min = 1e-3;
  double gap_factor = 10.0;  // one-hot penalty = gap_factor * max |J| of the elements
  SamplerKind sampler = SamplerKind::exact;
  AnnealSchedule schedule{};
  int max_iterations = 200;
  std::uint64_t seed = 0;
  std::vector<double> init_center;  // optional; empty = linear interpolation
  double rescale_ceiling = 1.0;     // largest |J| after rescaling; 0 disables

  void validate() const;
  friend bool operator==(const BoxConfig&, const BoxConfig&) = default;
};

// Element vectors plus the prescribed end values they are minimized under.
struct BoxProblem {
  std::vector<ElementVector> element_vectors;
  double u_left = 0.0;
  double u_right = 0.0;
};

struct BoxRunResult {
  NodalState center;
  double slack;
  bool converged;  // slack <= r_min reached within max_iterations
  std::vector<IterationRecord> history;
};

// Candidate triples (c - r, c, c + r) for every node of the box.
std::vector<NodeCandidates> candidates_from_box(const BoxState& box);

// One iteration: build couplings for the current candidates, anneal, decode.
// If the best feasible state beats the center by more than the tie tolerance
// the box translates onto it; otherwise (including when nothing feasible came
// back) the slack halves. The iteration index seeds the annealer read stream.
std::pair<BoxState, IterationRecord> box_step(const BoxState& box,
                                              const BoxProblem& problem,
                                              const BoxConfig& config,
                                              int iteration);

// Full search: start from the user guess or linear interpolation (boundary
// nodes forced to the prescribed values) and iterate box_step until the
// slack drops to r_min or the iteration budget runs out.
BoxRunResult run_box(const BoxProblem& problem, const BoxConfig& config);

// Distance bound from the box minimizer to the direct minimizer at slack r
// with n free unknowns: 2 * (1 + (n-1) * lmax/lmin) * r / sqrt(n).
// Requires n >= 1 and lmin > 0.
double error_bound(double r, int n, double lambda_max, double lambda_min);

// Two-unknown geometric form sqrt(2) * r * (1 + lmax/lmin); agrees exactly
// with error_bound at n = 2 and is kept for reference.
double error_bound_two_node(double r, double lambda_max, double lambda_min);

}  // namespace annealfem
