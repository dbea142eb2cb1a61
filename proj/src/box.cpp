#include "annealfem/box.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace annealfem {
namespace {

// Center slot: the pinned boundary value sits at the box center, so Dirichlet
// nodes stay put under both translation and contraction.
constexpr int kCenterSlot = 1;

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Translate only on a clear improvement; exact ties contract. The floor keeps
// the relative comparison meaningful when the functional sits near zero.
bool beats_center(double candidate, double center) {
  return center - candidate > 1e-12 * std::max(1.0, std::abs(center));
}

}  // namespace

void BoxConfig::validate() const {
  if (!(r_init > 0.0)) throw std::invalid_argument("r_init must be positive");
  if (!(r_min > 0.0)) throw std::invalid_argument("r_min must be positive");
  if (!(r_min < r_init)) throw std::invalid_argument("r_min must be below r_init");
  if (!(gap_factor > 0.0)) throw std::invalid_argument("gap_factor must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (rescale_ceiling < 0.0)
    throw std::invalid_argument("rescale_ceiling must be non-negative (0 disables)");
  schedule.validate();
}

std::vector<NodeCandidates> candidates_from_box(const BoxState& box) {
  if (!(box.slack > 0.0)) throw std::invalid_argument("box slack must be positive");
  std::vector<NodeCandidates> out;
  out.reserve(box.center.size());
  for (double c : box.center)
    out.emplace_back(c - box.slack, c, c + box.slack);
  return out;
}

std::pair<BoxState, IterationRecord> box_step(const BoxState& box,
                                              const BoxProblem& problem,
                                              const BoxConfig& config,
                                              int iteration) {
  size_t n_nodes = box.center.size();
  if (n_nodes != problem.element_vectors.size() + 1)
    throw std::invalid_argument("box center length does not match the mesh");

  std::vector<NodeCandidates> candidates = candidates_from_box(box);
  std::vector<ElementCoupling> couplings;
  couplings.reserve(problem.element_vectors.size());
  double max_j = 0.0;
  for (size_t e = 0; e < problem.element_vectors.size(); ++e) {
    couplings.push_back(estimate_element_coupling(problem.element_vectors[e],
                                                  candidates[e], candidates[e + 1]));
    for (const auto& row : couplings.back().j)
      for (double v : row) max_j = std::max(max_j, std::abs(v));
  }
  if (max_j == 0.0) max_j = 1.0;  // degenerate box; keep the one-hot penalty alive

  int last = static_cast<int>(n_nodes) - 1;
  std::vector<DirichletSpec> dirichlet = {{0, kCenterSlot}, {last, kCenterSlot}};
  IsingGraph graph = assemble(candidates, couplings, dirichlet,
                              config.gap_factor * max_j, 1.0);
  if (config.rescale_ceiling > 0.0)
    graph = apply_energy_rescale(graph, config.rescale_ceiling);

  std::vector<SampleResult> results;
  if (config.sampler == SamplerKind::exact) {
    results.push_back(solve_exact(graph));
  } else {
    AnnealSchedule schedule = config.schedule;
    schedule.seed = mix_seed(config.seed, static_cast<uint64_t>(iteration));
    results = solve_sa(graph, schedule);
  }

  double feasible = 0.0;
  for (const SampleResult& r : results)
    if (decode_state(r.labeling, candidates).feasible) feasible += 1.0;

  std::vector<PinnedValue> pinned = {{0, box.center.front()},
                                     {last, box.center.back()}};
  std::optional<FeasibleSample> sample =
      best_feasible(results, candidates, problem.element_vectors, pinned);

  IterationRecord record;
  record.iteration = iteration;
  record.slack_before = box.slack;
  record.functional_before = functional_value(problem.element_vectors, box.center);
  record.feasible_fraction = feasible / static_cast<double>(results.size());
  if (sample) record.minimizer = sample->a;

  BoxState next = box;
  if (sample && beats_center(sample->functional, record.functional_before)) {
    next.center = sample->a;
    record.move = MoveKind::translate;
  } else {
    next.slack = box.slack / 2.0;
    record.move = MoveKind::contract;
  }
  record.slack_after = next.slack;
  record.functional_after = functional_value(problem.element_vectors, next.center);
  return {next, record};
}

BoxRunResult run_box(const BoxProblem& problem, const BoxConfig& config) {
  config.validate();
  size_t n_nodes = problem.element_vectors.size() + 1;

  BoxState box;
  box.slack = config.r_init;
  if (config.init_center.empty()) {
    box.center.resize(n_nodes);
    for (size_t i = 0; i < n_nodes; ++i) {
      double t = static_cast<double>(i) / static_cast<double>(n_nodes - 1);
      box.center[i] = problem.u_left + t * (problem.u_right - problem.u_left);
    }
  } else {
    if (config.init_center.size() != n_nodes)
      throw std::invalid_argument("init_center length does not match the mesh");
    box.center = config.init_center;
  }
  box.center.front() = problem.u_left;
  box.center.back() = problem.u_right;

  BoxRunResult result;
  int iteration = 0;
  while (box.slack > config.r_min && iteration < config.max_iterations) {
    auto [next, record] = box_step(box, problem, config, iteration);
    box = next;
    result.history.push_back(std::move(record));
    ++iteration;
  }
  result.center = box.center;
  result.slack = box.slack;
  result.converged = box.slack <= config.r_min;
  return result;
}

double error_bound(double r, int n, double lambda_max, double lambda_min) {
  if (n < 1) throw std::invalid_argument("error bound needs at least one free unknown");
  if (!(lambda_min > 0.0))
    throw std::invalid_argument("error bound needs a positive smallest eigenvalue");
  if (r < 0.0) throw std::invalid_argument("error bound needs a non-negative slack");
  double kappa = lambda_max / lambda_min;
  return 2.0 * (1.0 + (n - 1) * kappa) * r / std::sqrt(static_cast<double>(n));
}

double error_bound_two_node(double r, double lambda_max, double lambda_min) {
  if (!(lambda_min > 0.0))
    throw std::invalid_argument("error bound needs a positive smallest eigenvalue");
  if (r < 0.0) throw std::invalid_argument("error bound needs a non-negative slack");
  return std::sqrt(2.0) * r * (1.0 + lambda_max / lambda_min);
}

}  // namespace annealfem
