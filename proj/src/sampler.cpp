#include "annealfem/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace annealfem {
namespace {

constexpr int kExactQubitLimit = 24;

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// std::uniform_real_distribution is implementation-defined; this mapping is
// not, so seeded runs are bit-identical everywhere.
double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct Adjacency {
  std::vector<std::vector<std::pair<int, double>>> neighbors;

  explicit Adjacency(const IsingGraph& graph)
      : neighbors(static_cast<size_t>(graph.num_qubits())) {
    for (const IsingGraph::Coupling& c : graph.couplings()) {
      neighbors[static_cast<size_t>(c.i)].push_back({c.j, c.value});
      neighbors[static_cast<size_t>(c.j)].push_back({c.i, c.value});
    }
  }

  // Energy change of flipping qubit i out of its current value.
  double flip_delta(const IsingGraph& graph, const QubitLabeling& q, int i) const {
    double local = graph.field(i);
    for (const auto& [j, val] : neighbors[static_cast<size_t>(i)])
      local += val * q[static_cast<size_t>(j)];
    return -2.0 * q[static_cast<size_t>(i)] * local;
  }
};

bool lex_less(const QubitLabeling& a, const QubitLabeling& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

}  // namespace

void AnnealSchedule::validate() const {
  if (sweeps < 1) throw std::invalid_argument("schedule needs at least one sweep");
  if (reads < 1) throw std::invalid_argument("schedule needs at least one read");
  if (!(beta_start > 0.0) || !(beta_start <= beta_end))
    throw std::invalid_argument("schedule needs 0 < beta_start <= beta_end");
}

SamplerKind parse_sampler_kind(const std::string& name) {
  if (name == "exact") return SamplerKind::exact;
  if (name == "sa") return SamplerKind::sa;
  throw std::invalid_argument("unknown sampler \"" + name + "\" (use exact or sa)");
}

std::string sampler_kind_name(SamplerKind kind) {
  return kind == SamplerKind::exact ? "exact" : "sa";
}

SampleResult solve_exact(const IsingGraph& graph) {
  int n = graph.num_qubits();
  if (n > kExactQubitLimit)
    throw CapacityError("exhaustive solve supports at most " +
                        std::to_string(kExactQubitLimit) + " qubits (got " +
                        std::to_string(n) +
                        "); use the simulated annealing sampler");
  if (n == 0) return {QubitLabeling{}, 0.0, 1};

  Adjacency adj(graph);
  QubitLabeling state(static_cast<size_t>(n), -1);
  double energy = ising_energy(graph, state);   // all-down starting point
  double comp = 0.0;                            // Kahan carry for the running sum

  QubitLabeling best = state;
  double best_energy = energy;

  // Reflected Gray code walk touches every labeling with one flip per step;
  // the running energy only needs the local field of the flipped qubit.
  uint64_t total = 1ULL << n;
  for (uint64_t k = 1; k < total; ++k) {
    int flip = std::countr_zero(k);
    double delta = adj.flip_delta(graph, state, flip);
    state[static_cast<size_t>(flip)] =
        static_cast<int8_t>(-state[static_cast<size_t>(flip)]);
    double y = delta - comp;
    double t = energy + y;
    comp = (t - energy) - y;
    energy = t;
    if (energy < best_energy ||
        (energy == best_energy && lex_less(state, best))) {
      best_energy = energy;
      best = state;
    }
  }
  return {best, ising_energy(graph, best), 1};
}

std::vector<SampleResult> solve_sa(const IsingGraph& graph,
                                   const AnnealSchedule& schedule) {
  schedule.validate();
  int n = graph.num_qubits();
  Adjacency adj(graph);

  std::vector<SampleResult> results;
  results.reserve(static_cast<size_t>(schedule.reads));
  double ratio = schedule.beta_end / schedule.beta_start;

  for (int read = 0; read < schedule.reads; ++read) {
    std::mt19937_64 eng(splitmix64(
        schedule.seed + 0x9E3779B97F4A7C15ULL * (static_cast<uint64_t>(read) + 1)));

    QubitLabeling state(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      state[static_cast<size_t>(i)] = (eng() & 1) ? int8_t{1} : int8_t{-1};
    double energy = ising_energy(graph, state);
    QubitLabeling best = state;
    double best_energy = energy;

    for (int sweep = 0; sweep < schedule.sweeps; ++sweep) {
      double beta =
          schedule.sweeps == 1
              ? schedule.beta_start
              : schedule.beta_start *
                    std::pow(ratio, static_cast<double>(sweep) /
                                        static_cast<double>(schedule.sweeps - 1));
      for (int i = 0; i < n; ++i) {
        double delta = adj.flip_delta(graph, state, i);
        if (delta <= 0.0 || uniform01(eng) < std::exp(-beta * delta)) {
          state[static_cast<size_t>(i)] =
              static_cast<int8_t>(-state[static_cast<size_t>(i)]);
          energy += delta;
          if (energy < best_energy) {
            best_energy = energy;
            best = state;
          }
        }
      }
    }
    results.push_back({best, ising_energy(graph, best), 1});
  }

  std::stable_sort(results.begin(), results.end(),
                   [](const SampleResult& a, const SampleResult& b) {
                     return a.energy < b.energy;
                   });
  return results;
}

std::optional<FeasibleSample> best_feasible(
    const std::vector<SampleResult>& results,
    const std::vector<NodeCandidates>& candidates,
    const std::vector<ElementVector>& element_vectors,
    const std::vector<PinnedValue>& pinned) {
  std::optional<FeasibleSample> best;
  for (const SampleResult& r : results) {
    DecodedState decoded = decode_state(r.labeling, candidates);
    if (!decoded.feasible) continue;
    bool ok = true;
    for (const PinnedValue& pin : pinned)
      if (decoded.a[static_cast<size_t>(pin.node)] != pin.value) {
        ok = false;
        break;
      }
    if (!ok) continue;
    double value = functional_value(element_vectors, decoded.a);
    if (!best || value < best->functional)
      best = FeasibleSample{std::move(decoded.a), value};
  }
  return best;
}

}  // namespace annealfem
