// Acceptance checks for the full pipeline, one printed line per criterion.
// Exit code 0 only if every line reports PASS.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "annealfem/box.hpp"
#include "annealfem/spec_io.hpp"

using namespace annealfem;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  if (!pass) ++g_failures;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

QubitLabeling labeling_from_mask(int n_qubits, unsigned mask) {
  QubitLabeling q(static_cast<size_t>(n_qubits));
  for (int i = 0; i < n_qubits; ++i)
    q[static_cast<size_t>(i)] = (mask >> i) & 1u ? 1 : -1;
  return q;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---- 1: the two-element worked example ------------------------------------

void criterion_worked_example() {
  const double tol = 1e-12;
  Problem1D problem(0.0, 1.0, 1.0, 0.0, 0.0);
  Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, 2);
  NodeCandidates v(0.0, 0.5, 1.0);

  // warm-up outside the timed window
  (void)compute_element_vectors(problem, mesh);
  (void)estimate_element_coupling({1.0, 1.0, -2.0, 0.0, 0.0}, v, v);

  auto t0 = std::chrono::steady_clock::now();
  auto vectors = compute_element_vectors(problem, mesh);
  ElementCoupling c = estimate_element_coupling(vectors[0], v, v);
  auto t1 = std::chrono::steady_clock::now();
  double us = std::chrono::duration<double, std::micro>(t1 - t0).count();

  bool stencil_exact = vectors.size() == 2;
  for (const ElementVector& s : vectors)
    stencil_exact = stencil_exact && s[0] == 1.0 && s[1] == 1.0 && s[2] == -2.0 &&
                    s[3] == 0.0 && s[4] == 0.0;

  const double expect[3][3] = {{0.125, 0.375, 0.375},
                               {0.375, 0.500, 0.375},
                               {0.375, 0.375, 0.125}};
  double max_dev = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      max_dev = std::max(max_dev,
                         std::abs(c.j[static_cast<size_t>(a)][static_cast<size_t>(b)] -
                                  expect[a][b]));

  bool pass = stencil_exact && max_dev <= tol && us < 1000.0;
  report(1, "two-element stencil and coupling block", pass,
         "stencil exact, max coupling deviation " + fmt(max_dev) + " (tol 1e-12), " +
             fmt(us) + " us (limit 1000)");
}

// ---- 2: the qubit-to-value mapping table -----------------------------------

void criterion_mapping_table() {
  struct Row {
    int q0, q1, q2;
    int terms;  // bitmask of candidate values summed
    bool feasible;
  };
  const Row rows[8] = {{+1, +1, +1, 0b111, false}, {+1, +1, -1, 0b011, false},
                       {+1, -1, +1, 0b101, false}, {+1, -1, -1, 0b001, true},
                       {-1, +1, +1, 0b110, false}, {-1, +1, -1, 0b010, true},
                       {-1, -1, +1, 0b100, true},  {-1, -1, -1, 0b000, false}};

  int checked = 0;
  bool pass = true;
  const NodeCandidates triples[2] = {{0.3, 0.7, 1.9}, {0.0, 0.5, 1.0}};
  for (const NodeCandidates& v : triples) {
    for (const Row& row : rows) {
      DecodedState d = decode_state(
          {static_cast<int8_t>(row.q0), static_cast<int8_t>(row.q1),
           static_cast<int8_t>(row.q2)},
          {v});
      double want = 0.0;
      for (int k = 0; k < 3; ++k)
        if (row.terms & (1 << k)) want += v.v[static_cast<size_t>(k)];
      pass = pass && d.a[0] == want && d.feasible == row.feasible;
      ++checked;
    }
  }
  report(2, "qubit-to-value mapping table", pass,
         std::to_string(checked) + "/16 rows exact over two candidate triples");
}

// ---- 3: encoding equivalence and penalty-driven feasibility ----------------

void criterion_encoding_equivalence() {
  const double tol = 1e-9;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  double max_residual = 0.0;
  bool ground_ok = true;

  for (int n_elements : {1, 2, 3}) {
    int n_nodes = n_elements + 1;
    int n_qubits = 3 * n_nodes;

    std::vector<ElementVector> vectors;
    for (int e = 0; e < n_elements; ++e) {
      ElementVector s;
      for (double& x : s) x = uniform(rng, -2.0, 2.0);
      vectors.push_back(s);
    }
    std::vector<NodeCandidates> cand;
    for (int n = 0; n < n_nodes; ++n) {
      double c = uniform(rng, -1.0, 1.0), r = uniform(rng, 0.1, 0.6);
      cand.emplace_back(c - r, c, c + r);
    }
    std::vector<ElementCoupling> couplings;
    double max_j = 0.0;
    for (int e = 0; e < n_elements; ++e) {
      couplings.push_back(estimate_element_coupling(
          vectors[static_cast<size_t>(e)], cand[static_cast<size_t>(e)],
          cand[static_cast<size_t>(e) + 1]));
      for (const auto& row : couplings.back().j)
        for (double x : row) max_j = std::max(max_j, std::abs(x));
    }
    double penalty = 10.0 * max_j;

    // identity over every feasible labeling, at coupling scales 1 and 2
    for (double cs : {1.0, 2.0}) {
      IsingGraph open_graph = assemble(cand, couplings, {}, penalty, cs);
      double baseline = -2.0 * penalty * n_nodes;
      for (unsigned mask = 0; mask < (1u << n_qubits); ++mask) {
        QubitLabeling q = labeling_from_mask(n_qubits, mask);
        DecodedState d = decode_state(q, cand);
        if (!d.feasible) continue;
        double residual = std::abs(ising_energy(open_graph, q) - baseline -
                                   cs * functional_value(vectors, d.a));
        max_residual = std::max(max_residual, residual);
      }
    }

    // with end pins the exhaustive ground state is one-hot and on the pins
    IsingGraph pinned =
        assemble(cand, couplings, {{0, 1}, {n_nodes - 1, 1}}, penalty, 1.0);
    double best = 0.0;
    unsigned best_mask = 0;
    for (unsigned mask = 0; mask < (1u << n_qubits); ++mask) {
      double e = ising_energy(pinned, labeling_from_mask(n_qubits, mask));
      if (mask == 0 || e < best) {
        best = e;
        best_mask = mask;
      }
    }
    DecodedState gd = decode_state(labeling_from_mask(n_qubits, best_mask), cand);
    ground_ok = ground_ok && gd.feasible && gd.a.front() == cand.front().v[1] &&
                gd.a.back() == cand.back().v[1];
  }

  auto t1 = std::chrono::steady_clock::now();
  double sec = std::chrono::duration<double>(t1 - t0).count();
  bool pass = max_residual <= tol && ground_ok && sec < 10.0;
  report(3, "encoding equivalence and pinned ground-state feasibility", pass,
         "max residual " + fmt(max_residual) + " (tol 1e-9), ground states " +
             (ground_ok ? "feasible" : "INFEASIBLE") + ", " + fmt(sec) +
             " s (limit 10)");
}

// ---- 4: exact ground state of the assembled ramp problem -------------------

void criterion_ramp_ground_state() {
  std::vector<NodeCandidates> cand = {{0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}};
  std::vector<ElementVector> vectors = {{1.0, 1.0, -2.0, 0.0, 0.0},
                                        {1.0, 1.0, -2.0, 0.0, 0.0}};
  std::vector<ElementCoupling> couplings = {
      estimate_element_coupling(vectors[0], cand[0], cand[1]),
      estimate_element_coupling(vectors[1], cand[1], cand[2])};
  double max_j = 0.0;
  for (const ElementCoupling& c : couplings)
    for (const auto& row : c.j)
      for (double x : row) max_j = std::max(max_j, std::abs(x));

  // left end locked to candidate 0, right end to candidate 1
  IsingGraph graph =
      assemble(cand, couplings, {{0, 0}, {2, 2}}, 10.0 * max_j, 1.0);
  SampleResult ground = solve_exact(graph);
  DecodedState d = decode_state(ground.labeling, cand);

  bool pass = d.feasible && d.a == NodalState{0.0, 0.5, 1.0};
  report(4, "exact ground state decodes to the ramp", pass,
         d.feasible ? ("decoded (" + fmt(d.a[0]) + ", " + fmt(d.a[1]) + ", " +
                       fmt(d.a[2]) + "), expected (0, 0.5, 1) exactly")
                    : "ground state infeasible");
}

// ---- 5: box convergence against the classical oracle -----------------------

void criterion_box_convergence() {
  auto t0 = std::chrono::steady_clock::now();
  BoxProblem problem;
  problem.element_vectors =
      truss_functional_vectors({1.0, 1.0, 0.5, 0.5}, {0.0, 0.0, 0.0, 0.0});
  problem.u_left = 0.0;
  problem.u_right = 1.0;

  BoxConfig config;
  config.r_init = 0.2;
  config.r_min = 1e-4;
  config.init_center = {0.0, 0.25, 0.5, 0.75, 1.0};

  BoxRunResult result = run_box(problem, config);
  NodalState oracle = classical_fem_solve(problem.element_vectors, 0.0, 1.0);

  double err_inf = 0.0;
  for (size_t i = 0; i < oracle.size(); ++i)
    err_inf = std::max(err_inf, std::abs(result.center[i] - oracle[i]));

  bool monotone = true;
  for (size_t i = 0; i < result.history.size(); ++i) {
    monotone = monotone && result.history[i].functional_after <=
                               result.history[i].functional_before + 1e-12;
    if (i + 1 < result.history.size())
      monotone = monotone && result.history[i + 1].functional_before ==
                                 result.history[i].functional_after;
  }
  auto t1 = std::chrono::steady_clock::now();
  double sec = std::chrono::duration<double>(t1 - t0).count();

  bool pass = result.converged && err_inf <= 2.0 * config.r_min && monotone &&
              sec < 5.0;
  report(5, "box search converges to the classical oracle", pass,
         "max node error " + fmt(err_inf) + " (tol 2e-4), energy history " +
             (monotone ? "monotone" : "NOT monotone") + ", " +
             std::to_string(result.history.size()) + " iterations, " + fmt(sec) +
             " s (limit 5)");
}

// ---- 6: distance bound on random convex problems ---------------------------

void criterion_distance_bound() {
  std::mt19937_64 rng(222);
  int held = 0;
  double min_margin = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    int elements = 2 + static_cast<int>(rng() % 4);  // 2..5
    Problem1D prob(0.0, 1.0, uniform(rng, 0.5, 2.5), uniform(rng, 0.05, 2.0),
                   uniform(rng, 0.1, 2.0));
    BoxProblem problem;
    problem.element_vectors =
        compute_element_vectors(prob, Mesh1D::uniform(0.0, 1.0, elements));
    problem.u_left = 0.0;
    problem.u_right = 1.0;

    BoxConfig config;
    config.r_init = 0.3;
    config.r_min = 1e-4;
    BoxRunResult result = run_box(problem, config);

    NodalState direct = classical_fem_solve(problem.element_vectors, 0.0, 1.0);
    double dist = 0.0;
    for (size_t i = 0; i < direct.size(); ++i)
      dist += (direct[i] - result.center[i]) * (direct[i] - result.center[i]);
    dist = std::sqrt(dist);

    auto [lmin, lmax] =
        tridiagonal_eigen_extremes(reduced_stiffness(problem.element_vectors));
    double bound = error_bound(result.slack, elements - 1, lmax, lmin);
    if (result.converged && dist <= bound) ++held;
    min_margin = std::min(min_margin, bound - dist);
  }
  bool pass = held == 20;
  report(6, "distance bound holds on random convex problems", pass,
         std::to_string(held) + "/20 runs within the bound, smallest margin " +
             fmt(min_margin));
}

// ---- 7: annealer fidelity against the exact solver -------------------------

void criterion_annealer_fidelity() {
  std::mt19937_64 rng(333);
  int hits = 0;
  bool never_below = true;
  bool deterministic = true;

  for (int trial = 0; trial < 100; ++trial) {
    int n = 4 + trial % 9;  // 4..12 qubits
    IsingGraph g(n);
    for (int i = 0; i < n; ++i) g.add_field(i, uniform(rng, -1.0, 1.0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (uniform(rng, 0.0, 1.0) < 0.5) g.add_coupling(i, j, uniform(rng, -1.0, 1.0));

    SampleResult exact = solve_exact(g);
    AnnealSchedule schedule;  // stock settings, per-trial seed
    schedule.seed = static_cast<uint64_t>(trial);
    auto results = solve_sa(g, schedule);

    double best = results.front().energy;
    if (std::abs(best - exact.energy) <= 1e-9) ++hits;
    if (best < exact.energy - 1e-12) never_below = false;

    if (trial % 40 == 0) {  // spot-check bit-identical reruns
      auto again = solve_sa(g, schedule);
      deterministic = deterministic && again.size() == results.size();
      for (size_t k = 0; deterministic && k < results.size(); ++k)
        deterministic = again[k].labeling == results[k].labeling &&
                        again[k].energy == results[k].energy;
    }
  }
  bool pass = hits >= 95 && never_below && deterministic;
  report(7, "annealer reaches the exact optimum", pass,
         std::to_string(hits) + "/100 ground states (need 95), " +
             (never_below ? "never below the optimum" : "WENT BELOW THE OPTIMUM") +
             ", reruns " + (deterministic ? "bit-identical" : "DIVERGED"));
}

// ---- 8: per-step minimizer equals brute force -------------------------------

void criterion_step_minimality() {
  std::mt19937_64 rng(444);
  int matched = 0, total = 0;
  for (int n_elements : {2, 3}) {
    int n_nodes = n_elements + 1;
    for (int trial = 0; trial < 25; ++trial) {
      BoxProblem problem;
      for (int e = 0; e < n_elements; ++e)
        problem.element_vectors.push_back({uniform(rng, 0.3, 2.0),
                                           uniform(rng, 0.3, 2.0),
                                           uniform(rng, -2.0, -0.3),
                                           uniform(rng, -1.0, 1.0),
                                           uniform(rng, -1.0, 1.0)});
      BoxState box;
      for (int n = 0; n < n_nodes; ++n)
        box.center.push_back(uniform(rng, -1.0, 1.0));
      box.slack = uniform(rng, 0.05, 0.5);
      problem.u_left = box.center.front();
      problem.u_right = box.center.back();

      BoxConfig config;  // exact sampler
      auto [next, record] = box_step(box, problem, config, 0);

      // brute force over the interior candidate grid, ends held at center
      std::vector<NodeCandidates> cand = candidates_from_box(box);
      int interior = n_nodes - 2;
      int combos = 1;
      for (int k = 0; k < interior; ++k) combos *= 3;
      NodalState best_a;
      double best_val = 0.0;
      for (int idx = 0; idx < combos; ++idx) {
        NodalState a = box.center;
        int rest = idx;
        for (int k = 0; k < interior; ++k) {
          a[static_cast<size_t>(k) + 1] =
              cand[static_cast<size_t>(k) + 1].v[static_cast<size_t>(rest % 3)];
          rest /= 3;
        }
        double val = functional_value(problem.element_vectors, a);
        if (best_a.empty() || val < best_val) {
          best_val = val;
          best_a = a;
        }
      }

      ++total;
      if (record.minimizer && *record.minimizer == best_a) ++matched;
    }
  }
  bool pass = matched == total;
  report(8, "per-step minimizer matches the exhaustive grid", pass,
         std::to_string(matched) + "/" + std::to_string(total) +
             " boxes identical");
}

// ---- 9: CLI determinism ------------------------------------------------------

int run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + ANNEALFEM_CLI_PATH + "\" " + args +
                    " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_cli_determinism() {
  fs::remove_all("acceptance_tmp");
  fs::create_directories("acceptance_tmp");
  std::string spec = std::string("\"") + ANNEALFEM_FIXTURE_DIR + "/truss_a.json\"";

  int rc1 = run_cli("solve " + spec + " --seed 7 --out acceptance_tmp/run1");
  int rc2 = run_cli("solve " + spec + " --seed 7 --out acceptance_tmp/run2");

  std::string h1 = slurp("acceptance_tmp/run1/history.csv");
  std::string h2 = slurp("acceptance_tmp/run2/history.csv");
  std::string s1 = slurp("acceptance_tmp/run1/solution.csv");
  std::string s2 = slurp("acceptance_tmp/run2/solution.csv");

  bool pass = rc1 == 0 && rc2 == 0 && !h1.empty() && !s1.empty() && h1 == h2 &&
              s1 == s2;
  report(9, "repeated seeded CLI runs are byte-identical", pass,
         "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2) +
             ", history " + std::to_string(h1.size()) + " bytes, solution " +
             std::to_string(s1.size()) + " bytes" +
             (pass ? ", identical" : ", MISMATCH"));
}

}  // namespace

int main() {
  criterion_worked_example();
  criterion_mapping_table();
  criterion_encoding_equivalence();
  criterion_ramp_ground_state();
  criterion_box_convergence();
  criterion_distance_bound();
  criterion_annealer_fidelity();
  criterion_step_minimality();
  criterion_cli_determinism();

  if (g_failures == 0) {
    std::printf("all 9 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
