#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "annealfem/box.hpp"
#include "annealfem/spec_io.hpp"

namespace {

using namespace annealfem;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitCapacity = 3;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Overrides {
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string sampler;
  double r_init = 0.0, r_min = 0.0, gap_factor = 0.0;
  bool has_r_init = false, has_r_min = false, has_gap = false;
};

// Flags beat the environment, the environment beats the spec file.
void apply_overrides(ProblemSpec& spec, const Overrides& ov) {
  if (ov.has_seed) {
    spec.box.seed = ov.seed;
  } else if (const char* env = std::getenv("ANNEALFEM_SEED")) {
    char* end = nullptr;
    unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw SpecError("ANNEALFEM_SEED must be a non-negative integer");
    spec.box.seed = parsed;
  }
  if (!ov.sampler.empty()) spec.box.sampler = parse_sampler_kind(ov.sampler);
  if (ov.has_r_init) spec.box.r_init = ov.r_init;
  if (ov.has_r_min) spec.box.r_min = ov.r_min;
  if (ov.has_gap) spec.box.gap_factor = ov.gap_factor;
  spec.box.validate();
}

int cmd_solve(const ProblemSpec& spec, const std::string& out_dir) {
  BuiltProblem built = build_problem(spec);
  BoxProblem problem{built.element_vectors, built.u_left, built.u_right};

  BoxRunResult result = run_box(problem, spec.box);
  NodalState oracle = classical_fem_solve(built.element_vectors, built.u_left,
                                          built.u_right);

  size_t n_nodes = built.node_x.size();
  std::filesystem::create_directories(out_dir);

  // history.csv: one row per iteration with the post-step box state. The
  // center changes only on translate moves, where it lands on the recorded
  // minimizer, so it can be replayed from the initial guess.
  {
    std::ofstream out(std::filesystem::path(out_dir) / "history.csv",
                      std::ios::binary);
    out << "iter,move,r,energy";
    for (size_t i = 0; i < n_nodes; ++i) out << ",c" << i;
    out << "\n";
    NodalState center = spec.box.init_center;
    if (center.empty()) {
      center.resize(n_nodes);
      for (size_t i = 0; i < n_nodes; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(n_nodes - 1);
        center[i] = built.u_left + t * (built.u_right - built.u_left);
      }
    }
    center.front() = built.u_left;
    center.back() = built.u_right;
    for (const IterationRecord& rec : result.history) {
      if (rec.move == MoveKind::translate) center = *rec.minimizer;
      out << rec.iteration << ","
          << (rec.move == MoveKind::translate ? "translate" : "contract") << ","
          << fmt17(rec.slack_after) << "," << fmt17(rec.functional_after);
      for (double c : center) out << "," << fmt17(c);
      out << "\n";
    }
  }

  // solution.csv: final state against the classical minimizer.
  double bound = 0.0;
  int n_free = static_cast<int>(n_nodes) - 2;
  double lmin = 0.0, lmax = 0.0;
  if (n_free >= 1) {
    TridiagonalMatrix reduced = reduced_stiffness(built.element_vectors);
    std::tie(lmin, lmax) = tridiagonal_eigen_extremes(reduced);
    bound = error_bound(result.slack, n_free, lmax, lmin);
  }
  {
    std::ofstream out(std::filesystem::path(out_dir) / "solution.csv",
                      std::ios::binary);
    out << "x,box,oracle,diff,bound\n";
    for (size_t i = 0; i < n_nodes; ++i)
      out << fmt17(built.node_x[i]) << "," << fmt17(result.center[i]) << ","
          << fmt17(oracle[i]) << "," << fmt17(result.center[i] - oracle[i])
          << "," << fmt17(bound) << "\n";
  }

  double err_inf = 0.0;
  for (size_t i = 0; i < n_nodes; ++i)
    err_inf = std::max(err_inf, std::abs(result.center[i] - oracle[i]));
  double mean_feasible = 0.0;
  for (const IterationRecord& rec : result.history)
    mean_feasible += rec.feasible_fraction;
  if (!result.history.empty())
    mean_feasible /= static_cast<double>(result.history.size());

  std::cout << "converged: " << (result.converged ? "yes" : "no") << " ("
            << result.history.size() << " iterations, final r = "
            << fmt17(result.slack) << ")\n";
  std::cout << "functional at final center: "
            << fmt17(functional_value(built.element_vectors, result.center))
            << "\n";
  std::cout << "functional at classical minimizer: "
            << fmt17(functional_value(built.element_vectors, oracle)) << "\n";
  std::cout << "max |center - classical|: " << fmt17(err_inf) << "\n";
  if (n_free >= 1)
    std::cout << "error bound: " << fmt17(bound) << " (n = " << n_free
              << ", lambda_min = " << fmt17(lmin)
              << ", lambda_max = " << fmt17(lmax) << ")\n";
  else
    std::cout << "error bound: 0 (no free unknowns)\n";
  std::cout << "mean feasible read fraction: " << fmt17(mean_feasible) << "\n";
  std::cout << "wrote " << out_dir << "/history.csv and " << out_dir
            << "/solution.csv\n";

  return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_oracle(const ProblemSpec& spec) {
  BuiltProblem built = build_problem(spec);
  NodalState oracle = classical_fem_solve(built.element_vectors, built.u_left,
                                          built.u_right);
  std::cout << "x u\n";
  for (size_t i = 0; i < built.node_x.size(); ++i)
    std::cout << fmt17(built.node_x[i]) << " " << fmt17(oracle[i]) << "\n";
  std::cout << "functional = "
            << fmt17(functional_value(built.element_vectors, oracle)) << "\n";
  return kExitOk;
}

int cmd_export_graph(const ProblemSpec& spec, const std::string& center_csv,
                     double slack_override, const std::string& out_path) {
  BuiltProblem built = build_problem(spec);
  size_t n_nodes = built.node_x.size();

  BoxState box;
  box.slack = slack_override > 0.0 ? slack_override : spec.box.r_init;
  if (!center_csv.empty()) {
    std::stringstream ss(center_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        box.center.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw SpecError("--center must be a comma-separated list of numbers");
      }
    }
    if (box.center.size() != n_nodes)
      throw SpecError("--center needs exactly " + std::to_string(n_nodes) +
                      " values");
  } else if (!spec.box.init_center.empty()) {
    box.center = spec.box.init_center;
  } else {
    box.center.resize(n_nodes);
    for (size_t i = 0; i < n_nodes; ++i) {
      double t = static_cast<double>(i) / static_cast<double>(n_nodes - 1);
      box.center[i] = built.u_left + t * (built.u_right - built.u_left);
    }
  }
  box.center.front() = built.u_left;
  box.center.back() = built.u_right;

  std::vector<NodeCandidates> candidates = candidates_from_box(box);
  std::vector<ElementCoupling> couplings;
  double max_j = 0.0;
  for (size_t e = 0; e < built.element_vectors.size(); ++e) {
    couplings.push_back(estimate_element_coupling(built.element_vectors[e],
                                                  candidates[e], candidates[e + 1]));
    for (const auto& row : couplings.back().j)
      for (double v : row) max_j = std::max(max_j, std::abs(v));
  }
  if (max_j == 0.0) max_j = 1.0;
  std::vector<DirichletSpec> dirichlet = {{0, 1},
                                          {static_cast<int>(n_nodes) - 1, 1}};
  IsingGraph graph = assemble(candidates, couplings, dirichlet,
                              spec.box.gap_factor * max_j, 1.0);

  if (out_path.empty()) {
    write_edge_list(graph, std::cout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw SpecError("cannot open output file: " + out_path);
    write_edge_list(graph, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D boundary-value solver driven by Ising-model annealing"};
  app.require_subcommand(1);

  std::string spec_path, out_dir = ".", out_file, center_csv, sampler;
  Overrides ov;
  double slack_override = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("spec", spec_path, "problem spec JSON file")->required();
    cmd->add_option("--seed", ov.seed, "sampler seed")->each([&](const std::string&) {
      ov.has_seed = true;
    });
    cmd->add_option("--sampler", ov.sampler, "exact | sa");
    cmd->add_option("--r-init", ov.r_init, "initial box slack")
        ->each([&](const std::string&) { ov.has_r_init = true; });
    cmd->add_option("--r-min", ov.r_min, "terminal box slack")
        ->each([&](const std::string&) { ov.has_r_min = true; });
    cmd->add_option("--gap-factor", ov.gap_factor, "one-hot penalty / max |J|")
        ->each([&](const std::string&) { ov.has_gap = true; });
  };

  CLI::App* solve = app.add_subcommand("solve", "run the box search");
  add_common(solve);
  solve->add_option("--out", out_dir, "output directory for the CSV files");

  CLI::App* oracle = app.add_subcommand("oracle", "print the classical solution");
  add_common(oracle);

  CLI::App* export_graph =
      app.add_subcommand("export-graph", "write the Ising graph as an edge list");
  add_common(export_graph);
  export_graph->add_option("--center", center_csv,
                           "box center, comma-separated node values");
  export_graph->add_option("--r", slack_override, "box slack");
  export_graph->add_option("--out", out_file, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ProblemSpec spec = load_spec(spec_path);
    apply_overrides(spec, ov);
    if (solve->parsed()) return cmd_solve(spec, out_dir);
    if (oracle->parsed()) return cmd_oracle(spec);
    return cmd_export_graph(spec, center_csv, slack_override, out_file);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
