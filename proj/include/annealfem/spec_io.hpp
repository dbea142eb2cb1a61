#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "annealfem/box.hpp"

namespace annealfem {

// Spec-file syntax or validation failure; the message names the offending
// field (or carries the parser's position for malformed JSON).
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File-level coefficient: a constant or a piecewise-linear table.
struct CoefficientSpec {
  bool is_table = false;
  double value = 0.0;
  std::vector<double> xs, ys;

  Coefficient build() const;
  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

// Everything a run needs, as read from a JSON problem file.
struct ProblemSpec {
  enum class Kind { general, truss };
  Kind kind = Kind::general;
  std::string description;

  // general problems
  double x_left = 0.0, x_right = 1.0;
  CoefficientSpec p, q, f;
  int elements = 0;                // uniform mesh, ignored when nodes given
  std::vector<double> mesh_nodes;  // optional explicit node list
  int quad_order = 2;

  // truss problems (unit domain, uniform mesh, per-element values)
  std::vector<double> ea;
  std::vector<double> load;

  double u_left = 0.0, u_right = 1.0;
  BoxConfig box{};

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

ProblemSpec parse_spec(const std::string& json_text);
ProblemSpec load_spec(const std::string& path);
std::string spec_to_json(const ProblemSpec& spec);  // re-parses to an equal spec

// Element vectors, node coordinates and boundary values realized from a spec.
struct BuiltProblem {
  std::vector<ElementVector> element_vectors;
  std::vector<double> node_x;
  double u_left = 0.0;
  double u_right = 0.0;
};

BuiltProblem build_problem(const ProblemSpec& spec);

}  // namespace annealfem
