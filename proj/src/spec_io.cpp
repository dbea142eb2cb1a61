#include "annealfem/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace annealfem {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SpecError("field " + path + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> as_double_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

CoefficientSpec parse_coefficient(const json& j, const std::string& path) {
  CoefficientSpec c;
  if (j.is_number()) {
    c.value = j.get<double>();
    return c;
  }
  if (!j.is_object()) fail(path, "expected a number or a {x, y} table");
  c.is_table = true;
  c.xs = as_double_list(require(j, "x", path), join(path, "x"));
  c.ys = as_double_list(require(j, "y", path), join(path, "y"));
  if (c.xs.empty()) fail(join(path, "x"), "table must not be empty");
  if (c.xs.size() != c.ys.size()) fail(join(path, "y"), "length must match x");
  for (size_t i = 1; i < c.xs.size(); ++i)
    if (!(c.xs[i] > c.xs[i - 1]))
      fail(join(path, "x"), "values must be strictly increasing");
  return c;
}

json coefficient_to_json(const CoefficientSpec& c) {
  if (!c.is_table) return json(c.value);
  return json{{"x", c.xs}, {"y", c.ys}};
}

void parse_box(const json& j, BoxConfig& box) {
  if (!j.is_object()) fail("box", "expected an object");
  if (j.contains("r_init")) box.r_init = as_double(j["r_init"], "box.r_init");
  if (j.contains("r_min")) box.r_min = as_double(j["r_min"], "box.r_min");
  if (j.contains("gap_factor"))
    box.gap_factor = as_double(j["gap_factor"], "box.gap_factor");
  if (j.contains("max_iterations"))
    box.max_iterations = as_int(j["max_iterations"], "box.max_iterations");
  if (j.contains("rescale_ceiling"))
    box.rescale_ceiling = as_double(j["rescale_ceiling"], "box.rescale_ceiling");
  if (j.contains("sampler")) {
    const json& s = j["sampler"];
    if (!s.is_string()) fail("box.sampler", "expected \"exact\" or \"sa\"");
    try {
      box.sampler = parse_sampler_kind(s.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("box.sampler", e.what());
    }
  }
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_integer()) fail("box.seed", "expected a non-negative integer");
    if (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)
      fail("box.seed", "expected a non-negative integer");
    box.seed = s.get<std::uint64_t>();
  }
  if (j.contains("init_center"))
    box.init_center = as_double_list(j["init_center"], "box.init_center");
  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    if (!s.is_object()) fail("box.schedule", "expected an object");
    if (s.contains("sweeps"))
      box.schedule.sweeps = as_int(s["sweeps"], "box.schedule.sweeps");
    if (s.contains("beta_start"))
      box.schedule.beta_start = as_double(s["beta_start"], "box.schedule.beta_start");
    if (s.contains("beta_end"))
      box.schedule.beta_end = as_double(s["beta_end"], "box.schedule.beta_end");
    if (s.contains("reads"))
      box.schedule.reads = as_int(s["reads"], "box.schedule.reads");
  }
  try {
    box.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string("field box: ") + e.what());
  }
}

}  // namespace

Coefficient CoefficientSpec::build() const {
  if (!is_table) return Coefficient::constant(value);
  return Coefficient::table(xs, ys);
}

ProblemSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("spec must be a JSON object");

  ProblemSpec spec;
  const json& kind = require(j, "kind", "");
  if (!kind.is_string()) fail("kind", "expected \"general\" or \"truss\"");
  std::string kind_name = kind.get<std::string>();
  if (kind_name == "general")
    spec.kind = ProblemSpec::Kind::general;
  else if (kind_name == "truss")
    spec.kind = ProblemSpec::Kind::truss;
  else
    fail("kind", "expected \"general\" or \"truss\", got \"" + kind_name + "\"");

  if (j.contains("description")) {
    if (!j["description"].is_string()) fail("description", "expected a string");
    spec.description = j["description"].get<std::string>();
  }

  if (spec.kind == ProblemSpec::Kind::general) {
    const json& domain = require(j, "domain", "");
    spec.x_left = as_double(require(domain, "x_l", "domain"), "domain.x_l");
    spec.x_right = as_double(require(domain, "x_r", "domain"), "domain.x_r");
    if (!(spec.x_left < spec.x_right))
      fail("domain.x_l", "must be less than domain.x_r");
    spec.p = parse_coefficient(require(j, "p", ""), "p");
    spec.q = parse_coefficient(require(j, "q", ""), "q");
    spec.f = parse_coefficient(require(j, "f", ""), "f");

    const json& mesh = require(j, "mesh", "");
    if (!mesh.is_object()) fail("mesh", "expected an object");
    if (mesh.contains("nodes")) {
      spec.mesh_nodes = as_double_list(mesh["nodes"], "mesh.nodes");
      if (spec.mesh_nodes.size() < 2) fail("mesh.nodes", "needs at least two nodes");
      for (size_t i = 1; i < spec.mesh_nodes.size(); ++i)
        if (!(spec.mesh_nodes[i] > spec.mesh_nodes[i - 1]))
          fail("mesh.nodes", "must be strictly increasing");
      if (spec.mesh_nodes.front() != spec.x_left || spec.mesh_nodes.back() != spec.x_right)
        fail("mesh.nodes", "must span exactly [domain.x_l, domain.x_r]");
      spec.elements = static_cast<int>(spec.mesh_nodes.size()) - 1;
    } else if (mesh.contains("elements")) {
      spec.elements = as_int(mesh["elements"], "mesh.elements");
      if (spec.elements < 1) fail("mesh.elements", "must be at least 1");
    } else {
      fail("mesh", "needs either elements or nodes");
    }
    if (j.contains("quad_order")) {
      spec.quad_order = as_int(j["quad_order"], "quad_order");
      if (spec.quad_order < 2 || spec.quad_order > 6)
        fail("quad_order", "must be between 2 and 6");
    }
  } else {
    spec.ea = as_double_list(require(j, "EA", ""), "EA");
    if (spec.ea.empty()) fail("EA", "needs at least one element");
    for (size_t i = 0; i < spec.ea.size(); ++i)
      if (!(spec.ea[i] > 0.0))
        fail("EA[" + std::to_string(i) + "]", "must be positive");
    spec.load = as_double_list(require(j, "f", ""), "f");
    if (spec.load.size() != spec.ea.size()) fail("f", "length must match EA");
    spec.elements = static_cast<int>(spec.ea.size());
  }

  const json& boundary = require(j, "boundary", "");
  spec.u_left = as_double(require(boundary, "u_l", "boundary"), "boundary.u_l");
  spec.u_right = as_double(require(boundary, "u_r", "boundary"), "boundary.u_r");

  if (j.contains("box")) parse_box(j["box"], spec.box);
  if (!spec.box.init_center.empty() &&
      spec.box.init_center.size() != static_cast<size_t>(spec.elements) + 1)
    fail("box.init_center", "length must be element count + 1");
  return spec;
}

ProblemSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string spec_to_json(const ProblemSpec& spec) {
  json j;
  j["kind"] = spec.kind == ProblemSpec::Kind::general ? "general" : "truss";
  if (!spec.description.empty()) j["description"] = spec.description;
  if (spec.kind == ProblemSpec::Kind::general) {
    j["domain"] = {{"x_l", spec.x_left}, {"x_r", spec.x_right}};
    j["p"] = coefficient_to_json(spec.p);
    j["q"] = coefficient_to_json(spec.q);
    j["f"] = coefficient_to_json(spec.f);
    if (!spec.mesh_nodes.empty())
      j["mesh"] = {{"nodes", spec.mesh_nodes}};
    else
      j["mesh"] = {{"elements", spec.elements}};
    j["quad_order"] = spec.quad_order;
  } else {
    j["EA"] = spec.ea;
    j["f"] = spec.load;
  }
  j["boundary"] = {{"u_l", spec.u_left}, {"u_r", spec.u_right}};

  json box;
  box["r_init"] = spec.box.r_init;
  box["r_min"] = spec.box.r_min;
  box["gap_factor"] = spec.box.gap_factor;
  box["max_iterations"] = spec.box.max_iterations;
  box["rescale_ceiling"] = spec.box.rescale_ceiling;
  box["sampler"] = sampler_kind_name(spec.box.sampler);
  box["seed"] = spec.box.seed;
  if (!spec.box.init_center.empty()) box["init_center"] = spec.box.init_center;
  box["schedule"] = {{"sweeps", spec.box.schedule.sweeps},
                     {"beta_start", spec.box.schedule.beta_start},
                     {"beta_end", spec.box.schedule.beta_end},
                     {"reads", spec.box.schedule.reads}};
  j["box"] = std::move(box);
  return j.dump(2) + "\n";
}

BuiltProblem build_problem(const ProblemSpec& spec) {
  BuiltProblem built;
  built.u_left = spec.u_left;
  built.u_right = spec.u_right;
  if (spec.kind == ProblemSpec::Kind::truss) {
    built.element_vectors = truss_functional_vectors(spec.ea, spec.load);
    size_t n = spec.ea.size();
    built.node_x.resize(n + 1);
    for (size_t i = 0; i <= n; ++i)
      built.node_x[i] = static_cast<double>(i) / static_cast<double>(n);
    return built;
  }
  Mesh1D mesh = spec.mesh_nodes.empty()
                    ? Mesh1D::uniform(spec.x_left, spec.x_right, spec.elements)
                    : Mesh1D(spec.mesh_nodes);
  Problem1D problem(spec.x_left, spec.x_right, spec.p.build(), spec.q.build(),
                    spec.f.build(), spec.u_left, spec.u_right);
  built.element_vectors = compute_element_vectors(problem, mesh, spec.quad_order);
  built.node_x = mesh.nodes();
  return built;
}

}  // namespace annealfem
