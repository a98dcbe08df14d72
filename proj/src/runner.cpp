#include "monotone/runner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "monotone/blowup.hpp"
#include "monotone/catalog.hpp"
#include "monotone/elliptic.hpp"
#include "monotone/error.hpp"
#include "monotone/field_io.hpp"
#include "monotone/format.hpp"
#include "monotone/parabolic.hpp"
#include "monotone/parallel.hpp"
#include "monotone/selftest.hpp"
#include "monotone/solvers.hpp"

#ifndef MONOTONE_VERSION
#define MONOTONE_VERSION "0.0.0"
#endif

namespace monotone {

const char* version_string() { return MONOTONE_VERSION; }

namespace {

const std::vector<std::string> kTasks = {"solve-elliptic", "solve-parabolic", "phi-scan",  "psi-scan",    "verify",
                                         "beta-scan",      "free-boundary",   "blowup",    "kernel-check"};

// ---------------------------------------------------------------------------
// settings read before execution

Model read_model(const Config& cfg) {
  const std::string kind = cfg.get_string("model.kind");
  if (kind == "zero") return Model::zero(cfg.get_int("model.m", 1));
  if (kind == "coupled_linear") return Model::coupled_linear(cfg.get_double("model.c", 0.0));
  if (kind == "helmholtz") return Model::helmholtz(cfg.get_double("model.c", 0.0), cfg.get_int("model.m", 1));
  if (kind == "ginzburg_landau") {
    return Model::ginzburg_landau(cfg.get_double("model.epsilon", 1.0), cfg.get_int("model.m", 1));
  }
  if (kind == "coupled_power") {
    return Model::coupled_power(cfg.get_double("model.p"), cfg.get_double("model.q"), cfg.get_double("model.c", 0.0));
  }
  if (kind == "single_power") {
    return Model::single_power(cfg.get_double("model.p"), cfg.get_double("model.delta_floor", 1e-8));
  }
  if (kind == "log_potential") {
    return Model::log_potential(cfg.get_double("model.c", 0.0), cfg.get_double("model.delta_floor", 1e-8));
  }
  if (kind == "custom") {
    const int m = cfg.get_int("model.m", 1);
    const std::string F = cfg.get_string("model.F");
    const std::vector<std::string> f = cfg.get_strings("model.f", {});
    const std::vector<double> lo = cfg.get_doubles("model.domain_lo", {});
    const std::vector<double> hi = cfg.get_doubles("model.domain_hi", {});
    std::vector<Interval> domain;
    if (!lo.empty() || !hi.empty()) {
      if (lo.size() != static_cast<std::size_t>(m) || hi.size() != static_cast<std::size_t>(m)) {
        throw ArgumentError("model.domain_lo and model.domain_hi need " + std::to_string(m) + " entries");
      }
      for (int c = 0; c < m; ++c) domain.push_back({lo[c], hi[c]});
    }
    return Model::custom(m, F, f, domain);
  }
  throw ArgumentError("model.kind: unknown model '" + kind +
                      "' (zero | coupled_linear | helmholtz | ginzburg_landau | coupled_power | single_power | "
                      "log_potential | custom)");
}

std::vector<double> per_axis(const Config& cfg, const std::string& path, int dim) {
  std::vector<double> v = cfg.get_doubles(path);
  if (v.size() == 1) v.assign(dim, v[0]);
  if (v.size() != static_cast<std::size_t>(dim)) {
    throw ArgumentError(path + ": expected 1 or " + std::to_string(dim) + " values, got " + std::to_string(v.size()));
  }
  return v;
}

CartesianGrid read_cartesian(const Config& cfg, int dim) {
  const std::vector<double> lo = per_axis(cfg, "grid.lo", dim);
  const std::vector<double> hi = per_axis(cfg, "grid.hi", dim);
  const std::vector<double> nodes = per_axis(cfg, "grid.nodes", dim);
  std::vector<Axis> axes;
  for (int d = 0; d < dim; ++d) {
    if (nodes[d] != std::floor(nodes[d])) throw ArgumentError("grid.nodes must be integers");
    axes.push_back({lo[d], hi[d], static_cast<int>(nodes[d])});
  }
  return CartesianGrid(axes);
}

struct GridSpec {
  bool spacetime = false;
  int dim = 1;
  bool has_nodes = false;
  CartesianGrid space;
  SpaceTimeGrid st;
};

GridSpec read_grid(const Config& cfg, bool need_nodes) {
  GridSpec g;
  const std::string kind = cfg.get_string("grid.kind", "cartesian");
  if (kind == "radial") throw ArgumentError("grid.kind: radial grids only back radial profiles; use cartesian");
  if (kind != "cartesian" && kind != "spacetime") {
    throw ArgumentError("grid.kind: unknown grid '" + kind + "' (cartesian | spacetime)");
  }
  g.spacetime = kind == "spacetime";
  g.dim = cfg.get_int("grid.dim", 1);
  if (g.dim < 1 || g.dim > kMaxDim) throw ArgumentError("grid.dim must be 1, 2 or 3");
  if (need_nodes) {
    g.has_nodes = true;
    g.space = read_cartesian(cfg, g.dim);
    if (g.spacetime) {
      const double t1 = cfg.get_double("grid.t1", 0.0);
      const double t2 = cfg.get_double("grid.t2");
      const int slices = cfg.get_int("grid.slices");
      g.st = SpaceTimeGrid(g.space, t1, t2, slices);
    }
  }
  return g;
}

Point read_point(const Config& cfg, const std::string& path, int dim) {
  const std::vector<double> v = cfg.get_doubles(path, std::vector<double>(dim, 0.0));
  if (v.size() != static_cast<std::size_t>(dim)) {
    throw ArgumentError(path + ": expected " + std::to_string(dim) + " coordinates");
  }
  Point p{};
  for (int d = 0; d < dim; ++d) p[d] = v[d];
  return p;
}

QuadratureConfig read_quadrature(const Config& cfg, QuadratureConfig q) {
  if (cfg.has("quadrature.sphere_nodes")) q = sphere_node_config(cfg.get_int("quadrature.sphere_nodes"), q);
  q.circle_nodes = cfg.get_int("quadrature.circle_nodes", q.circle_nodes);
  q.polar_nodes = cfg.get_int("quadrature.polar_nodes", q.polar_nodes);
  q.azimuth_nodes = cfg.get_int("quadrature.azimuth_nodes", q.azimuth_nodes);
  q.radial_nodes = cfg.get_int("quadrature.radial_nodes", q.radial_nodes);
  q.radial_panels = cfg.get_int("quadrature.radial_panels", q.radial_panels);
  if (q.circle_nodes < 1 || q.polar_nodes < 1 || q.azimuth_nodes < 1 || q.radial_nodes < 1 || q.radial_panels < 1) {
    throw ArgumentError("quadrature node counts must be positive");
  }
  return q;
}

LayerConfig read_layer(const Config& cfg) {
  LayerConfig l;
  l.convention = convention_from_name(cfg.get_string("kernel.convention", convention_name(l.convention)));
  l.time_points = cfg.get_int("kernel.time_points", l.time_points);
  l.analytic_panels = cfg.get_int("kernel.analytic_panels", l.analytic_panels);
  l.tail_epsilon = cfg.get_double("kernel.tail_epsilon", l.tail_epsilon);
  l.truncation_tolerance = cfg.get_double("tolerances.truncation", l.truncation_tolerance);
  if (!(l.tail_epsilon > 0.0 && l.tail_epsilon < 1.0)) throw ArgumentError("kernel.tail_epsilon must lie in (0, 1)");
  return l;
}

EllipticOptions read_elliptic_options(const Config& cfg) {
  EllipticOptions o;
  o.quadrature = read_quadrature(cfg, o.quadrature);
  o.n_quad_r = cfg.get_int("tolerances.n_quad_r", o.n_quad_r);
  o.tol_factor = cfg.get_double("tolerances.tol_factor", o.tol_factor);
  o.discretization_floor = cfg.get_double("tolerances.discretization_floor", o.discretization_floor);
  return o;
}

ParabolicOptions read_parabolic_options(const Config& cfg) {
  ParabolicOptions o;
  o.quadrature = read_quadrature(cfg, o.quadrature);
  o.layer = read_layer(cfg);
  o.n_quad_r = cfg.get_int("tolerances.n_quad_r", o.n_quad_r);
  o.tol_factor = cfg.get_double("tolerances.tol_factor", o.tol_factor);
  o.discretization_floor = cfg.get_double("tolerances.discretization_floor", o.discretization_floor);
  return o;
}

Json tolerances_json(const EllipticOptions& o) {
  Json j;
  j["tol_factor"] = json_number(o.tol_factor);
  j["discretization_floor"] = json_number(o.discretization_floor);
  j["n_quad_r"] = o.n_quad_r;
  return j;
}

Json tolerances_json(const ParabolicOptions& o) {
  Json j;
  j["tol_factor"] = json_number(o.tol_factor);
  j["discretization_floor"] = json_number(o.discretization_floor);
  j["n_quad_r"] = o.n_quad_r;
  j["truncation"] = json_number(o.layer.truncation_tolerance);
  j["tail_epsilon"] = json_number(o.layer.tail_epsilon);
  return j;
}

EllipticSolverConfig read_elliptic_solver(const Config& cfg) {
  EllipticSolverConfig s;
  s.max_iter = cfg.get_int("solver.max_iter", s.max_iter);
  s.tol = cfg.get_double("solver.tol", s.tol);
  s.damping = cfg.get_double("solver.damping", s.damping);
  s.min_damping = cfg.get_double("solver.min_damping", s.min_damping);
  s.gauss_seidel_sweeps = cfg.get_int("solver.gauss_seidel_sweeps", s.gauss_seidel_sweeps);
  return s;
}

ParabolicSolverConfig read_parabolic_solver(const Config& cfg, int dim) {
  ParabolicSolverConfig s;
  s.theta = cfg.get_double("solver.theta", s.theta);
  s.tol = cfg.get_double("solver.tol", s.tol);
  s.max_newton = cfg.get_int("solver.max_newton", s.max_newton);
  s.min_damping = cfg.get_double("solver.min_damping", s.min_damping);
  s.boundary = boundary_policy_from_name(cfg.get_string("solver.boundary", boundary_policy_name(s.boundary)));
  if (s.boundary == BoundaryPolicy::DirichletFunction) {
    auto g = exact_spacetime_sampler(cfg.get_string("solver.boundary_field"), dim,
                                     cfg.get_number_table("solver.boundary_params"));
    s.boundary_values = [g](double t, const Point& x, double* out) {
      SpaceTimeJet j;
      g->sample(t, x, j);
      for (int c = 0; c < j.m; ++c) out[c] = j.u[c];
    };
  }
  if (!(s.theta >= 0.5 && s.theta <= 1.0)) throw ArgumentError("solver.theta must lie in [1/2, 1]");
  return s;
}

// ---------------------------------------------------------------------------
// field sources

using FieldMaker = std::function<Field()>;
using SpaceTimeMaker = std::function<SpaceTimeField()>;

struct EllipticSource {
  std::string description;
  FieldMaker make_field;                                      // empty for analytic sources
  std::function<std::shared_ptr<const FieldSampler>()> make;  // always set
};

struct SpaceTimeSource {
  std::string description;
  SpaceTimeMaker make_field;
  std::function<std::shared_ptr<const SpaceTimeSampler>()> make;
};

void fill_mean_interior(Field& u) {
  const CartesianGrid& g = u.grid();
  std::vector<double> mean(u.components(), 0.0);
  std::size_t nb = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!g.is_boundary(i)) continue;
    ++nb;
    for (int c = 0; c < u.components(); ++c) mean[c] += u.at(i, c);
  }
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.is_boundary(i)) continue;
    for (int c = 0; c < u.components(); ++c) u.at(i, c) = mean[c] / nb;
  }
}

EllipticSource read_elliptic_source(const Config& cfg, const std::string& prefix, const GridSpec& grid,
                                    const Model& model) {
  const std::string source = cfg.get_string(prefix + ".source");
  EllipticSource s;
  const int dim = grid.dim;
  auto wrap_grid = [&s]() {
    FieldMaker mk = s.make_field;
    s.make = [mk]() -> std::shared_ptr<const FieldSampler> {
      return std::make_shared<GridFieldSampler>(std::make_shared<const Field>(mk()));
    };
  };
  auto need_grid = [&]() {
    if (!grid.has_nodes) throw ArgumentError(prefix + ".source = " + source + " needs grid nodes");
  };
  if (source == "exact" || source == "analytic") {
    const std::string name = cfg.get_string(prefix + ".name");
    const Params params = cfg.get_number_table(prefix + ".params");
    if (name == "manufactured") {
      const double beta = cfg.get_double(prefix + ".beta");
      const AngularProfile g = angular_profile(cfg.get_string(prefix + ".profile", "one"));
      const Point center = read_point(cfg, prefix + ".center", dim);
      const double excl = cfg.get_double(prefix + ".exclusion_radius", 0.0);
      s.description = "manufactured{beta=" + format_double(beta) + ",profile=" + g.name + "}";
      if (source == "analytic") {
        s.make = [=]() -> std::shared_ptr<const FieldSampler> { return manufactured_sampler(beta, g, dim, center); };
        return s;
      }
      need_grid();
      const CartesianGrid space = grid.space;
      s.make_field = [=]() { return manufactured_homogeneous(beta, g, space, center, excl); };
      wrap_grid();
      return s;
    }
    s.description = name;
    if (source == "analytic") {
      exact_sampler(name, dim, params);  // validates the name now
      s.make = [=]() -> std::shared_ptr<const FieldSampler> { return exact_sampler(name, dim, params); };
      return s;
    }
    need_grid();
    catalog_components(name);
    const CartesianGrid space = grid.space;
    s.make_field = [=]() { return exact_field(name, space, params); };
    wrap_grid();
    return s;
  }
  if (source == "file") {
    const std::string path = cfg.get_string(prefix + ".path");
    s.description = "file:" + path;
    s.make_field = [=]() {
      Field f = load_field(path);
      if (f.dim() != dim) throw ArgumentError(path + ": field has dimension " + std::to_string(f.dim()));
      return f;
    };
    wrap_grid();
    return s;
  }
  if (source == "noise") {
    need_grid();
    const auto seed = static_cast<std::uint64_t>(cfg.get_int(prefix + ".seed", 1));
    const double amplitude = cfg.get_double(prefix + ".amplitude", 1.0);
    const int m = cfg.get_int(prefix + ".components", model.components());
    const CartesianGrid space = grid.space;
    s.description = "noise{seed=" + std::to_string(seed) + "}";
    s.make_field = [=]() { return noise_field(space, m, seed, amplitude); };
    wrap_grid();
    return s;
  }
  if (source == "solve") {
    need_grid();
    const EllipticSource boundary = read_elliptic_source(cfg, prefix + ".boundary", grid, model);
    if (!boundary.make_field) throw ArgumentError(prefix + ".boundary must be a grid field");
    const EllipticSolverConfig scfg = read_elliptic_solver(cfg);
    const std::string guess = cfg.get_string("solver.initial_guess", "given");
    if (guess != "given" && guess != "mean") throw ArgumentError("solver.initial_guess: given | mean");
    const FieldMaker bmk = boundary.make_field;
    s.description = "solved{boundary=" + boundary.description + "}";
    s.make_field = [=]() {
      Field b = bmk();
      if (guess == "mean") fill_mean_interior(b);
      return solve_elliptic(model, b, scfg);
    };
    wrap_grid();
    return s;
  }
  throw ArgumentError(prefix + ".source: unknown source '" + source + "' (exact | analytic | file | noise | solve)");
}

SpaceTimeSource read_spacetime_source(const Config& cfg, const GridSpec& grid, const Model& model) {
  const std::string source = cfg.get_string("field.source");
  SpaceTimeSource s;
  const int dim = grid.dim;
  auto wrap_grid = [&s]() {
    SpaceTimeMaker mk = s.make_field;
    s.make = [mk]() -> std::shared_ptr<const SpaceTimeSampler> {
      return std::make_shared<GridSpaceTimeSampler>(std::make_shared<const SpaceTimeField>(mk()));
    };
  };
  if (source == "exact" || source == "analytic") {
    const std::string name = cfg.get_string("field.name");
    const Params params = cfg.get_number_table("field.params");
    exact_spacetime_sampler(name, dim, params);
    s.description = name;
    if (source == "analytic") {
      s.make = [=]() -> std::shared_ptr<const SpaceTimeSampler> { return exact_spacetime_sampler(name, dim, params); };
      return s;
    }
    if (!grid.has_nodes) throw ArgumentError("field.source = exact needs grid nodes");
    const SpaceTimeGrid st = grid.st;
    s.make_field = [=]() { return exact_spacetime(name, st, params); };
    wrap_grid();
    return s;
  }
  if (source == "file") {
    const std::string path = cfg.get_string("field.path");
    s.description = "file:" + path;
    s.make_field = [=]() {
      SpaceTimeField f = load_spacetime_field(path);
      if (f.dim() != dim) throw ArgumentError(path + ": field has dimension " + std::to_string(f.dim()));
      return f;
    };
    wrap_grid();
    return s;
  }
  if (source == "noise") {
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("field.seed", 1));
    const double amplitude = cfg.get_double("field.amplitude", 1.0);
    const int m = cfg.get_int("field.components", model.components());
    const SpaceTimeGrid st = grid.st;
    s.description = "noise{seed=" + std::to_string(seed) + "}";
    s.make_field = [=]() { return noise_spacetime(st, m, seed, amplitude); };
    wrap_grid();
    return s;
  }
  if (source == "solve") {
    const EllipticSource init = read_elliptic_source(cfg, "field.initial", grid, model);
    if (!init.make_field) throw ArgumentError("field.initial must be a grid field");
    const ParabolicSolverConfig scfg = read_parabolic_solver(cfg, dim);
    const FieldMaker imk = init.make_field;
    const SpaceTimeGrid st = grid.st;
    s.description = "solved{initial=" + init.description + "}";
    s.make_field = [=]() { return solve_parabolic(model, st, imk(), scfg); };
    wrap_grid();
    return s;
  }
  throw ArgumentError("field.source: unknown source '" + source + "' (exact | analytic | file | noise | solve)");
}

// ---------------------------------------------------------------------------
// execution

struct TaskResult {
  Json report;
  std::string csv;
  bool failure = false;  // identity or monotonicity beyond tolerance
  std::string message;
  double max_tail_bound = 0.0;
  bool truncation_warning = false;
  std::vector<std::pair<std::string, std::function<void(const std::string&)>>> extra_files;
};

using Task = std::function<TaskResult()>;

std::vector<Side> read_sides(const Config& cfg) {
  std::vector<Side> sides;
  for (const std::string& s : cfg.get_strings("task.sides", {"minus"})) sides.push_back(side_from_name(s));
  if (sides.empty()) throw ArgumentError("task.sides must not be empty");
  return sides;
}

std::vector<double> sorted_radii(const Config& cfg) {
  std::vector<double> r = cfg.get_doubles("task.radii");
  std::sort(r.begin(), r.end());
  for (double v : r) {
    if (!(v > 0.0)) throw ArgumentError("task.radii must be positive");
  }
  return r;
}

Json model_json(const Model& m) { return m.name(); }

std::string spacetime_csv(const SpaceTimeField& u) {
  std::ostringstream os;
  const int n = u.dim(), m = u.components();
  os << "t";
  for (int d = 0; d < n; ++d) os << ",x" << d + 1;
  for (int c = 0; c < m; ++c) os << ",u" << c + 1;
  os << '\n';
  for (int k = 0; k < u.slices(); ++k) {
    const Field& f = u.slice(k);
    for (std::size_t i = 0; i < f.node_count(); ++i) {
      const Point p = f.grid().node(i);
      os << format_double(u.time(k));
      for (int d = 0; d < n; ++d) os << ',' << format_double(p[d]);
      for (int c = 0; c < m; ++c) os << ',' << format_double(f.at(i, c));
      os << '\n';
    }
  }
  return os.str();
}

Task prepare_verify(const Config& cfg, const GridSpec& grid, const Model& model, Json& tol) {
  const Point x0 = read_point(cfg, "task.x0", grid.dim);
  const double beta = cfg.get_double("task.beta", 0.0);
  const std::vector<double> radii = sorted_radii(cfg);
  if (!grid.spacetime) {
    const EllipticSource src = read_elliptic_source(cfg, "field", grid, model);
    const EllipticOptions opt = read_elliptic_options(cfg);
    tol = tolerances_json(opt);
    return [=]() {
      const auto u = src.make();
      for (double r : radii) require_radius(u->max_ball_radius(x0), r, "verify radius");
      std::vector<IdentityReport> rows(2 * radii.size());
      parallel_for(radii.size(), [&](std::size_t k) {
        rows[2 * k] = pohozaev_residual(*u, model, x0, radii[k], opt);
        rows[2 * k + 1] = ibp_residual(*u, model, x0, radii[k], opt);
      });
      TaskResult res;
      bool ibp_ok = true;
      for (std::size_t k = 0; k < radii.size(); ++k) ibp_ok = ibp_ok && rows[2 * k + 1].pass;
      Json notes = Json::array();
      if (ibp_ok && radii.size() > 1) {
        std::vector<IdentityReport> mono(radii.size() - 1);
        parallel_for(mono.size(), [&](std::size_t k) {
          mono[k] = verify_monotonicity_elliptic(*u, model, x0, beta, radii[k], radii[k + 1], opt, false);
        });
        rows.insert(rows.end(), mono.begin(), mono.end());
      } else if (!ibp_ok) {
        notes.push_back("field-not-solution: integration-by-parts identity fails; monotonicity not evaluated");
      }
      const Quadrature quad(grid.dim, opt.quadrature);
      double min_bdry = INFINITY;
      for (double r : radii) {
        min_bdry = std::min(min_bdry, phi_derivative_decomposition(*u, model, x0, beta, r, quad).boundary_part);
      }
      bool pass = true;
      Json ids = Json::array();
      for (const IdentityReport& r : rows) {
        pass = pass && r.pass;
        ids.push_back(to_json(r));
      }
      res.report["kind"] = "elliptic";
      res.report["field"] = src.description;
      res.report["model"] = model_json(model);
      res.report["x0"] = json_point(x0, grid.dim);
      res.report["beta"] = json_number(beta);
      res.report["h"] = json_number(u->resolution());
      res.report["identities"] = ids;
      res.report["min_boundary_part"] = json_number(min_bdry);
      res.report["notes"] = notes;
      res.report["pass"] = pass;
      std::ostringstream csv;
      write_csv(csv, rows);
      res.csv = csv.str();
      res.failure = !pass;
      res.message = pass ? "all identities hold" : "identity residual beyond tolerance";
      return res;
    };
  }
  const double T = cfg.get_double("task.T");
  const std::vector<Side> sides = read_sides(cfg);
  const SpaceTimeSource src = read_spacetime_source(cfg, grid, model);
  const ParabolicOptions opt = read_parabolic_options(cfg);
  tol = tolerances_json(opt);
  return [=]() {
    const auto u = src.make();
    TaskResult res;
    std::vector<IdentityReport> rows;
    Json notes = Json::array();
    for (Side side : sides) {
      if (side == Side::Plus && opt.layer.convention == KernelConvention::Literal) {
        notes.push_back("plus side skipped under the literal kernel convention");
        continue;
      }
      for (double r : radii) require_psi_radius(*u, T, r, side);
      std::vector<IdentityReport> ibp(radii.size());
      parallel_for(radii.size(), [&](std::size_t k) {
        ibp[k] = parabolic_ibp_residual(*u, model, T, x0, radii[k], side, opt);
      });
      bool ibp_ok = true;
      for (const auto& r : ibp) ibp_ok = ibp_ok && r.pass;
      rows.insert(rows.end(), ibp.begin(), ibp.end());
      if (ibp_ok && radii.size() > 1) {
        std::vector<IdentityReport> mono(radii.size() - 1);
        parallel_for(mono.size(), [&](std::size_t k) {
          mono[k] = verify_monotonicity_parabolic(*u, model, T, x0, beta, radii[k], radii[k + 1], side, opt, false);
        });
        rows.insert(rows.end(), mono.begin(), mono.end());
      } else if (!ibp_ok) {
        notes.push_back(std::string("field-not-solution on the ") + side_name(side) +
                        " side: integration-by-parts identity fails; monotonicity not evaluated");
      }
    }
    bool pass = true;
    Json ids = Json::array();
    for (const IdentityReport& r : rows) {
      pass = pass && r.pass;
      ids.push_back(to_json(r));
    }
    res.report["kind"] = "parabolic";
    res.report["field"] = src.description;
    res.report["model"] = model_json(model);
    res.report["T"] = json_number(T);
    res.report["x0"] = json_point(x0, grid.dim);
    res.report["beta"] = json_number(beta);
    res.report["convention"] = convention_name(opt.layer.convention);
    res.report["identities"] = ids;
    res.report["notes"] = notes;
    res.report["pass"] = pass;
    std::ostringstream csv;
    write_csv(csv, rows);
    res.csv = csv.str();
    res.failure = !pass;
    res.message = pass ? "all identities hold" : "identity residual beyond tolerance";
    return res;
  };
}

Task prepare_phi_scan(const Config& cfg, const GridSpec& grid, const Model& model, Json& tol) {
  if (grid.spacetime) throw ArgumentError("phi-scan needs grid.kind = cartesian");
  const Point x0 = read_point(cfg, "task.x0", grid.dim);
  const double beta = cfg.get_double("task.beta");
  const double r_min = cfg.get_double("task.r_min");
  const double r_max = cfg.get_double("task.r_max");
  const int n_r = cfg.get_int("task.n_r", 16);
  if (!(r_min > 0.0 && r_max > r_min) || n_r < 2) throw ArgumentError("phi-scan needs 0 < r_min < r_max and n_r >= 2");
  EllipticOptions opt = read_elliptic_options(cfg);
  opt.check_identity = cfg.get_bool("task.check_identity", true);
  const EllipticSource src = read_elliptic_source(cfg, "field", grid, model);
  tol = tolerances_json(opt);
  return [=]() {
    const auto u = src.make();
    const FunctionalReport rep = phi_scan(*u, model, x0, beta, r_min, r_max, n_r, opt);
    TaskResult res;
    res.report = to_json(rep);
    res.report["field"] = src.description;
    res.report["model"] = model_json(model);
    std::ostringstream csv;
    write_csv(csv, rep);
    res.csv = csv.str();
    res.failure = rep.monotone_violations > 0 || rep.identity_failures > 0;
    std::ostringstream msg;
    msg << rep.admissible_count << "/" << rep.rows.size() << " radii admissible, " << rep.monotone_checks
        << " monotonicity checks, " << rep.monotone_violations << " violations, " << rep.identity_failures
        << " identity failures";
    res.message = msg.str();
    return res;
  };
}

Task prepare_psi_scan(const Config& cfg, const GridSpec& grid, const Model& model, Json& tol) {
  if (!grid.spacetime) throw ArgumentError("psi-scan needs grid.kind = spacetime");
  const Point x0 = read_point(cfg, "task.x0", grid.dim);
  const double T = cfg.get_double("task.T");
  const double beta = cfg.get_double("task.beta");
  const double r_min = cfg.get_double("task.r_min");
  const double r_max = cfg.get_double("task.r_max");
  const int n_r = cfg.get_int("task.n_r", 16);
  if (!(r_min > 0.0 && r_max > r_min) || n_r < 2) throw ArgumentError("psi-scan needs 0 < r_min < r_max and n_r >= 2");
  const std::vector<Side> sides = read_sides(cfg);
  ParabolicOptions opt = read_parabolic_options(cfg);
  opt.check_identity = cfg.get_bool("task.check_identity", true);
  const SpaceTimeSource src = read_spacetime_source(cfg, grid, model);
  tol = tolerances_json(opt);
  return [=]() {
    const auto u = src.make();
    TaskResult res;
    std::vector<ParabolicFunctionalReport> reps;
    Json sides_json = Json::array();
    Json skipped = Json::array();
    std::size_t violations = 0, failures = 0;
    for (Side side : sides) {
      if (side == Side::Plus && opt.layer.convention == KernelConvention::Literal) {
        skipped.push_back("plus");
        continue;
      }
      reps.push_back(psi_scan(*u, model, T, x0, beta, side, r_min, r_max, n_r, opt));
      const auto& rep = reps.back();
      violations += rep.monotone_violations;
      failures += rep.identity_failures;
      res.max_tail_bound = std::max(res.max_tail_bound, rep.max_trunc_bound);
      res.truncation_warning = res.truncation_warning || rep.truncation_warning;
      sides_json.push_back(to_json(rep));
    }
    res.report["field"] = src.description;
    res.report["model"] = model_json(model);
    res.report["convention"] = convention_name(opt.layer.convention);
    res.report["sides"] = sides_json;
    res.report["skipped_sides"] = skipped;
    std::ostringstream csv;
    write_csv(csv, reps);
    res.csv = csv.str();
    res.failure = violations > 0 || failures > 0;
    res.message = std::to_string(violations) + " monotonicity violations, " + std::to_string(failures) +
                  " identity failures";
    return res;
  };
}

Task prepare_beta_scan(const Config& cfg, const GridSpec& grid, const Model& model, Json& tol) {
  const int m = model.components();
  std::vector<double> lo = cfg.get_doubles("task.u_lo");
  std::vector<double> hi = cfg.get_doubles("task.u_hi");
  if (lo.size() == 1) lo.assign(m, lo[0]);
  if (hi.size() == 1) hi.assign(m, hi[0]);
  if (lo.size() != static_cast<std::size_t>(m) || hi.size() != static_cast<std::size_t>(m)) {
    throw ArgumentError("task.u_lo and task.u_hi need 1 or " + std::to_string(m) + " entries");
  }
  std::vector<Interval> box;
  for (int c = 0; c < m; ++c) box.push_back({lo[c], hi[c]});
  const double b_lo = cfg.get_double("task.beta_min");
  const double b_hi = cfg.get_double("task.beta_max");
  const int n_beta = cfg.get_int("task.n_beta", 21);
  const int samples = cfg.get_int("task.samples_per_axis", 0);
  const bool with_field = cfg.has("field.source");
  Point x0{};
  double r = 0.0, T = 0.0;
  Side side = Side::Minus;
  EllipticSource esrc;
  SpaceTimeSource psrc;
  EllipticOptions eopt;
  ParabolicOptions popt;
  if (with_field) {
    x0 = read_point(cfg, "task.x0", grid.dim);
    r = cfg.get_double("task.r");
    if (grid.spacetime) {
      T = cfg.get_double("task.T");
      side = side_from_name(cfg.get_string("task.side", "minus"));
      psrc = read_spacetime_source(cfg, grid, model);
      popt = read_parabolic_options(cfg);
      tol = tolerances_json(popt);
    } else {
      esrc = read_elliptic_source(cfg, "field", grid, model);
      eopt = read_elliptic_options(cfg);
      tol = tolerances_json(eopt);
    }
  }
  const bool spacetime = grid.spacetime;
  return [=]() {
    const AdmissibilityReport rep = pointwise_beta_interval(model, box, b_lo, b_hi, n_beta, samples);
    TaskResult res;
    res.report["model"] = model_json(model);
    res.report["pointwise"] = to_json(rep);
    std::vector<Admissibility> margins(rep.betas.size());
    if (with_field) {
      if (spacetime) {
        const auto u = psrc.make();
        parallel_for(rep.betas.size(), [&](std::size_t k) {
          margins[k] = beta_admissible_parabolic(*u, model, T, x0, rep.betas[k], r, side, popt);
        });
      } else {
        const auto u = esrc.make();
        parallel_for(rep.betas.size(), [&](std::size_t k) {
          margins[k] = beta_admissible_elliptic(*u, model, x0, rep.betas[k], r, eopt);
        });
      }
      Json rows = Json::array();
      for (std::size_t k = 0; k < rep.betas.size(); ++k) {
        Json e;
        e["beta"] = json_number(rep.betas[k]);
        e["margin"] = json_number(margins[k].margin);
        e["tolerance"] = json_number(margins[k].tolerance);
        e["admissible"] = margins[k].admissible;
        rows.push_back(e);
      }
      res.report["field"] = spacetime ? psrc.description : esrc.description;
      res.report["r"] = json_number(r);
      res.report["field_margins"] = rows;
    }
    std::ostringstream csv;
    csv << "beta,min_integrand,tolerance,admissible";
    if (with_field) csv << ",field_margin,field_tolerance,field_admissible";
    csv << '\n';
    std::size_t n_adm = 0;
    for (std::size_t k = 0; k < rep.betas.size(); ++k) {
      n_adm += rep.admissible[k] ? 1 : 0;
      csv << format_double(rep.betas[k]) << ',' << format_double(rep.minima[k]) << ','
          << format_double(rep.tolerances[k]) << ',' << (rep.admissible[k] ? 1 : 0);
      if (with_field) {
        csv << ',' << format_double(margins[k].margin) << ',' << format_double(margins[k].tolerance) << ','
            << (margins[k].admissible ? 1 : 0);
      }
      csv << '\n';
    }
    res.csv = csv.str();
    res.message = std::to_string(n_adm) + "/" + std::to_string(rep.betas.size()) + " betas pointwise admissible";
    return res;
  };
}

Task prepare_free_boundary(const Config& cfg, const GridSpec& grid, const Model& model, Json& tol) {
  if (!grid.spacetime || !grid.has_nodes) throw ArgumentError("free-boundary needs grid.kind = spacetime");
  const EllipticSource init = read_elliptic_source(cfg, "field", grid, model);
  if (!init.make_field) throw ArgumentError("free-boundary needs a grid initial field");
  const ParabolicSolverConfig scfg = read_parabolic_solver(cfg, grid.dim);
  Thresholds th;
  th.theta_u = cfg.get_double("task.theta_u", 0.0);
  th.theta_g = cfg.get_double("task.theta_g", 0.0);
  const double T = cfg.get_double("task.T", grid.st.t2());
  const Point x0 = read_point(cfg, "task.x0", grid.dim);
  const double beta = cfg.get_double("task.beta");
  const Side side = side_from_name(cfg.get_string("task.side", "minus"));
  const double r_min = cfg.get_double("task.r_min");
  const double r_max = cfg.get_double("task.r_max");
  const int n_r = cfg.get_int("task.n_r", 16);
  if (!(r_min > 0.0 && r_max > r_min) || n_r < 2) {
    throw ArgumentError("free-boundary needs 0 < r_min < r_max and n_r >= 2");
  }
  const bool fixed_C = cfg.has("task.C");
  const double C_given = fixed_C ? cfg.get_double("task.C") : 0.0;
  const int n_cal = fixed_C ? 0 : cfg.get_int("task.calibration_points", 4 * n_r);
  const bool save = cfg.get_bool("output.save_field", false);
  ParabolicOptions opt = read_parabolic_options(cfg);
  opt.check_identity = cfg.get_bool("task.check_identity", false);
  tol = tolerances_json(opt);
  tol["theta_u"] = json_number(th.theta_u);
  tol["theta_g"] = json_number(th.theta_g);
  tol["solver_tol"] = json_number(scfg.tol);
  const SpaceTimeGrid st = grid.st;
  return [=]() {
    auto run = std::make_shared<FreeBoundaryRun>(simulate_free_boundary(model, st, init.make_field(), scfg, th));
    auto field = std::shared_ptr<const SpaceTimeField>(run, &run->field);
    const GridSpaceTimeSampler u(field);
    if (!run->chi.contains(T, x0)) {
      throw HypothesisError("center (T=" + format_double(T) + ", x0) is not in the coincidence set");
    }
    TaskResult res;
    CalibrationReport cal;
    double C = C_given;
    if (!fixed_C) {
      cal = calibrate_C(u, model, &run->chi, T, x0, beta, side, linspace(r_min, r_max, n_cal), opt);
      C = cal.C;
    }
    const ParabolicFunctionalReport rep = psi_scan(u, model, T, x0, beta, side, r_min, r_max, n_r, opt, &run->chi, C);
    res.max_tail_bound = rep.max_trunc_bound;
    res.truncation_warning = rep.truncation_warning;
    res.report = to_json(rep);
    res.report["field"] = "simulated{initial=" + init.description + "}";
    res.report["model"] = model_json(model);
    Json chi;
    chi["theta_u"] = json_number(run->chi.theta_u());
    chi["theta_g"] = json_number(run->chi.theta_g());
    chi["lambda_nodes"] = run->chi.count();
    res.report["coincidence_set"] = chi;
    Json calj;
    calj["calibrated"] = !fixed_C;
    calj["C"] = json_number(C);
    if (!fixed_C) {
      calj["h1_norm"] = json_number(cal.h1_norm);
      calj["h2_norm"] = json_number(cal.h2_norm);
      calj["sup_ratio"] = json_number(cal.sup_ratio);
      calj["radii"] = n_cal;
    }
    res.report["calibration"] = calj;
    std::ostringstream csv;
    write_csv(csv, std::vector<ParabolicFunctionalReport>{rep});
    res.csv = csv.str();
    res.failure = rep.monotone_violations > 0 || rep.identity_failures > 0;
    res.message = std::to_string(rep.monotone_violations) + " monotonicity violations of Psi + C E(r) with C = " +
                  format_double(C);
    if (save) {
      res.extra_files.push_back({".field", [field](const std::string& p) { save_spacetime_field(*field, p); }});
    }
    return res;
  };
}

Task prepare_blowup(const Config& cfg, const GridSpec& grid, const Model& model, Json& tol) {
  const Point x0 = read_point(cfg, "task.x0", grid.dim);
  const double beta = cfg.get_double("task.beta");
  std::vector<double> rhos = cfg.get_doubles("task.rhos");
  std::sort(rhos.begin(), rhos.end(), std::greater<>());
  BlowupOptions opt;
  opt.quadrature = read_quadrature(cfg, opt.quadrature);
  opt.degree_radii = cfg.get_int("task.degree_radii", opt.degree_radii);
  opt.growth_limit = cfg.get_double("task.growth_limit", opt.growth_limit);
  opt.degenerate_slope = cfg.get_double("task.degenerate_slope", opt.degenerate_slope);
  tol["growth_limit"] = json_number(opt.growth_limit);
  tol["degenerate_slope"] = json_number(opt.degenerate_slope);
  if (!grid.spacetime) {
    opt.r_in = cfg.get_double("task.r_in", opt.r_in);
    opt.r_out = cfg.get_double("task.r_out", opt.r_out);
    const EllipticSource src = read_elliptic_source(cfg, "field", grid, model);
    return [=]() {
      const BlowupReport rep = blowup_study(src.make(), model, x0, beta, rhos, opt);
      TaskResult res;
      res.report = to_json(rep);
      res.report["field"] = src.description;
      std::ostringstream csv;
      write_csv(csv, rep);
      res.csv = csv.str();
      res.message = rep.warning.empty() ? "blow-up study complete" : rep.warning;
      return res;
    };
  }
  const double T = cfg.get_double("task.T");
  opt.t_lo = cfg.get_double("task.t_lo", opt.t_lo);
  opt.t_hi = cfg.get_double("task.t_hi", opt.t_hi);
  opt.x_radius = cfg.get_double("task.x_radius", opt.x_radius);
  opt.time_panels = cfg.get_int("task.time_panels", opt.time_panels);
  opt.layer = read_layer(cfg);
  tol["truncation"] = json_number(opt.layer.truncation_tolerance);
  tol["tail_epsilon"] = json_number(opt.layer.tail_epsilon);
  const SpaceTimeSource src = read_spacetime_source(cfg, grid, model);
  return [=]() {
    const BlowupReport rep = blowup_study(src.make(), model, T, x0, beta, rhos, opt);
    TaskResult res;
    res.report = to_json(rep);
    res.report["field"] = src.description;
    std::ostringstream csv;
    write_csv(csv, rep);
    res.csv = csv.str();
    res.message = rep.warning.empty() ? "blow-up study complete" : rep.warning;
    return res;
  };
}

Task prepare_kernel_check(const Config& cfg, Json& tol) {
  const QuadratureConfig q = read_quadrature(cfg, QuadratureConfig{});
  const LayerConfig layer = read_layer(cfg);
  tol["sphere_relative"] = 1e-8;
  tol["kernel_mass"] = 1e-6;
  tol["heat_residual"] = 1e-4;
  tol["tail_epsilon"] = json_number(layer.tail_epsilon);
  return [=]() {
    std::vector<CheckResult> checks = sphere_checks(q);
    for (CheckResult& c : kernel_checks(q, layer)) checks.push_back(std::move(c));
    TaskResult res;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "check,measured,tolerance,pass\n";
    std::size_t failed = 0;
    for (const CheckResult& c : checks) {
      Json e;
      e["check"] = c.name;
      e["measured"] = json_number(c.measured);
      e["tolerance"] = json_number(c.tolerance);
      e["pass"] = c.pass;
      rows.push_back(e);
      csv << c.name << ',' << format_double(c.measured) << ',' << format_double(c.tolerance) << ','
          << (c.pass ? 1 : 0) << '\n';
      failed += c.pass ? 0 : 1;
    }
    res.report["convention"] = convention_name(layer.convention);
    res.report["checks"] = rows;
    res.csv = csv.str();
    res.failure = failed > 0;
    res.message = std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " geometry checks pass";
    return res;
  };
}

Task prepare_solve_elliptic(const Config& cfg, const GridSpec& grid, const Model& model, Json& tol) {
  if (grid.spacetime) throw ArgumentError("solve-elliptic needs grid.kind = cartesian");
  const EllipticSource bnd = read_elliptic_source(cfg, "field", grid, model);
  if (!bnd.make_field) throw ArgumentError("solve-elliptic needs grid boundary data");
  const EllipticSolverConfig scfg = read_elliptic_solver(cfg);
  const std::string guess = cfg.get_string("solver.initial_guess", "given");
  if (guess != "given" && guess != "mean") throw ArgumentError("solver.initial_guess: given | mean");
  tol["solver_tol"] = json_number(scfg.tol);
  return [=]() {
    Field b = bnd.make_field();
    if (guess == "mean") fill_mean_interior(b);
    auto u = std::make_shared<Field>(solve_elliptic(model, b, scfg));
    TaskResult res;
    res.report["model"] = model_json(model);
    res.report["boundary"] = bnd.description;
    res.report["nodes"] = u->node_count();
    res.report["h"] = json_number(u->grid().max_spacing());
    res.report["residual"] = json_number(u->meta().solver_residual);
    res.report["max_abs"] = json_number(u->max_abs());
    std::ostringstream csv;
    write_field_csv(*u, csv);
    res.csv = csv.str();
    res.message = "converged, residual " + format_double(u->meta().solver_residual);
    res.extra_files.push_back({".field", [u](const std::string& p) { save_field(*u, p); }});
    return res;
  };
}

Task prepare_solve_parabolic(const Config& cfg, const GridSpec& grid, const Model& model, Json& tol) {
  if (!grid.spacetime || !grid.has_nodes) throw ArgumentError("solve-parabolic needs grid.kind = spacetime");
  const EllipticSource init = read_elliptic_source(cfg, "field", grid, model);
  if (!init.make_field) throw ArgumentError("solve-parabolic needs a grid initial field");
  const ParabolicSolverConfig scfg = read_parabolic_solver(cfg, grid.dim);
  tol["solver_tol"] = json_number(scfg.tol);
  const SpaceTimeGrid st = grid.st;
  return [=]() {
    auto u = std::make_shared<SpaceTimeField>(solve_parabolic(model, st, init.make_field(), scfg));
    TaskResult res;
    res.report["model"] = model_json(model);
    res.report["initial"] = init.description;
    res.report["theta"] = json_number(scfg.theta);
    res.report["boundary"] = boundary_policy_name(scfg.boundary);
    res.report["slices"] = u->slices();
    res.report["dt"] = json_number(st.dt());
    res.report["residual"] = json_number(u->meta().solver_residual);
    res.csv = spacetime_csv(*u);
    res.message = "solved " + std::to_string(u->slices()) + " slices";
    res.extra_files.push_back({".field", [u](const std::string& p) { save_spacetime_field(*u, p); }});
    return res;
  };
}

}  // namespace

RunOutcome run(const Config& cfg) {
  RunOutcome out;
  std::string dir, name;
  Json tol = Json::object();
  auto write_manifest = [&](const std::string& status) {
    const std::string path = dir + "/" + name + ".manifest.json";
    Json m;
    m["program"] = "monotone";
    m["version"] = version_string();
    m["task"] = out.task;
    m["config_source"] = cfg.source();
    m["status"] = status;
    m["exit_code"] = out.exit_code;
    m["message"] = out.message;
    m["tolerances"] = tol;
    m["config"] = cfg.echo();
    m["resolved"] = cfg.resolved();
    Json files = Json::array();
    for (const std::string& f : out.files) files.push_back(f);
    m["files"] = files;
    write_text_file(path, m.dump(2) + "\n");
    out.files.push_back(path);
  };
  try {
    out.task = cfg.get_string("task.kind");
    if (std::find(kTasks.begin(), kTasks.end(), out.task) == kTasks.end()) {
      std::string list;
      for (const auto& t : kTasks) list += (list.empty() ? "" : " | ") + t;
      throw ArgumentError("task.kind: unknown task '" + out.task + "' (" + list + ")");
    }
    dir = cfg.get_string("output.dir", "monotone_out");
    name = cfg.get_string("output.name", out.task);
    Task task;
    if (out.task == "kernel-check") {
      task = prepare_kernel_check(cfg, tol);
    } else {
      const Model model = read_model(cfg);
      const bool with_field = out.task != "beta-scan" || cfg.has("field.source");
      const bool need_nodes = with_field && cfg.get_string("field.source", "") != "analytic";
      const GridSpec grid = with_field ? read_grid(cfg, need_nodes) : GridSpec{};
      if (out.task == "verify") task = prepare_verify(cfg, grid, model, tol);
      else if (out.task == "phi-scan") task = prepare_phi_scan(cfg, grid, model, tol);
      else if (out.task == "psi-scan") task = prepare_psi_scan(cfg, grid, model, tol);
      else if (out.task == "beta-scan") task = prepare_beta_scan(cfg, grid, model, tol);
      else if (out.task == "free-boundary") task = prepare_free_boundary(cfg, grid, model, tol);
      else if (out.task == "blowup") task = prepare_blowup(cfg, grid, model, tol);
      else if (out.task == "solve-elliptic") task = prepare_solve_elliptic(cfg, grid, model, tol);
      else task = prepare_solve_parabolic(cfg, grid, model, tol);
    }
    cfg.require_all_used();
    TaskResult res = task();
    const std::string base = dir + "/" + name;
    Json head{{"task", out.task}, {"version", version_string()}};
    head.update(res.report);
    res.report = std::move(head);
    if (res.max_tail_bound > 0.0 || res.truncation_warning) {
      tol["max_tail_bound"] = json_number(res.max_tail_bound);
      tol["truncation_warning"] = res.truncation_warning;
    }
    write_text_file(base + ".json", res.report.dump(2) + "\n");
    out.files.push_back(base + ".json");
    write_text_file(base + ".csv", res.csv);
    out.files.push_back(base + ".csv");
    for (const auto& [suffix, writer] : res.extra_files) {
      writer(base + suffix);
      out.files.push_back(base + suffix);
    }
    out.exit_code = res.failure ? kExitFailure : kExitOk;
    out.message = res.message;
    out.report = std::move(res.report);
    write_manifest(res.failure ? "failure" : "ok");
  } catch (const std::exception& e) {
    out.exit_code = kExitUsage;
    out.message = e.what();
    if (!dir.empty() && !name.empty()) {
      try {
        write_manifest("error");
      } catch (const std::exception&) {
      }
    }
  }
  return out;
}

RunOutcome run_file(const std::string& path, const std::vector<std::string>& overrides) {
  try {
    Config cfg = Config::parse_file(path);
    for (const std::string& o : overrides) cfg.set_override(o);
    return run(cfg);
  } catch (const std::exception& e) {
    RunOutcome out;
    out.exit_code = kExitUsage;
    out.message = e.what();
    return out;
  }
}

}  // namespace monotone
