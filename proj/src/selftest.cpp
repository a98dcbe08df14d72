#include "monotone/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "monotone/blowup.hpp"
#include "monotone/catalog.hpp"
#include "monotone/cutoff.hpp"
#include "monotone/elliptic.hpp"
#include "monotone/error.hpp"
#include "monotone/format.hpp"
#include "monotone/parabolic.hpp"
#include "monotone/parallel.hpp"
#include "monotone/solvers.hpp"

namespace monotone {

QuadratureConfig sphere_node_config(int nodes, QuadratureConfig base) {
  if (nodes < 1) throw ArgumentError("sphere_nodes must be positive");
  base.circle_nodes = nodes;
  base.polar_nodes = std::max(1, static_cast<int>(std::lround(std::sqrt(nodes / 2.0))));
  base.azimuth_nodes = std::max(1, nodes / base.polar_nodes);
  return base;
}

namespace {

CheckResult upper(std::string name, double measured, double tolerance) {
  return {std::move(name), measured, tolerance, measured <= tolerance};
}

// uniform in [0, 1) from the raw generator output, identical on every platform
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<CheckResult> sphere_checks(const QuadratureConfig& q) {
  std::vector<CheckResult> out;
  for (int n : {2, 3}) {
    const Quadrature quad(n, q);
    const double s_n = unit_sphere_area(n);
    double err_area = 0.0, err_moment = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
      const ScalarSampler one{n, [](const Point&) { return 1.0; }, {}};
      const ScalarSampler x1sq{n, [](const Point& x) { return x[0] * x[0]; }, {}};
      const double area = s_n * std::pow(r, n - 1);
      const double moment = s_n * std::pow(r, n + 1) / n;
      err_area = std::max(err_area, std::abs(sphere_integral(one, {}, r, quad) - area) / area);
      err_moment = std::max(err_moment, std::abs(sphere_integral(x1sq, {}, r, quad) - moment) / moment);
    }
    out.push_back(upper("sphere area n=" + std::to_string(n), err_area, 1e-8));
    out.push_back(upper("sphere x1^2 moment n=" + std::to_string(n), err_moment, 1e-8));
  }
  return out;
}

std::vector<CheckResult> kernel_checks(const QuadratureConfig& q, const LayerConfig& layer) {
  std::vector<CheckResult> out;
  const double log_eps = -std::log(layer.tail_epsilon);
  std::vector<int> signs{-1};
  if (layer.convention == KernelConvention::SignedAbsExponent) signs.push_back(1);
  for (int n = 1; n <= 3; ++n) {
    const Quadrature quad(n, q);
    for (int sign : signs) {
      double err = 0.0;
      for (double s : {0.01, 0.1, 1.0}) {
        const double t = sign * s;
        const ScalarSampler g{n, [&](const Point& x) { return backward_heat_kernel(t, x, 0.0, {}, n, layer.convention); },
                              {}};
        const double mass = ball_integral(g, {}, std::sqrt(4.0 * s * log_eps), quad);
        err = std::max(err, std::abs(std::abs(mass) - 1.0));
      }
      out.push_back(upper(std::string("kernel mass ") + (sign < 0 ? "t<t0" : "t>t0") + " n=" + std::to_string(n), err,
                          1e-6));
    }
    std::mt19937_64 rng(1000 + n);
    double res = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double s = 0.05 + 0.95 * unit(rng);
      Point x{};
      for (int d = 0; d < n; ++d) x[d] = (2.0 * unit(rng) - 1.0) * 2.0 * std::sqrt(s / n);
      const double t = -s;
      const double hx = 2e-3 * std::sqrt(s), ht = 2e-3 * s;
      auto G = [&](double tt, const Point& p) { return backward_heat_kernel(tt, p, 0.0, {}, n, layer.convention); };
      const double g0 = G(t, x);
      const double dt = (G(t + ht, x) - G(t - ht, x)) / (2.0 * ht);
      double lap = 0.0;
      for (int d = 0; d < n; ++d) {
        Point a = x, b = x;
        a[d] += hx;
        b[d] -= hx;
        lap += (G(t, a) - 2.0 * g0 + G(t, b)) / (hx * hx);
      }
      const double scale = std::pow(4.0 * std::numbers::pi * s, -0.5 * n) / s;
      res = std::max(res, std::abs(dt + lap) / scale);
    }
    out.push_back(upper("backward heat residual n=" + std::to_string(n), res, 1e-4));
  }
  return out;
}

const char* criterion_status_name(CriterionStatus s) {
  switch (s) {
    case CriterionStatus::Pass: return "pass";
    case CriterionStatus::Fail: return "fail";
    case CriterionStatus::Skipped: return "skipped";
  }
  return "fail";
}

bool SelftestReport::passed() const {
  return std::none_of(criteria.begin(), criteria.end(),
                      [](const CriterionResult& c) { return c.status == CriterionStatus::Fail; });
}

std::string SelftestReport::first_failure() const {
  for (const CriterionResult& c : criteria) {
    if (c.status == CriterionStatus::Fail) return std::to_string(c.id) + " " + c.title;
  }
  return {};
}

namespace {

struct Suite {
  SelftestOptions opt;
  EllipticOptions eopt;
  ParabolicOptions popt;

  // fixtures shared between criteria
  std::shared_ptr<const GridFieldSampler> x1_3d;
  std::shared_ptr<const GridSpaceTimeSampler> caloric_grid;

  explicit Suite(const SelftestOptions& o) : opt(o) {
    if (o.sphere_nodes > 0) {
      eopt.quadrature = sphere_node_config(o.sphere_nodes, eopt.quadrature);
      popt.quadrature = sphere_node_config(o.sphere_nodes, popt.quadrature);
    }
    popt.layer.convention = o.convention;
  }

  const GridFieldSampler& x1() {
    if (!x1_3d) {
      const auto grid = CartesianGrid::cube(3, -1.2, 1.2, 97);
      x1_3d = std::make_shared<GridFieldSampler>(std::make_shared<const Field>(exact_field("linear", grid)));
    }
    return *x1_3d;
  }

  const GridSpaceTimeSampler& caloric() {
    if (!caloric_grid) {
      const SpaceTimeGrid st(CartesianGrid::cube(1, -6.0, 6.0, 2001), 0.0, 0.2, 201);
      caloric_grid = std::make_shared<GridSpaceTimeSampler>(
          std::make_shared<const SpaceTimeField>(exact_spacetime("caloric_linear", st)));
    }
    return *caloric_grid;
  }
};

std::shared_ptr<const GridFieldSampler> grid_sampler(Field f) {
  return std::make_shared<GridFieldSampler>(std::make_shared<const Field>(std::move(f)));
}

// ---------------------------------------------------------------------------

struct FdCase {
  Model model;
  Interval box;
};

CriterionResult gradient_structure(Suite&) {
  CriterionResult c{1, "gradient structure f = grad F", CriterionStatus::Pass, {}, {}};
  const Interval reals{-2.0, 2.0}, positive{0.2, 2.0};
  std::vector<FdCase> cases{
      {Model::zero(1), reals},
      {Model::coupled_linear(0.5), reals},
      {Model::helmholtz(0.3, 1), reals},
      {Model::helmholtz(0.0, 2), reals},
      {Model::ginzburg_landau(0.7, 1), reals},
      {Model::ginzburg_landau(1.0, 2), reals},
      {Model::coupled_power(2.0, 3.0, 0.1), {-1.5, 1.5}},
      {Model::coupled_power(0.5, 1.5, 0.0), positive},
      {Model::single_power(0.5), positive},
      {Model::single_power(3.0), reals},
      {Model::single_power(-2.0), positive},
      {Model::single_power(-0.5), positive},
      {Model::log_potential(0.2), positive},
      {Model::custom(1, "u^4/4 - u^2", {"u^3 - 2*u"}), reals},
      {Model::custom(2, "sin(u1)*cos(u2)", {"cos(u1)*cos(u2)", "-sin(u1)*sin(u2)"}), reals},
  };
  std::mt19937_64 rng(20240611);
  for (const FdCase& fc : cases) {
    const int m = fc.model.components();
    std::vector<std::array<double, kMaxComponents>> pts(1000);
    for (auto& p : pts) {
      for (int i = 0; i < m; ++i) p[i] = fc.box.lo + (fc.box.hi - fc.box.lo) * unit(rng);
    }
    auto error = [&](double h) {
      double worst = 0.0;
      for (auto p : pts) {
        double f[kMaxComponents];
        fc.model.f(p.data(), f);
        for (int i = 0; i < m; ++i) {
          auto a = p, b = p;
          a[i] += h;
          b[i] -= h;
          const double fd = (fc.model.F(a.data()) - fc.model.F(b.data())) / (2.0 * h);
          worst = std::max(worst, std::abs(fd - f[i]) / (1.0 + std::abs(f[i])));
        }
      }
      return worst;
    };
    const double e1 = error(1e-2), e2 = error(5e-3);
    if (e1 <= 1e-9) {
      c.checks.push_back(upper("fd error (quadratic, exact) " + fc.model.name(), e1, 1e-9));
    } else {
      c.checks.push_back(upper("fd ratio |e(h)/e(h/2) - 4| " + fc.model.name(), std::abs(e1 / e2 - 4.0), 0.5));
    }
  }
  return c;
}

CriterionResult geometry_oracles(Suite& s) {
  CriterionResult c{2, "sphere and kernel oracles", CriterionStatus::Pass, {}, {}};
  c.checks = sphere_checks(s.eopt.quadrature);
  for (CheckResult& k : kernel_checks(s.eopt.quadrature, s.popt.layer)) c.checks.push_back(std::move(k));
  if (s.opt.convention == KernelConvention::Literal) c.note = "t > t0 kernel mass skipped under the literal convention";
  return c;
}

struct EllipticFixture {
  std::string name;
  std::shared_ptr<const FieldSampler> u;
  Model model;
  double beta;
  std::vector<double> radii;
};

std::vector<EllipticFixture> one_d_fixtures() {
  const auto g1 = CartesianGrid::cube(1, -M_PI, M_PI, 2001);
  return {
      {"linear_sin", grid_sampler(exact_field("linear_sin", g1)), Model::coupled_linear(0.0), 0.5, {}},
      {"helmholtz_sin", grid_sampler(exact_field("helmholtz_sin", g1)), Model::helmholtz(0.0), 1.5, {}},
      {"gl_kink", grid_sampler(exact_field("gl_kink", g1, {{"epsilon", 1.0}})), Model::ginzburg_landau(1.0), 2.0, {}},
  };
}

CriterionResult elliptic_identities(Suite& s) {
  CriterionResult c{3, "elliptic Pohozaev and integration-by-parts identities", CriterionStatus::Pass, {}, {}};
  auto add = [&](const std::string& fixture, const IdentityReport& r) {
    c.checks.push_back({r.identity + " " + fixture + " r=" + format_double(r.radii.front()), r.residual, r.tolerance,
                        r.pass});
  };
  const Model zero = Model::zero();
  for (double r : {0.5, 0.8, 1.0}) {
    add("x1 n=3", pohozaev_residual(s.x1(), zero, {}, r, s.eopt));
    add("x1 n=3", ibp_residual(s.x1(), zero, {}, r, s.eopt));
  }
  for (const EllipticFixture& f : one_d_fixtures()) {
    for (double r : {1.0, 2.0, 3.0}) {
      add(f.name, pohozaev_residual(*f.u, f.model, {}, r, s.eopt));
      add(f.name, ibp_residual(*f.u, f.model, {}, r, s.eopt));
    }
  }
  const auto noise = grid_sampler(noise_field(CartesianGrid::cube(1, -M_PI, M_PI, 2001), 1, 7, 1.0));
  const Model hh = Model::helmholtz(0.0);
  for (const IdentityReport& r : {pohozaev_residual(*noise, hh, {}, 2.0, s.eopt), ibp_residual(*noise, hh, {}, 2.0, s.eopt)}) {
    c.checks.push_back({"noise control " + r.identity + " residual > 10 tol", r.residual, 10.0 * r.tolerance,
                        r.residual > 10.0 * r.tolerance});
  }
  return c;
}

CriterionResult elliptic_monotonicity(Suite& s) {
  CriterionResult c{4, "elliptic monotonicity identity", CriterionStatus::Pass, {}, {}};
  s.x1();
  std::vector<EllipticFixture> fixtures;
  fixtures.push_back({"x1 n=3", s.x1_3d, Model::zero(), 1.0, linspace(0.2, 1.0, 11)});
  for (EllipticFixture& f : one_d_fixtures()) {
    f.radii = linspace(0.3, 3.0, 11);
    fixtures.push_back(std::move(f));
  }
  fixtures.push_back({"noise", grid_sampler(noise_field(CartesianGrid::cube(1, -M_PI, M_PI, 2001), 1, 7, 1.0)),
                      Model::helmholtz(0.0), 1.0, linspace(0.3, 3.0, 11)});
  for (const EllipticFixture& f : fixtures) {
    const bool solution = f.name != "noise";
    const std::size_t pairs = f.radii.size() - 1;
    std::vector<IdentityReport> rep(solution ? pairs : 0);
    std::vector<double> bdry(f.radii.size());
    const Quadrature quad(f.u->dim(), s.eopt.quadrature);
    parallel_for(rep.size() + bdry.size(), [&](std::size_t k) {
      if (k < rep.size()) {
        rep[k] = verify_monotonicity_elliptic(*f.u, f.model, {}, f.beta, f.radii[k], f.radii[k + 1], s.eopt);
      } else {
        const std::size_t j = k - rep.size();
        bdry[j] = phi_derivative_decomposition(*f.u, f.model, {}, f.beta, f.radii[j], quad).boundary_part;
      }
    });
    if (solution) {
      std::size_t worst = 0;
      bool all = true;
      for (std::size_t k = 0; k < rep.size(); ++k) {
        all = all && rep[k].pass;
        if (rep[k].residual / rep[k].tolerance > rep[worst].residual / rep[worst].tolerance) worst = k;
      }
      c.checks.push_back({"worst of " + std::to_string(rep.size()) + " pairs " + f.name, rep[worst].residual,
                          rep[worst].tolerance, all});
    }
    const double mn = *std::min_element(bdry.begin(), bdry.end());
    c.checks.push_back({"min boundary summand >= 0 " + f.name, mn, 0.0, mn >= 0.0});
  }
  return c;
}

CriterionResult homogeneous_invariance(Suite& s) {
  CriterionResult c{5, "homogeneous fields give constant Phi", CriterionStatus::Pass, {}, {}};
  const Model zero = Model::zero();
  const std::vector<double> radii = linspace(0.2, 1.0, 9);
  auto spread = [&](const FieldSampler& u, double beta, double& max_abs) {
    const Quadrature quad(u.dim(), s.eopt.quadrature);
    std::vector<double> v(radii.size());
    parallel_for(radii.size(), [&](std::size_t k) { v[k] = phi(u, zero, {}, beta, radii[k], quad).phi; });
    max_abs = 0.0;
    for (double x : v) max_abs = std::max(max_abs, std::abs(x));
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  };
  double m1 = 0.0, m2 = 0.0;
  const double s1 = spread(s.x1(), 1.0, m1);
  c.checks.push_back(upper("spread x1 n=3 beta=1", s1, 1e-3 * (1.0 + m1)));
  c.checks.push_back(upper("max |Phi| x1 n=3 beta=1", m1, 1e-3));
  const auto x1x2 = grid_sampler(exact_field("x1x2", CartesianGrid::cube(2, -1.2, 1.2, 257)));
  const double s2 = spread(*x1x2, 2.0, m2);
  c.checks.push_back(upper("spread x1x2 n=2 beta=2", s2, 1e-3 * (1.0 + m2)));
  return c;
}

CriterionResult beta_admissibility(Suite&) {
  CriterionResult c{6, "beta admissibility intervals", CriterionStatus::Pass, {}, {}};
  const std::vector<double> betas = linspace(-2.0, 8.0, 21);
  auto mismatches = [&](const Model& m, Interval box, const std::function<bool(double)>& expected) {
    const AdmissibilityReport rep = pointwise_beta_interval(m, {box}, betas.front(), betas.back(), 21);
    double bad = 0.0;
    for (std::size_t k = 0; k < rep.betas.size(); ++k) bad += rep.admissible[k] != expected(rep.betas[k]) ? 1.0 : 0.0;
    return bad;
  };
  c.checks.push_back(upper("single_power p=1/2 mismatches vs beta >= 4",
                           mismatches(Model::single_power(0.5), {0.0, 4.0}, [](double b) { return b >= 4.0; }), 0.0));
  c.checks.push_back(upper("single_power p=3 mismatches vs beta <= -1",
                           mismatches(Model::single_power(3.0), {-2.0, 2.0}, [](double b) { return b <= -1.0; }), 0.0));
  for (int m : {1, 2}) {
    const Model gl = Model::ginzburg_landau(0.8, m);
    double worst = 0.0;
    for (double beta : {1.5, 2.0, 3.0}) {
      for (int k = 0; k < 16; ++k) {
        const double a = 2.0 * M_PI * k / 16;
        double u[2] = {m == 1 ? (k % 2 ? 1.0 : -1.0) : std::cos(a), std::sin(a)};
        worst = std::max(worst, std::abs(gl.interior_integrand(beta, u)));
      }
    }
    c.checks.push_back(upper("ginzburg_landau m=" + std::to_string(m) + " integrand at |u|=1", worst, 1e-12));
  }
  return c;
}

CriterionResult caloric_invariance(Suite& s) {
  CriterionResult c{7, "caloric x1 gives Psi = 0", CriterionStatus::Pass, {}, {}};
  const Model zero = Model::zero();
  const std::vector<double> radii = linspace(0.05, 0.2, 7);
  std::vector<PsiValue> v(radii.size());
  std::vector<PsiDerivative> d(radii.size());
  const auto& u = s.caloric();
  parallel_for(radii.size(), [&](std::size_t k) {
    v[k] = psi(u, zero, 0.2, {}, 1.0, radii[k], Side::Minus, s.popt);
    d[k] = psi_derivative_decomposition(u, zero, 0.2, {}, 1.0, radii[k], Side::Minus, s.popt);
  });
  double mp = 0.0, mr = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    mp = std::max(mp, std::abs(v[k].psi));
    mr = std::max(mr, std::abs(d[k].residual_part));
  }
  c.checks.push_back(upper("max |Psi-|", mp, 1e-3));
  c.checks.push_back(upper("max residual summand", mr, 1e-6));
  return c;
}

struct ParabolicFixture {
  std::string name;
  std::shared_ptr<const SpaceTimeSampler> u;
  Model model;
  double T;
  double beta;
  std::vector<double> radii;
};

CriterionResult parabolic_identity(Suite& s, Side side) {
  const bool plus = side == Side::Plus;
  CriterionResult c{8, plus ? "parabolic monotonicity identity, t > T layers" : "parabolic monotonicity identity",
                    CriterionStatus::Pass, {}, {}};
  if (plus && s.opt.convention == KernelConvention::Literal) {
    c.status = CriterionStatus::Skipped;
    c.note = "the literal kernel grows in x for t > T; plus-side checks run under signed_abs_exponent";
    return c;
  }
  std::vector<ParabolicFixture> fixtures;
  if (!plus) {
    s.caloric();
    fixtures.push_back({"caloric_linear grid", s.caloric_grid, Model::zero(), 0.2, 0.5, linspace(0.05, 0.2, 6)});
  }
  fixtures.push_back({"exp_growth", exact_spacetime_sampler("exp_growth", 1), Model::helmholtz(0.0), 0.0, 0.5,
                      linspace(0.1, 0.3, 6)});
  ParabolicOptions popt = s.popt;
  popt.n_quad_r = 16;
  for (const ParabolicFixture& f : fixtures) {
    std::vector<IdentityReport> rep(f.radii.size() - 1);
    parallel_for(rep.size(), [&](std::size_t k) {
      rep[k] = verify_monotonicity_parabolic(*f.u, f.model, f.T, {}, f.beta, f.radii[k], f.radii[k + 1], side, popt);
    });
    std::size_t worst = 0;
    bool all = true;
    for (std::size_t k = 0; k < rep.size(); ++k) {
      all = all && rep[k].pass;
      if (rep[k].residual / rep[k].tolerance > rep[worst].residual / rep[worst].tolerance) worst = k;
    }
    c.checks.push_back({"worst of " + std::to_string(rep.size()) + " pairs " + f.name, rep[worst].residual,
                        rep[worst].tolerance, all});
  }
  if (!plus) {
    const SpaceTimeGrid st(CartesianGrid::cube(1, -3.0, 3.0, 601), 0.0, 1.0, 101);
    const GridSpaceTimeSampler noise(std::make_shared<const SpaceTimeField>(noise_spacetime(st, 1, 11, 1.0)));
    const std::vector<double> radii{0.1, 0.2, 0.3, 0.4};
    std::vector<double> res(radii.size());
    const Model hh = Model::helmholtz(0.0);
    parallel_for(radii.size(), [&](std::size_t k) {
      res[k] = psi_derivative_decomposition(noise, hh, 1.0, {}, 1.0, radii[k], Side::Minus, s.popt).residual_part;
    });
    const double mn = *std::min_element(res.begin(), res.end());
    c.checks.push_back({"min residual summand >= 0 noise", mn, 0.0, mn >= 0.0});
  }
  return c;
}

CriterionResult free_boundary(Suite& s) {
  CriterionResult c{9, "free-boundary functional with envelope", CriterionStatus::Pass, {}, {}};
  {
    const SpaceTimeGrid st(CartesianGrid::cube(1, -1.5, 1.5, 301), 0.0, 1.0, 101);
    auto zero = std::make_shared<const SpaceTimeField>(exact_spacetime("zero", st));
    const GridSpaceTimeSampler u(zero);
    const CoincidenceSet chi = coincidence_set(*zero);
    const double C = 0.7;
    double worst = 0.0;
    for (double r : {0.1, 0.2, 0.3, 0.4}) {
      const FreeBoundaryPsi p = psi_free_boundary(u, Model::zero(), chi, 1.0, {}, 2.0, r, Side::Minus, C, s.popt);
      const double ce = C * error_integral_E(r, 1, 2.0);
      worst = std::max(worst, std::abs(p.total - ce) / std::max(1.0, ce));
    }
    c.checks.push_back(upper("u = 0: |total - C E(r)|", worst, 1e-12));
  }
  {
    const std::vector<double> radii = linspace(0.05, 0.5, 50);
    double min_step = INFINITY;
    for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
      const double a = error_integral_E(radii[k], 1, 2.0), b = error_integral_E(radii[k + 1], 1, 2.0);
      min_step = std::min(min_step, (b - a) / b);
    }
    c.checks.push_back({"E(r) strictly increasing, min relative step", min_step, 0.0, min_step > 0.0});
  }
  {
    const auto grid = CartesianGrid::cube(1, -1.5, 1.5, 1201);
    const Model model = Model::custom(1, "-0.03*log(cosh(u/0.03))", {"-tanh(u/0.03)"});
    ParabolicSolverConfig cfg;
    cfg.theta = 1.0;
    auto run = std::make_shared<FreeBoundaryRun>(
        simulate_free_boundary(model, SpaceTimeGrid(grid, 0.0, 1.0, 1001), exact_field("plateau", grid, {{"radius", 0.6}}), cfg, {2e-3, 2e-3}));
    const GridSpaceTimeSampler u(std::shared_ptr<const SpaceTimeField>(run, &run->field));
    const double beta = 2.0;
    ParabolicOptions popt = s.popt;
    popt.check_identity = false;
    const CalibrationReport cal = calibrate_C(u, model, &run->chi, 1.0, {}, beta, Side::Minus,
                                              linspace(0.1, 0.45, 29), popt);
    const ParabolicFunctionalReport rep =
        psi_scan(u, model, 1.0, {}, beta, Side::Minus, 0.1, 0.45, 8, popt, &run->chi, cal.C);
    double worst_drop = 0.0;
    for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k) {
      worst_drop = std::max(worst_drop, rep.rows[k].total - rep.rows[k + 1].total);
    }
    c.checks.push_back({"restoring fixture: " + std::to_string(rep.monotone_checks) + " pairs, largest decrease of Psi + C E",
                        worst_drop, rep.max_monotone_tolerance, rep.monotone_violations == 0 && rep.monotone_checks > 0});
    c.note = "C = " + format_double(cal.C);
  }
  return c;
}

CriterionResult blowup(Suite& s) {
  CriterionResult c{10, "blow-up degree and convergence", CriterionStatus::Pass, {}, {}};
  const auto g2 = CartesianGrid::cube(2, -1.2, 1.2, 257);
  struct Case {
    double beta;
    const char* profile;
  };
  for (Case k : {Case{0.5, "one"}, Case{1.0, "d1"}, Case{1.5, "one"}, Case{2.0, "d1d2"}}) {
    const auto u = grid_sampler(manufactured_homogeneous(k.beta, angular_profile(k.profile), g2));
    const DegreeFit fit = estimate_degree(*u, {}, log_radii(0.4, 1.0, 8), s.eopt.quadrature);
    c.checks.push_back(upper("degree " + format_double(k.beta) + " " + k.profile, std::abs(fit.beta - k.beta), 1e-3));
  }
  const auto kink = grid_sampler(exact_field("gl_kink", CartesianGrid::cube(1, -0.5, 0.5, 2001), {{"epsilon", 1.0}}));
  BlowupOptions bo;
  bo.quadrature = s.eopt.quadrature;
  const BlowupReport rep = blowup_study(kink, Model::ginzburg_landau(1.0), {}, 1.0, {0.4, 0.2, 0.1, 0.05}, bo);
  double worst_rise = -INFINITY;
  for (std::size_t k = 0; k + 1 < rep.scales.size(); ++k) {
    worst_rise = std::max(worst_rise, rep.scales[k + 1].residual - rep.scales[k].residual);
  }
  c.checks.push_back({"gl_kink residual decreasing, largest step", worst_rise, 0.0, rep.residual_decreasing});
  c.checks.push_back(upper("gl_kink |degree - 1| at rho=0.05", std::abs(rep.scales.back().degree - 1.0), 0.02));
  return c;
}

std::vector<CriterionResult> run_criteria(const SelftestOptions& opt) {
  Suite s(opt);
  std::vector<std::function<CriterionResult(Suite&)>> list{
      gradient_structure,
      geometry_oracles,
      elliptic_identities,
      elliptic_monotonicity,
      homogeneous_invariance,
      beta_admissibility,
      caloric_invariance,
      [](Suite& x) { return parabolic_identity(x, Side::Minus); },
      [](Suite& x) { return parabolic_identity(x, Side::Plus); },
      free_boundary,
      blowup,
  };
  const std::vector<std::pair<int, std::string>> titles{
      {1, "gradient structure f = grad F"},
      {2, "sphere and kernel oracles"},
      {3, "elliptic Pohozaev and integration-by-parts identities"},
      {4, "elliptic monotonicity identity"},
      {5, "homogeneous fields give constant Phi"},
      {6, "beta admissibility intervals"},
      {7, "caloric x1 gives Psi = 0"},
      {8, "parabolic monotonicity identity"},
      {8, "parabolic monotonicity identity, t > T layers"},
      {9, "free-boundary functional with envelope"},
      {10, "blow-up degree and convergence"}};
  std::vector<CriterionResult> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    CriterionResult r;
    try {
      r = list[k](s);
      if (r.status != CriterionStatus::Skipped) {
        const bool ok = std::all_of(r.checks.begin(), r.checks.end(), [](const CheckResult& x) { return x.pass; });
        r.status = ok && !r.checks.empty() ? CriterionStatus::Pass : CriterionStatus::Fail;
      }
    } catch (const std::exception& e) {
      r = CriterionResult{titles[k].first, titles[k].second, CriterionStatus::Fail, {}, e.what()};
    }
    out.push_back(std::move(r));
  }
  return out;
}

Json criteria_json(const std::vector<CriterionResult>& criteria) {
  Json arr = Json::array();
  for (const CriterionResult& c : criteria) {
    Json e;
    e["id"] = c.id;
    e["title"] = c.title;
    e["status"] = criterion_status_name(c.status);
    if (!c.note.empty()) e["note"] = c.note;
    Json checks = Json::array();
    for (const CheckResult& k : c.checks) {
      checks.push_back({{"check", k.name},
                        {"measured", json_number(k.measured)},
                        {"tolerance", json_number(k.tolerance)},
                        {"pass", k.pass}});
    }
    e["checks"] = checks;
    arr.push_back(e);
  }
  return arr;
}

}  // namespace

SelftestReport selftest(const SelftestOptions& opt) {
  SelftestReport rep;
  rep.convention = opt.convention;
  rep.sphere_nodes = opt.sphere_nodes;
  rep.criteria = run_criteria(opt);
  if (opt.determinism_rerun) {
    const std::string first = criteria_json(rep.criteria).dump();
    const std::string second = criteria_json(run_criteria(opt)).dump();
    std::size_t at = 0;
    while (at < first.size() && at < second.size() && first[at] == second[at]) ++at;
    const bool same = first == second;
    CriterionResult c{11, "determinism of repeated runs", same ? CriterionStatus::Pass : CriterionStatus::Fail, {}, {}};
    c.checks.push_back({"serialized report bytes differing", same ? 0.0 : 1.0, 0.0, same});
    if (!same) c.note = "reports first differ at byte " + std::to_string(at);
    rep.criteria.push_back(std::move(c));
  }
  return rep;
}

Json to_json(const SelftestReport& r) {
  Json j;
  j["convention"] = convention_name(r.convention);
  j["sphere_nodes"] = r.sphere_nodes;
  j["passed"] = r.passed();
  j["criteria"] = criteria_json(r.criteria);
  return j;
}

std::string format_table(const SelftestReport& r) {
  std::ostringstream os;
  char buf[256];
  for (const CriterionResult& c : r.criteria) {
    std::snprintf(buf, sizeof buf, "[%-7s] %2d  %s", criterion_status_name(c.status), c.id, c.title.c_str());
    os << buf;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << '\n';
    for (const CheckResult& k : c.checks) {
      std::snprintf(buf, sizeof buf, "      %-4s %-62s %12.4e  tol %10.3e", k.pass ? "ok" : "FAIL", k.name.c_str(),
                    k.measured, k.tolerance);
      os << buf << '\n';
    }
  }
  return os.str();
}

}  // namespace monotone
