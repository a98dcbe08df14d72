#include "monotone/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "monotone/elliptic.hpp"
#include "monotone/error.hpp"
#include "monotone/format.hpp"
#include "monotone/parabolic.hpp"
#include "monotone/parallel.hpp"

namespace monotone {

namespace {

double max_norm_of_nodes(const CartesianGrid& g) {
  double best = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const double a = std::max(std::abs(g.axis(d).lo), std::abs(g.axis(d).hi));
    best += a * a;
  }
  return std::sqrt(best);
}

void check_rhos(const std::vector<double>& rhos) {
  if (rhos.empty()) throw ArgumentError("blow-up study needs at least one scale");
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    if (!(rhos[k] > 0.0)) throw ArgumentError("blow-up scales must be positive");
    if (k > 0 && !(rhos[k] < rhos[k - 1])) throw ArgumentError("blow-up scales must be strictly decreasing");
  }
}

DegreeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DegreeFit fit;
  fit.beta = sxy / sxx;
  fit.intercept = my - fit.beta * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.beta * x[i]);
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

// Visits Gauss-Legendre nodes of the parabolic probe window.
template <class Visit>
void for_each_window_node(const SpaceTimeSampler& u, const BlowupOptions& opt, const Quadrature& quad, Visit&& visit) {
  if (opt.t_lo < u.t_min() - 1e-12 || opt.t_hi > u.t_max() + 1e-12) {
    throw OutOfDomainError("probe window [" + format_double(opt.t_lo) + ", " + format_double(opt.t_hi) +
                           "] leaves the time range of the rescaled field");
  }
  require_radius(u.max_ball_radius({}), opt.x_radius, "probe window radius");
  std::vector<double> cuts{opt.t_lo};
  for (double t : u.time_breaks(opt.t_lo, opt.t_hi)) cuts.push_back(t);
  if (cuts.size() == 1) {
    for (int k = 1; k < opt.time_panels; ++k) cuts.push_back(opt.t_lo + (opt.t_hi - opt.t_lo) * k / opt.time_panels);
  }
  cuts.push_back(opt.t_hi);
  const GaussLegendre rule(opt.layer.time_points);
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double a = cuts[seg], b = cuts[seg + 1];
    for (int i = 0; i < rule.size(); ++i) {
      const double t = a + 0.5 * (b - a) * (rule.nodes[i] + 1.0);
      const double wt = 0.5 * (b - a) * rule.weights[i];
      quad.for_each_ball_node({}, opt.x_radius, [&](const Point& x, double, double w) { visit(t, x, wt * w); });
    }
  }
}

}  // namespace

std::vector<double> log_radii(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ArgumentError("log_radii needs 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = hi * std::pow(lo / hi, static_cast<double>(k) / (count - 1));
  out.back() = lo;
  return out;
}

Field rescale_elliptic(const FieldSampler& u, const Point& x0, double rho, double beta, const CartesianGrid& probe) {
  if (!(rho > 0.0)) throw ArgumentError("rescaling needs rho > 0");
  if (probe.dim() != u.dim()) throw ArgumentError("probe grid dimension differs from the field");
  const double reach = rho * max_norm_of_nodes(probe);
  require_radius(u.max_ball_radius(x0), reach, "rescaling window");
  FieldMeta meta;
  meta.provenance = Provenance::Rescaled;
  meta.source = "rho=" + format_double(rho) + " beta=" + format_double(beta);
  Field out(probe, u.components(), meta);
  const double scale = std::pow(rho, -beta);
  const int n = u.dim();
  Jet j;
  j.m = u.components();
  for (std::size_t node = 0; node < probe.node_count(); ++node) {
    const Point y = probe.node(node);
    Point p = x0;
    for (int d = 0; d < n; ++d) p[d] += rho * y[d];
    u.sample(p, j);
    for (int c = 0; c < j.m; ++c) out.at(node, c) = scale * j.u[c];
  }
  out.require_finite();
  return out;
}

SpaceTimeField rescale_parabolic(const SpaceTimeSampler& u, double T, const Point& x0, double rho, double beta,
                                 const SpaceTimeGrid& probe) {
  if (!(rho > 0.0)) throw ArgumentError("rescaling needs rho > 0");
  if (probe.space().dim() != u.dim()) throw ArgumentError("probe grid dimension differs from the field");
  const double reach = rho * max_norm_of_nodes(probe.space());
  require_radius(u.max_ball_radius(x0), reach, "rescaling window");
  const double ta = T + rho * rho * probe.t1(), tb = T + rho * rho * probe.t2();
  if (ta < u.t_min() - 1e-12 || tb > u.t_max() + 1e-12) {
    throw OutOfDomainError("rescaled time window [" + format_double(ta) + ", " + format_double(tb) +
                           "] leaves the time range of the field");
  }
  FieldMeta meta;
  meta.provenance = Provenance::Rescaled;
  meta.source = "T=" + format_double(T) + " rho=" + format_double(rho) + " beta=" + format_double(beta);
  SpaceTimeField out(probe, u.components(), meta);
  const double scale = std::pow(rho, -beta);
  const int n = u.dim();
  SpaceTimeJet j;
  j.m = u.components();
  for (int k = 0; k < probe.slices(); ++k) {
    const double t = std::clamp(T + rho * rho * probe.time(k), u.t_min(), u.t_max());
    Field& slice = out.slice(k);
    for (std::size_t node = 0; node < probe.space().node_count(); ++node) {
      const Point y = probe.space().node(node);
      Point p = x0;
      for (int d = 0; d < n; ++d) p[d] += rho * y[d];
      u.sample(t, p, j);
      for (int c = 0; c < j.m; ++c) slice.at(node, c) = scale * j.u[c];
    }
  }
  out.require_finite();
  return out;
}

double homogeneity_residual(const FieldSampler& u, const Point& x0, double beta, double r_in, double r_out,
                            const QuadratureConfig& cfg) {
  if (!(r_in > 0.0) || !(r_out > r_in)) throw ArgumentError("annulus needs 0 < r_in < r_out");
  require_radius(u.max_ball_radius(x0), r_out, "annulus outer radius");
  const int n = u.dim();
  const Quadrature quad(n, cfg);
  Jet j;
  j.m = u.components();
  double sum = 0.0;
  quad.for_each_shell_node(x0, r_in, r_out, [&](const Point& p, double rho, double w) {
    u.sample(p, j);
    double s = 0.0;
    for (int c = 0; c < j.m; ++c) {
      double e = -beta * j.u[c];
      for (int d = 0; d < n; ++d) e += j.grad[c][d] * (p[d] - x0[d]);
      s += e * e;
    }
    sum += w * 2.0 * std::pow(rho, -n - 2.0 * beta) * s;
  });
  return sum;
}

double parabolic_homogeneity_residual(const SpaceTimeSampler& u, double beta, const BlowupOptions& opt) {
  const int n = u.dim();
  const Quadrature quad(n, opt.quadrature);
  SpaceTimeJet j;
  j.m = u.components();
  double sum = 0.0;
  const Point origin{};
  for_each_window_node(u, opt, quad, [&](double t, const Point& x, double w) {
    u.sample(t, x, j);
    double s = 0.0;
    for (int c = 0; c < j.m; ++c) {
      const double e = dot(j.grad[c], x, n) + 2.0 * t * j.u_t[c] - beta * j.u[c];
      s += e * e;
    }
    sum += w * s * backward_heat_kernel(t, x, 0.0, origin, n, opt.layer.convention) / (-t);
  });
  return sum;
}

DegreeFit estimate_degree(const FieldSampler& u, const Point& x0, const std::vector<double>& radii,
                          const QuadratureConfig& cfg) {
  if (radii.size() < 3) throw ArgumentError("degree estimate needs at least 3 radii");
  const int n = u.dim();
  const Quadrature quad(n, cfg);
  const double area = unit_sphere_area(n);
  Jet j;
  j.m = u.components();
  std::vector<double> lx, ly;
  for (double r : radii) {
    require_radius(u.max_ball_radius(x0), r, "degree probe radius");
    double s = 0.0;
    quad.for_each_sphere_node(x0, r, [&](const Point& p, const Point&, double w) {
      u.sample(p, j);
      s += w * j.u_squared();
    });
    const double mean = s / (area * std::pow(r, n - 1));
    if (!(mean > 0.0)) {
      throw HypothesisError("undefined degree: field vanishes on the probe sphere r=" + format_double(r));
    }
    lx.push_back(std::log(r));
    ly.push_back(0.5 * std::log(mean));
  }
  return fit_line(lx, ly);
}

DegreeFit estimate_degree_parabolic(const SpaceTimeSampler& u, const std::vector<double>& lambdas,
                                    const BlowupOptions& opt) {
  if (lambdas.size() < 3) throw ArgumentError("degree estimate needs at least 3 scales");
  const int n = u.dim();
  const Quadrature quad(n, opt.quadrature);
  SpaceTimeJet j;
  j.m = u.components();
  std::vector<double> lx, ly;
  for (double lam : lambdas) {
    if (!(lam > 0.0) || lam > 1.0) throw ArgumentError("path scales must lie in (0, 1]");
    double s = 0.0, vol = 0.0;
    for_each_window_node(u, opt, quad, [&](double t, const Point& x, double w) {
      Point p{};
      for (int d = 0; d < n; ++d) p[d] = lam * x[d];
      u.sample(lam * lam * t, p, j);
      s += w * j.u_squared();
      vol += w;
    });
    if (!(s > 0.0)) throw HypothesisError("undefined degree: field vanishes on the probe window");
    lx.push_back(std::log(lam));
    ly.push_back(0.5 * std::log(s / vol));
  }
  return fit_line(lx, ly);
}

namespace {

void finish_report(BlowupReport& rep, const BlowupOptions& opt) {
  std::vector<double> lx, ly;
  for (const BlowupScale& s : rep.scales) {
    if (s.h1_norm > 0.0) {
      lx.push_back(std::log(s.rho));
      ly.push_back(std::log(s.h1_norm));
    }
  }
  if (lx.size() >= 2) rep.norm_slope = fit_line(lx, ly).beta;
  rep.degenerate = lx.size() < rep.scales.size() || rep.norm_slope >= opt.degenerate_slope;

  rep.residual_decreasing = true;
  for (std::size_t k = 1; k < rep.scales.size(); ++k) {
    if (!(rep.scales[k].residual < rep.scales[k - 1].residual)) rep.residual_decreasing = false;
  }

  std::vector<const BlowupScale*> valid;
  for (auto it = rep.scales.rbegin(); it != rep.scales.rend() && valid.size() < 3; ++it) {
    if (std::isfinite(it->functional)) valid.push_back(&*it);
  }
  if (valid.size() == 3) {
    const double r3[3] = {valid[0]->rho, valid[1]->rho, valid[2]->rho};
    const double v3[3] = {valid[0]->functional, valid[1]->functional, valid[2]->functional};
    rep.limit_M = richardson_limit(r3, v3);
  } else if (!valid.empty()) {
    rep.limit_M = valid.front()->functional;
  } else {
    rep.limit_M = NAN;
  }

  const double base = std::max(std::abs(rep.scales.front().growth), 1.0);
  double worst = 0.0;
  for (const BlowupScale& s : rep.scales) worst = std::max(worst, std::abs(s.growth));
  if (!std::isfinite(worst) || worst > opt.growth_limit * base) {
    rep.growth_ok = false;
    rep.warning = "growth estimate fails: sup " + format_double(worst) + " exceeds " +
                  format_double(opt.growth_limit) + " x " + format_double(base);
  }
}

}  // namespace

BlowupReport blowup_study(std::shared_ptr<const FieldSampler> u, const Model& model, const Point& x0, double beta,
                          const std::vector<double>& rhos, const BlowupOptions& opt) {
  check_rhos(rhos);
  if (u->components() != model.components()) throw ArgumentError("field and model component counts differ");
  const int n = u->dim();
  require_radius(u->max_ball_radius(x0), rhos.front() * opt.r_out, "blow-up window");
  const std::vector<double> probe = log_radii(opt.r_in, opt.r_out, opt.degree_radii);
  const Quadrature quad(n, opt.quadrature);

  BlowupReport rep;
  rep.dim = n;
  rep.x0 = x0;
  rep.beta = beta;
  rep.scales.resize(rhos.size());
  std::vector<std::shared_ptr<RescaledSampler>> views(rhos.size());
  for (std::size_t k = 0; k < rhos.size(); ++k) views[k] = std::make_shared<RescaledSampler>(u, x0, rhos[k], beta);

  parallel_for(rhos.size(), [&](std::size_t k) {
    const RescaledSampler& v = *views[k];
    BlowupScale& s = rep.scales[k];
    s.rho = rhos[k];
    Jet a, b;
    a.m = b.m = v.components();
    double l2 = 0.0, g2 = 0.0, diff = 0.0;
    quad.for_each_shell_node({}, opt.r_in, opt.r_out, [&](const Point& p, double, double w) {
      v.sample(p, a);
      l2 += w * a.u_squared();
      g2 += w * a.grad_squared(n);
      if (k > 0) {
        views[k - 1]->sample(p, b);
        for (int c = 0; c < a.m; ++c) diff += w * (a.u[c] - b.u[c]) * (a.u[c] - b.u[c]);
      }
    });
    s.l2_norm = std::sqrt(l2);
    s.grad_norm = std::sqrt(g2);
    s.h1_norm = std::sqrt(l2 + g2);
    s.cauchy = std::sqrt(diff);
    s.residual = homogeneity_residual(v, {}, beta, opt.r_in, opt.r_out, opt.quadrature);
    try {
      s.degree = estimate_degree(v, {}, probe, opt.quadrature).beta;
    } catch (const HypothesisError&) {
      s.degree = NAN;
    }
    s.functional = phi(*u, model, x0, beta, rhos[k], quad).phi;
    Jet j;
    j.m = u->components();
    double surf = 0.0, vol = 0.0;
    quad.for_each_sphere_node(x0, rhos[k], [&](const Point& p, const Point&, double w) {
      u->sample(p, j);
      surf += w * j.u_squared();
    });
    quad.for_each_ball_node(x0, rhos[k], [&](const Point& p, double, double w) {
      u->sample(p, j);
      vol += w * 2.0 * model.F(j.u.data());
    });
    s.growth = std::pow(rhos[k], -n - 2.0 * beta + 1.0) * surf + std::pow(rhos[k], -n - 2.0 * beta + 2.0) * std::abs(vol);
  });
  finish_report(rep, opt);
  return rep;
}

BlowupReport blowup_study(std::shared_ptr<const SpaceTimeSampler> u, const Model& model, double T, const Point& x0,
                          double beta, const std::vector<double>& rhos, const BlowupOptions& opt) {
  check_rhos(rhos);
  if (u->components() != model.components()) throw ArgumentError("field and model component counts differ");
  const int n = u->dim();
  const Quadrature quad(n, opt.quadrature);
  const std::vector<double> lambdas = log_radii(0.5, 1.0, 5);

  BlowupReport rep;
  rep.parabolic = true;
  rep.dim = n;
  rep.x0 = x0;
  rep.T = T;
  rep.beta = beta;
  rep.scales.resize(rhos.size());
  std::vector<std::shared_ptr<RescaledSpaceTimeSampler>> views(rhos.size());
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    views[k] = std::make_shared<RescaledSpaceTimeSampler>(u, T, x0, rhos[k], beta);
  }
  ParabolicOptions popt;
  popt.quadrature = opt.quadrature;
  popt.layer = opt.layer;

  parallel_for(rhos.size(), [&](std::size_t k) {
    const RescaledSpaceTimeSampler& v = *views[k];
    BlowupScale& s = rep.scales[k];
    s.rho = rhos[k];
    SpaceTimeJet a, b;
    a.m = b.m = v.components();
    double l2 = 0.0, g2 = 0.0, diff = 0.0;
    for_each_window_node(v, opt, quad, [&](double t, const Point& x, double w) {
      v.sample(t, x, a);
      l2 += w * a.u_squared();
      g2 += w * a.grad_squared(n);
      if (k > 0) {
        views[k - 1]->sample(t, x, b);
        for (int c = 0; c < a.m; ++c) diff += w * (a.u[c] - b.u[c]) * (a.u[c] - b.u[c]);
      }
    });
    s.l2_norm = std::sqrt(l2);
    s.grad_norm = std::sqrt(g2);
    s.h1_norm = std::sqrt(l2 + g2);
    s.cauchy = std::sqrt(diff);
    s.residual = parabolic_homogeneity_residual(v, beta, opt);
    try {
      s.degree = estimate_degree_parabolic(v, lambdas, opt).beta;
    } catch (const HypothesisError&) {
      s.degree = NAN;
    }
    if (rhos[k] < psi_radius_limit(*u, T, Side::Minus)) {
      const PsiValue p = psi(*u, model, T, x0, beta, rhos[k], Side::Minus, popt);
      s.functional = p.psi;
      s.growth = std::abs(p.energy_term) + std::abs(p.u2_term);
    } else {
      s.functional = NAN;
      s.growth = 0.0;
    }
  });
  finish_report(rep, opt);
  return rep;
}

}  // namespace monotone
