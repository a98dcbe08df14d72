#include "monotone/solvers.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "monotone/error.hpp"
#include "monotone/format.hpp"
#include "monotone/sampler.hpp"

namespace monotone {

double discrete_laplacian(const Field& u, std::size_t node, int c) {
  const CartesianGrid& g = u.grid();
  double s = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const std::size_t st = g.stride(d);
    const double h = g.spacing(d);
    s += (u.at(node + st, c) + u.at(node - st, c) - 2.0 * u.at(node, c)) / (h * h);
  }
  return s;
}

double elliptic_residual(const Model& model, const Field& u) {
  const CartesianGrid& g = u.grid();
  const int m = u.components();
  double worst = 0.0;
  double fu[kMaxComponents];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.is_boundary(i)) continue;
    model.f(&u.values()[i * m], fu);
    for (int c = 0; c < m; ++c) worst = std::max(worst, std::abs(discrete_laplacian(u, i, c) + fu[c]));
  }
  return worst;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Newton machinery shared by the elliptic solve and the implicit time steps.
//   elliptic:  R(u) = L u + f(u)
//   step:      R(u) = u - u_prev - dt [theta (L u + chi f(u)) + (1 - theta) rhs_prev]
class NewtonSystem {
 public:
  NewtonSystem(const Model& model, const CartesianGrid& grid, bool neumann)
      : model_(model), grid_(grid), m_(model.components()), neumann_(neumann) {
    unknown_.assign(grid.node_count(), -1);
    long k = 0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      if (neumann || !grid.is_boundary(i)) unknown_[i] = k++;
    }
    nodes_ = static_cast<std::size_t>(k);
  }

  std::size_t unknowns() const { return nodes_ * m_; }

  void set_step(double dt, double theta, const Field* prev, const std::vector<double>* rhs_prev,
                const std::vector<double>* chi) {
    step_ = true;
    dt_ = dt;
    theta_ = theta;
    prev_ = prev;
    rhs_prev_ = rhs_prev;
    chi_ = chi;
  }

  // L u + chi f(u) at every unknown node, node-major.
  void operator_values(const Field& u, std::vector<double>& out) const {
    out.assign(unknowns(), 0.0);
    double fu[kMaxComponents];
    for (std::size_t i = 0; i < grid_.node_count(); ++i) {
      const long k = unknown_[i];
      if (k < 0) continue;
      model_.f(&u.values()[i * m_], fu);
      const double w = chi_ ? (*chi_)[i] : 1.0;
      for (int c = 0; c < m_; ++c) out[k * m_ + c] = lap(u, i, c) + w * fu[c];
    }
  }

  void residual(const Field& u, Eigen::VectorXd& R) const {
    std::vector<double> op;
    operator_values(u, op);
    R.resize(static_cast<Eigen::Index>(unknowns()));
    for (std::size_t i = 0; i < grid_.node_count(); ++i) {
      const long k = unknown_[i];
      if (k < 0) continue;
      for (int c = 0; c < m_; ++c) {
        const std::size_t j = k * m_ + c;
        if (step_) {
          R[j] = u.at(i, c) - prev_->at(i, c) - dt_ * (theta_ * op[j] + (1.0 - theta_) * (*rhs_prev_)[j]);
        } else {
          R[j] = op[j];
        }
      }
    }
  }

  void jacobian(const Field& u, SpMat& J) const {
    std::vector<Triplet> trip;
    trip.reserve(unknowns() * (2 * grid_.dim() + 1 + m_));
    const double a = step_ ? -dt_ * theta_ : 1.0;
    double Jf[kMaxComponents * kMaxComponents];
    for (std::size_t i = 0; i < grid_.node_count(); ++i) {
      const long k = unknown_[i];
      if (k < 0) continue;
      const auto ijk = grid_.multi_index(i);
      model_.jacobian(&u.values()[i * m_], Jf);
      const double w = chi_ ? (*chi_)[i] : 1.0;
      for (int c = 0; c < m_; ++c) {
        const long row = k * m_ + c;
        double diag = step_ ? 1.0 : 0.0;
        for (int d = 0; d < grid_.dim(); ++d) {
          const double h2 = grid_.spacing(d) * grid_.spacing(d);
          const std::size_t st = grid_.stride(d);
          const int cnt = grid_.count(d);
          diag += a * (-2.0 / h2);
          if (ijk[d] == 0 || ijk[d] == cnt - 1) {
            // only reached with reflecting boundaries
            const std::size_t nb = ijk[d] == 0 ? i + st : i - st;
            trip.emplace_back(row, unknown_[nb] * m_ + c, a * 2.0 / h2);
            continue;
          }
          for (std::size_t nb : {i + st, i - st}) {
            if (unknown_[nb] >= 0) trip.emplace_back(row, unknown_[nb] * m_ + c, a / h2);
          }
        }
        for (int e = 0; e < m_; ++e) {
          const double v = a * w * Jf[c * m_ + e] + (e == c ? diag : 0.0);
          if (v != 0.0 || e == c) trip.emplace_back(row, k * m_ + e, v);
        }
      }
    }
    J.resize(static_cast<Eigen::Index>(unknowns()), static_cast<Eigen::Index>(unknowns()));
    J.setFromTriplets(trip.begin(), trip.end());
  }

  void add(Field& u, const Eigen::VectorXd& delta, double lambda) const {
    for (std::size_t i = 0; i < grid_.node_count(); ++i) {
      const long k = unknown_[i];
      if (k < 0) continue;
      for (int c = 0; c < m_; ++c) u.at(i, c) += lambda * delta[k * m_ + c];
    }
  }

  bool in_domain(const Field& u) const {
    for (std::size_t i = 0; i < grid_.node_count(); ++i) {
      if (unknown_[i] >= 0 && !model_.in_domain(&u.values()[i * m_])) return false;
    }
    return true;
  }

  // One nonlinear Gauss-Seidel sweep for the elliptic system.
  void gauss_seidel(Field& u) const {
    double fu[kMaxComponents], Jf[kMaxComponents * kMaxComponents];
    for (std::size_t i = 0; i < grid_.node_count(); ++i) {
      if (unknown_[i] < 0) continue;
      for (int c = 0; c < m_; ++c) {
        double* ui = &u.values()[i * m_];
        model_.f(ui, fu);
        model_.jacobian(ui, Jf);
        double diag = Jf[c * m_ + c];
        for (int d = 0; d < grid_.dim(); ++d) diag -= 2.0 / (grid_.spacing(d) * grid_.spacing(d));
        if (diag == 0.0) continue;
        const double trial = ui[c] - (lap(u, i, c) + fu[c]) / diag;
        const double old = ui[c];
        ui[c] = trial;
        if (!model_.in_domain(ui)) ui[c] = old;
      }
    }
  }

 private:
  double lap(const Field& u, std::size_t i, int c) const {
    double s = 0.0;
    const auto ijk = grid_.multi_index(i);
    for (int d = 0; d < grid_.dim(); ++d) {
      const std::size_t st = grid_.stride(d);
      const double h2 = grid_.spacing(d) * grid_.spacing(d);
      const int cnt = grid_.count(d);
      if (ijk[d] == 0) {
        s += 2.0 * (u.at(i + st, c) - u.at(i, c)) / h2;
      } else if (ijk[d] == cnt - 1) {
        s += 2.0 * (u.at(i - st, c) - u.at(i, c)) / h2;
      } else {
        s += (u.at(i + st, c) + u.at(i - st, c) - 2.0 * u.at(i, c)) / h2;
      }
    }
    return s;
  }

  const Model& model_;
  const CartesianGrid& grid_;
  int m_;
  bool neumann_;
  std::vector<long> unknown_;
  std::size_t nodes_ = 0;
  bool step_ = false;
  double dt_ = 0.0, theta_ = 1.0;
  const Field* prev_ = nullptr;
  const std::vector<double>* rhs_prev_ = nullptr;
  const std::vector<double>* chi_ = nullptr;
};

bool solve_linear(const SpMat& J, const Eigen::VectorXd& rhs, Eigen::VectorXd& x, std::size_t direct_limit) {
  if (static_cast<std::size_t>(J.rows()) <= direct_limit) {
    Eigen::SparseLU<SpMat> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) return false;
    x = lu.solve(rhs);
    return lu.info() == Eigen::Success;
  }
  Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> it;
  it.setTolerance(1e-12);
  it.setMaxIterations(2000);
  it.compute(J);
  x = it.solve(rhs);
  return it.info() == Eigen::Success;
}

std::string history_text(const std::vector<double>& h) {
  std::ostringstream os;
  os.precision(3);
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? ", " : "") << h[i];
  return os.str();
}

struct NewtonResult {
  double residual;
  int iterations;
};

NewtonResult newton(const NewtonSystem& sys, Field& u, double tol, int max_iter, double damping, double min_damping,
                    int gs_sweeps, std::size_t direct_limit, const std::string& what) {
  Eigen::VectorXd R, delta, Rt;
  sys.residual(u, R);
  double norm = R.size() ? R.lpNorm<Eigen::Infinity>() : 0.0;
  std::vector<double> history{norm};
  SpMat J;
  for (int it = 0; it < max_iter; ++it) {
    if (norm <= tol) return {norm, it};
    sys.jacobian(u, J);
    if (!solve_linear(J, -R, delta, direct_limit)) {
      throw ConvergenceError(what + ": linear solve failed; residual history [" + history_text(history) + "]");
    }
    double lambda = damping;
    bool accepted = false, any_in_domain = false;
    while (lambda >= min_damping) {
      Field trial = u;
      sys.add(trial, delta, lambda);
      if (sys.in_domain(trial)) {
        any_in_domain = true;
        sys.residual(trial, Rt);
        const double nt = Rt.lpNorm<Eigen::Infinity>();
        if (std::isfinite(nt) && nt < norm) {
          u = std::move(trial);
          R = Rt;
          norm = nt;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      if (!any_in_domain) {
        throw ModelDomainError(what + ": Newton iterate leaves the model's admissible range", -1);
      }
      if (gs_sweeps <= 0) break;
      for (int s = 0; s < gs_sweeps; ++s) sys.gauss_seidel(u);
      sys.residual(u, R);
      norm = R.lpNorm<Eigen::Infinity>();
    }
    history.push_back(norm);
  }
  if (norm <= tol) return {norm, max_iter};
  throw ConvergenceError(what + ": no convergence to " + format_double(tol) + "; residual history [" +
                         history_text(history) + "]");
}

}  // namespace

Field solve_elliptic(const Model& model, const Field& boundary, const EllipticSolverConfig& cfg) {
  if (boundary.components() != model.components()) {
    throw ArgumentError("boundary field has " + std::to_string(boundary.components()) + " components, model needs " +
                        std::to_string(model.components()));
  }
  boundary.require_finite();
  const CartesianGrid& g = boundary.grid();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.is_boundary(i)) model.require_domain(&boundary.values()[i * boundary.components()]);
  }
  Field u = boundary;
  // an inadmissible interior guess is replaced by the mean boundary value
  bool guess_ok = true;
  for (std::size_t i = 0; i < g.node_count() && guess_ok; ++i) {
    if (!model.in_domain(&u.values()[i * u.components()])) guess_ok = false;
  }
  if (!guess_ok) {
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
  NewtonSystem sys(model, g, false);
  const NewtonResult res = newton(sys, u, cfg.tol, cfg.max_iter, cfg.damping, cfg.min_damping,
                                  cfg.gauss_seidel_sweeps, cfg.direct_limit, "elliptic solve");
  u.meta().provenance = Provenance::Solved;
  u.meta().model = model.name();
  u.meta().source = "solve_elliptic";
  u.meta().solver_residual = res.residual;
  return u;
}

const char* boundary_policy_name(BoundaryPolicy p) {
  switch (p) {
    case BoundaryPolicy::DirichletFixed: return "dirichlet_fixed";
    case BoundaryPolicy::DirichletFunction: return "dirichlet_function";
    case BoundaryPolicy::Neumann: return "neumann";
  }
  return "unknown";
}

BoundaryPolicy boundary_policy_from_name(const std::string& name) {
  if (name == "dirichlet_fixed" || name == "dirichlet") return BoundaryPolicy::DirichletFixed;
  if (name == "dirichlet_function") return BoundaryPolicy::DirichletFunction;
  if (name == "neumann") return BoundaryPolicy::Neumann;
  throw ArgumentError("unknown boundary policy '" + name + "'");
}

namespace {

SpaceTimeField time_march(const Model& model, const SpaceTimeGrid& grid, const Field& initial,
                          const ParabolicSolverConfig& cfg, const Thresholds* mask,
                          std::vector<std::vector<std::uint8_t>>* lambda_out) {
  if (!(cfg.theta >= 0.5 && cfg.theta <= 1.0)) throw ArgumentError("theta must lie in [1/2, 1]");
  if (!(initial.grid() == grid.space())) throw ArgumentError("initial field grid differs from the space-time grid");
  if (initial.components() != model.components()) throw ArgumentError("initial field component count differs from model");
  if (cfg.boundary == BoundaryPolicy::DirichletFunction && !cfg.boundary_values) {
    throw ArgumentError("dirichlet_function policy needs boundary values");
  }
  initial.require_finite();
  const CartesianGrid& g = grid.space();
  const int m = model.components();
  for (std::size_t i = 0; i < g.node_count(); ++i) model.require_domain(&initial.values()[i * m]);

  FieldMeta meta;
  meta.provenance = Provenance::Solved;
  meta.model = model.name();
  meta.source = mask ? "simulate_free_boundary" : "solve_parabolic";
  SpaceTimeField out(grid, m, meta);
  out.slice(0).values() = initial.values();

  const bool neumann = cfg.boundary == BoundaryPolicy::Neumann;
  NewtonSystem sys(model, g, neumann);
  std::vector<double> chi, rhs_prev;
  double worst = 0.0;
  const double dt = grid.dt();
  for (int k = 0; k + 1 < grid.slices(); ++k) {
    const Field& prev = out.slice(k);
    if (mask) {
      const auto lam = coincidence_indicator(prev, *mask);
      chi.assign(lam.size(), 0.0);
      for (std::size_t i = 0; i < lam.size(); ++i) chi[i] = lam[i] ? 0.0 : 1.0;
      if (lambda_out) lambda_out->push_back(lam);
    }
    const std::vector<double>* chi_ptr = mask ? &chi : nullptr;
    sys.set_step(dt, cfg.theta, &prev, &rhs_prev, chi_ptr);
    sys.operator_values(prev, rhs_prev);
    Field next = prev;
    next.meta() = meta;
    const double t_next = grid.time(k + 1);
    if (cfg.boundary == BoundaryPolicy::DirichletFunction) {
      for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (g.is_boundary(i)) cfg.boundary_values(t_next, g.node(i), &next.values()[i * m]);
      }
    }
    const NewtonResult res = newton(sys, next, cfg.tol, cfg.max_newton, 1.0, cfg.min_damping, 0, 200000,
                                    "time step " + std::to_string(k + 1));
    worst = std::max(worst, res.residual);
    out.slice(k + 1) = std::move(next);
  }
  if (mask && lambda_out) lambda_out->push_back(coincidence_indicator(out.slice(grid.slices() - 1), *mask));
  out.meta().solver_residual = worst;
  for (int k = 0; k < grid.slices(); ++k) out.slice(k).meta() = out.meta();
  return out;
}

}  // namespace

SpaceTimeField solve_parabolic(const Model& model, const SpaceTimeGrid& grid, const Field& initial,
                               const ParabolicSolverConfig& cfg) {
  return time_march(model, grid, initial, cfg, nullptr, nullptr);
}

CoincidenceSet::CoincidenceSet(SpaceTimeGrid grid, std::vector<std::vector<std::uint8_t>> lambda, double theta_u,
                               double theta_g)
    : grid_(std::move(grid)), lambda_(std::move(lambda)), theta_u_(theta_u), theta_g_(theta_g) {}

std::size_t CoincidenceSet::count() const {
  std::size_t s = 0;
  for (const auto& sl : lambda_) s += static_cast<std::size_t>(std::count(sl.begin(), sl.end(), 1));
  return s;
}

bool CoincidenceSet::contains(double t, const Point& x) const {
  const auto& sp = grid_.space();
  int k = static_cast<int>(std::lround((t - grid_.t1()) / grid_.dt()));
  k = std::clamp(k, 0, grid_.slices() - 1);
  std::array<int, kMaxDim> ijk{};
  for (int d = 0; d < sp.dim(); ++d) {
    const int i = static_cast<int>(std::lround((x[d] - sp.axis(d).lo) / sp.spacing(d)));
    ijk[d] = std::clamp(i, 0, sp.count(d) - 1);
  }
  return lambda_[k][sp.index(ijk)] != 0;
}

double CoincidenceSet::omega_fraction(double t, const Point& x) const {
  const auto& sp = grid_.space();
  double s = std::clamp((t - grid_.t1()) / grid_.dt(), 0.0, static_cast<double>(grid_.slices() - 1));
  int k = std::min(static_cast<int>(std::floor(s)), grid_.slices() - 2);
  const double wt = s - k;
  std::array<int, kMaxDim> base{};
  std::array<double, kMaxDim> frac{};
  for (int d = 0; d < sp.dim(); ++d) {
    double q = std::clamp((x[d] - sp.axis(d).lo) / sp.spacing(d), 0.0, static_cast<double>(sp.count(d) - 1));
    int i = std::min(static_cast<int>(std::floor(q)), sp.count(d) - 2);
    base[d] = i;
    frac[d] = q - i;
  }
  double lam = 0.0;
  for (int corner = 0; corner < (1 << sp.dim()); ++corner) {
    std::array<int, kMaxDim> ijk = base;
    double w = 1.0;
    for (int d = 0; d < sp.dim(); ++d) {
      const int bit = (corner >> d) & 1;
      ijk[d] += bit;
      w *= bit ? frac[d] : 1.0 - frac[d];
    }
    if (w == 0.0) continue;
    const std::size_t node = sp.index(ijk);
    lam += w * ((1.0 - wt) * lambda_[k][node] + wt * lambda_[k + 1][node]);
  }
  return 1.0 - lam;
}

Thresholds default_thresholds(const Field& u) {
  const CartesianGrid& g = u.grid();
  const double h = g.max_spacing();
  double gmax = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    for (int c = 0; c < u.components(); ++c) {
      double s = 0.0;
      for (int d = 0; d < g.dim(); ++d) {
        const double v = nodal_gradient(u, i, c, d);
        s += v * v;
      }
      gmax = std::max(gmax, std::sqrt(s));
    }
  }
  return {10.0 * h * h * std::max(1.0, u.max_abs()), 10.0 * h * h * std::max(1.0, gmax)};
}

std::vector<std::uint8_t> coincidence_indicator(const Field& u, const Thresholds& th) {
  if (!(th.theta_u > 0.0 && th.theta_g > 0.0)) throw ArgumentError("coincidence thresholds must be positive");
  const CartesianGrid& g = u.grid();
  std::vector<std::uint8_t> lam(g.node_count(), 0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    bool in = true;
    for (int c = 0; c < u.components() && in; ++c) {
      if (std::abs(u.at(i, c)) > th.theta_u) in = false;
      double s = 0.0;
      for (int d = 0; d < g.dim(); ++d) {
        const double v = nodal_gradient(u, i, c, d);
        s += v * v;
      }
      if (std::sqrt(s) > th.theta_g) in = false;
    }
    lam[i] = in ? 1 : 0;
  }
  return lam;
}

CoincidenceSet coincidence_set(const SpaceTimeField& u, Thresholds th) {
  if (th.theta_u <= 0.0 || th.theta_g <= 0.0) {
    Thresholds def{0.0, 0.0};
    for (int k = 0; k < u.slices(); ++k) {
      const Thresholds tk = default_thresholds(u.slice(k));
      def.theta_u = std::max(def.theta_u, tk.theta_u);
      def.theta_g = std::max(def.theta_g, tk.theta_g);
    }
    if (th.theta_u <= 0.0) th.theta_u = def.theta_u;
    if (th.theta_g <= 0.0) th.theta_g = def.theta_g;
  }
  std::vector<std::vector<std::uint8_t>> lam;
  lam.reserve(u.slices());
  for (int k = 0; k < u.slices(); ++k) lam.push_back(coincidence_indicator(u.slice(k), th));
  return CoincidenceSet(u.grid(), std::move(lam), th.theta_u, th.theta_g);
}

FreeBoundaryRun simulate_free_boundary(const Model& model, const SpaceTimeGrid& grid, const Field& initial,
                                       const ParabolicSolverConfig& cfg, Thresholds th) {
  const Thresholds def = default_thresholds(initial);
  if (th.theta_u <= 0.0) th.theta_u = def.theta_u;
  if (th.theta_g <= 0.0) th.theta_g = def.theta_g;
  std::vector<std::vector<std::uint8_t>> lam;
  SpaceTimeField f = time_march(model, grid, initial, cfg, &th, &lam);
  // one indicator per slice; slice k's indicator masks the step k -> k+1
  CoincidenceSet chi(grid, std::move(lam), th.theta_u, th.theta_g);
  return {std::move(f), std::move(chi)};
}

}  // namespace monotone
