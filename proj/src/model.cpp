#include "monotone/model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "monotone/error.hpp"
#include "monotone/format.hpp"

namespace monotone {

namespace {

bool is_nonneg_integer(double p) { return p >= 0.0 && std::floor(p) == p; }

// x^a with the convention 0^0 = 1 and a * x^{a-1} -> 0 when a = 0.
double dpow(double x, double a) { return a == 0.0 ? 0.0 : a * std::pow(x, a - 1.0); }

Interval power_domain(double p, double delta_floor) {
  if (is_nonneg_integer(p)) return {};
  if (p >= 0.0) return {0.0, INFINITY};
  return {delta_floor, INFINITY};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Zero: return "zero";
    case ModelKind::CoupledLinear: return "coupled_linear";
    case ModelKind::Helmholtz: return "helmholtz";
    case ModelKind::GinzburgLandau: return "ginzburg_landau";
    case ModelKind::CoupledPower: return "coupled_power";
    case ModelKind::SinglePower: return "single_power";
    case ModelKind::LogPotential: return "log_potential";
    case ModelKind::Custom: return "custom";
  }
  return "unknown";
}

Model Model::zero(int m) {
  if (m < 1 || m > kMaxComponents) throw ArgumentError("component count out of range");
  return Model(ModelKind::Zero, m);
}

Model Model::coupled_linear(double c) {
  Model md(ModelKind::CoupledLinear, 2);
  md.c_ = c;
  return md;
}

Model Model::helmholtz(double c, int m) {
  if (m < 1 || m > kMaxComponents) throw ArgumentError("component count out of range");
  Model md(ModelKind::Helmholtz, m);
  md.c_ = c;
  return md;
}

Model Model::ginzburg_landau(double epsilon, int m) {
  if (!(epsilon > 0.0)) throw ArgumentError("Ginzburg-Landau epsilon must be positive");
  if (m < 1 || m > kMaxComponents) throw ArgumentError("component count out of range");
  Model md(ModelKind::GinzburgLandau, m);
  md.eps_ = epsilon;
  return md;
}

Model Model::coupled_power(double p, double q, double c) {
  if (!(p >= 0.0 && q >= 0.0)) throw ArgumentError("coupled power model needs p, q >= 0");
  Model md(ModelKind::CoupledPower, 2);
  md.p_ = p;
  md.q_ = q;
  md.c_ = c;
  const Interval dom = is_nonneg_integer(p) && is_nonneg_integer(q) ? Interval{} : Interval{0.0, INFINITY};
  md.domain_ = {dom, dom};
  return md;
}

Model Model::single_power(double p, double delta_floor) {
  if (p == 1.0 || p == -1.0 || !std::isfinite(p)) throw ArgumentError("single power model needs p != +-1");
  Model md(ModelKind::SinglePower, 1);
  md.p_ = p;
  md.domain_[0] = power_domain(p, delta_floor);
  return md;
}

Model Model::log_potential(double c, double delta_floor) {
  if (!(delta_floor > 0.0)) throw ArgumentError("log potential needs a positive floor");
  Model md(ModelKind::LogPotential, 1);
  md.c_ = c;
  md.domain_[0] = {delta_floor, INFINITY};
  return md;
}

Model Model::custom(int m, const std::string& F_expr, const std::vector<std::string>& f_exprs,
                    std::vector<Interval> domain) {
  if (m < 1 || m > kMaxComponents) throw ArgumentError("component count out of range");
  Model md(ModelKind::Custom, m);
  md.F_expr_ = Expression(F_expr, m);
  if (!f_exprs.empty()) {
    if (static_cast<int>(f_exprs.size()) != m) {
      throw ArgumentError("custom model needs one f expression per component");
    }
    for (const auto& e : f_exprs) md.f_expr_.emplace_back(e, m);
  }
  if (!domain.empty()) {
    if (static_cast<int>(domain.size()) != m) throw ArgumentError("custom domain needs one interval per component");
    md.domain_ = std::move(domain);
  }
  if (md.f_expr_.empty()) return md;

  // cross-check f against central differences of F
  std::mt19937_64 rng(20240611);
  int checked = 0;
  for (int trial = 0; trial < 512 && checked < 64; ++trial) {
    double u[kMaxComponents];
    for (int i = 0; i < m; ++i) {
      const Interval& iv = md.domain_[i];
      const double lo = std::isfinite(iv.lo) ? iv.lo : -1.0;
      const double hi = std::isfinite(iv.hi) ? std::min(iv.hi, lo + 2.0) : std::max(lo + 2.0, 1.0);
      u[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    double fu[kMaxComponents];
    md.f_unchecked(u, fu);
    const double Fu = md.F_unchecked(u);
    if (!std::isfinite(Fu)) continue;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(u[i]));
      double up[kMaxComponents], dn[kMaxComponents];
      std::copy(u, u + m, up);
      std::copy(u, u + m, dn);
      up[i] += h;
      dn[i] -= h;
      if (!md.in_domain(up) || !md.in_domain(dn)) {
        ok = false;
        break;
      }
      const double fd = (md.F_unchecked(up) - md.F_unchecked(dn)) / (2.0 * h);
      if (!std::isfinite(fd) || !std::isfinite(fu[i])) {
        ok = false;
        break;
      }
      if (std::abs(fd - fu[i]) > 1e-5 * (1.0 + std::abs(fu[i]) + std::abs(Fu))) {
        throw ArgumentError("custom model: f" + std::to_string(i + 1) + " is not the derivative of F at u" +
                            std::to_string(i + 1) + " = " + fmt(u[i]) + " (f = " + fmt(fu[i]) +
                            ", dF = " + fmt(fd) + ")");
      }
    }
    if (ok) ++checked;
  }
  if (checked == 0) throw ArgumentError("custom model: F or f is not finite anywhere on the check sample");
  return md;
}

std::string Model::name() const {
  std::ostringstream os;
  os << model_kind_name(kind_);
  switch (kind_) {
    case ModelKind::Zero: os << "{m=" << m_ << "}"; break;
    case ModelKind::CoupledLinear: os << "{c=" << format_double(c_) << "}"; break;
    case ModelKind::Helmholtz: os << "{c=" << format_double(c_) << ",m=" << m_ << "}"; break;
    case ModelKind::GinzburgLandau: os << "{epsilon=" << format_double(eps_) << ",m=" << m_ << "}"; break;
    case ModelKind::CoupledPower:
      os << "{p=" << format_double(p_) << ",q=" << format_double(q_) << ",c=" << format_double(c_) << "}";
      break;
    case ModelKind::SinglePower: os << "{p=" << format_double(p_) << "}"; break;
    case ModelKind::LogPotential: os << "{c=" << format_double(c_) << "}"; break;
    case ModelKind::Custom: os << "{F=" << F_expr_.text() << "}"; break;
  }
  return os.str();
}

bool Model::in_domain(const double* u) const {
  for (int i = 0; i < m_; ++i) {
    if (!domain_[i].contains(u[i])) return false;
  }
  return true;
}

void Model::require_domain(const double* u) const {
  for (int i = 0; i < m_; ++i) {
    if (!domain_[i].contains(u[i])) {
      throw ModelDomainError(std::string(model_kind_name(kind_)) + ": component " + std::to_string(i + 1) +
                                 " value " + fmt(u[i]) + " outside admissible range [" + fmt(domain_[i].lo) + ", " +
                                 fmt(domain_[i].hi) + "]",
                             i);
    }
  }
}

double Model::F(const double* u) const {
  require_domain(u);
  return F_unchecked(u);
}

void Model::f(const double* u, double* out) const {
  require_domain(u);
  f_unchecked(u, out);
}

double Model::F_unchecked(const double* u) const {
  switch (kind_) {
    case ModelKind::Zero: return 0.0;
    case ModelKind::CoupledLinear: return u[0] * u[1] + c_;
    case ModelKind::Helmholtz: {
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += u[i] * u[i];
      return 0.5 * s + c_;
    }
    case ModelKind::GinzburgLandau: {
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += u[i] * u[i];
      return -(1.0 - s) * (1.0 - s) / (4.0 * eps_ * eps_);
    }
    case ModelKind::CoupledPower:
      return std::pow(u[0], p_ + 1.0) * std::pow(u[1], q_ + 1.0) / ((p_ + 1.0) * (q_ + 1.0)) + c_;
    case ModelKind::SinglePower: return std::pow(u[0], p_ + 1.0) / (p_ + 1.0);
    case ModelKind::LogPotential: return std::log(u[0]) + c_;
    case ModelKind::Custom: return F_expr_(u);
  }
  return 0.0;
}

void Model::f_unchecked(const double* u, double* out) const {
  switch (kind_) {
    case ModelKind::Zero:
      for (int i = 0; i < m_; ++i) out[i] = 0.0;
      return;
    case ModelKind::CoupledLinear:
      out[0] = u[1];
      out[1] = u[0];
      return;
    case ModelKind::Helmholtz:
      for (int i = 0; i < m_; ++i) out[i] = u[i];
      return;
    case ModelKind::GinzburgLandau: {
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += u[i] * u[i];
      for (int i = 0; i < m_; ++i) out[i] = u[i] * (1.0 - s) / (eps_ * eps_);
      return;
    }
    case ModelKind::CoupledPower:
      out[0] = std::pow(u[0], p_) * std::pow(u[1], q_ + 1.0) / (q_ + 1.0);
      out[1] = std::pow(u[0], p_ + 1.0) * std::pow(u[1], q_) / (p_ + 1.0);
      return;
    case ModelKind::SinglePower: out[0] = std::pow(u[0], p_); return;
    case ModelKind::LogPotential: out[0] = 1.0 / u[0]; return;
    case ModelKind::Custom:
      if (!f_expr_.empty()) {
        for (int i = 0; i < m_; ++i) out[i] = f_expr_[i](u);
        return;
      }
      for (int i = 0; i < m_; ++i) {
        const double h = 6e-6 * std::max(1.0, std::abs(u[i]));
        double up[kMaxComponents], dn[kMaxComponents];
        std::copy(u, u + m_, up);
        std::copy(u, u + m_, dn);
        up[i] += h;
        dn[i] -= h;
        out[i] = (F_expr_(up) - F_expr_(dn)) / (2.0 * h);
      }
      return;
  }
}

void Model::jacobian(const double* u, double* J) const {
  require_domain(u);
  const int m = m_;
  std::fill(J, J + m * m, 0.0);
  switch (kind_) {
    case ModelKind::Zero: return;
    case ModelKind::CoupledLinear:
      J[1] = 1.0;
      J[2] = 1.0;
      return;
    case ModelKind::Helmholtz:
      for (int i = 0; i < m; ++i) J[i * m + i] = 1.0;
      return;
    case ModelKind::GinzburgLandau: {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += u[i] * u[i];
      const double e2 = eps_ * eps_;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) J[i * m + j] = ((i == j ? 1.0 - s : 0.0) - 2.0 * u[i] * u[j]) / e2;
      }
      return;
    }
    case ModelKind::CoupledPower:
      J[0] = dpow(u[0], p_) * std::pow(u[1], q_ + 1.0) / (q_ + 1.0);
      J[1] = std::pow(u[0], p_) * std::pow(u[1], q_);
      J[2] = J[1];
      J[3] = std::pow(u[0], p_ + 1.0) * dpow(u[1], q_) / (p_ + 1.0);
      return;
    case ModelKind::SinglePower: J[0] = dpow(u[0], p_); return;
    case ModelKind::LogPotential: J[0] = -1.0 / (u[0] * u[0]); return;
    case ModelKind::Custom:
      for (int j = 0; j < m; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
        double up[kMaxComponents], dn[kMaxComponents], fp[kMaxComponents], fm[kMaxComponents];
        std::copy(u, u + m, up);
        std::copy(u, u + m, dn);
        up[j] += h;
        dn[j] -= h;
        f_unchecked(up, fp);
        f_unchecked(dn, fm);
        for (int i = 0; i < m; ++i) J[i * m + j] = (fp[i] - fm[i]) / (2.0 * h);
      }
      return;
  }
}

double Model::interior_integrand(double beta, const double* u) const {
  require_domain(u);
  double fu[kMaxComponents];
  f_unchecked(u, fu);
  double uf = 0.0;
  for (int i = 0; i < m_; ++i) uf += u[i] * fu[i];
  return 2.0 * (beta - 1.0) * F_unchecked(u) - beta * uf;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) throw ArgumentError("linspace needs at least 2 points");
  std::vector<double> v(count);
  for (int k = 0; k < count; ++k) v[k] = lo + k * (hi - lo) / (count - 1);
  v.back() = hi;
  return v;
}

AdmissibilityReport pointwise_beta_interval(const Model& model, const std::vector<Interval>& u_box, double beta_lo,
                                            double beta_hi, int n_beta, int samples_per_axis) {
  const int m = model.components();
  if (static_cast<int>(u_box.size()) != m) throw ArgumentError("u-box needs one interval per component");
  for (int i = 0; i < m; ++i) {
    const Interval& iv = u_box[i];
    if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw ArgumentError("u-box interval " + std::to_string(i + 1) + " is empty or unbounded");
    }
    if (!model.domain(i).contains(iv.lo) || !model.domain(i).contains(iv.hi)) {
      throw ModelDomainError("u-box interval " + std::to_string(i + 1) + " leaves the admissible range", i);
    }
  }
  if (n_beta < 2) throw ArgumentError("beta grid needs at least 2 points");
  if (samples_per_axis <= 0) samples_per_axis = m == 1 ? 4001 : m == 2 ? 401 : m == 3 ? 61 : 11;

  std::size_t total = 1;
  for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(samples_per_axis);
  std::vector<double> Fv(total), ufv(total);
  for (std::size_t s = 0; s < total; ++s) {
    double u[kMaxComponents];
    std::size_t rem = s;
    for (int i = 0; i < m; ++i) {
      const int k = static_cast<int>(rem % samples_per_axis);
      rem /= samples_per_axis;
      const Interval& iv = u_box[i];
      u[i] = k == samples_per_axis - 1 ? iv.hi : iv.lo + k * (iv.hi - iv.lo) / (samples_per_axis - 1);
    }
    double fu[kMaxComponents];
    model.f(u, fu);
    Fv[s] = model.F(u);
    double uf = 0.0;
    for (int i = 0; i < m; ++i) uf += u[i] * fu[i];
    ufv[s] = uf;
  }

  AdmissibilityReport rep;
  rep.betas = linspace(beta_lo, beta_hi, n_beta);
  rep.box = u_box;
  rep.samples = total;
  for (double beta : rep.betas) {
    double mn = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (std::size_t s = 0; s < total; ++s) {
      const double a = 2.0 * (beta - 1.0) * Fv[s];
      const double b = beta * ufv[s];
      mn = std::min(mn, a - b);
      scale = std::max(scale, std::abs(a) + std::abs(b));
    }
    const double tol = 1e-12 * scale;
    rep.minima.push_back(mn);
    rep.tolerances.push_back(tol);
    rep.admissible.push_back(mn >= -tol);
  }
  return rep;
}

}  // namespace monotone
