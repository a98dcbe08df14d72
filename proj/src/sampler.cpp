#include "monotone/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "monotone/error.hpp"

namespace monotone {

namespace {

struct Stencil {
  std::array<std::size_t, 8> nodes{};
  std::array<double, 8> weights{};
  int count = 0;
};

// Corners and multilinear weights of the cell containing p (clamped to the box).
Stencil locate(const CartesianGrid& g, const Point& p) {
  const int n = g.dim();
  std::array<std::size_t, kMaxDim> base{};
  std::array<double, kMaxDim> frac{};
  for (int d = 0; d < n; ++d) {
    const Axis& a = g.axis(d);
    const double h = a.spacing();
    double s = (p[d] - a.lo) / h;
    s = std::clamp(s, 0.0, static_cast<double>(a.count - 1));
    int i = static_cast<int>(std::floor(s));
    if (i > a.count - 2) i = a.count - 2;
    base[d] = static_cast<std::size_t>(i);
    frac[d] = s - i;
  }
  Stencil st;
  st.count = 1 << n;
  for (int corner = 0; corner < st.count; ++corner) {
    std::size_t node = 0;
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      const int bit = (corner >> d) & 1;
      node += (base[d] + bit) * g.stride(d);
      w *= bit ? frac[d] : 1.0 - frac[d];
    }
    st.nodes[corner] = node;
    st.weights[corner] = w;
  }
  return st;
}

void interpolate(const Stencil& st, const std::vector<double>& data, int block, double* out) {
  std::fill(out, out + block, 0.0);
  for (int k = 0; k < st.count; ++k) {
    const double w = st.weights[k];
    if (w == 0.0) continue;
    const double* src = data.data() + st.nodes[k] * block;
    for (int j = 0; j < block; ++j) out[j] += w * src[j];
  }
}

double box_radius(const Point& x0, const Point& center, double half_width, int n) {
  if (!std::isfinite(half_width)) return INFINITY;
  double r = INFINITY;
  for (int d = 0; d < n; ++d) r = std::min(r, half_width - std::abs(x0[d] - center[d]));
  return r;
}

// Fill one node block: u values followed by n gradient entries per component.
void fill_blocks(const Field& f, std::vector<double>& data, int block, int offset_grad) {
  const int n = f.dim();
  const int m = f.components();
  data.assign(f.node_count() * block, 0.0);
  for (std::size_t node = 0; node < f.node_count(); ++node) {
    double* dst = data.data() + node * block;
    for (int c = 0; c < m; ++c) {
      dst[c] = f.at(node, c);
      for (int d = 0; d < n; ++d) dst[offset_grad + c * n + d] = nodal_gradient(f, node, c, d);
    }
  }
}

}  // namespace

double nodal_gradient(const Field& f, std::size_t node, int c, int d) {
  const CartesianGrid& g = f.grid();
  const auto ijk = g.multi_index(node);
  const int i = ijk[d];
  const int count = g.count(d);
  const std::size_t s = g.stride(d);
  const double h = g.spacing(d);
  if (i == 0) {
    return (-3.0 * f.at(node, c) + 4.0 * f.at(node + s, c) - f.at(node + 2 * s, c)) / (2.0 * h);
  }
  if (i == count - 1) {
    return (3.0 * f.at(node, c) - 4.0 * f.at(node - s, c) + f.at(node - 2 * s, c)) / (2.0 * h);
  }
  return (f.at(node + s, c) - f.at(node - s, c)) / (2.0 * h);
}

GridFieldSampler::GridFieldSampler(std::shared_ptr<const Field> field) : field_(std::move(field)) {
  if (!field_) throw ArgumentError("sampler needs a field");
  block_ = field_->components() * (1 + field_->dim());
  fill_blocks(*field_, data_, block_, field_->components());
}

double GridFieldSampler::node_gradient(std::size_t node, int c, int d) const {
  return data_[node * block_ + field_->components() + c * dim() + d];
}

void GridFieldSampler::sample(const Point& p, Jet& out) const {
  const int n = dim();
  const int m = components();
  double buf[kMaxComponents * (1 + kMaxDim)];
  interpolate(locate(field_->grid(), p), data_, block_, buf);
  out.m = m;
  for (int c = 0; c < m; ++c) {
    out.u[c] = buf[c];
    out.grad[c] = Point{};
    for (int d = 0; d < n; ++d) out.grad[c][d] = buf[m + c * n + d];
  }
}

AnalyticFieldSampler::AnalyticFieldSampler(int dim, int components, Eval eval, double half_width, Point center)
    : dim_(dim), m_(components), eval_(std::move(eval)), half_width_(half_width), center_(center) {}

double AnalyticFieldSampler::max_ball_radius(const Point& x0) const {
  return box_radius(x0, center_, half_width_, dim_);
}

void AnalyticFieldSampler::sample(const Point& p, Jet& out) const {
  out.m = m_;
  for (int c = 0; c < m_; ++c) out.grad[c] = Point{};
  eval_(p, out);
}

RescaledSampler::RescaledSampler(std::shared_ptr<const FieldSampler> base, const Point& x0, double rho,
                                 double beta)
    : base_(std::move(base)), x0_(x0), rho_(rho), beta_(beta) {
  if (!(rho > 0.0)) throw ArgumentError("rescaling factor rho must be positive");
}

double RescaledSampler::max_ball_radius(const Point& y0) const {
  Point q = x0_;
  for (int d = 0; d < dim(); ++d) q[d] += rho_ * y0[d];
  return base_->max_ball_radius(q) / rho_;
}

void RescaledSampler::sample(const Point& p, Jet& out) const {
  const int n = dim();
  Point q = x0_;
  for (int d = 0; d < n; ++d) q[d] += rho_ * p[d];
  base_->sample(q, out);
  const double su = std::pow(rho_, -beta_);
  const double sg = su * rho_;
  for (int c = 0; c < out.m; ++c) {
    out.u[c] *= su;
    for (int d = 0; d < n; ++d) out.grad[c][d] *= sg;
  }
}

GridSpaceTimeSampler::GridSpaceTimeSampler(std::shared_ptr<const SpaceTimeField> field)
    : field_(std::move(field)) {
  if (!field_) throw ArgumentError("sampler needs a field");
  const int n = field_->dim();
  const int m = field_->components();
  const int K = field_->slices();
  if (K < 3) throw ArgumentError("space-time sampler needs at least 3 slices for time derivatives");
  block_ = m * (2 + n);
  const double dt = field_->grid().dt();
  data_.resize(K);
  for (int k = 0; k < K; ++k) {
    fill_blocks(field_->slice(k), data_[k], block_, 2 * m);
    // u_t occupies slots [m, 2m)
    const Field& cur = field_->slice(k);
    for (std::size_t node = 0; node < cur.node_count(); ++node) {
      double* dst = data_[k].data() + node * block_;
      for (int c = 0; c < m; ++c) {
        double ut;
        if (k == 0) {
          ut = (-3.0 * cur.at(node, c) + 4.0 * field_->slice(1).at(node, c) - field_->slice(2).at(node, c)) /
               (2.0 * dt);
        } else if (k == K - 1) {
          ut = (3.0 * cur.at(node, c) - 4.0 * field_->slice(K - 2).at(node, c) +
                field_->slice(K - 3).at(node, c)) /
               (2.0 * dt);
        } else {
          ut = (field_->slice(k + 1).at(node, c) - field_->slice(k - 1).at(node, c)) / (2.0 * dt);
        }
        dst[m + c] = ut;
      }
    }
  }
}

std::vector<double> GridSpaceTimeSampler::time_breaks(double a, double b) const {
  std::vector<double> out;
  const auto& g = field_->grid();
  for (int k = 0; k < g.slices(); ++k) {
    const double t = g.time(k);
    if (t > a && t < b) out.push_back(t);
  }
  return out;
}

void GridSpaceTimeSampler::sample(double t, const Point& p, SpaceTimeJet& out) const {
  const int n = dim();
  const int m = components();
  const auto& g = field_->grid();
  double s = (t - g.t1()) / g.dt();
  s = std::clamp(s, 0.0, static_cast<double>(g.slices() - 1));
  int k = static_cast<int>(std::floor(s));
  if (k > g.slices() - 2) k = g.slices() - 2;
  const double w1 = s - k;
  const Stencil st = locate(g.space(), p);
  double a[kMaxComponents * (2 + kMaxDim)];
  double b[kMaxComponents * (2 + kMaxDim)];
  interpolate(st, data_[k], block_, a);
  interpolate(st, data_[k + 1], block_, b);
  out.m = m;
  for (int c = 0; c < m; ++c) {
    out.u[c] = (1.0 - w1) * a[c] + w1 * b[c];
    out.u_t[c] = (1.0 - w1) * a[m + c] + w1 * b[m + c];
    out.grad[c] = Point{};
    for (int d = 0; d < n; ++d) {
      const int j = 2 * m + c * n + d;
      out.grad[c][d] = (1.0 - w1) * a[j] + w1 * b[j];
    }
  }
}

AnalyticSpaceTimeSampler::AnalyticSpaceTimeSampler(int dim, int components, Eval eval, double t_min,
                                                   double t_max, double half_width, Point center)
    : dim_(dim), m_(components), eval_(std::move(eval)), t_min_(t_min), t_max_(t_max),
      half_width_(half_width), center_(center) {}

double AnalyticSpaceTimeSampler::max_ball_radius(const Point& x0) const {
  return box_radius(x0, center_, half_width_, dim_);
}

void AnalyticSpaceTimeSampler::sample(double t, const Point& p, SpaceTimeJet& out) const {
  out.m = m_;
  for (int c = 0; c < m_; ++c) {
    out.grad[c] = Point{};
    out.u_t[c] = 0.0;
  }
  eval_(t, p, out);
}

RescaledSpaceTimeSampler::RescaledSpaceTimeSampler(std::shared_ptr<const SpaceTimeSampler> base, double T,
                                                   const Point& x0, double rho, double beta)
    : base_(std::move(base)), T_(T), x0_(x0), rho_(rho), beta_(beta) {
  if (!(rho > 0.0)) throw ArgumentError("rescaling factor rho must be positive");
}

double RescaledSpaceTimeSampler::max_ball_radius(const Point& y0) const {
  Point q = x0_;
  for (int d = 0; d < dim(); ++d) q[d] += rho_ * y0[d];
  return base_->max_ball_radius(q) / rho_;
}

std::vector<double> RescaledSpaceTimeSampler::time_breaks(double a, double b) const {
  const double r2 = rho_ * rho_;
  auto raw = base_->time_breaks(T_ + r2 * a, T_ + r2 * b);
  for (double& t : raw) t = (t - T_) / r2;
  return raw;
}

void RescaledSpaceTimeSampler::sample(double t, const Point& p, SpaceTimeJet& out) const {
  const int n = dim();
  Point q = x0_;
  for (int d = 0; d < n; ++d) q[d] += rho_ * p[d];
  base_->sample(T_ + rho_ * rho_ * t, q, out);
  const double su = std::pow(rho_, -beta_);
  for (int c = 0; c < out.m; ++c) {
    out.u[c] *= su;
    out.u_t[c] *= su * rho_ * rho_;
    for (int d = 0; d < n; ++d) out.grad[c][d] *= su * rho_;
  }
}

}  // namespace monotone
