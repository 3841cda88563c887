// geometry.cpp — grid construction, quadrature, operators, regions.

#include "planar_leray/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace planar_leray {

namespace {

constexpr double kPi = std::numbers::pi;

// Integrate ell_i(r) * r over [a, b], where ell_i is the cubic Lagrange
// basis on the four nodes. Worked in coordinates shifted to the interval
// midpoint to stay well conditioned on large disks.
void accumulate_interval_weights(const double nodes[4], double a, double b,
                                 double out[4]) {
  const double m = 0.5 * (a + b);
  double xi[4];
  for (int i = 0; i < 4; ++i) xi[i] = nodes[i] - m;
  const double sa = a - m;
  const double sb = b - m;
  // powers of the interval endpoints, for integrating s^p over [sa, sb]
  double ipow[6];  // ipow[p] = (sb^{p+1} - sa^{p+1}) / (p+1)
  double pa = sa, pb = sb;
  for (int p = 0; p <= 5; ++p) {
    ipow[p] = (pb - pa) / static_cast<double>(p + 1);
    pa *= sa;
    pb *= sb;
  }
  for (int i = 0; i < 4; ++i) {
    // numerator coefficients of prod_{k != i} (s - xi_k), degree 3
    double c[4] = {1.0, 0.0, 0.0, 0.0};
    int deg = 0;
    double denom = 1.0;
    for (int k = 0; k < 4; ++k) {
      if (k == i) continue;
      denom *= xi[i] - xi[k];
      for (int p = deg; p >= 0; --p) {
        c[p + 1] += c[p];
        c[p] *= -xi[k];
      }
      ++deg;
    }
    // integrand: ell_i(s) * (s + m) -> sum_p c_p (s^{p+1} + m s^p)
    double val = 0.0;
    for (int p = 0; p <= 3; ++p) val += c[p] * (ipow[p + 1] + m * ipow[p]);
    out[i] += val / denom;
  }
}

}  // namespace

double Vec2::norm() const { return std::hypot(x, y); }

double PolarGrid::total_weight() const {
  double s = 0.0;
  for (double w : quadrature_weights) s += w;
  return s;
}

GridPtr make_polar_grid(double radius, int n_r, int n_theta) {
  if (!(radius > 0.0)) throw std::invalid_argument("grid radius must be positive");
  if (n_r < 8) throw std::invalid_argument("n_r must be at least 8");
  if (n_theta < 8) throw std::invalid_argument("n_theta must be at least 8");
  if (n_theta % 2 != 0) throw std::invalid_argument("n_theta must be even");

  auto g = std::make_shared<PolarGrid>();
  g->radius = radius;
  g->n_r = n_r;
  g->n_theta = n_theta;
  g->h_r = radius / (n_r - 0.5);
  g->d_theta = 2.0 * kPi / n_theta;

  g->radial_nodes.resize(n_r);
  for (int j = 0; j < n_r; ++j) g->radial_nodes[j] = (j + 0.5) * g->h_r;
  g->radial_nodes[n_r - 1] = radius;  // exact boundary ring

  g->theta_nodes.resize(n_theta);
  g->cos_theta.resize(n_theta);
  g->sin_theta.resize(n_theta);
  for (int k = 0; k < n_theta; ++k) {
    g->theta_nodes[k] = k * g->d_theta;
    g->cos_theta[k] = std::cos(g->theta_nodes[k]);
    g->sin_theta[k] = std::sin(g->theta_nodes[k]);
  }

  // Radial weights for \int_0^R f(r) r dr: per subinterval, integrate the
  // cubic interpolant of f times the Jacobian. Exact for cubic f, so the
  // total weight is exactly pi R^2 and low-order moments are exact.
  g->radial_weights.assign(n_r, 0.0);
  const auto& rn = g->radial_nodes;
  auto add_interval = [&](double a, double b, int stencil_start) {
    int s = std::clamp(stencil_start, 0, n_r - 4);
    double nodes[4] = {rn[s], rn[s + 1], rn[s + 2], rn[s + 3]};
    double w[4] = {0, 0, 0, 0};
    accumulate_interval_weights(nodes, a, b, w);
    for (int i = 0; i < 4; ++i) g->radial_weights[s + i] += w[i];
  };
  add_interval(0.0, rn[0], 0);
  for (int j = 0; j + 1 < n_r; ++j) add_interval(rn[j], rn[j + 1], j - 1);

  g->quadrature_weights.resize(g->node_count());
  for (int j = 0; j < n_r; ++j)
    for (int k = 0; k < n_theta; ++k)
      g->quadrature_weights[g->index(j, k)] = g->radial_weights[j] * g->d_theta;

  // Spectral differentiation kernel for periodic equispaced nodes (even n):
  // (Df)_k = sum_p kernel[p] f_{k-p}. Exact for harmonics below Nyquist.
  // Antisymmetry kernel[n-p] = -kernel[p] is enforced bitwise.
  g->spectral_kernel.assign(n_theta, 0.0);
  for (int p = 1; p < n_theta / 2; ++p) {
    double sign = (p % 2 == 0) ? 1.0 : -1.0;
    double val = 0.5 * sign / std::tan(p * kPi / n_theta);
    g->spectral_kernel[p] = val;
    g->spectral_kernel[n_theta - p] = -val;
  }
  return g;
}

namespace {

// d/dr of a scalar sample, all rings. Innermost ring couples across the
// pole via the theta+pi identification; boundary ring is one-sided.
void radial_derivative(const PolarGrid& g, const std::vector<double>& f,
                       std::vector<double>& out) {
  const int nt = g.n_theta;
  const int J = g.n_r - 1;
  const double inv2h = 0.5 / g.h_r;
  for (int k = 0; k < nt; ++k) {
    int kp = (k + nt / 2) % nt;
    out[g.index(0, k)] = (f[g.index(1, k)] - f[g.index(0, kp)]) * inv2h;
  }
  for (int j = 1; j < J; ++j)
    for (int k = 0; k < nt; ++k)
      out[g.index(j, k)] =
          (f[g.index(j + 1, k)] - f[g.index(j - 1, k)]) * inv2h;
  for (int k = 0; k < nt; ++k)
    out[g.index(J, k)] = (3.0 * f[g.index(J, k)] - 4.0 * f[g.index(J - 1, k)] +
                          f[g.index(J - 2, k)]) *
                         inv2h;
}

// d/dtheta via the antisymmetric circulant kernel, ring by ring.
void angular_derivative(const PolarGrid& g, const std::vector<double>& f,
                        std::vector<double>& out) {
  const int nt = g.n_theta;
  for (int j = 0; j < g.n_r; ++j) {
    const double* ring = f.data() + g.index(j, 0);
    double* oring = out.data() + g.index(j, 0);
    for (int k = 0; k < nt; ++k) {
      // subtracting the local value keeps constants exactly in the kernel
      const double f0 = ring[k];
      double acc = 0.0;
      for (int p = 1; p < nt; ++p) {
        int src = k - p;
        if (src < 0) src += nt;
        acc += g.spectral_kernel[p] * (ring[src] - f0);
      }
      oring[k] = acc;
    }
  }
}

void cartesian_derivatives(const ScalarField& s, std::vector<double>& dx,
                           std::vector<double>& dy) {
  const PolarGrid& g = *s.grid;
  std::vector<double> dr(g.node_count()), dt(g.node_count());
  radial_derivative(g, s.values, dr);
  angular_derivative(g, s.values, dt);
  dx.resize(g.node_count());
  dy.resize(g.node_count());
  for (int j = 0; j < g.n_r; ++j) {
    const double invr = 1.0 / g.radial_nodes[j];
    for (int k = 0; k < g.n_theta; ++k) {
      int i = g.index(j, k);
      const double ct = g.cos_theta[k], st = g.sin_theta[k];
      dx[i] = ct * dr[i] - st * invr * dt[i];
      dy[i] = st * dr[i] + ct * invr * dt[i];
    }
  }
}

void require_same_grid(const void* a, const void* b) {
  if (a != b) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

VectorField gradient(const ScalarField& s) {
  if (!s.grid) throw std::invalid_argument("gradient: field has no grid");
  VectorField out(s.grid);
  cartesian_derivatives(s, out.x, out.y);
  return out;
}

VectorField perp_gradient(const ScalarField& s) {
  if (!s.grid) throw std::invalid_argument("perp_gradient: field has no grid");
  VectorField out(s.grid);
  std::vector<double> dx, dy;
  cartesian_derivatives(s, dx, dy);
  out.x = std::move(dy);
  out.y = std::move(dx);
  for (double& v : out.y) v = -v;
  out.solenoidal_tag = true;
  return out;
}

// Divergence in polar conservation form (1/r)[d_r(r v_r) + d_theta v_t].
// The radial and angular difference operators commute exactly (the pole
// rule is a circulant shift), so perp_gradient outputs are solenoidal to
// machine precision.
ScalarField divergence(const VectorField& v) {
  if (!v.grid) throw std::invalid_argument("divergence: field has no grid");
  const PolarGrid& g = *v.grid;
  ScalarField out(v.grid);
  std::vector<double> q(g.node_count()), vt(g.node_count());
  for (int j = 0; j < g.n_r; ++j) {
    const double r = g.radial_nodes[j];
    for (int k = 0; k < g.n_theta; ++k) {
      const int i = g.index(j, k);
      const double ct = g.cos_theta[k], st = g.sin_theta[k];
      q[i] = r * (ct * v.x[i] + st * v.y[i]);
      vt[i] = -st * v.x[i] + ct * v.y[i];
    }
  }
  std::vector<double> dq(g.node_count()), dt(g.node_count());
  radial_derivative(g, q, dq);
  angular_derivative(g, vt, dt);
  for (int j = 0; j < g.n_r; ++j) {
    const double invr = 1.0 / g.radial_nodes[j];
    for (int k = 0; k < g.n_theta; ++k) {
      const int i = g.index(j, k);
      out.values[i] = (dq[i] + dt[i]) * invr;
    }
  }
  return out;
}

// ---- inner products -----------------------------------------------------

namespace {

template <typename ProductAt>
double grid_pairing(const PolarGrid& g, ProductAt&& prod) {
  double acc = 0.0;
  for (int i = 0; i < g.node_count(); ++i) acc += g.quadrature_weights[i] * prod(i);
  return acc;
}

void require_region_fits(const RegionSpec& region, const PolarGrid& g) {
  if (!region.contained_in_disk(g.radius))
    throw std::invalid_argument("region is not contained in the grid disk");
}

}  // namespace

double inner_product_l2(const ScalarField& a, const ScalarField& b,
                        const std::optional<RegionSpec>& domain) {
  require_same_grid(a.grid.get(), b.grid.get());
  if (!domain)
    return grid_pairing(*a.grid, [&](int i) { return a.values[i] * b.values[i]; });
  require_region_fits(*domain, *a.grid);
  double acc = 0.0;
  for (const auto& q : domain->quadrature())
    acc += q.w * interpolate(a, q.x, q.y) * interpolate(b, q.x, q.y);
  return acc;
}

double inner_product_l2(const VectorField& a, const VectorField& b,
                        const std::optional<RegionSpec>& domain) {
  require_same_grid(a.grid.get(), b.grid.get());
  if (!domain)
    return grid_pairing(*a.grid,
                        [&](int i) { return a.x[i] * b.x[i] + a.y[i] * b.y[i]; });
  require_region_fits(*domain, *a.grid);
  double acc = 0.0;
  for (const auto& q : domain->quadrature()) {
    Vec2 av = interpolate(a, q.x, q.y);
    Vec2 bv = interpolate(b, q.x, q.y);
    acc += q.w * (av.x * bv.x + av.y * bv.y);
  }
  return acc;
}

double inner_product_l2(const TensorField& a, const TensorField& b,
                        const std::optional<RegionSpec>& domain) {
  require_same_grid(a.grid.get(), b.grid.get());
  if (domain) throw std::invalid_argument("tensor pairing over a region is not supported");
  return grid_pairing(*a.grid, [&](int i) {
    return a.xx[i] * b.xx[i] + a.xy[i] * b.xy[i] + a.yx[i] * b.yx[i] +
           a.yy[i] * b.yy[i];
  });
}

double l2_norm(const ScalarField& a) { return std::sqrt(std::max(0.0, inner_product_l2(a, a))); }
double l2_norm(const VectorField& a) { return std::sqrt(std::max(0.0, inner_product_l2(a, a))); }
double l2_norm(const TensorField& a) { return std::sqrt(std::max(0.0, inner_product_l2(a, a))); }

Vec2 mean_over(const VectorField& v, const RegionSpec& omega) {
  if (!v.grid) throw std::invalid_argument("mean_over: field has no grid");
  require_region_fits(omega, *v.grid);
  double sx = 0.0, sy = 0.0, sw = 0.0;
  for (const auto& q : omega.quadrature()) {
    Vec2 val = interpolate(v, q.x, q.y);
    sx += q.w * val.x;
    sy += q.w * val.y;
    sw += q.w;
  }
  return {sx / sw, sy / sw};
}

// ---- interpolation -------------------------------------------------------

namespace {

// Bicubic stencil for a point: 16 (possibly pole-mirrored) node indices
// with Lagrange weights.
void interp_stencil(const PolarGrid& g, double px, double py, int idx[16],
                    double w[16]) {
  const double rho = std::hypot(px, py);
  if (rho > g.radius * (1.0 + 1e-12))
    throw std::invalid_argument("interpolation point outside grid disk");
  double theta = std::atan2(py, px);
  if (theta < 0.0) theta += 2.0 * kPi;

  // radial stencil in node-index coordinates: node j sits at s = j
  const double s = rho / g.h_r - 0.5;
  int j0 = static_cast<int>(std::floor(s));
  j0 = std::min(j0, g.n_r - 3);  // keep stencil inside [..., n_r-1]
  j0 = std::max(j0, -1);         // mirrored rings handle j = -2, -1
  const double tr = s - j0;

  const double st = theta / g.d_theta;
  int k0 = static_cast<int>(std::floor(st));
  const double tt = st - k0;

  auto cubic = [](double t, double c[4]) {
    // Lagrange weights on nodes at offsets -1, 0, 1, 2
    c[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    c[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    c[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    c[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
  };
  double wr[4], wt[4];
  cubic(tr, wr);
  cubic(tt, wt);

  const int nt = g.n_theta;
  int n = 0;
  for (int a = 0; a < 4; ++a) {
    int j = j0 - 1 + a;
    for (int b = 0; b < 4; ++b) {
      int k = k0 - 1 + b;
      int jj = j, kk = k;
      if (jj < 0) {
        jj = -1 - jj;
        kk += nt / 2;
      }
      kk %= nt;
      if (kk < 0) kk += nt;
      idx[n] = g.index(jj, kk);
      w[n] = wr[a] * wt[b];
      ++n;
    }
  }
}

double interpolate_values(const PolarGrid& g, const std::vector<double>& f,
                          double px, double py) {
  int idx[16];
  double w[16];
  interp_stencil(g, px, py, idx, w);
  double acc = 0.0;
  for (int n = 0; n < 16; ++n) acc += w[n] * f[idx[n]];
  return acc;
}

}  // namespace

double interpolate(const ScalarField& s, double px, double py) {
  return interpolate_values(*s.grid, s.values, px, py);
}

Vec2 interpolate(const VectorField& v, double px, double py) {
  return {interpolate_values(*v.grid, v.x, px, py),
          interpolate_values(*v.grid, v.y, px, py)};
}

std::vector<double> mean_functional(const RegionSpec& omega,
                                    const PolarGrid& grid) {
  if (!omega.contained_in_disk(grid.radius))
    throw std::invalid_argument("region is not contained in the grid disk");
  std::vector<double> m(grid.node_count(), 0.0);
  double total = 0.0;
  int idx[16];
  double w[16];
  for (const auto& q : omega.quadrature()) {
    interp_stencil(grid, q.x, q.y, idx, w);
    for (int n = 0; n < 16; ++n) m[idx[n]] += q.w * w[n];
    total += q.w;
  }
  for (double& v : m) v /= total;
  return m;
}

// ---- regions -------------------------------------------------------------

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev initial guess
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

RegionSpec RegionSpec::disk(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("region disk radius must be positive");
  RegionSpec r;
  r.kind_ = Kind::Disk;
  r.center_ = center;
  r.params_ = {radius};
  r.measure_ = kPi * radius * radius;
  r.build_quadrature();
  return r;
}

RegionSpec RegionSpec::annular_sector(Vec2 center, double r0, double r1,
                                      double theta0, double theta1) {
  if (!(r1 > r0) || r0 < 0.0) throw std::invalid_argument("bad annular sector radii");
  if (!(theta1 > theta0)) throw std::invalid_argument("bad annular sector angles");
  RegionSpec r;
  r.kind_ = Kind::AnnularSector;
  r.center_ = center;
  r.params_ = {r0, r1, theta0, theta1};
  r.measure_ = 0.5 * (theta1 - theta0) * (r1 * r1 - r0 * r0);
  r.build_quadrature();
  return r;
}

RegionSpec RegionSpec::rectangle(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("bad rectangle bounds");
  RegionSpec r;
  r.kind_ = Kind::Rectangle;
  r.center_ = {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  r.params_ = {x0, x1, y0, y1};
  r.measure_ = (x1 - x0) * (y1 - y0);
  r.build_quadrature();
  return r;
}

void RegionSpec::build_quadrature() {
  std::vector<double> gn, gw;
  switch (kind_) {
    case Kind::Disk: {
      const double R = params_[0];
      const int nr = 24, na = 48;
      gauss_legendre(nr, gn, gw);
      const double da = 2.0 * kPi / na;
      for (int i = 0; i < nr; ++i) {
        const double r = 0.5 * R * (gn[i] + 1.0);
        const double wr = 0.5 * R * gw[i] * r;  // Jacobian
        for (int a = 0; a < na; ++a) {
          const double th = a * da;
          quad_.push_back({center_.x + r * std::cos(th),
                           center_.y + r * std::sin(th), wr * da});
        }
      }
      break;
    }
    case Kind::AnnularSector: {
      const double r0 = params_[0], r1 = params_[1];
      const double t0 = params_[2], t1 = params_[3];
      const int nr = 24, na = 24;
      std::vector<double> an, aw;
      gauss_legendre(nr, gn, gw);
      gauss_legendre(na, an, aw);
      for (int i = 0; i < nr; ++i) {
        const double r = 0.5 * ((r1 - r0) * gn[i] + r1 + r0);
        const double wr = 0.5 * (r1 - r0) * gw[i] * r;
        for (int a = 0; a < na; ++a) {
          const double th = 0.5 * ((t1 - t0) * an[a] + t1 + t0);
          const double wt = 0.5 * (t1 - t0) * aw[a];
          quad_.push_back({center_.x + r * std::cos(th),
                           center_.y + r * std::sin(th), wr * wt});
        }
      }
      break;
    }
    case Kind::Rectangle: {
      const double x0 = params_[0], x1 = params_[1];
      const double y0 = params_[2], y1 = params_[3];
      const int n = 24;
      gauss_legendre(n, gn, gw);
      for (int i = 0; i < n; ++i) {
        const double px = 0.5 * ((x1 - x0) * gn[i] + x1 + x0);
        const double wx = 0.5 * (x1 - x0) * gw[i];
        for (int a = 0; a < n; ++a) {
          const double py = 0.5 * ((y1 - y0) * gn[a] + y1 + y0);
          const double wy = 0.5 * (y1 - y0) * gw[a];
          quad_.push_back({px, py, wx * wy});
        }
      }
      break;
    }
  }
}

bool RegionSpec::contains(double px, double py) const {
  switch (kind_) {
    case Kind::Disk: {
      const double dx = px - center_.x, dy = py - center_.y;
      return dx * dx + dy * dy <= params_[0] * params_[0];
    }
    case Kind::AnnularSector: {
      const double dx = px - center_.x, dy = py - center_.y;
      const double r = std::hypot(dx, dy);
      if (r < params_[0] || r > params_[1]) return false;
      double th = std::atan2(dy, dx);
      while (th < params_[2]) th += 2.0 * kPi;
      return th <= params_[3];
    }
    case Kind::Rectangle:
      return px >= params_[0] && px <= params_[1] && py >= params_[2] &&
             py <= params_[3];
  }
  return false;
}

double RegionSpec::outer_radius() const {
  switch (kind_) {
    case Kind::Disk:
      return center_.norm() + params_[0];
    case Kind::AnnularSector:
      return center_.norm() + params_[1];
    case Kind::Rectangle: {
      double m = 0.0;
      for (double px : {params_[0], params_[1]})
        for (double py : {params_[2], params_[3]})
          m = std::max(m, std::hypot(px, py));
      return m;
    }
  }
  return 0.0;
}

bool RegionSpec::contained_in_disk(double disk_radius) const {
  return outer_radius() <= disk_radius * (1.0 + 1e-12);
}

std::string RegionSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Disk:
      os << "disk(center=(" << center_.x << "," << center_.y
         << "),radius=" << params_[0] << ")";
      break;
    case Kind::AnnularSector:
      os << "annular-sector(center=(" << center_.x << "," << center_.y << "),r=["
         << params_[0] << "," << params_[1] << "],theta=[" << params_[2] << ","
         << params_[3] << "])";
      break;
    case Kind::Rectangle:
      os << "rectangle([" << params_[0] << "," << params_[1] << "]x["
         << params_[2] << "," << params_[3] << "])";
      break;
  }
  return os.str();
}

// ---- sanity / io --------------------------------------------------------

namespace {
bool finite_all(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}
}  // namespace

bool all_finite(const ScalarField& s) { return finite_all(s.values); }
bool all_finite(const VectorField& v) { return finite_all(v.x) && finite_all(v.y); }
bool all_finite(const TensorField& f) {
  return finite_all(f.xx) && finite_all(f.xy) && finite_all(f.yx) &&
         finite_all(f.yy);
}

namespace {

void write_csv_rows(std::ofstream& out, const PolarGrid& g,
                    const std::vector<const std::vector<double>*>& comps) {
  char buf[64];
  for (int j = 0; j < g.n_r; ++j) {
    for (int k = 0; k < g.n_theta; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", g.radial_nodes[j]);
      out << buf;
      std::snprintf(buf, sizeof buf, "%.17g", g.theta_nodes[k]);
      out << ',' << buf;
      for (const auto* c : comps) {
        std::snprintf(buf, sizeof buf, "%.17g", (*c)[g.index(j, k)]);
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

void write_field_csv(const std::string& path, const ScalarField& s) {
  auto out = open_or_throw(path);
  out << "r,theta,value\n";
  write_csv_rows(out, *s.grid, {&s.values});
}

void write_field_csv(const std::string& path, const VectorField& v) {
  auto out = open_or_throw(path);
  out << "r,theta,ux,uy\n";
  write_csv_rows(out, *v.grid, {&v.x, &v.y});
}

void write_field_csv(const std::string& path, const TensorField& f) {
  auto out = open_or_throw(path);
  out << "r,theta,fxx,fxy,fyx,fyy\n";
  write_csv_rows(out, *f.grid, {&f.xx, &f.xy, &f.yx, &f.yy});
}

std::string grid_metadata_json(const PolarGrid& grid) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "{\"radius\":%.17g,\"n_r\":%d,\"n_theta\":%d,\"grading\":%.17g}",
                grid.radius, grid.n_r, grid.n_theta, grid.grading);
  return buf;
}

}  // namespace planar_leray
