// weighted.cpp — weight, cutoffs, stream reconstruction, constant estimates.

#include "planar_leray/weighted.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace planar_leray {

namespace {
constexpr double kPi = std::numbers::pi;
}

double bracket(double rho) { return 1.0 + rho; }

double envelope_factor(double rho) {
  return (1.0 + rho) * (1.0 + std::log1p(rho));
}

double weight_w_radial(double rho) { return 1.0 / envelope_factor(rho); }

double weight_w(double px, double py) {
  return weight_w_radial(std::hypot(px, py));
}

// ---- profile ---------------------------------------------------------------

namespace {

inline double phi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// smoothstep S on [0,1]: exactly 0 for u <= 0, exactly 1 for u >= 1
void smoothstep(double u, double& s, double& s1, double& s2) {
  if (u <= 0.0) {
    s = s1 = s2 = 0.0;
    return;
  }
  if (u >= 1.0) {
    s = 1.0;
    s1 = s2 = 0.0;
    return;
  }
  const double a = phi(u);
  const double b = phi(1.0 - u);
  if (a == 0.0) {  // underflow deep in the tail
    s = s1 = s2 = 0.0;
    return;
  }
  if (b == 0.0) {
    s = 1.0;
    s1 = s2 = 0.0;
    return;
  }
  const double sum = a + b;
  s = a / sum;
  const double iu2 = 1.0 / (u * u);
  const double iv2 = 1.0 / ((1.0 - u) * (1.0 - u));
  const double gg = iu2 + iv2;
  s1 = a * b * gg / (sum * sum);
  const double gp = -2.0 / (u * u * u) + 2.0 / ((1.0 - u) * (1.0 - u) * (1.0 - u));
  const double ap = a * iu2;
  const double bp = -b * iv2;
  s2 = s1 * (iu2 - iv2 + gp / gg - 2.0 * (ap + bp) / sum);
}

}  // namespace

CutoffProfile::CutoffProfile() {
  // measure the derivative sup-norms on the transition interval, then
  // polish the maxima by parabolic interpolation
  auto polish = [this](bool second) {
    const int N = 400000;
    double best_t = 0.75, best = 0.0;
    for (int i = 1; i < N; ++i) {
      const double t = 0.5 + 0.5 * i / N;
      const double v = std::abs(second ? d2(t) : d1(t));
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    double s = 0.5 / N;
    for (int it = 0; it < 30; ++it) {
      const double fm = std::abs(second ? d2(best_t - s) : d1(best_t - s));
      const double f0 = std::abs(second ? d2(best_t) : d1(best_t));
      const double fp = std::abs(second ? d2(best_t + s) : d1(best_t + s));
      const double denom = fm - 2.0 * f0 + fp;
      if (std::abs(denom) > 0.0) {
        double shift = 0.5 * s * (fm - fp) / denom;
        shift = std::clamp(shift, -s, s);
        best_t += shift;
      }
      best = std::max(best, std::abs(second ? d2(best_t) : d1(best_t)));
      s *= 0.5;
    }
    return best;
  };
  sup_d1_ = polish(false);
  sup_d2_ = polish(true);
}

const CutoffProfile& CutoffProfile::instance() {
  static CutoffProfile p;
  return p;
}

double CutoffProfile::value(double t) const {
  double s, s1, s2;
  smoothstep(2.0 * (1.0 - t), s, s1, s2);
  return s;
}

double CutoffProfile::d1(double t) const {
  double s, s1, s2;
  smoothstep(2.0 * (1.0 - t), s, s1, s2);
  return -2.0 * s1;
}

double CutoffProfile::d2(double t) const {
  double s, s1, s2;
  smoothstep(2.0 * (1.0 - t), s, s1, s2);
  return 4.0 * s2;
}

// ---- cutoff families --------------------------------------------------------

namespace {

// iterated logarithmic brackets at radius rho
struct LogChain {
  double a1, l1, a2, l2, a3, l3;
  explicit LogChain(double rho) {
    a1 = 1.0 + rho;
    l1 = std::log1p(rho);
    a2 = 1.0 + l1;
    l2 = std::log(a2);
    a3 = 1.0 + l2;
    l3 = std::log(a3);
  }
};

}  // namespace

double cutoff_threshold(CutoffKind kind) {
  const double ln2 = std::log(2.0);
  if (kind == CutoffKind::Psi) return std::exp((1.0 + ln2) * (1.0 + ln2) - 1.0) - 1.0;
  const double inner = 1.0 + std::log1p(ln2);
  return std::exp(std::exp(inner * inner - 1.0) - 1.0) - 1.0;
}

double plateau_radius(CutoffKind kind, double n) {
  if (!(n >= cutoff_threshold(kind)))
    throw std::invalid_argument("cutoff scale below admissibility threshold");
  LogChain c(n);
  if (kind == CutoffKind::Psi) return std::exp(std::sqrt(c.a2) - 1.0) - 1.0;
  return std::exp(std::exp(std::sqrt(c.a3) - 1.0) - 1.0) - 1.0;
}

CutoffFamily::CutoffFamily(CutoffKind kind, double n) : kind_(kind), n_(n) {
  gamma_ = plateau_radius(kind, n);  // validates the threshold
  LogChain c(n);
  log_scale_ = (kind == CutoffKind::Psi) ? c.l2 : c.l3;
}

double CutoffFamily::profile_sup_d1() const {
  return CutoffProfile::instance().sup_d1();
}
double CutoffFamily::profile_sup_d2() const {
  return CutoffProfile::instance().sup_d2();
}

double CutoffFamily::value(double rho) const {
  LogChain c(rho);
  const double arg = (kind_ == CutoffKind::Psi ? c.l2 : c.l3) / log_scale_;
  return CutoffProfile::instance().value(arg);
}

double CutoffFamily::radial_slope(double rho) const {
  LogChain c(rho);
  const auto& p = CutoffProfile::instance();
  if (kind_ == CutoffKind::Psi) {
    const double arg = c.l2 / log_scale_;
    return p.d1(arg) / (log_scale_ * c.a1 * c.a2);
  }
  const double arg = c.l3 / log_scale_;
  return p.d1(arg) / (log_scale_ * c.a1 * c.a2 * c.a3);
}

double CutoffFamily::hessian_norm(double rho) const {
  if (kind_ != CutoffKind::Eta)
    throw std::logic_error("hessian_norm is defined for the eta kind");
  LogChain c(rho);
  const auto& p = CutoffProfile::instance();
  const double arg = c.l3 / log_scale_;
  const double q = 1.0 / (c.a1 * c.a2 * c.a3);
  const double qp = -q / c.a1 * (1.0 + 1.0 / c.a2 + 1.0 / (c.a2 * c.a3));
  const double f1 = p.d1(arg) * q / log_scale_;
  const double f2 = p.d2(arg) * q * q / (log_scale_ * log_scale_) +
                    p.d1(arg) * qp / log_scale_;
  return std::max(std::abs(f2), std::abs(f1) / rho);
}

double CutoffFamily::gradient_bound(double rho) const {
  LogChain c(rho);
  if (kind_ == CutoffKind::Psi)
    return profile_sup_d1() / log_scale_ * weight_w_radial(rho);
  return profile_sup_d1() / (log_scale_ * c.a1 * c.a2 * c.a3);
}

double CutoffFamily::hessian_bound(double rho) const {
  LogChain c(rho);
  return (4.0 * profile_sup_d1() + 2.0 * profile_sup_d2()) /
         (log_scale_ * c.a1 * c.a1 * c.a2 * c.a3);
}

CutoffSample sample_cutoff(const CutoffFamily& family, const GridPtr& grid) {
  if (grid->radius < family.n())
    throw std::invalid_argument("grid smaller than the cutoff support");
  CutoffSample out{ScalarField(grid), VectorField(grid), std::nullopt};
  if (family.kind() == CutoffKind::Eta) out.hessian_norm.emplace(grid);
  for (int j = 0; j < grid->n_r; ++j) {
    const double rho = grid->radial_nodes[j];
    const double val = family.value(rho);
    const double slope = family.radial_slope(rho);
    const double hn =
        family.kind() == CutoffKind::Eta ? family.hessian_norm(rho) : 0.0;
    for (int k = 0; k < grid->n_theta; ++k) {
      const int i = grid->index(j, k);
      out.value.values[i] = val;
      out.grad.x[i] = slope * grid->cos_theta[k];
      out.grad.y[i] = slope * grid->sin_theta[k];
      if (out.hessian_norm) out.hessian_norm->values[i] = hn;
    }
  }
  return out;
}

// ---- stream reconstruction ---------------------------------------------------

namespace {

// integral over [a, b] of the cubic interpolant through (xs, fs)
double integrate_cubic(const double xs[4], const double fs[4], double a,
                       double b) {
  const double m = 0.5 * (a + b);
  double xi[4];
  for (int i = 0; i < 4; ++i) xi[i] = xs[i] - m;
  const double sa = a - m, sb = b - m;
  double ipow[4];
  double pa = sa, pb = sb;
  for (int p = 0; p < 4; ++p) {
    ipow[p] = (pb - pa) / static_cast<double>(p + 1);
    pa *= sa;
    pb *= sb;
  }
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
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
    double val = 0.0;
    for (int p = 0; p <= 3; ++p) val += c[p] * ipow[p];
    acc += fs[i] * val / denom;
  }
  return acc;
}

}  // namespace

StreamPaths reconstruct_stream_paths(const VectorField& v) {
  const PolarGrid& g = *v.grid;
  const int nr = g.n_r, nt = g.n_theta;
  StreamPaths out{ScalarField(v.grid), ScalarField(v.grid), 0.0};

  // value of v at the origin: angular average of the innermost ring
  double v0x = 0.0, v0y = 0.0;
  for (int k = 0; k < nt; ++k) {
    v0x += v.x[g.index(0, k)];
    v0y += v.y[g.index(0, k)];
  }
  v0x /= nt;
  v0y /= nt;

  // integrand of the radial leg along angle theta_k: -tangential velocity
  auto radial_integrand = [&](int j, int k) {
    const int i = g.index(j, k);
    return g.sin_theta[k] * v.x[i] - g.cos_theta[k] * v.y[i];
  };

  // radial-only path, every angle (also the canonical base at k=0);
  // cumulative panels integrate the local cubic interpolant
  std::vector<double> f(nr);
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < nr; ++j) f[j] = radial_integrand(j, k);
    const double f_origin = g.sin_theta[k] * v0x - g.cos_theta[k] * v0y;
    const double r0 = g.radial_nodes[0];
    {
      const double xs[4] = {0.0, r0, g.radial_nodes[1], g.radial_nodes[2]};
      const double fs[4] = {f_origin, f[0], f[1], f[2]};
      out.radial_only.values[g.index(0, k)] = integrate_cubic(xs, fs, 0.0, r0);
    }
    for (int j = 1; j < nr; ++j) {
      const int s = std::clamp(j - 2, 0, nr - 4);
      const double xs[4] = {g.radial_nodes[s], g.radial_nodes[s + 1],
                            g.radial_nodes[s + 2], g.radial_nodes[s + 3]};
      const double fs[4] = {f[s], f[s + 1], f[s + 2], f[s + 3]};
      out.radial_only.values[g.index(j, k)] =
          out.radial_only.values[g.index(j - 1, k)] +
          integrate_cubic(xs, fs, g.radial_nodes[j - 1], g.radial_nodes[j]);
    }
  }

  // canonical path: radial leg at theta=0, then the arc at fixed radius.
  // The path-dependence defect is measured before periodization; the
  // residual loop flux is then spread linearly so the sample is periodic.
  const double c0 = -g.d_theta / 24.0, c1 = 13.0 * g.d_theta / 24.0;
  for (int j = 0; j < nr; ++j) {
    const double base = out.radial_only.values[g.index(j, 0)];
    const double r = g.radial_nodes[j];
    auto arc_integrand = [&](int k) {
      const int i = g.index(j, (k % nt + nt) % nt);
      const int kk = (k % nt + nt) % nt;
      return (g.cos_theta[kk] * v.x[i] + g.sin_theta[kk] * v.y[i]) * r;
    };
    std::vector<double> arc(nt + 1, 0.0);
    for (int k = 1; k <= nt; ++k)
      arc[k] = arc[k - 1] + c0 * arc_integrand(k - 2) + c1 * arc_integrand(k - 1) +
               c1 * arc_integrand(k) + c0 * arc_integrand(k + 1);
    const double loop = arc[nt];
    for (int k = 0; k < nt; ++k) {
      const double raw = base + arc[k];
      out.defect = std::max(
          out.defect, std::abs(raw - out.radial_only.values[g.index(j, k)]));
      out.canonical.values[g.index(j, k)] =
          raw - loop * (static_cast<double>(k) / nt);
    }
    out.defect = std::max(out.defect, std::abs(loop));
  }
  return out;
}

ScalarField reconstruct_stream(const VectorField& v, double path_tol) {
  StreamPaths paths = reconstruct_stream_paths(v);
  const PolarGrid& g = *v.grid;
  const double vrms = l2_norm(v) / std::sqrt(kPi * g.radius * g.radius);
  const double scale = g.radius * vrms;
  if (paths.defect > path_tol * scale && scale > 0.0)
    throw std::invalid_argument(
        "stream reconstruction is path dependent (field is not solenoidal): "
        "defect " +
        std::to_string(paths.defect) + " exceeds " +
        std::to_string(path_tol * scale));
  return std::move(paths.canonical);
}

// ---- constant estimation ------------------------------------------------------

DirichletForm build_dirichlet_form(const GridPtr& grid,
                                   const RegionSpec& anchor,
                                   InequalityKind kind) {
  const PolarGrid& g = *grid;
  const int N = g.node_count();
  DirichletForm form;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(8 * N);
  auto add_edge = [&](int a, int b, double c) {
    trips.emplace_back(a, a, c);
    trips.emplace_back(b, b, c);
    trips.emplace_back(a, b, -c);
    trips.emplace_back(b, a, -c);
  };
  // radial faces between rings j and j+1 sit at radius (j+1) h
  for (int j = 0; j + 1 < g.n_r; ++j) {
    const double rf = (j + 1) * g.h_r;
    const double c = rf * g.d_theta / g.h_r;
    for (int k = 0; k < g.n_theta; ++k) add_edge(g.index(j, k), g.index(j + 1, k), c);
  }
  // angular faces within each ring; the boundary ring cell is half width
  for (int j = 0; j < g.n_r; ++j) {
    const double extent = (j + 1 == g.n_r) ? 0.5 * g.h_r : g.h_r;
    const double c = extent / (g.radial_nodes[j] * g.d_theta);
    for (int k = 0; k < g.n_theta; ++k)
      add_edge(g.index(j, k), g.index(j, (k + 1) % g.n_theta), c);
  }
  form.stiffness.resize(N, N);
  form.stiffness.setFromTriplets(trips.begin(), trips.end());

  form.mass.resize(N);
  for (int j = 0; j < g.n_r; ++j)
    for (int k = 0; k < g.n_theta; ++k) {
      const int i = g.index(j, k);
      double m = g.quadrature_weights[i];
      if (kind == InequalityKind::Hardy) {
        const double w = weight_w_radial(g.radial_nodes[j]);
        m *= w * w;
      }
      form.mass[i] = m;
    }

  const auto mf = mean_functional(anchor, g);
  form.anchor_mean = Eigen::Map<const Eigen::VectorXd>(mf.data(), N);
  return form;
}

namespace {

// smallest eigenvalue of (S + m m^T) x = lambda M x by inverse iteration;
// the rank-one anchor enters through a bordered sparse factorization
double smallest_anchored_eigenvalue(const DirichletForm& form) {
  const int N = static_cast<int>(form.mass.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(form.stiffness.nonZeros() + 2 * N + 1);
  for (int c = 0; c < form.stiffness.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(form.stiffness, c); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  for (int i = 0; i < N; ++i) {
    const double mi = form.anchor_mean[i];
    if (mi != 0.0) {
      trips.emplace_back(i, N, mi);
      trips.emplace_back(N, i, mi);
    }
  }
  trips.emplace_back(N, N, -1.0);
  Eigen::SparseMatrix<double> bordered(N + 1, N + 1);
  bordered.setFromTriplets(trips.begin(), trips.end());

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(bordered);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("anchored eigenproblem: factorization failed");

  Eigen::VectorXd x = Eigen::VectorXd::Ones(N);
  x /= std::sqrt(x.dot(form.mass.cwiseProduct(x)));
  double lambda_prev = -1.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd rhs(N + 1);
    rhs.head(N) = form.mass.cwiseProduct(x);
    rhs[N] = 0.0;
    Eigen::VectorXd z = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("anchored eigenproblem: solve failed");
    x = z.head(N);
    const double mnorm = std::sqrt(x.dot(form.mass.cwiseProduct(x)));
    if (!(mnorm > 0.0))
      throw std::runtime_error("anchored eigenproblem: degenerate iterate");
    x /= mnorm;
    const double anchored = form.anchor_mean.dot(x);
    const double lambda = x.dot(form.stiffness * x) + anchored * anchored;
    if (lambda_prev > 0.0 && std::abs(lambda - lambda_prev) <= 1e-12 * lambda)
      return lambda;
    lambda_prev = lambda;
  }
  throw std::runtime_error("anchored eigenproblem: inverse iteration stalled");
}

ConstantEstimate estimate_constant(const GridPtr& grid, const RegionSpec& anchor,
                                   InequalityKind kind) {
  DirichletForm form = build_dirichlet_form(grid, anchor, kind);
  const double lambda = smallest_anchored_eigenvalue(form);
  ConstantEstimate est;
  est.inequality = kind;
  est.radius = grid->radius;
  est.anchor = anchor.describe();
  est.value = 1.0 / std::sqrt(lambda);
  est.n_r = grid->n_r;
  est.n_theta = grid->n_theta;
  return est;
}

}  // namespace

ConstantEstimate estimate_poincare_constant(const GridPtr& grid,
                                            const RegionSpec& anchor) {
  return estimate_constant(grid, anchor, InequalityKind::Poincare);
}

ConstantEstimate estimate_hardy_constant(const GridPtr& grid,
                                         const RegionSpec& anchor) {
  return estimate_constant(grid, anchor, InequalityKind::Hardy);
}

std::string ConstantEstimate::to_json() const {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "{\"inequality\":\"%s\",\"radius\":%.17g,\"anchor\":\"%s\","
                "\"value\":%.17g,\"n_r\":%d,\"n_theta\":%d}",
                inequality == InequalityKind::Poincare ? "poincare" : "hardy",
                radius, anchor.c_str(), value, n_r, n_theta);
  return buf;
}

}  // namespace planar_leray
