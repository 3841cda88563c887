// sources.cpp — catalog bumps, the zero-mean gate, and the Riesz lift.

#include "planar_leray/sources.hpp"

#include <cmath>

namespace planar_leray {

namespace {

// the catalog bump exp(1/(s^2 - 1)) with s = |x - c| / rho, plus its
// first and second derivatives in closed form
struct Bump {
  Vec2 center;
  double rho;

  double value(double px, double py) const {
    const double s2 = ((px - center.x) * (px - center.x) +
                       (py - center.y) * (py - center.y)) /
                      (rho * rho);
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 / (s2 - 1.0));
  }

  // gradient and Hessian; all zero outside the support
  void derivatives(double px, double py, double& b, double g[2],
                   double h[2][2]) const {
    const double dx = px - center.x, dy = py - center.y;
    const double r2 = rho * rho;
    const double s2 = (dx * dx + dy * dy) / r2;
    if (s2 >= 1.0) {
      b = 0.0;
      g[0] = g[1] = 0.0;
      h[0][0] = h[0][1] = h[1][0] = h[1][1] = 0.0;
      return;
    }
    const double d = s2 - 1.0;
    b = std::exp(1.0 / d);
    const double gx = -2.0 * dx / (r2 * d * d);
    const double gy = -2.0 * dy / (r2 * d * d);
    g[0] = b * gx;
    g[1] = b * gy;
    const double common = -2.0 / (r2 * d * d);
    const double cubic = 8.0 / (r2 * r2 * d * d * d);
    const double hxx = common + cubic * dx * dx;
    const double hxy = cubic * dx * dy;
    const double hyy = common + cubic * dy * dy;
    h[0][0] = b * (gx * gx + hxx);
    h[0][1] = b * (gx * gy + hxy);
    h[1][0] = h[0][1];
    h[1][1] = b * (gy * gy + hyy);
  }
};

void require_support_fits(const SourceSpec& spec, const PolarGrid& g) {
  if (spec.support_outer_radius() > g.radius * (1.0 + 1e-12))
    throw std::invalid_argument("source support exceeds the grid disk");
}

}  // namespace

double SourceSpec::support_outer_radius() const {
  if (kind == Kind::VectorCompact && shape.rfind("dipole", 0) == 0)
    return center.norm() + 2.0 * support_radius;
  return center.norm() + support_radius;
}

ZeroMeanGateError::ZeroMeanGateError(Vec2 integral, double threshold)
    : std::invalid_argument(
          "zero-mean gate: net force (" + std::to_string(integral.x) + ", " +
          std::to_string(integral.y) + ") exceeds threshold " +
          std::to_string(threshold) +
          "; on the whole plane the lift exists only for zero-mean forcing"),
      integral_(integral),
      threshold_(threshold) {}

TensorField build_tensor_source(const SourceSpec& spec, const GridPtr& grid) {
  if (spec.kind == SourceSpec::Kind::Manufactured)
    return manufacture_solution(spec, grid).F;
  if (spec.kind != SourceSpec::Kind::TensorDirect)
    throw std::invalid_argument("build_tensor_source: wrong source kind");
  require_support_fits(spec, *grid);

  double pxx, pxy, pyx, pyy;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (spec.shape == "shear") {
    pxx = pyy = 0.0;
    pxy = pyx = inv_sqrt2;
  } else if (spec.shape == "diag") {
    pxx = inv_sqrt2;
    pyy = -inv_sqrt2;
    pxy = pyx = 0.0;
  } else {
    throw std::invalid_argument("unknown tensor source shape: " + spec.shape);
  }

  Bump bump{spec.center, spec.support_radius};
  TensorField F(grid);
  for (int j = 0; j < grid->n_r; ++j)
    for (int k = 0; k < grid->n_theta; ++k) {
      const int i = grid->index(j, k);
      const double b = spec.amplitude * bump.value(grid->node_x(j, k),
                                                   grid->node_y(j, k));
      F.xx[i] = b * pxx;
      F.xy[i] = b * pxy;
      F.yx[i] = b * pyx;
      F.yy[i] = b * pyy;
    }
  return F;
}

VectorField build_vector_source(const SourceSpec& spec, const GridPtr& grid) {
  if (spec.kind != SourceSpec::Kind::VectorCompact)
    throw std::invalid_argument("build_vector_source: wrong source kind");
  require_support_fits(spec, *grid);

  VectorField f(grid);
  const double a = spec.amplitude;
  if (spec.shape == "dipole-x" || spec.shape == "dipole-y") {
    // two opposite bumps: the net force vanishes identically
    Bump plus{{spec.center.x + spec.support_radius, spec.center.y},
              spec.support_radius};
    Bump minus{{spec.center.x - spec.support_radius, spec.center.y},
               spec.support_radius};
    const bool along_x = spec.shape == "dipole-x";
    for (int j = 0; j < grid->n_r; ++j)
      for (int k = 0; k < grid->n_theta; ++k) {
        const int i = grid->index(j, k);
        const double px = grid->node_x(j, k), py = grid->node_y(j, k);
        const double val = a * (plus.value(px, py) - minus.value(px, py));
        (along_x ? f.x[i] : f.y[i]) = val;
      }
  } else if (spec.shape == "div-shear" || spec.shape == "div-diag") {
    // divergence of a smooth compact tensor; zero net force by construction
    SourceSpec tensor = spec;
    tensor.kind = SourceSpec::Kind::TensorDirect;
    tensor.shape = spec.shape.substr(4);
    Bump bump{spec.center, spec.support_radius};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < grid->n_r; ++j)
      for (int k = 0; k < grid->n_theta; ++k) {
        const int i = grid->index(j, k);
        double b, g[2], h[2][2];
        bump.derivatives(grid->node_x(j, k), grid->node_y(j, k), b, g, h);
        if (tensor.shape == "shear") {
          // F = a b /sqrt2 [[0,1],[1,0]]: f_i = d_j F_ij
          f.x[i] = a * inv_sqrt2 * g[1];
          f.y[i] = a * inv_sqrt2 * g[0];
        } else {
          f.x[i] = a * inv_sqrt2 * g[0];
          f.y[i] = -a * inv_sqrt2 * g[1];
        }
      }
  } else if (spec.shape == "bump-x" || spec.shape == "bump-y") {
    // single signed bump: nonzero net force, so the gate must reject it
    Bump bump{spec.center, spec.support_radius};
    const bool along_x = spec.shape == "bump-x";
    for (int j = 0; j < grid->n_r; ++j)
      for (int k = 0; k < grid->n_theta; ++k) {
        const int i = grid->index(j, k);
        const double val = a * bump.value(grid->node_x(j, k), grid->node_y(j, k));
        (along_x ? f.x[i] : f.y[i]) = val;
      }
  } else {
    throw std::invalid_argument("unknown vector source shape: " + spec.shape);
  }
  return f;
}

TensorField lift_vector_source(const VectorField& f, const GridPtr& grid,
                               const RegionSpec& omega) {
  return lift_vector_source(make_stream_operators(grid), f, omega);
}

TensorField lift_vector_source(const OperatorsPtr& ops, const VectorField& f,
                               const RegionSpec& omega) {
  const PolarGrid& g = *ops->grid();
  if (f.grid.get() != &g)
    throw std::invalid_argument("lift: field grid does not match operators");
  if (!omega.contained_in_disk(g.radius))
    throw std::invalid_argument("lift: anchor region outside the grid disk");

  // zero-mean gate (componentwise integrals against the L1 mass)
  double ix = 0.0, iy = 0.0, l1 = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    const double w = g.quadrature_weights[i];
    ix += w * f.x[i];
    iy += w * f.y[i];
    l1 += w * std::hypot(f.x[i], f.y[i]);
  }
  const double threshold = 1e-8 * l1;
  if (std::abs(ix) > threshold || std::abs(iy) > threshold)
    throw ZeroMeanGateError({ix, iy}, threshold);

  const Eigen::VectorXd rhs = ops->vector_load(f);
  const Eigen::VectorXd chi = ops->solve_stiffness(rhs);
  TensorField grad_u = ops->velocity_gradient(chi);
  TensorField F(ops->grid());
  for (int i = 0; i < g.node_count(); ++i) {
    F.xx[i] = -grad_u.xx[i];
    F.xy[i] = -grad_u.xy[i];
    F.yx[i] = -grad_u.yx[i];
    F.yy[i] = -grad_u.yy[i];
  }
  return F;
}

ManufacturedSolution manufacture_solution(const SourceSpec& spec,
                                          const GridPtr& grid) {
  if (spec.kind != SourceSpec::Kind::Manufactured)
    throw std::invalid_argument("manufacture_solution: wrong source kind");
  if (spec.shape != "bump")
    throw std::invalid_argument("unknown manufactured shape: " + spec.shape);
  require_support_fits(spec, *grid);

  Bump bump{spec.center, spec.support_radius};
  ManufacturedSolution out{VectorField(grid), TensorField(grid)};
  const double a = spec.amplitude;
  const Vec2 mu = spec.mu;
  for (int j = 0; j < grid->n_r; ++j)
    for (int k = 0; k < grid->n_theta; ++k) {
      const int i = grid->index(j, k);
      const double px = grid->node_x(j, k), py = grid->node_y(j, k);
      double b, gr[2], h[2][2];
      bump.derivatives(px, py, b, gr, h);
      // u = mu + a perp-grad(bump): (d/dy, -d/dx)
      const double wx = a * gr[1];
      const double wy = -a * gr[0];
      const double ux = mu.x + wx;
      const double uy = mu.y + wy;
      out.u_exact.x[i] = ux;
      out.u_exact.y[i] = uy;
      // grad u from the bump Hessian: (grad u)_ij = d_j u_i
      const double gxx = a * h[0][1];   // d_x u_x = a d_x d_y B
      const double gxy = a * h[1][1];   // d_y u_x
      const double gyx = -a * h[0][0];  // d_x u_y
      const double gyy = -a * h[0][1];  // d_y u_y
      // F = grad u - u (x) u + mu (x) mu; compactly supported since
      // u (x) u - mu (x) mu vanishes with the bump
      out.F.xx[i] = gxx - ux * ux + mu.x * mu.x;
      out.F.xy[i] = gxy - ux * uy + mu.x * mu.y;
      out.F.yx[i] = gyx - uy * ux + mu.y * mu.x;
      out.F.yy[i] = gyy - uy * uy + mu.y * mu.y;
    }
  out.u_exact.solenoidal_tag = true;
  return out;
}

}  // namespace planar_leray
