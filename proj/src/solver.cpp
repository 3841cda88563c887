// solver.cpp — homotopy ladder with damped Picard iteration.

#include "planar_leray/solver.hpp"

#include <Eigen/SparseLU>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>

namespace planar_leray {

void SolveConfig::validate() const {
  if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be positive");
  if (!(linear_tol > 0.0)) throw std::invalid_argument("linear_tol must be positive");
  if (homotopy_steps < 1) throw std::invalid_argument("homotopy_steps must be >= 1");
  if (picard_max_iter < 1) throw std::invalid_argument("picard_max_iter must be >= 1");
  if (!(damping > 0.0) || damping > 1.0)
    throw std::invalid_argument("damping must lie in (0, 1]");
}

namespace {

// nodal advecting field mu + b - mean_omega(b)
VectorField effective_wind(const VectorField& b, Vec2 mu, const RegionSpec& omega) {
  const Vec2 bbar = mean_over(b, omega);
  VectorField wind(b.grid);
  for (int i = 0; i < b.grid->node_count(); ++i) {
    wind.x[i] = mu.x + b.x[i] - bbar.x;
    wind.y[i] = mu.y + b.y[i] - bbar.y;
  }
  return wind;
}

// BiCGSTAB on the K-preconditioned system (I + lambda K^-1 N) x = K^-1 rhs.
// The single Dirichlet factorization serves every rung and iterate; the
// preconditioned operator is a compact skew perturbation of the identity,
// so the iteration converges in a handful of steps for moderate winds.
// Convergence is measured in the K-norm of the preconditioned residual,
// which equals the dual norm of the true residual driving the Picard test.
bool solve_oseen_krylov(const StreamOperators& ops,
                        const StreamOperators::AdvectionAction& advect,
                        double lambda, const Eigen::VectorXd& rhs,
                        Eigen::VectorXd& x, double abs_tol, int max_iter) {
  auto apply = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return z + lambda * ops.solve_stiffness(advect.apply(z));
  };
  const Eigen::VectorXd b = ops.solve_stiffness(rhs);
  if (b.norm() == 0.0) {
    x.setZero();
    return true;
  }
  const double floor_tol = 1e-15 * ops.k_norm(b);
  const double target = std::max(abs_tol, floor_tol);
  Eigen::VectorXd r = b - apply(x);
  if (ops.k_norm(r) <= target) return true;
  const Eigen::VectorXd rhat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd p = Eigen::VectorXd::Zero(x.size());
  for (int it = 0; it < max_iter; ++it) {
    const double rho1 = rhat.dot(r);
    if (rho1 == 0.0) return false;
    if (it == 0) {
      p = r;
    } else {
      const double beta = (rho1 / rho) * (alpha / omega);
      p = r + beta * (p - omega * v);
    }
    v = apply(p);
    const double rv = rhat.dot(v);
    if (rv == 0.0) return false;
    alpha = rho1 / rv;
    Eigen::VectorXd s = r - alpha * v;
    if (ops.k_norm(s) <= target) {
      x += alpha * p;
      return true;
    }
    const Eigen::VectorXd t = apply(s);
    const double tt = t.dot(t);
    if (tt == 0.0) return false;
    omega = t.dot(s) / tt;
    x += alpha * p + omega * s;
    r = s - omega * t;
    if (ops.k_norm(r) <= target) return true;
    rho = rho1;
  }
  return false;
}

}  // namespace

LinearizedSystem assemble_linearized(const OperatorsPtr& ops,
                                     const TensorField& F,
                                     const VectorField& advecting, Vec2 mu,
                                     const RegionSpec& omega, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("homotopy parameter must lie in [0, 1]");
  LinearizedSystem sys;
  sys.ops = ops;
  sys.lambda = lambda;
  const VectorField wind = effective_wind(advecting, mu, omega);
  sys.matrix = ops->K() + Eigen::SparseMatrix<double>(lambda * ops->advection(wind));
  sys.rhs = lambda * ops->tensor_load(F);
  return sys;
}

Eigen::VectorXd LinearizedSystem::solve(double linear_tol) const {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(matrix);
  if (lu.info() != Eigen::Success)
    throw SolveError("linear solver breakdown: factorization failed");
  Eigen::VectorXd y = lu.solve(rhs);
  if (lu.info() != Eigen::Success)
    throw SolveError("linear solver breakdown: back substitution failed");
  // backward-error check: the operator carries biharmonic-scale entries
  const double scale =
      matrix.coeffs().abs().maxCoeff() * y.lpNorm<Eigen::Infinity>() +
      rhs.lpNorm<Eigen::Infinity>();
  if (scale > 0.0) {
    const double rel = (matrix * y - rhs).lpNorm<Eigen::Infinity>() / scale;
    if (rel > linear_tol) {
      char msg[96];
      std::snprintf(msg, sizeof msg,
                    "linear solve backward error %.3e exceeds linear_tol", rel);
      throw SolveError(msg);
    }
  }
  return y;
}

DiskSolution solve_disk(const GridPtr& grid, const TensorField& F,
                        const SolveConfig& config) {
  return solve_disk(make_stream_operators(grid), F, config);
}

DiskSolution solve_disk(const OperatorsPtr& ops, const TensorField& F,
                        const SolveConfig& config) {
  config.validate();
  const GridPtr& grid = ops->grid();
  if (F.grid.get() != grid.get())
    throw std::invalid_argument("solve_disk: tensor source on a different grid");
  if (!config.omega.contained_in_disk(grid->radius))
    throw std::invalid_argument("solve_disk: anchor region outside the disk");

  DiskSolution sol;
  sol.grid = grid;
  sol.config = config;
  sol.f_norm = ops->tensor_norm(F);
  const double res_scale = std::max(1.0, sol.f_norm);
  const Eigen::VectorXd g = ops->tensor_load(F);

  Eigen::VectorXd chi = Eigen::VectorXd::Zero(ops->reduced_size());
  const double apriori_cap = sol.f_norm * (1.0 + 1e-8);

  for (int step = 0; step <= config.homotopy_steps; ++step) {
    const double lambda = static_cast<double>(step) / config.homotopy_steps;
    bool rung_converged = false;
    for (int iter = 0; iter <= config.picard_max_iter; ++iter) {
      const VectorField v = ops->velocity(chi);
      const VectorField wind = effective_wind(v, config.mu, config.omega);
      const auto advect = ops->advection_action(wind);

      const Eigen::VectorXd rho = ops->apply_stiffness_precise(chi) +
                                  lambda * advect.apply(chi) - lambda * g;
      const double res = ops->dual_norm(rho);
      const double grad_v = ops->k_norm(chi);
      sol.iterations.push_back({lambda, iter, res, grad_v});
      if (grad_v > apriori_cap + 1e-12 * (1.0 + sol.f_norm))
        throw SolveError("a-priori bound violated: ||grad v|| = " +
                         std::to_string(grad_v) + " > ||F|| = " +
                         std::to_string(sol.f_norm));

      if (res <= config.picard_tol * res_scale) {
        rung_converged = true;
        break;
      }
      if (iter == config.picard_max_iter) break;

      // the linear solves must outresolve the nonlinear target
      const double krylov_abs =
          std::min(config.linear_tol * std::max(1.0, sol.f_norm),
                   0.02 * config.picard_tol * res_scale);
      Eigen::VectorXd y = chi;  // warm start
      if (!solve_oseen_krylov(*ops, advect, lambda, lambda * g, y, krylov_abs,
                              400))
        throw SolveError("linear solver breakdown: Krylov iteration stalled");
      chi = (1.0 - config.damping) * chi + config.damping * y;
    }
    if (!rung_converged) {
      sol.converged = false;
      sol.failure = "picard stalled at homotopy rung lambda = " +
                    std::to_string(lambda) + " after " +
                    std::to_string(config.picard_max_iter) + " iterations";
      sol.chi = chi;
      sol.v = ops->velocity(chi);
      sol.u = sol.v;
      return sol;
    }
  }

  sol.converged = true;
  sol.chi = chi;
  sol.v = ops->velocity(chi);
  const Vec2 vbar = mean_over(sol.v, config.omega);
  sol.c = {-vbar.x, -vbar.y};
  sol.u = VectorField(grid);
  for (int i = 0; i < grid->node_count(); ++i) {
    sol.u.x[i] = config.mu.x + sol.v.x[i] - vbar.x;
    sol.u.y[i] = config.mu.y + sol.v.y[i] - vbar.y;
  }
  sol.u.solenoidal_tag = true;
  sol.anchored_mean = mean_over(sol.u, config.omega);
  sol.grad_norm = ops->k_norm(chi);
  sol.energy_pairing = g.dot(chi);
  return sol;
}

const DiskSolution& DiskSolution::require_converged() const {
  if (!converged) throw SolveError("disk solve did not converge: " + failure);
  return *this;
}

// ---- weak residual -----------------------------------------------------------

TestBattery make_test_battery(const StreamOperators& ops, int count,
                              unsigned seed) {
  const PolarGrid& g = *ops.grid();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  TestBattery battery;
  battery.coefficients.reserve(count);
  const int reduced_rings = g.n_r - 2;
  for (int t = 0; t < count; ++t) {
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(ops.reduced_size());
    const int bumps = 1 + static_cast<int>(unif(rng) * 2.0);
    for (int b = 0; b < bumps; ++b) {
      const double rho = g.radius * (0.12 + 0.18 * unif(rng));
      const double cr = unif(rng) * (g.radius * 0.82 - rho);
      const double ca = unif(rng) * 2.0 * std::numbers::pi;
      const double cx = cr * std::cos(ca), cy = cr * std::sin(ca);
      const double amp = 2.0 * unif(rng) - 1.0;
      for (int j = 0; j < reduced_rings; ++j)
        for (int k = 0; k < g.n_theta; ++k) {
          const double dx = g.node_x(j, k) - cx, dy = g.node_y(j, k) - cy;
          const double s2 = (dx * dx + dy * dy) / (rho * rho);
          if (s2 < 1.0)
            xi[j * g.n_theta + k] += amp * std::exp(1.0 / (s2 - 1.0));
        }
    }
    battery.coefficients.push_back(std::move(xi));
  }
  return battery;
}

double weak_residual(const StreamOperators& ops, const VectorField& u,
                     const TensorField& F, const TestBattery& battery) {
  const PolarGrid& g = *ops.grid();
  if (u.grid.get() != &g || F.grid.get() != &g)
    throw std::invalid_argument("weak_residual: fields on a different grid");
  const int N = g.node_count();

  // constant split from the boundary ring (exactly mu + c for solver output)
  double kx = 0.0, ky = 0.0;
  for (int k = 0; k < g.n_theta; ++k) {
    kx += u.x[g.index(g.n_r - 1, k)];
    ky += u.y[g.index(g.n_r - 1, k)];
  }
  kx /= g.n_theta;
  ky /= g.n_theta;

  Eigen::VectorXd ux(N), uy(N), wx(N), wy(N);
  for (int i = 0; i < N; ++i) {
    ux[i] = u.x[i];
    uy[i] = u.y[i];
    wx[i] = u.x[i] - kx;
    wy[i] = u.y[i] - ky;
  }
  const auto& W = ops.weights();

  // derivative samples of u and of the zero-trace part w
  const Eigen::VectorXd gu[4] = {ops.Dx() * ux, ops.Dy() * ux, ops.Dx() * uy,
                                 ops.Dy() * uy};
  const Eigen::VectorXd conv_wx = ux.cwiseProduct(ops.Dx() * wx) +
                                  uy.cwiseProduct(ops.Dy() * wx);
  const Eigen::VectorXd conv_wy = ux.cwiseProduct(ops.Dx() * wy) +
                                  uy.cwiseProduct(ops.Dy() * wy);

  const std::vector<double>* fcomp[4] = {&F.xx, &F.xy, &F.yx, &F.yy};

  double worst = 0.0;
  for (const auto& xi : battery.coefficients) {
    const Eigen::VectorXd phi1 = ops.P1E() * xi;
    const Eigen::VectorXd phi2 = ops.P2E() * xi;

    double visc = 0.0, fpair = 0.0;
    for (int c = 0; c < 4; ++c) {
      const Eigen::VectorXd gphi = ops.CE(c) * xi;
      for (int i = 0; i < N; ++i) {
        visc += W[i] * gphi[i] * gu[c][i];
        fpair += W[i] * gphi[i] * (*fcomp[c])[i];
      }
    }

    // antisymmetrized convection, matching the assembled form
    const Eigen::VectorXd conv_p1 = ux.cwiseProduct(ops.Dx() * phi1) +
                                    uy.cwiseProduct(ops.Dy() * phi1);
    const Eigen::VectorXd conv_p2 = ux.cwiseProduct(ops.Dx() * phi2) +
                                    uy.cwiseProduct(ops.Dy() * phi2);
    double term1 = 0.0, term2 = 0.0;
    for (int i = 0; i < N; ++i) {
      term1 += W[i] * (conv_wx[i] * phi1[i] + conv_wy[i] * phi2[i]);
      term2 += W[i] * (conv_p1[i] * wx[i] + conv_p2[i] * wy[i]);
    }
    const double conv = 0.5 * (term1 - term2);

    const double denom = ops.k_norm(xi);
    if (denom == 0.0) continue;
    worst = std::max(worst, std::abs(visc + conv - fpair) / denom);
  }
  return worst;
}

}  // namespace planar_leray
