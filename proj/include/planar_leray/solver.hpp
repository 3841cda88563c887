// solver.hpp — the mean-anchored steady Navier-Stokes problem on one disk:
// stream-function discretization, damped Picard iteration inside a
// homotopy ladder, and the weak-form residual diagnostic.

#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "planar_leray/geometry.hpp"
#include "planar_leray/operators.hpp"

namespace planar_leray {

struct SolveConfig {
  Vec2 mu{0.0, 0.0};
  RegionSpec omega = RegionSpec::disk({0.0, 0.0}, 1.0);
  int homotopy_steps = 4;
  double picard_tol = 1e-9;
  int picard_max_iter = 50;
  double linear_tol = 1e-9;
  double damping = 1.0;

  void validate() const;
};

struct IterationRecord {
  double lambda = 0.0;
  int iteration = 0;
  double residual = 0.0;  // dual-norm weak residual of the current iterate
  double grad_v = 0.0;    // ||grad v||_K of the current iterate
};

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiskSolution {
  GridPtr grid;
  VectorField u;          // mu + v - mean_omega(v)
  VectorField v;          // zero-trace correction
  Vec2 c{0.0, 0.0};       // boundary constant, -mean_omega(v)
  Vec2 anchored_mean{0.0, 0.0};
  double grad_norm = 0.0;       // ||grad u||_K
  double energy_pairing = 0.0;  // <F, grad u>_W
  double f_norm = 0.0;          // ||F||_W
  std::vector<IterationRecord> iterations;
  bool converged = false;
  std::string failure;          // set when converged is false
  SolveConfig config;
  Eigen::VectorXd chi;          // reduced stream coefficients

  /// throws SolveError when the run did not converge
  const DiskSolution& require_converged() const;
};

struct LinearizedSystem {
  OperatorsPtr ops;
  Eigen::SparseMatrix<double> matrix;  // K + lambda N(b)
  Eigen::VectorXd rhs;                 // lambda g
  double lambda = 0.0;

  /// direct sparse solve; verifies the relative residual against linear_tol
  Eigen::VectorXd solve(double linear_tol) const;
};

/// Assemble the lambda-scaled linearized system
///   <grad v, grad phi> + lambda <(mu + advecting - mean(advecting)) . grad v, phi>
///     = lambda <F, grad phi>
/// with skew-symmetrized convection over the clamped stream space.
LinearizedSystem assemble_linearized(const OperatorsPtr& ops,
                                     const TensorField& F,
                                     const VectorField& advecting, Vec2 mu,
                                     const RegionSpec& omega, double lambda);

DiskSolution solve_disk(const GridPtr& grid, const TensorField& F,
                        const SolveConfig& config);
DiskSolution solve_disk(const OperatorsPtr& ops, const TensorField& F,
                        const SolveConfig& config);

// ---- weak-residual diagnostic ----------------------------------------------

struct TestBattery {
  std::vector<Eigen::VectorXd> coefficients;  // reduced stream coefficients
};

/// Deterministic battery of discrete solenoidal compactly supported test
/// fields (stream-function bumps away from the boundary ring).
TestBattery make_test_battery(const StreamOperators& ops, int count,
                              unsigned seed);

/// max over the battery of |<grad u, grad phi> + conv(u, phi) - <F, grad phi>|
/// / ||grad phi||, with the convection paired in the same antisymmetrized
/// form the solver assembles; u may be any nodal field (its boundary-ring
/// mean is used as the constant split).
double weak_residual(const StreamOperators& ops, const VectorField& u,
                     const TensorField& F, const TestBattery& battery);

}  // namespace planar_leray
