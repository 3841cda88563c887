// sources.hpp — forcing construction: tensor sources, compactly supported
// vector sources behind the zero-mean gate, the Riesz lift f -> F, and
// manufactured solutions for solver verification.

#pragma once

#include <string>

#include "planar_leray/geometry.hpp"
#include "planar_leray/operators.hpp"

namespace planar_leray {

struct SourceSpec {
  enum class Kind { TensorDirect, VectorCompact, Manufactured };

  Kind kind = Kind::Manufactured;
  std::string shape = "bump";   // catalog id
  Vec2 center{0.0, 0.0};
  double support_radius = 1.0;
  double amplitude = 1.0;
  Vec2 mu{0.0, 0.0};            // manufactured kind: constant part of u

  /// radius of the smallest origin-centered disk containing the support
  double support_outer_radius() const;
};

/// Rejection of a vector source whose net force does not vanish: on the
/// whole plane the Stokes-type lift only exists for zero-mean forcing.
class ZeroMeanGateError : public std::invalid_argument {
 public:
  ZeroMeanGateError(Vec2 integral, double threshold);
  Vec2 integral() const { return integral_; }
  double threshold() const { return threshold_; }

 private:
  Vec2 integral_;
  double threshold_;
};

/// Sample a tensor source (kinds: tensor-direct, manufactured).
TensorField build_tensor_source(const SourceSpec& spec, const GridPtr& grid);

/// Sample a compactly supported vector source (kind: vector-compact).
VectorField build_vector_source(const SourceSpec& spec, const GridPtr& grid);

/// Riesz lift: solve <grad U, grad phi> = <f, phi> over the clamped
/// solenoidal space and return F = -grad U, so that <f, phi> = -<F, grad phi>
/// holds against the discrete test space. The zero-mean gate rejects f with
/// |integral of f| > 1e-8 ||f||_L1 componentwise.
TensorField lift_vector_source(const VectorField& f, const GridPtr& grid,
                               const RegionSpec& omega);
TensorField lift_vector_source(const OperatorsPtr& ops, const VectorField& f,
                               const RegionSpec& omega);

struct ManufacturedSolution {
  VectorField u_exact;
  TensorField F;
};

/// Closed-form verification pair: u = mu + a perp-grad(bump) and the tensor
/// F = grad u - u (x) u + mu (x) mu, which satisfies the weak form for
/// u exactly and has compact support.
ManufacturedSolution manufacture_solution(const SourceSpec& spec,
                                          const GridPtr& grid);

}  // namespace planar_leray
