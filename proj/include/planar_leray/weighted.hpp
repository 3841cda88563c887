// weighted.hpp — the logarithmic weight, slowly-varying cutoff families
// with certified derivative bounds, stream-function reconstruction, and
// numerical Poincare/Hardy constants on disks.

#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <string>

#include "planar_leray/geometry.hpp"

namespace planar_leray {

/// <x> = 1 + |x|
double bracket(double rho);
/// <x><log<x>> evaluated at |x| = rho.
double envelope_factor(double rho);
/// w(x) = 1 / (<x><log<x>>); strictly positive, <= 1, radially decreasing.
double weight_w_radial(double rho);
double weight_w(double px, double py);

// ---- cutoff families ------------------------------------------------------

enum class CutoffKind { Psi, Eta };

/// Smooth monotone bump: 1 on [0, 1/2], 0 on [1, inf). Built from
/// exp(-1/t) mollifiers so the plateau values are bitwise exact, with
/// closed-form first and second derivatives. The derivative sup-norms are
/// measured once on construction and reused as certified constants.
class CutoffProfile {
 public:
  static const CutoffProfile& instance();
  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double sup_d1() const { return sup_d1_; }
  double sup_d2() const { return sup_d2_; }

 private:
  CutoffProfile();
  double sup_d1_ = 0.0;
  double sup_d2_ = 0.0;
};

/// Smallest admissible scale for the kind (plateau radius reaches 1).
double cutoff_threshold(CutoffKind kind);

/// Plateau radius gamma_n of the kind's cutoff at scale n.
/// Throws below the admissibility threshold.
double plateau_radius(CutoffKind kind, double n);

/// One member of a cutoff family: radially symmetric, identically 1 on
/// |x| <= gamma_n and 0 on |x| >= n, with iterated-log argument whose
/// depth depends on the kind.
class CutoffFamily {
 public:
  CutoffFamily(CutoffKind kind, double n);

  CutoffKind kind() const { return kind_; }
  double n() const { return n_; }
  double gamma() const { return gamma_; }
  /// log scale in the denominator of the derivative bounds.
  double log_scale() const { return log_scale_; }
  double profile_sup_d1() const;
  double profile_sup_d2() const;

  double value(double rho) const;
  /// signed d/drho; the gradient is radial_slope * unit radial vector.
  double radial_slope(double rho) const;
  /// spectral norm of the Hessian (radial function: max(|F''|, |F'|/rho)).
  double hessian_norm(double rho) const;

  /// Pointwise certified bound on |grad cutoff| at radius rho.
  double gradient_bound(double rho) const;
  /// Pointwise certified bound on |hess cutoff| at radius rho (eta kind).
  double hessian_bound(double rho) const;

 private:
  CutoffKind kind_;
  double n_;
  double gamma_;
  double log_scale_;
};

struct CutoffSample {
  ScalarField value;
  VectorField grad;
  std::optional<ScalarField> hessian_norm;  // present for the eta kind
};

/// Analytic samples of the cutoff, its gradient, and (eta kind) the
/// Hessian norm. Requires grid radius >= n so the support fits.
CutoffSample sample_cutoff(const CutoffFamily& family, const GridPtr& grid);

// ---- stream-function reconstruction --------------------------------------

struct StreamPaths {
  ScalarField canonical;    // radial leg along theta=0, then the arc
  ScalarField radial_only;  // straight ray to each node
  double defect;            // max |canonical - radial_only|
};

/// Both path integrals of v-perp from the origin, without any
/// solenoidality check; the defect measures path dependence.
StreamPaths reconstruct_stream_paths(const VectorField& v);

/// Canonical stream function; throws when the two paths disagree by more
/// than path_tol relative to the field scale (non-solenoidal input).
ScalarField reconstruct_stream(const VectorField& v, double path_tol = 0.05);

// ---- Poincare / Hardy constants -------------------------------------------

enum class InequalityKind { Poincare, Hardy };

struct ConstantEstimate {
  InequalityKind inequality;
  double radius = 0.0;
  std::string anchor;
  double value = 0.0;
  int n_r = 0;
  int n_theta = 0;
  std::string to_json() const;
};

/// Discrete forms behind the estimates: the finite-volume Dirichlet form,
/// the (possibly weighted) diagonal mass, and the anchor mean functional.
struct DirichletForm {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;
  Eigen::VectorXd anchor_mean;
};

DirichletForm build_dirichlet_form(const GridPtr& grid,
                                   const RegionSpec& anchor,
                                   InequalityKind kind);

/// Smallest C with ||u|| <= C (|u|_S + |mean_anchor u|) on the whole
/// discrete space, via the smallest eigenvalue of the anchored pencil.
ConstantEstimate estimate_poincare_constant(const GridPtr& grid,
                                            const RegionSpec& anchor);
/// Same with the weighted mass ||u w||.
ConstantEstimate estimate_hardy_constant(const GridPtr& grid,
                                         const RegionSpec& anchor);

}  // namespace planar_leray
