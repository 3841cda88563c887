// operators.hpp — sparse stream-function assembly on a polar grid.
//
// Velocities are represented as v = perp-grad(chi) with chi clamped on the
// boundary ring (chi = 0 and d chi/dn = 0, eliminated row by row), which
// makes the discrete space exactly divergence-free with exactly zero trace.
// The Dirichlet form K = sum_c C_c^T W C_c is assembled from the same
// sparse derivative matrices used for every pairing, so Cauchy-Schwarz
// holds in exact arithmetic between ||grad v||_K and <F, grad v>_W.

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

#include "planar_leray/geometry.hpp"

namespace planar_leray {

class StreamOperators {
 public:
  explicit StreamOperators(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  int full_size() const { return n_full_; }
  int reduced_size() const { return n_red_; }

  const Eigen::SparseMatrix<double>& K() const { return K_; }
  const Eigen::VectorXd& weights() const { return W_; }

  /// velocity components from reduced stream coefficients
  VectorField velocity(const Eigen::VectorXd& chi) const;
  /// discrete velocity gradient (four components) from coefficients
  TensorField velocity_gradient(const Eigen::VectorXd& chi) const;

  /// load vector: g[xi] = <F, grad perp-grad xi>_W
  Eigen::VectorXd tensor_load(const TensorField& F) const;
  /// load vector: b[xi] = <f, perp-grad xi>_W
  Eigen::VectorXd vector_load(const VectorField& f) const;

  /// skew-symmetric convection matrix for a nodal advecting field
  Eigen::SparseMatrix<double> advection(const VectorField& b) const;

  /// matrix-free action of the skew convection form (same operator as
  /// advection(b), without assembling it)
  class AdvectionAction {
   public:
    AdvectionAction(const StreamOperators& ops, const VectorField& b);
    Eigen::VectorXd apply(const Eigen::VectorXd& chi) const;

   private:
    const StreamOperators& ops_;
    Eigen::VectorXd bx_, by_;
  };
  AdvectionAction advection_action(const VectorField& b) const {
    return AdvectionAction(*this, b);
  }

  double k_norm(const Eigen::VectorXd& chi) const;
  /// dual norm sup_xi r.xi / ||xi||_K, via the K factorization
  double dual_norm(const Eigen::VectorXd& r) const;
  /// K * chi with extended-precision accumulation; the entries carry
  /// biharmonic 1/h^4 scales, so plain double matvecs leave a noise floor
  /// that would mask small residuals
  Eigen::VectorXd apply_stiffness_precise(const Eigen::VectorXd& chi) const;
  /// solve K chi = rhs (Stokes-type system)
  Eigen::VectorXd solve_stiffness(const Eigen::VectorXd& rhs) const;

  /// quadrature-weighted Frobenius norm of a tensor sample
  double tensor_norm(const TensorField& F) const;

  /// derivative matrices on the full node set (assembly flavor:
  /// second-order FD in both directions)
  const Eigen::SparseMatrix<double>& Dx() const { return Dx_; }
  const Eigen::SparseMatrix<double>& Dy() const { return Dy_; }
  /// chi -> velocity maps restricted to the clamped space
  const Eigen::SparseMatrix<double>& P1E() const { return P1E_; }
  const Eigen::SparseMatrix<double>& P2E() const { return P2E_; }
  /// chi -> velocity-gradient maps (xx, xy, yx, yy)
  const Eigen::SparseMatrix<double>& CE(int c) const { return CE_[c]; }
  /// prolongation from reduced coefficients to full nodal values
  const Eigen::SparseMatrix<double>& E() const { return E_; }

 private:
  GridPtr grid_;
  int n_full_ = 0;
  int n_red_ = 0;
  Eigen::VectorXd W_;
  Eigen::SparseMatrix<double> Dx_, Dy_;
  Eigen::SparseMatrix<double> E_;
  Eigen::SparseMatrix<double> P1E_, P2E_;
  Eigen::SparseMatrix<double> CE_[4];
  Eigen::SparseMatrix<double> K_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> K_solver_;
};

using OperatorsPtr = std::shared_ptr<const StreamOperators>;

/// Build (or fetch) operators for a grid; heavy, so callers should reuse.
OperatorsPtr make_stream_operators(const GridPtr& grid);

}  // namespace planar_leray
