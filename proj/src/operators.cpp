// operators.cpp — sparse derivative matrices, the clamped elimination,
// and the stream-function Dirichlet form.

#include "planar_leray/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace planar_leray {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// radial derivative: central stencil, through-pole coupling on ring 0,
// one-sided second-order stencil on the boundary ring
SpMat radial_matrix(const PolarGrid& g) {
  const int nt = g.n_theta, J = g.n_r - 1;
  const double inv2h = 0.5 / g.h_r;
  std::vector<Triplet> t;
  t.reserve(3 * g.node_count());
  for (int k = 0; k < nt; ++k) {
    t.emplace_back(g.index(0, k), g.index(1, k), inv2h);
    t.emplace_back(g.index(0, k), g.index(0, (k + nt / 2) % nt), -inv2h);
  }
  for (int j = 1; j < J; ++j)
    for (int k = 0; k < nt; ++k) {
      t.emplace_back(g.index(j, k), g.index(j + 1, k), inv2h);
      t.emplace_back(g.index(j, k), g.index(j - 1, k), -inv2h);
    }
  for (int k = 0; k < nt; ++k) {
    t.emplace_back(g.index(J, k), g.index(J, k), 3.0 * inv2h);
    t.emplace_back(g.index(J, k), g.index(J - 1, k), -4.0 * inv2h);
    t.emplace_back(g.index(J, k), g.index(J - 2, k), inv2h);
  }
  SpMat m(g.node_count(), g.node_count());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// angular derivative: periodic central differences
SpMat angular_matrix(const PolarGrid& g) {
  const int nt = g.n_theta;
  const double inv2d = 0.5 / g.d_theta;
  std::vector<Triplet> t;
  t.reserve(2 * g.node_count());
  for (int j = 0; j < g.n_r; ++j)
    for (int k = 0; k < nt; ++k) {
      t.emplace_back(g.index(j, k), g.index(j, (k + 1) % nt), inv2d);
      t.emplace_back(g.index(j, k), g.index(j, (k + nt - 1) % nt), -inv2d);
    }
  SpMat m(g.node_count(), g.node_count());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat diagonal(const Eigen::VectorXd& d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (int i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  SpMat m(d.size(), d.size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

StreamOperators::StreamOperators(GridPtr grid) : grid_(std::move(grid)) {
  const PolarGrid& g = *grid_;
  if (g.n_r < 8) throw std::invalid_argument("stream operators need n_r >= 8");
  n_full_ = g.node_count();
  n_red_ = (g.n_r - 2) * g.n_theta;

  W_.resize(n_full_);
  for (int i = 0; i < n_full_; ++i) W_[i] = g.quadrature_weights[i];

  const SpMat Dr = radial_matrix(g);
  const SpMat Dt = angular_matrix(g);

  Eigen::VectorXd ct(n_full_), st(n_full_), sor(n_full_), cor(n_full_);
  for (int j = 0; j < g.n_r; ++j) {
    const double invr = 1.0 / g.radial_nodes[j];
    for (int k = 0; k < g.n_theta; ++k) {
      const int i = g.index(j, k);
      ct[i] = g.cos_theta[k];
      st[i] = g.sin_theta[k];
      sor[i] = g.sin_theta[k] * invr;
      cor[i] = g.cos_theta[k] * invr;
    }
  }
  Dx_ = diagonal(ct) * Dr - diagonal(sor) * Dt;
  Dy_ = diagonal(st) * Dr + diagonal(cor) * Dt;

  // clamped elimination: chi = 0 on the boundary ring; the next ring is
  // slaved to ring J-2 so the one-sided normal derivative vanishes exactly
  {
    std::vector<Triplet> t;
    t.reserve(n_red_ + g.n_theta);
    for (int j = 0; j + 2 < g.n_r; ++j)
      for (int k = 0; k < g.n_theta; ++k)
        t.emplace_back(g.index(j, k), j * g.n_theta + k, 1.0);
    const int jlast = g.n_r - 3;  // master ring for the slaved one
    for (int k = 0; k < g.n_theta; ++k)
      t.emplace_back(g.index(g.n_r - 2, k), jlast * g.n_theta + k, 0.25);
    E_.resize(n_full_, n_red_);
    E_.setFromTriplets(t.begin(), t.end());
  }

  const SpMat P1 = Dy_;           // u_x = d chi / dy
  const SpMat P2 = SpMat(-Dx_);   // u_y = -d chi / dx
  P1E_ = P1 * E_;
  P2E_ = P2 * E_;
  CE_[0] = Dx_ * P1E_;  // (grad u)_xx
  CE_[1] = Dy_ * P1E_;  // (grad u)_xy
  CE_[2] = Dx_ * P2E_;  // (grad u)_yx
  CE_[3] = Dy_ * P2E_;  // (grad u)_yy

  const SpMat Wd = diagonal(W_);
  K_ = SpMat(n_red_, n_red_);
  for (const auto& C : CE_) {
    SpMat term = SpMat(C.transpose()) * Wd * C;
    K_ = K_ + term;
  }
  K_.makeCompressed();

  K_solver_.compute(K_);
  if (K_solver_.info() != Eigen::Success)
    throw std::runtime_error("stream Dirichlet form: factorization failed");
}

VectorField StreamOperators::velocity(const Eigen::VectorXd& chi) const {
  VectorField out(grid_);
  Eigen::VectorXd ux = P1E_ * chi;
  Eigen::VectorXd uy = P2E_ * chi;
  for (int i = 0; i < n_full_; ++i) {
    out.x[i] = ux[i];
    out.y[i] = uy[i];
  }
  out.solenoidal_tag = true;
  return out;
}

TensorField StreamOperators::velocity_gradient(const Eigen::VectorXd& chi) const {
  TensorField out(grid_);
  Eigen::VectorXd c0 = CE_[0] * chi, c1 = CE_[1] * chi, c2 = CE_[2] * chi,
                  c3 = CE_[3] * chi;
  for (int i = 0; i < n_full_; ++i) {
    out.xx[i] = c0[i];
    out.xy[i] = c1[i];
    out.yx[i] = c2[i];
    out.yy[i] = c3[i];
  }
  return out;
}

Eigen::VectorXd StreamOperators::tensor_load(const TensorField& F) const {
  const std::vector<double>* comps[4] = {&F.xx, &F.xy, &F.yx, &F.yy};
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n_red_);
  for (int c = 0; c < 4; ++c) {
    Eigen::VectorXd wf(n_full_);
    for (int i = 0; i < n_full_; ++i) wf[i] = W_[i] * (*comps[c])[i];
    g += CE_[c].transpose() * wf;
  }
  return g;
}

Eigen::VectorXd StreamOperators::vector_load(const VectorField& f) const {
  Eigen::VectorXd wx(n_full_), wy(n_full_);
  for (int i = 0; i < n_full_; ++i) {
    wx[i] = W_[i] * f.x[i];
    wy[i] = W_[i] * f.y[i];
  }
  return P1E_.transpose() * wx + P2E_.transpose() * wy;
}

Eigen::SparseMatrix<double> StreamOperators::advection(const VectorField& b) const {
  Eigen::VectorXd bx(n_full_), by(n_full_);
  for (int i = 0; i < n_full_; ++i) {
    bx[i] = b.x[i];
    by[i] = b.y[i];
  }
  const SpMat Mb = diagonal(bx) * Dx_ + diagonal(by) * Dy_;
  const SpMat Wd = diagonal(W_);
  SpMat A(n_red_, n_red_);
  {
    const SpMat WMb = Wd * Mb;
    A = SpMat(P1E_.transpose()) * WMb * P1E_ +
        SpMat(P2E_.transpose()) * WMb * P2E_;
  }
  SpMat N = 0.5 * (A - SpMat(A.transpose()));
  N.makeCompressed();
  return N;
}

StreamOperators::AdvectionAction::AdvectionAction(const StreamOperators& ops,
                                                  const VectorField& b)
    : ops_(ops) {
  const int n = ops.full_size();
  bx_.resize(n);
  by_.resize(n);
  for (int i = 0; i < n; ++i) {
    bx_[i] = b.x[i];
    by_[i] = b.y[i];
  }
}

Eigen::VectorXd StreamOperators::AdvectionAction::apply(
    const Eigen::VectorXd& chi) const {
  const auto& o = ops_;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(o.n_red_);
  for (const auto* P : {&o.P1E_, &o.P2E_}) {
    const Eigen::VectorXd v = (*P) * chi;
    // <b.grad v, phi>_W
    Eigen::VectorXd mv = bx_.cwiseProduct(o.Dx_ * v) + by_.cwiseProduct(o.Dy_ * v);
    out += P->transpose() * o.W_.cwiseProduct(mv);
    // - <b.grad phi, v>_W, applied through the transposed derivative maps
    Eigen::VectorXd wv = o.W_.cwiseProduct(v);
    out -= P->transpose() *
           (o.Dx_.transpose() * bx_.cwiseProduct(wv) +
            o.Dy_.transpose() * by_.cwiseProduct(wv));
  }
  return 0.5 * out;
}

double StreamOperators::k_norm(const Eigen::VectorXd& chi) const {
  return std::sqrt(std::max(0.0, chi.dot(K_ * chi)));
}

double StreamOperators::dual_norm(const Eigen::VectorXd& r) const {
  Eigen::VectorXd z = K_solver_.solve(r);
  return std::sqrt(std::max(0.0, r.dot(z)));
}

Eigen::VectorXd StreamOperators::apply_stiffness_precise(
    const Eigen::VectorXd& chi) const {
  std::vector<long double> acc(n_red_, 0.0L);
  for (int c = 0; c < K_.outerSize(); ++c) {
    const long double xc = chi[c];
    for (SpMat::InnerIterator it(K_, c); it; ++it)
      acc[it.row()] += static_cast<long double>(it.value()) * xc;
  }
  Eigen::VectorXd out(n_red_);
  for (int i = 0; i < n_red_; ++i) out[i] = static_cast<double>(acc[i]);
  return out;
}

Eigen::VectorXd StreamOperators::solve_stiffness(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd chi = K_solver_.solve(rhs);
  if (K_solver_.info() != Eigen::Success)
    throw std::runtime_error("stream Dirichlet solve failed");
  return chi;
}

double StreamOperators::tensor_norm(const TensorField& F) const {
  double acc = 0.0;
  for (int i = 0; i < n_full_; ++i)
    acc += W_[i] * (F.xx[i] * F.xx[i] + F.xy[i] * F.xy[i] + F.yx[i] * F.yx[i] +
                    F.yy[i] * F.yy[i]);
  return std::sqrt(std::max(0.0, acc));
}

OperatorsPtr make_stream_operators(const GridPtr& grid) {
  return std::make_shared<const StreamOperators>(grid);
}

}  // namespace planar_leray
