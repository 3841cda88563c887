// Unit tests for the weight, cutoff certificates, stream reconstruction,
// and the anchored Poincare/Hardy constant estimators.

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "planar_leray/geometry.hpp"
#include "planar_leray/weighted.hpp"

using namespace planar_leray;

namespace {
constexpr double kPi = std::numbers::pi;
const double kE = std::exp(1.0);
}  // namespace

TEST_CASE("weight closed forms and monotonicity") {
  CHECK(weight_w(0.0, 0.0) == 1.0);
  CHECK(weight_w_radial(kE - 1.0) == doctest::Approx(1.0 / (2.0 * kE)).epsilon(1e-14));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1e4);
  for (int t = 0; t < 10000; ++t) {
    double a = unif(rng), b = unif(rng);
    if (a > b) std::swap(a, b);
    CHECK(weight_w_radial(a) >= weight_w_radial(b));
  }
  for (double rho : {0.0, 0.3, 2.0, 55.0, 1e6}) {
    CHECK(weight_w_radial(rho) * envelope_factor(rho) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(weight_w_radial(rho) <= 1.0);
    CHECK(weight_w_radial(rho) > 0.0);
  }
}

TEST_CASE("plateau radius closed form, growth, thresholds") {
  const double n = std::exp(3.0) - 1.0;  // <log<n>> = 4
  CHECK(plateau_radius(CutoffKind::Psi, n) ==
        doctest::Approx(kE - 1.0).epsilon(1e-14));

  double prev_psi = 0.0, prev_eta = 0.0;
  for (double nn = 20.0; nn < 2e9; nn *= 3.7) {
    const double gp = plateau_radius(CutoffKind::Psi, nn);
    const double ge = plateau_radius(CutoffKind::Eta, nn);
    CHECK(gp < nn);
    CHECK(ge < nn);
    CHECK(gp > prev_psi);
    CHECK(ge > prev_eta);
    prev_psi = gp;
    prev_eta = ge;
  }

  CHECK_THROWS_AS(plateau_radius(CutoffKind::Eta, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(plateau_radius(CutoffKind::Psi, 2.0), std::invalid_argument);
  // just above the threshold the plateau radius reaches 1
  for (auto kind : {CutoffKind::Psi, CutoffKind::Eta}) {
    const double t = cutoff_threshold(kind);
    CHECK(plateau_radius(kind, t * 1.0000001) ==
          doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("cutoff samples: plateau, support, certified bounds") {
  const auto& profile = CutoffProfile::instance();
  CHECK(profile.value(0.3) == 1.0);  // bitwise plateau
  CHECK(profile.value(1.2) == 0.0);
  CHECK(profile.sup_d1() > 0.0);
  CHECK(profile.sup_d2() > profile.sup_d1());

  for (double R : {40.0, 1000.0}) {
    auto grid = make_polar_grid(R, 64, 128);
    for (auto kind : {CutoffKind::Psi, CutoffKind::Eta}) {
      CutoffFamily fam(kind, R);
      auto sample = sample_cutoff(fam, grid);
      REQUIRE(all_finite(sample.value));
      for (int j = 0; j < grid->n_r; ++j) {
        const double rho = grid->radial_nodes[j];
        const int i = grid->index(j, 0);
        if (rho <= fam.gamma()) {
          CHECK(sample.value.values[i] == 1.0);
          CHECK(sample.grad.x[i] == 0.0);
        }
        if (rho >= fam.n()) CHECK(sample.value.values[i] == 0.0);
        const double gmag = std::hypot(sample.grad.x[i], sample.grad.y[i]);
        CHECK(gmag <= fam.gradient_bound(rho) * (1.0 + 1e-12) + 1e-300);
        if (kind == CutoffKind::Eta)
          CHECK(sample.hessian_norm->values[i] <=
                fam.hessian_bound(rho) * (1.0 + 1e-12) + 1e-300);
      }
      if (kind == CutoffKind::Eta) CHECK(sample.hessian_norm.has_value());
    }
  }

  CHECK_THROWS_AS(sample_cutoff(CutoffFamily(CutoffKind::Psi, 100.0),
                                make_polar_grid(50.0, 32, 64)),
                  std::invalid_argument);
}

TEST_CASE("stream reconstruction: constants, paths, round trip, growth") {
  auto grid = make_polar_grid(1.0, 64, 128);

  // constant field has the linear stream function a1 y - a2 x
  VectorField c(grid);
  for (int i = 0; i < grid->node_count(); ++i) {
    c.x[i] = 0.8;
    c.y[i] = -0.45;
  }
  c.solenoidal_tag = true;
  ScalarField psi = reconstruct_stream(c);
  double maxerr = 0.0;
  for (int j = 0; j < grid->n_r; ++j)
    for (int k = 0; k < grid->n_theta; ++k) {
      const double exact = 0.8 * grid->node_y(j, k) + 0.45 * grid->node_x(j, k);
      maxerr = std::max(maxerr, std::abs(psi.at(j, k) - exact));
    }
  CHECK(maxerr < 5e-4);  // O(h^2) of the trapezoid legs

  // path independence for a discretely solenoidal field
  ScalarField smooth(grid);
  for (int j = 0; j < grid->n_r; ++j)
    for (int k = 0; k < grid->n_theta; ++k) {
      const double x = grid->node_x(j, k), y = grid->node_y(j, k);
      const double s2 = (x - 0.15) * (x - 0.15) + y * y;
      smooth.at(j, k) = std::exp(-3.0 * s2);
    }
  VectorField v = perp_gradient(smooth);
  StreamPaths paths = reconstruct_stream_paths(v);
  CHECK(paths.defect <= 1e-3 * l2_norm(v));

  // round trip: reconstruct then differentiate, against the input field
  double rel_prev = 0.0;
  for (int level = 0; level < 2; ++level) {
    auto gg = make_polar_grid(1.0, 64 << level, 128 << level);
    ScalarField bb(gg);
    for (int j = 0; j < gg->n_r; ++j)
      for (int k = 0; k < gg->n_theta; ++k) {
        const double x = gg->node_x(j, k), y = gg->node_y(j, k);
        const double s2 = (x - 0.15) * (x - 0.15) + y * y;
        bb.at(j, k) = s2 < 0.25 ? std::exp(1.0 / (s2 / 0.25 - 1.0)) : 0.0;
      }
    VectorField vv = perp_gradient(bb);
    ScalarField rec = reconstruct_stream(vv);
    VectorField back = perp_gradient(rec);
    VectorField diff(gg);
    for (int i = 0; i < gg->node_count(); ++i) {
      diff.x[i] = back.x[i] - vv.x[i];
      diff.y[i] = back.y[i] - vv.y[i];
    }
    const double rel = l2_norm(diff) / l2_norm(vv);
    if (level == 0) CHECK(rel < 5e-2);
    if (level > 0) CHECK(rel < 0.5 * rel_prev);
    rel_prev = rel;
  }

  // growth bound: the azimuthal field with |v| = w saturates the envelope
  auto gbig = make_polar_grid(8.0, 96, 192);
  VectorField sat(gbig);
  for (int j = 0; j < gbig->n_r; ++j) {
    const double w = weight_w_radial(gbig->radial_nodes[j]);
    for (int k = 0; k < gbig->n_theta; ++k) {
      const int i = gbig->index(j, k);
      sat.x[i] = w * gbig->sin_theta[k];
      sat.y[i] = -w * gbig->cos_theta[k];
    }
  }
  ScalarField psis = reconstruct_stream(sat);
  for (int j = 0; j < gbig->n_r; ++j) {
    const double cap = std::log(1.0 + std::log1p(gbig->radial_nodes[j]));
    for (int k = 0; k < gbig->n_theta; ++k)
      CHECK(std::abs(psis.at(j, k)) <= cap * 1.02 + 1e-4);
  }

  // non-solenoidal input is rejected as path dependent
  VectorField bad(grid);
  for (int j = 0; j < grid->n_r; ++j)
    for (int k = 0; k < grid->n_theta; ++k) {
      const int i = grid->index(j, k);
      bad.x[i] = grid->node_x(j, k);
      bad.y[i] = grid->node_y(j, k);
    }
  CHECK_THROWS_AS(reconstruct_stream(bad), std::invalid_argument);
}

TEST_CASE("poincare estimate: dense oracle, constants, anchor monotonicity") {
  auto grid = make_polar_grid(1.0, 16, 32);
  auto full = RegionSpec::disk({0.0, 0.0}, 1.0);
  auto est = estimate_poincare_constant(grid, full);

  // brute-force dense generalized eigensolve on the same forms
  DirichletForm form = build_dirichlet_form(grid, full, InequalityKind::Poincare);
  Eigen::MatrixXd K = Eigen::MatrixXd(form.stiffness) +
                      form.anchor_mean * form.anchor_mean.transpose();
  Eigen::MatrixXd M = form.mass.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  const double dense_c = 1.0 / std::sqrt(es.eigenvalues()(0));
  CHECK(std::abs(est.value - dense_c) <= 0.02 * dense_c);

  // constant fields force C >= sqrt(pi) on the unit disk with full anchor
  CHECK(est.value >= std::sqrt(kPi) * (1.0 - 1e-9));
  CHECK(est.value <= std::sqrt(kPi) * 1.05);

  // shrinking the anchor cannot decrease the constant
  auto est_half = estimate_poincare_constant(grid, RegionSpec::disk({0.0, 0.0}, 0.5));
  auto est_eighth =
      estimate_poincare_constant(grid, RegionSpec::disk({0.0, 0.0}, 0.125));
  CHECK(est_eighth.value >= est_half.value * (1.0 - 1e-9));
  CHECK(est_half.value >= est.value * (1.0 - 1e-9));

  // refinement enlarges the trial space, so the constant cannot drop
  auto fine = make_polar_grid(1.0, 32, 64);
  auto est_fine = estimate_poincare_constant(fine, full);
  CHECK(est_fine.value >= est.value * (1.0 - 1e-2));

  CHECK(est.to_json().find("\"inequality\":\"poincare\"") != std::string::npos);
}

TEST_CASE("hardy estimate: radius robustness and constant-field bound") {
  auto anchor = RegionSpec::disk({0.0, 0.0}, 0.5);
  auto g1 = make_polar_grid(1.0, 24, 48);
  auto g8 = make_polar_grid(8.0, 48, 96);
  auto c1 = estimate_hardy_constant(g1, anchor);
  auto c8 = estimate_hardy_constant(g8, anchor);
  CHECK(std::isfinite(c1.value));
  CHECK(std::isfinite(c8.value));
  CHECK(c8.value / c1.value <= 4.0);  // radius-uniform up to discrete slack

  // constant field lower bound: C >= ||w||_{L2(B)}
  ScalarField wfield(g1);
  for (int j = 0; j < g1->n_r; ++j)
    for (int k = 0; k < g1->n_theta; ++k)
      wfield.at(j, k) = weight_w_radial(g1->radial_nodes[j]);
  const double wnorm = l2_norm(wfield);
  CHECK(c1.value >= wnorm * (1.0 - 1e-9));
}

TEST_CASE("estimated constants certify their inequality on random fields") {
  auto grid = make_polar_grid(2.0, 24, 48);
  auto anchor = RegionSpec::disk({0.3, -0.1}, 0.6);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (auto kind : {InequalityKind::Poincare, InequalityKind::Hardy}) {
    const auto est = kind == InequalityKind::Poincare
                         ? estimate_poincare_constant(grid, anchor)
                         : estimate_hardy_constant(grid, anchor);
    DirichletForm form = build_dirichlet_form(grid, anchor, kind);
    const int N = static_cast<int>(form.mass.size());
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd u(N);
      for (int i = 0; i < N; ++i) u[i] = gauss(rng);
      const double lhs = std::sqrt(u.dot(form.mass.cwiseProduct(u)));
      const double semi = std::sqrt(std::max(0.0, u.dot(form.stiffness * u)));
      const double anchored = std::abs(form.anchor_mean.dot(u));
      if (lhs > est.value * (semi + anchored) * (1.0 + 1e-9)) ++violations;
    }
    CHECK(violations == 0);
  }
}
