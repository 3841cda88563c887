// Unit tests for grids, quadrature, differential operators, and regions.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "planar_leray/geometry.hpp"

using namespace planar_leray;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField sample_scalar(const GridPtr& g, double (*f)(double, double)) {
  ScalarField s(g);
  for (int j = 0; j < g->n_r; ++j)
    for (int k = 0; k < g->n_theta; ++k)
      s.at(j, k) = f(g->node_x(j, k), g->node_y(j, k));
  return s;
}

double max_interior_error(const VectorField& v, Vec2 (*exact)(double, double)) {
  const PolarGrid& g = *v.grid;
  double m = 0.0;
  for (int j = 0; j + 1 < g.n_r; ++j)
    for (int k = 0; k < g.n_theta; ++k) {
      Vec2 e = exact(g.node_x(j, k), g.node_y(j, k));
      int i = g.index(j, k);
      m = std::max({m, std::abs(v.x[i] - e.x), std::abs(v.y[i] - e.y)});
    }
  return m;
}

}  // namespace

TEST_CASE("grid constructor contract") {
  auto g = make_polar_grid(1.0, 32, 64);
  CHECK(g->total_weight() == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(g->radial_nodes.back() == 1.0);
  for (int j = 1; j < g->n_r; ++j)
    CHECK(g->radial_nodes[j] > g->radial_nodes[j - 1]);

  auto gm = make_polar_grid(2.0, 8, 8);
  CHECK(gm->node_count() == 64);
  CHECK(gm->total_weight() == doctest::Approx(4.0 * kPi).epsilon(1e-10));

  CHECK_THROWS_AS(make_polar_grid(1.0, 4, 64), std::invalid_argument);
  CHECK_THROWS_AS(make_polar_grid(-1.0, 32, 64), std::invalid_argument);
  CHECK_THROWS_AS(make_polar_grid(1.0, 32, 63), std::invalid_argument);
}

TEST_CASE("quadrature area exact on a spread of grids") {
  for (auto [R, nr, nt] : {std::tuple{0.5, 8, 8}, {1.0, 17, 30}, {7.5, 40, 96},
                           {1000.0, 64, 128}}) {
    auto g = make_polar_grid(R, nr, nt);
    CHECK(g->total_weight() == doctest::Approx(kPi * R * R).epsilon(1e-10));
  }
}

TEST_CASE("gradient of constants and affine fields") {
  auto g = make_polar_grid(1.5, 24, 48);
  auto c3 = sample_scalar(g, [](double, double) { return 3.0; });
  VectorField gc = gradient(c3);
  for (int i = 0; i < g->node_count(); ++i) {
    CHECK(std::abs(gc.x[i]) < 1e-14);
    CHECK(std::abs(gc.y[i]) < 1e-14);
  }

  auto sx = sample_scalar(g, [](double x, double) { return x; });
  VectorField gx = gradient(sx);
  for (int i = 0; i < g->node_count(); ++i) {
    CHECK(std::abs(gx.x[i] - 1.0) <= 1e-12);
    CHECK(std::abs(gx.y[i]) <= 1e-12);
  }
}

TEST_CASE("gradient converges at second order on x^2 y") {
  double err_prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int nr = 32 << level;
    auto g = make_polar_grid(1.0, nr, 2 * nr);
    auto s = sample_scalar(g, [](double x, double y) { return x * x * y; });
    VectorField grad = gradient(s);
    double err = max_interior_error(
        grad, [](double x, double y) { return Vec2{2.0 * x * y, x * x}; });
    if (level == 0) CHECK(err < 2e-3);
    if (level > 0) CHECK(err_prev / err >= 3.5);
    err_prev = err;
  }
}

TEST_CASE("perp gradient basics") {
  auto g = make_polar_grid(2.0, 32, 64);
  const double a1 = 0.7, a2 = -1.3;
  ScalarField s(g);
  for (int j = 0; j < g->n_r; ++j)
    for (int k = 0; k < g->n_theta; ++k)
      s.at(j, k) = a1 * g->node_y(j, k) - a2 * g->node_x(j, k);
  VectorField v = perp_gradient(s);
  CHECK(v.solenoidal_tag);
  for (int i = 0; i < g->node_count(); ++i) {
    CHECK(std::abs(v.x[i] - a1) <= 1e-12);
    CHECK(std::abs(v.y[i] - a2) <= 1e-12);
  }

  auto rot = sample_scalar(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
  VectorField w = perp_gradient(rot);
  double err = max_interior_error(w, [](double x, double y) { return Vec2{y, -x}; });
  CHECK(err < 1e-10);  // quadratic radial profile, exact stencils
}

TEST_CASE("divergence of affine fields and solenoidality under refinement") {
  auto g = make_polar_grid(1.0, 64, 128);
  VectorField v(g);
  for (int j = 0; j < g->n_r; ++j)
    for (int k = 0; k < g->n_theta; ++k) {
      v.x[g->index(j, k)] = g->node_x(j, k);
      v.y[g->index(j, k)] = g->node_y(j, k);
    }
  ScalarField d = divergence(v);
  for (int i = 0; i < g->node_count(); ++i) CHECK(std::abs(d.values[i] - 2.0) <= 1e-10);

  // div(perp_grad(s)): the polar-form divergence commutes with the perp
  // gradient, so the defect sits at machine level on every grid
  for (int level = 0; level < 2; ++level) {
    const int nr = 64 << level;
    auto gg = make_polar_grid(1.0, nr, 2 * nr);
    auto s = sample_scalar(gg, [](double x, double y) {
      return std::exp(-3.0 * ((x - 0.2) * (x - 0.2) + (y + 0.1) * (y + 0.1)));
    });
    VectorField pg = perp_gradient(s);
    double rel = l2_norm(divergence(pg)) / l2_norm(gradient(s));
    CHECK(rel <= 1e-3);   // contract-level bound
    CHECK(rel <= 1e-12);  // what the commuting stencils actually deliver
  }
}

TEST_CASE("gradient/divergence adjoint identity up to quadrature") {
  auto g = make_polar_grid(1.0, 64, 128);
  auto s = sample_scalar(g, [](double x, double y) { return std::cos(2.0 * x) + x * y; });
  // vector field vanishing smoothly on the boundary
  VectorField v(g);
  for (int j = 0; j < g->n_r; ++j)
    for (int k = 0; k < g->n_theta; ++k) {
      const double x = g->node_x(j, k), y = g->node_y(j, k);
      const double cut = std::pow(std::max(0.0, 1.0 - (x * x + y * y)), 3);
      int i = g->index(j, k);
      v.x[i] = cut * (y + 0.3);
      v.y[i] = cut * (x * x - 0.5);
    }
  const double lhs = inner_product_l2(gradient(s), v);
  const double rhs = -inner_product_l2(s, divergence(v));
  const double scale = l2_norm(gradient(s)) * l2_norm(v);
  CHECK(std::abs(lhs - rhs) <= 1e-3 * scale);
}

TEST_CASE("inner products over the disk") {
  auto g = make_polar_grid(1.0, 64, 128);
  auto one = sample_scalar(g, [](double, double) { return 1.0; });
  CHECK(inner_product_l2(one, one) == doctest::Approx(kPi).epsilon(1e-10));

  auto sx = sample_scalar(g, [](double x, double) { return x; });
  CHECK(inner_product_l2(sx, sx) == doctest::Approx(kPi / 4.0).epsilon(1e-6));

  ScalarField zero(g);
  CHECK(inner_product_l2(sx, zero) == 0.0);
}

TEST_CASE("mean_over: constants, symmetry, centroid") {
  auto g = make_polar_grid(1.0, 64, 128);
  VectorField c(g);
  for (int i = 0; i < g->node_count(); ++i) {
    c.x[i] = 3.0;
    c.y[i] = -1.0;
  }
  for (const auto& omega :
       {RegionSpec::disk({0.0, 0.0}, 0.5), RegionSpec::disk({0.3, -0.2}, 0.25),
        RegionSpec::annular_sector({0.0, 0.0}, 0.2, 0.6, 0.0, 1.5),
        RegionSpec::rectangle(-0.4, 0.1, -0.3, 0.3)}) {
    Vec2 m = mean_over(c, omega);
    CHECK(std::abs(m.x - 3.0) <= 1e-12);
    CHECK(std::abs(m.y + 1.0) <= 1e-12);
  }

  VectorField lin(g);
  for (int j = 0; j < g->n_r; ++j)
    for (int k = 0; k < g->n_theta; ++k) {
      int i = g->index(j, k);
      lin.x[i] = g->node_x(j, k);
      lin.y[i] = g->node_y(j, k);
    }
  Vec2 m0 = mean_over(lin, RegionSpec::disk({0.0, 0.0}, 0.5));
  CHECK(std::abs(m0.x) <= 1e-9);
  CHECK(std::abs(m0.y) <= 1e-9);

  Vec2 mc = mean_over(lin, RegionSpec::disk({0.5, 0.0}, 0.25));
  CHECK(std::abs(mc.x - 0.5) <= 1e-6);
  CHECK(std::abs(mc.y) <= 1e-6);

  // linearity in the field argument
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  VectorField f1(g), f2(g);
  for (int i = 0; i < g->node_count(); ++i) {
    f1.x[i] = unif(rng);
    f1.y[i] = unif(rng);
    f2.x[i] = unif(rng);
    f2.y[i] = unif(rng);
  }
  auto omega = RegionSpec::disk({0.1, 0.2}, 0.4);
  const double alpha = 1.7;
  VectorField combo(g);
  for (int i = 0; i < g->node_count(); ++i) {
    combo.x[i] = f1.x[i] + alpha * f2.x[i];
    combo.y[i] = f1.y[i] + alpha * f2.y[i];
  }
  Vec2 m1 = mean_over(f1, omega), m2 = mean_over(f2, omega),
       m12 = mean_over(combo, omega);
  CHECK(m12.x == doctest::Approx(m1.x + alpha * m2.x).epsilon(1e-12));
  CHECK(m12.y == doctest::Approx(m1.y + alpha * m2.y).epsilon(1e-12));

  CHECK_THROWS_AS(mean_over(lin, RegionSpec::disk({0.9, 0.0}, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("region containment checks") {
  auto r = RegionSpec::disk({0.5, 0.0}, 0.25);
  CHECK(r.contained_in_disk(1.0));
  CHECK(!r.contained_in_disk(0.7));
  CHECK(r.contains(0.5, 0.1));
  CHECK(!r.contains(0.0, 0.0));
  CHECK(r.measure() == doctest::Approx(kPi * 0.0625));

  auto rect = RegionSpec::rectangle(-0.1, 0.1, -0.2, 0.2);
  CHECK(rect.measure() == doctest::Approx(0.08));
  CHECK(rect.contains(0.0, 0.0));
}

TEST_CASE("interpolation reproduces smooth fields") {
  auto g = make_polar_grid(1.0, 48, 96);
  auto s = sample_scalar(g, [](double x, double y) { return x * x - y + 0.5 * x * y; });
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-0.65, 0.65);
  for (int t = 0; t < 200; ++t) {
    double px = unif(rng), py = unif(rng);
    double exact = px * px - py + 0.5 * px * py;
    CHECK(std::abs(interpolate(s, px, py) - exact) < 5e-6);
  }
  // near the pole the mirrored stencil must stay smooth
  CHECK(std::abs(interpolate(s, 1e-3, -1e-3) - (1e-6 + 1e-3 + 0.5 * -1e-6)) < 5e-6);
}

TEST_CASE("field dumps and grid metadata") {
  auto g = make_polar_grid(1.0, 8, 8);
  auto s = sample_scalar(g, [](double x, double y) { return x + 2.0 * y; });
  auto dir = std::filesystem::temp_directory_path() / "pl_geom_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "field.csv").string();
  write_field_csv(path, s);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,theta,value");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == g->node_count());

  auto meta = grid_metadata_json(*g);
  CHECK(meta.find("\"n_r\":8") != std::string::npos);
  CHECK(meta.find("\"radius\":1") != std::string::npos);
}
