// geometry.hpp — polar grids on disks, sampled fields, differential
// operators, quadrature, and anchor regions.
//
// All velocity/tensor data is stored in Cartesian components so that
// constant fields are represented exactly; the grid itself is a
// tensor-product (r, theta) lattice with no node at the origin.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace planar_leray {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const;
};

/// Tensor-product discretization of the disk B_R. Radial nodes sit at
/// r_j = (j + 1/2) h with the last ring exactly on the boundary; the
/// angular direction is periodic with n_theta (even) equispaced nodes.
/// Quadrature weights carry the polar Jacobian and reproduce the disk
/// area to machine precision.
class PolarGrid {
 public:
  double radius = 0.0;
  int n_r = 0;
  int n_theta = 0;
  double grading = 1.0;  // reserved; current grids are uniform in r
  double h_r = 0.0;
  double d_theta = 0.0;

  std::vector<double> radial_nodes;       // size n_r, strictly increasing
  std::vector<double> theta_nodes;        // size n_theta
  std::vector<double> cos_theta;
  std::vector<double> sin_theta;
  std::vector<double> radial_weights;     // per-ring weights, Jacobian included
  std::vector<double> quadrature_weights; // per-node area weights

  // antisymmetric circulant kernel for the spectral theta derivative
  std::vector<double> spectral_kernel;    // size n_theta, index = lag

  int node_count() const { return n_r * n_theta; }
  int index(int j, int k) const { return j * n_theta + k; }
  double node_x(int j, int k) const { return radial_nodes[j] * cos_theta[k]; }
  double node_y(int j, int k) const { return radial_nodes[j] * sin_theta[k]; }
  double total_weight() const;
};

using GridPtr = std::shared_ptr<const PolarGrid>;

/// Build a polar grid for the disk of the given radius.
/// Requires radius > 0, n_r >= 8, n_theta >= 8 and even.
GridPtr make_polar_grid(double radius, int n_r, int n_theta);

struct ScalarField {
  GridPtr grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(GridPtr g)
      : grid(std::move(g)), values(grid->node_count(), 0.0) {}

  double& at(int j, int k) { return values[grid->index(j, k)]; }
  double at(int j, int k) const { return values[grid->index(j, k)]; }
};

struct VectorField {
  GridPtr grid;
  std::vector<double> x;  // Cartesian components per node
  std::vector<double> y;
  bool solenoidal_tag = false;

  VectorField() = default;
  explicit VectorField(GridPtr g)
      : grid(std::move(g)),
        x(grid->node_count(), 0.0),
        y(grid->node_count(), 0.0) {}
};

struct TensorField {
  GridPtr grid;
  std::vector<double> xx, xy, yx, yy;  // F_ij = component i, derivative j

  TensorField() = default;
  explicit TensorField(GridPtr g)
      : grid(std::move(g)),
        xx(grid->node_count(), 0.0),
        xy(grid->node_count(), 0.0),
        yx(grid->node_count(), 0.0),
        yy(grid->node_count(), 0.0) {}
};

/// Bounded anchor set of positive measure. Carries its own quadrature
/// rule (independent of any grid) so means over the region are accurate
/// for smooth fields and exact for constants.
class RegionSpec {
 public:
  enum class Kind { Disk, AnnularSector, Rectangle };

  static RegionSpec disk(Vec2 center, double radius);
  static RegionSpec annular_sector(Vec2 center, double r0, double r1,
                                   double theta0, double theta1);
  static RegionSpec rectangle(double x0, double x1, double y0, double y1);

  Kind kind() const { return kind_; }
  double measure() const { return measure_; }
  bool contains(double px, double py) const;
  /// Largest distance from the origin to a point of the region.
  double outer_radius() const;
  bool contained_in_disk(double disk_radius) const;
  std::string describe() const;

  struct QuadPoint {
    double x, y, w;
  };
  const std::vector<QuadPoint>& quadrature() const { return quad_; }

  Vec2 center() const { return center_; }
  double param(int i) const { return params_.at(i); }

 private:
  RegionSpec() = default;
  void build_quadrature();

  Kind kind_ = Kind::Disk;
  Vec2 center_;
  std::vector<double> params_;
  double measure_ = 0.0;
  std::vector<QuadPoint> quad_;
};

// ---- differential operators -------------------------------------------

/// Cartesian gradient of a scalar sample. Spectral in theta, second-order
/// finite differences in r with through-pole coupling at the innermost
/// ring and a one-sided stencil on the boundary ring. Exact for affine
/// functions.
VectorField gradient(const ScalarField& s);

/// (ds/dy, -ds/dx); discretely solenoidal up to discretization error.
VectorField perp_gradient(const ScalarField& s);

ScalarField divergence(const VectorField& v);

// ---- quadrature pairings ----------------------------------------------

double inner_product_l2(const ScalarField& a, const ScalarField& b,
                        const std::optional<RegionSpec>& domain = std::nullopt);
double inner_product_l2(const VectorField& a, const VectorField& b,
                        const std::optional<RegionSpec>& domain = std::nullopt);
double inner_product_l2(const TensorField& a, const TensorField& b,
                        const std::optional<RegionSpec>& domain = std::nullopt);

double l2_norm(const ScalarField& a);
double l2_norm(const VectorField& a);
double l2_norm(const TensorField& a);

/// Componentwise quadrature mean of v over omega; exact for constants.
Vec2 mean_over(const VectorField& v, const RegionSpec& omega);

// ---- pointwise evaluation ----------------------------------------------

/// Bicubic Lagrange interpolation in (r, theta); points inside the
/// innermost ring use the through-pole identification.
double interpolate(const ScalarField& s, double px, double py);
Vec2 interpolate(const VectorField& v, double px, double py);

/// Nodal covector m with m . values == mean_over(field, omega) for scalar
/// samples (componentwise for vectors). Exactly the linear form evaluated
/// by mean_over, assembled once.
std::vector<double> mean_functional(const RegionSpec& omega,
                                    const PolarGrid& grid);

// ---- sanity helpers -----------------------------------------------------

bool all_finite(const ScalarField& s);
bool all_finite(const VectorField& v);
bool all_finite(const TensorField& f);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// ---- dumps ---------------------------------------------------------------

/// CSV dump, header `r,theta,<components...>`, ring-major order,
/// 17 significant digits.
void write_field_csv(const std::string& path, const ScalarField& s);
void write_field_csv(const std::string& path, const VectorField& v);
void write_field_csv(const std::string& path, const TensorField& f);

/// Grid metadata as a JSON object {radius, n_r, n_theta, grading}.
std::string grid_metadata_json(const PolarGrid& grid);

}  // namespace planar_leray
