#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "capgeo/mc.hpp"

namespace capgeo::convex {

using Direction = Eigen::VectorXd;
using Point = Eigen::VectorXd;

// Finite point set X contained in B_{radius_bound}(0).
struct PointCloud {
  int dim = 0;
  std::vector<Point> points;
  double radius_bound = 0.0;

  PointCloud(int dim_, std::vector<Point> points_, double radius_bound_ = 0.0);

  int size() const { return static_cast<int>(points.size()); }
  const Eigen::MatrixXd& matrix() const { return mat_; }  // dim x k
  double default_tie_tol() const { return 1e-9 * radius_bound; }

  // Affine dimension of the point set (rank of the centered configuration);
  // `flat_normal` spans the orthogonal complement direction when deficient.
  int affine_rank(double tol = 1e-9) const;
  Direction flat_normal() const;

 private:
  Eigen::MatrixXd mat_;
};

// true iff max_j (x_j - x_i) . nu <= tol, i.e. nu is an outer normal of a
// support hyperplane at x_i.
bool in_normal_cone(const PointCloud& X, int i, const Direction& nu, double tol);

// Indices attaining max_j x_j . nu within tie_tol.
std::vector<int> support_set(const PointCloud& X, const Direction& nu, double tie_tol);

struct NormalConeInfo {
  bool empty = false;
  Direction witness;  // a unit direction in N_x X when nonempty
};

// Exact emptiness decision for the normal cone of X at x_i: nonempty iff x_i
// is not interior to conv(X). Returns an LP certificate direction.
NormalConeInfo normal_cone_info(const PointCloud& X, int i);

// sigma(x_i) in N_{x_i}X whenever the cone is nonempty; interior points are
// unconstrained. Validity is enforced at construction.
struct NormalSelector {
  std::vector<Direction> sigma;

  static NormalSelector validated(const PointCloud& X, std::vector<Direction> sigma,
                                  double tol);
  // A canonical valid selector: LP witnesses at support points, e_1 elsewhere.
  static NormalSelector generate(const PointCloud& X);
  // Valid selector as aligned as each cone allows with +-normal; reproduces
  // the near-equality regime on flattened clouds.
  static NormalSelector flattened(const PointCloud& X, const Direction& normal);

  const Eigen::MatrixXd& matrix() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

// MC estimate of H^{N-1}(N^{sigma,theta} X): a direction nu is accepted iff
// some support point of X in direction nu has nu . sigma >= cos(theta). For
// a.e. nu the support point is unique, which makes the estimator consistent.
mc::McEstimate bundle_measure(const PointCloud& X, const NormalSelector& sigma,
                              double theta, std::uint64_t samples, std::uint64_t seed,
                              int workers = 1);

struct WidthResult {
  double value = 0.0;
  Direction direction;
  double certificate_gap = 0.0;  // sampled-minimum minus value (N >= 4 only)
  bool exact = true;             // enumeration (N <= 3) vs multistart (N >= 4)
};

// Minimal distance between parallel supporting hyperplanes. Exact candidate
// enumeration for N = 2, 3; multistart subgradient descent above.
WidthResult width(const PointCloud& X, int restarts = 16, double tol = 1e-10);

// Extent of X along nu: max x.nu - min x.nu.
double extent(const PointCloud& X, const Direction& nu);

struct ObstacleNormal {
  Direction normal;
  bool smooth = true;
};

// Closed convex obstacle with nonempty interior.
class ConvexObstacle {
 public:
  virtual ~ConvexObstacle() = default;
  virtual int dim() const = 0;
  // dist(x, C); 0 inside.
  virtual double distance(const Point& x) const = 0;
  virtual Point project(const Point& x) const = 0;
  virtual ObstacleNormal normal_at(const Point& x, double tol = 1e-7) const = 0;
  virtual std::string describe() const = 0;
  // Nearest point of the boundary, defined on both sides of it.
  virtual Point boundary_projection(const Point& x) const = 0;
  // Point of C attaining max_{y in C} y . u (2D obstacles unless overridden).
  virtual Point support_point(const Direction& u) const;
  // Dense boundary chain, 2D obstacles only.
  virtual std::vector<Eigen::Vector2d> boundary_polyline(int segments) const;

  bool contains(const Point& x, double tol = 0.0) const { return distance(x) <= tol; }
};

class BallObstacle final : public ConvexObstacle {
 public:
  BallObstacle(Point center, double radius);
  int dim() const override { return static_cast<int>(center_.size()); }
  double distance(const Point& x) const override;
  Point project(const Point& x) const override;
  ObstacleNormal normal_at(const Point& x, double tol = 1e-7) const override;
  std::string describe() const override;
  Point boundary_projection(const Point& x) const override;
  Point support_point(const Direction& u) const override;
  std::vector<Eigen::Vector2d> boundary_polyline(int segments) const override;
  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Point center_;
  double radius_;
};

// Intersection of halfspaces a_i . x <= b_i with nonempty interior.
class PolytopeObstacle final : public ConvexObstacle {
 public:
  PolytopeObstacle(Eigen::MatrixXd A, Eigen::VectorXd b);
  int dim() const override { return static_cast<int>(A_.cols()); }
  double distance(const Point& x) const override;
  Point project(const Point& x) const override;
  ObstacleNormal normal_at(const Point& x, double tol = 1e-7) const override;
  std::string describe() const override;
  Point boundary_projection(const Point& x) const override;
  Point support_point(const Direction& u) const override;
  std::vector<Eigen::Vector2d> boundary_polyline(int segments) const override;
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }

  // Axis-aligned box [lo, hi].
  static std::shared_ptr<PolytopeObstacle> box(const Point& lo, const Point& hi);
  // Vertices of a 2D polytope in CCW order.
  std::vector<Eigen::Vector2d> vertices2d() const;

 private:
  std::vector<Eigen::Vector2d> compute_vertices2d() const;

 public:

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  std::vector<Eigen::Vector2d> verts2d_;  // cached for 2D polytopes
};

// C_eta = C + closed ball of radius eta; all queries answered through the
// base obstacle's projection (dist_{C_eta} = dist_C - eta clamped at 0).
class DilationObstacle final : public ConvexObstacle {
 public:
  DilationObstacle(std::shared_ptr<const ConvexObstacle> base, double eta);
  int dim() const override { return base_->dim(); }
  double distance(const Point& x) const override;
  Point project(const Point& x) const override;
  ObstacleNormal normal_at(const Point& x, double tol = 1e-7) const override;
  std::string describe() const override;
  Point boundary_projection(const Point& x) const override;
  Point support_point(const Direction& u) const override;
  std::vector<Eigen::Vector2d> boundary_polyline(int segments) const override;
  const ConvexObstacle& base() const { return *base_; }
  double eta() const { return eta_; }

 private:
  std::shared_ptr<const ConvexObstacle> base_;
  double eta_;
};

}  // namespace capgeo::convex
