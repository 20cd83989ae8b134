#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "capgeo/mc.hpp"

namespace capgeo::sphere {

using Direction = Eigen::VectorXd;

// Volume of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

// H^{n-1} measure of the whole sphere S^{n-1}: n * unit_ball_volume(n).
double sphere_measure(int n);

// H^{n-1} measure of the spherical cap {y : y.axis >= cos(theta)},
// (n-1) w_{n-1} Int_0^theta sin^{n-2}(s) ds, by adaptive Gauss-Kronrod
// quadrature (abs tol 1e-13). Requires n >= 2 and theta in [0, pi].
double cap_measure(int n, double theta);

// Closed cap around `axis` of geodesic radius `angle`.
struct CapSpec {
  int dim;
  Direction axis;
  double angle;

  CapSpec(int dim_, Direction axis_, double angle_);
};

// Intersection of caps {y : a_i . y >= c_i}. Spherically convex when nonempty
// and contained in an open hemisphere; that containment is the caller's
// contract and is not decided algorithmically.
struct SphericalPolytope {
  int dim = 0;
  std::vector<std::pair<Direction, double>> constraints;

  SphericalPolytope(int dim_, std::vector<std::pair<Direction, double>> constraints_);

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& y, double tol = 1e-12) const;

  static SphericalPolytope cap(const CapSpec& c);
  static SphericalPolytope whole_sphere(int dim) { return SphericalPolytope(dim, {}); }
};

// i.i.d. uniform directions; deterministic for fixed (seed, count).
std::vector<Direction> sample_uniform(int n, std::uint64_t count, std::uint64_t seed);

// Unbiased MC estimate of H^{n-1}(P).
mc::McEstimate polytope_measure(const SphericalPolytope& P, std::uint64_t samples,
                                std::uint64_t seed, int workers = 1);

// Both sides of the spherically-convex cap inequality
//   H(X cap S_{theta,x}) >= H(S_theta)/(N w_N) * H(X)
// estimated from one sample stream. margin = lhs - rhs; margin_stderr is the
// standard error of the margin estimator itself.
struct SphecoReport {
  mc::McEstimate lhs;        // H(X cap S_{theta,x})
  mc::McEstimate x_measure;  // H(X)
  double rhs = 0.0;
  double margin = 0.0;
  double margin_stderr = 0.0;
  // smallest sampled geodesic distance from -x to X (pi if no sample hit X)
  double dist_minus_x = 0.0;
};

SphecoReport spheco_check(const SphericalPolytope& X, const Direction& x, double theta,
                          std::uint64_t samples, std::uint64_t seed, int workers = 1);

}  // namespace capgeo::sphere
