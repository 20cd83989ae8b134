#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "capgeo/convex.hpp"
#include "capgeo/mc.hpp"

namespace capgeo::curvature {

// Polytopal surface Sigma = closure(boundary(Omega) \ C) represented by its
// vertex set: support queries, and hence K^+, only see the hull-extreme
// structure, so facets are kept just for normal-cone candidates at contact
// vertices. Vertices within contact_tol of C are the contact set Sigma cap C.
struct Surface {
  int dim = 0;
  std::vector<Eigen::VectorXd> vertices;
  std::vector<std::vector<int>> facets;
  std::shared_ptr<const convex::ConvexObstacle> obstacle;  // may be null
  double radius_bound = 0.0;
  double contact_tol = 0.0;
  double mesh_size = 0.0;  // max facet edge length
  std::vector<bool> contact;

  Surface(int dim_, std::vector<Eigen::VectorXd> vertices_,
          std::vector<std::vector<int>> facets_,
          std::shared_ptr<const convex::ConvexObstacle> obstacle_,
          double contact_tol_factor = 1e-7);

  int size() const { return static_cast<int>(vertices.size()); }
  int contact_count() const { return n_contact_; }
  double tie_tol() const { return 1e-9 * radius_bound; }
  const std::vector<int>& contact_indices() const { return contact_idx_; }
  const std::vector<int>& free_indices() const { return free_idx_; }
  const Eigen::MatrixXd& contact_matrix() const { return contact_mat_; }
  const Eigen::MatrixXd& free_matrix() const { return free_mat_; }
  // Outer obstacle normal at contact vertex (by contact index).
  const Eigen::VectorXd& contact_normal(int c) const { return contact_normals_[c]; }

  // Unit directions nu with (y - x) . nu <= tol for all vertices y, collected
  // from incident facet normals and the +-obstacle normal, each verified
  // against the whole vertex set. Exact for locally convex meshes in N <= 3.
  std::vector<Eigen::VectorXd> normal_cone_rays(int vertex) const;
  bool direction_supported_at(int vertex, const Eigen::VectorXd& nu) const;

 private:
  int n_contact_ = 0;
  std::vector<int> contact_idx_, free_idx_;
  Eigen::MatrixXd contact_mat_, free_mat_;
  std::vector<Eigen::VectorXd> contact_normals_;
  std::vector<std::vector<int>> vertex_facets_;
};

// K^+(Sigma): measure of directions whose support set contains a non-contact
// vertex. Exact value N w_N (hit fraction 1) when there is no contact.
mc::McEstimate total_positive_curvature(const Surface& S, std::uint64_t samples,
                                        std::uint64_t seed, int workers = 1);
std::vector<std::uint8_t> total_positive_curvature_mask(const Surface& S,
                                                        std::uint64_t samples,
                                                        std::uint64_t seed);

struct ContactAngleReport {
  bool has_contact = false;
  double margin = 0.0;  // max over contact x, nu in N_x of nu.nu_C(x) - cos(theta0)
  int worst_vertex = -1;
};

// Sampled-cone certificate for the contact angle condition: enumerated
// verified rays of the polyhedral normal cone (exact in N <= 3 for locally
// convex contact) plus rejection-sampled interior directions.
ContactAngleReport contact_angle_margin(const Surface& S, double theta0,
                                        int cone_samples = 32, std::uint64_t seed = 1);

struct InequalityReport {
  bool gate_ok = false;
  double gate_margin = 0.0;
  mc::McEstimate kplus;
  double bound = 0.0;
  double margin = 0.0;
  bool violation = false;  // margin < -3 stderr
};

InequalityReport cgr_inequality_check(const Surface& S, double theta0,
                                      std::uint64_t samples, std::uint64_t seed,
                                      double gate_tol, int workers = 1);

struct StabilityReport {
  bool gate_ok = false;
  double gate_margin = 0.0;
  mc::McEstimate kplus;
  double cap = 0.0;
  double delta_measured = 0.0;
  bool near_equality = false;  // kplus <= cap + delta
  bool witness_found = false;  // slab of width <= eps exists
  Eigen::VectorXd witness_x;
  Eigen::VectorXd witness_normal;
  double slab_width = 0.0;
  double contact_width = 0.0;
};

StabilityReport cgr_stability_check(const Surface& S, double theta0, double eps,
                                    double delta, std::uint64_t samples,
                                    std::uint64_t seed, double gate_tol,
                                    int workers = 1);

struct BundleInclusionReport {
  std::uint64_t bundle_samples = 0;  // samples landing in N^{sigma,theta}(Sigma cap C)
  std::uint64_t violations = 0;      // of these, not realized at a free vertex
  bool vacuous = false;              // no contact set
};

// Checks N^{sigma,theta}(Sigma cap C) subset of the union of free normal
// cones, with sigma = nu_C, by accept-reject sampling.
BundleInclusionReport bundle_inclusion_check(const Surface& S, double theta,
                                             std::uint64_t samples, std::uint64_t seed);

// --- mesh constructors ------------------------------------------------------

// Box obstacle of side `side` whose top facet lies in {z = 0}, centered under
// the origin.
std::shared_ptr<convex::ConvexObstacle> facet_box(double side = 4.0, double depth = 1.0);

// Geodesic ring mesh of the spherical cap S_{theta0} of sphere radius R whose
// rim lies on {z = 0}; tilt rotates about the y-axis and re-seats the lowest
// vertex on the plane. rings controls refinement (vertex count ~ rings^2).
Surface cap_on_facet_mesh(double theta0, double R, int rings,
                          std::shared_ptr<const convex::ConvexObstacle> obstacle,
                          double tilt = 0.0, const Eigen::Vector2d& center = {0, 0},
                          double scale = 1.0);

// Closed sphere mesh of radius R centered at `center` (no contact expected).
Surface sphere_mesh(double R, const Eigen::Vector3d& center, int rings,
                    std::shared_ptr<const convex::ConvexObstacle> obstacle);

// Two disjoint caps on the same facet (disconnected Omega).
Surface two_caps_mesh(double theta0, double R, int rings,
                      std::shared_ptr<const convex::ConvexObstacle> obstacle,
                      double separation);

// Box with a bevel facet z <= -slope (x - knee) cutting into the top facet:
// the stability family's obstacle. Contact sets draped over the bevel span a
// slab of height ~ slope * (R - knee).
std::shared_ptr<convex::ConvexObstacle> beveled_box(double side, double depth,
                                                    double knee, double slope);

// Cap mesh with every vertex inside the obstacle pushed out to its boundary;
// thickened contact sets with a controlled slab height.
Surface draped_cap_mesh(double theta0, double R, int rings,
                        std::shared_ptr<const convex::ConvexObstacle> obstacle);

}  // namespace capgeo::curvature
