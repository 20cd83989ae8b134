#include "capgeo/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "capgeo/rng.hpp"
#include "capgeo/sphere.hpp"

namespace capgeo::curvature {

namespace {
constexpr double kPi = std::numbers::pi;
}

Surface::Surface(int dim_, std::vector<Eigen::VectorXd> vertices_,
                 std::vector<std::vector<int>> facets_,
                 std::shared_ptr<const convex::ConvexObstacle> obstacle_,
                 double contact_tol_factor)
    : dim(dim_),
      vertices(std::move(vertices_)),
      facets(std::move(facets_)),
      obstacle(std::move(obstacle_)) {
  if (dim < 2) throw std::invalid_argument("Surface: dimension must be >= 2");
  if (vertices.empty()) throw std::invalid_argument("Surface: empty vertex set");
  for (const auto& v : vertices) {
    if (v.size() != dim) throw std::invalid_argument("Surface: vertex dimension mismatch");
    radius_bound = std::max(radius_bound, v.norm());
  }
  contact_tol = contact_tol_factor * std::max(radius_bound, 1.0);

  contact.assign(vertices.size(), false);
  if (obstacle) {
    if (obstacle->dim() != dim)
      throw std::invalid_argument("Surface: obstacle dimension mismatch");
    for (int i = 0; i < size(); ++i) {
      double d = obstacle->distance(vertices[i]);
      if (d <= contact_tol) contact[i] = true;
    }
  }

  vertex_facets_.resize(vertices.size());
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const auto& fac = facets[f];
    if (static_cast<int>(fac.size()) != dim)
      throw std::invalid_argument("Surface: facets must be simplicial (dim vertices)");
    for (std::size_t a = 0; a < fac.size(); ++a) {
      if (fac[a] < 0 || fac[a] >= size())
        throw std::invalid_argument("Surface: facet index out of range");
      vertex_facets_[fac[a]].push_back(static_cast<int>(f));
      for (std::size_t b = a + 1; b < fac.size(); ++b)
        mesh_size = std::max(mesh_size, (vertices[fac[a]] - vertices[fac[b]]).norm());
    }
  }

  for (int i = 0; i < size(); ++i)
    (contact[i] ? contact_idx_ : free_idx_).push_back(i);
  n_contact_ = static_cast<int>(contact_idx_.size());
  if (free_idx_.empty())
    throw std::invalid_argument("Surface: no vertex lies strictly outside the obstacle");

  free_mat_.resize(dim, static_cast<Eigen::Index>(free_idx_.size()));
  for (std::size_t j = 0; j < free_idx_.size(); ++j) free_mat_.col(j) = vertices[free_idx_[j]];
  contact_mat_.resize(dim, n_contact_);
  contact_normals_.resize(n_contact_);
  for (int j = 0; j < n_contact_; ++j) {
    contact_mat_.col(j) = vertices[contact_idx_[j]];
    Eigen::VectorXd x = obstacle->project(vertices[contact_idx_[j]]);
    contact_normals_[j] = obstacle->normal_at(x, 16 * contact_tol).normal;
  }
}

bool Surface::direction_supported_at(int vertex, const Eigen::VectorXd& nu) const {
  const double xv = vertices[vertex].dot(nu);
  double mx = -1e300;
  for (const auto& v : vertices) mx = std::max(mx, v.dot(nu));
  return mx - xv <= tie_tol();
}

std::vector<Eigen::VectorXd> Surface::normal_cone_rays(int vertex) const {
  std::vector<Eigen::VectorXd> candidates;
  const auto& vfs = vertex_facets_[vertex];
  for (int f : vfs) {
    const auto& fac = facets[f];
    Eigen::VectorXd n;
    if (dim == 2) {
      Eigen::Vector2d e = (vertices[fac[1]] - vertices[fac[0]]).head<2>();
      n = Eigen::VectorXd(2);
      n << -e.y(), e.x();
    } else if (dim == 3) {
      Eigen::Vector3d u = (vertices[fac[1]] - vertices[fac[0]]).head<3>();
      Eigen::Vector3d w = (vertices[fac[2]] - vertices[fac[0]]).head<3>();
      Eigen::Vector3d c = u.cross(w);
      n = Eigen::VectorXd(3);
      n << c.x(), c.y(), c.z();
    } else {
      continue;  // higher dimensions rely on sampled directions only
    }
    if (n.norm() < 1e-14 * std::max(1.0, mesh_size * mesh_size)) continue;
    n.normalize();
    candidates.push_back(n);
    candidates.push_back(-n);
  }
  if (obstacle && contact[vertex]) {
    Eigen::VectorXd x = obstacle->project(vertices[vertex]);
    Eigen::VectorXd nc = obstacle->normal_at(x, 16 * contact_tol).normal;
    candidates.push_back(nc);
    candidates.push_back(-nc);
  }
  std::vector<Eigen::VectorXd> rays;
  for (const auto& c : candidates) {
    if (!direction_supported_at(vertex, c)) continue;
    bool dup = false;
    for (const auto& r : rays)
      if ((r - c).norm() < 1e-10) {
        dup = true;
        break;
      }
    if (!dup) rays.push_back(c);
  }
  return rays;
}

namespace {

// Accept a direction iff its support set contains a free vertex: the free
// maximum must tie the contact maximum within tie_tol.
mc::BlockKernel kplus_kernel(const Surface& S) {
  return [&S](const Eigen::MatrixXd& dirs, std::vector<std::uint8_t>& hit) {
    const double tie = S.tie_tol();
    const Eigen::Index B = dirs.cols();
    if (S.contact_count() == 0) {
      std::fill(hit.begin(), hit.end(), 1);
      return;
    }
    constexpr Eigen::Index chunk = 128;
    Eigen::MatrixXd prod;
    for (Eigen::Index j0 = 0; j0 < B; j0 += chunk) {
      Eigen::Index c = std::min(chunk, B - j0);
      Eigen::RowVectorXd max_free(c), max_con(c);
      prod.noalias() = S.free_matrix().transpose() * dirs.middleCols(j0, c);
      max_free = prod.colwise().maxCoeff();
      prod.noalias() = S.contact_matrix().transpose() * dirs.middleCols(j0, c);
      max_con = prod.colwise().maxCoeff();
      for (Eigen::Index j = 0; j < c; ++j)
        hit[j0 + j] = max_free(j) >= max_con(j) - tie ? 1 : 0;
    }
  };
}

// max of nu . target over the cone spanned by unit rays, by enumerating
// active subsets of size <= dim (least squares + nonnegativity).
double cone_max_dot(const std::vector<Eigen::VectorXd>& rays,
                    const Eigen::VectorXd& target, int dim) {
  double best = -1e300;
  const int m = static_cast<int>(rays.size());
  for (int a = 0; a < m; ++a) best = std::max(best, rays[a].dot(target));
  if (m < 2) return best;
  std::vector<int> subset;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(subset.size()) >= 2) {
      Eigen::MatrixXd U(target.size(), subset.size());
      for (std::size_t r = 0; r < subset.size(); ++r) U.col(r) = rays[subset[r]];
      Eigen::MatrixXd G = U.transpose() * U;
      Eigen::VectorXd rhs = U.transpose() * target;
      Eigen::VectorXd mu = G.ldlt().solve(rhs);
      if ((mu.array() >= -1e-12).all()) {
        Eigen::VectorXd p = U * mu;
        double n = p.norm();
        if (n > 1e-12) best = std::max(best, p.dot(target) / n);
      }
    }
    if (static_cast<int>(subset.size()) == dim) return;
    for (int i = start; i < m; ++i) {
      subset.push_back(i);
      rec(i + 1);
      subset.pop_back();
    }
  };
  rec(0);
  return best;
}

}  // namespace

mc::McEstimate total_positive_curvature(const Surface& S, std::uint64_t samples,
                                        std::uint64_t seed, int workers) {
  return mc::sphere_mc(S.dim, samples, seed, kplus_kernel(S), workers);
}

std::vector<std::uint8_t> total_positive_curvature_mask(const Surface& S,
                                                        std::uint64_t samples,
                                                        std::uint64_t seed) {
  return mc::sphere_mc_mask(S.dim, samples, seed, kplus_kernel(S));
}

ContactAngleReport contact_angle_margin(const Surface& S, double theta0,
                                        int cone_samples, std::uint64_t seed) {
  if (!(theta0 > 0.0 && theta0 < kPi))
    throw std::invalid_argument("contact_angle_margin: theta0 must lie in (0, pi)");
  ContactAngleReport rep;
  rep.has_contact = S.contact_count() > 0;
  if (!rep.has_contact) {
    rep.margin = -std::numeric_limits<double>::infinity();
    return rep;
  }
  const double cos_theta0 = std::cos(theta0);
  rep.margin = -std::numeric_limits<double>::infinity();

  // Exact part: verified polyhedral cone rays.
  const auto& cidx = S.contact_indices();
  for (std::size_t c = 0; c < cidx.size(); ++c) {
    auto rays = S.normal_cone_rays(cidx[c]);
    if (rays.empty()) continue;
    double m = cone_max_dot(rays, S.contact_normal(static_cast<int>(c)), S.dim) - cos_theta0;
    if (m > rep.margin) {
      rep.margin = m;
      rep.worst_vertex = cidx[c];
    }
  }

  // Sampled part: uniform directions filtered through the support test.
  if (cone_samples > 0) {
    auto dirs = sphere::sample_uniform(S.dim, cone_samples, seed);
    for (const auto& nu : dirs) {
      Eigen::VectorXd dots = S.contact_matrix().transpose() * nu;
      Eigen::VectorXd fdots = S.free_matrix().transpose() * nu;
      double mc_ = dots.maxCoeff();
      double mf = fdots.size() ? fdots.maxCoeff() : -1e300;
      if (mf > mc_ + S.tie_tol()) continue;  // support point is free, not contact
      for (std::size_t c = 0; c < cidx.size(); ++c) {
        if (dots(static_cast<Eigen::Index>(c)) < mc_ - S.tie_tol()) continue;
        double m = nu.dot(S.contact_normal(static_cast<int>(c))) - cos_theta0;
        if (m > rep.margin) {
          rep.margin = m;
          rep.worst_vertex = cidx[c];
        }
      }
    }
  }
  return rep;
}

InequalityReport cgr_inequality_check(const Surface& S, double theta0,
                                      std::uint64_t samples, std::uint64_t seed,
                                      double gate_tol, int workers) {
  InequalityReport rep;
  auto gate = contact_angle_margin(S, theta0);
  rep.gate_margin = gate.margin;
  rep.gate_ok = !gate.has_contact || gate.margin <= gate_tol;
  if (!rep.gate_ok) return rep;
  rep.kplus = total_positive_curvature(S, samples, seed, workers);
  rep.bound = sphere::cap_measure(S.dim, theta0);
  rep.margin = rep.kplus.value - rep.bound;
  rep.violation = rep.margin < -3.0 * rep.kplus.stderr_;
  return rep;
}

StabilityReport cgr_stability_check(const Surface& S, double theta0, double eps,
                                    double delta, std::uint64_t samples,
                                    std::uint64_t seed, double gate_tol,
                                    int workers) {
  StabilityReport rep;
  auto gate = contact_angle_margin(S, theta0);
  rep.gate_margin = gate.margin;
  // Relaxed gate: condition within delta (plus the mesh tolerance).
  rep.gate_ok = !gate.has_contact || gate.margin <= delta + gate_tol;
  if (!rep.gate_ok) return rep;

  rep.kplus = total_positive_curvature(S, samples, seed, workers);
  rep.cap = sphere::cap_measure(S.dim, theta0);
  rep.delta_measured = rep.kplus.value - rep.cap;
  rep.near_equality = rep.delta_measured <= delta;
  if (S.contact_count() == 0) return rep;

  // Contact width via the convex module.
  std::vector<Eigen::VectorXd> cpts;
  for (int idx : S.contact_indices()) cpts.push_back(S.vertices[idx]);
  convex::PointCloud contact_cloud(S.dim, cpts, S.radius_bound);
  rep.contact_width = convex::width(contact_cloud).value;

  // Slab search: the narrowest slab orthogonal to some contact normal.
  rep.slab_width = std::numeric_limits<double>::infinity();
  for (int c = 0; c < S.contact_count(); ++c) {
    const Eigen::VectorXd& nu = S.contact_normal(c);
    double w = convex::extent(contact_cloud, nu);
    if (w < rep.slab_width) {
      rep.slab_width = w;
      rep.witness_normal = nu;
      rep.witness_x = S.vertices[S.contact_indices()[c]];
    }
  }
  rep.witness_found = rep.near_equality && rep.slab_width <= eps;
  return rep;
}

BundleInclusionReport bundle_inclusion_check(const Surface& S, double theta,
                                             std::uint64_t samples, std::uint64_t seed) {
  if (!(theta > 0.0 && theta < kPi))
    throw std::invalid_argument("bundle_inclusion_check: theta must lie in (0, pi)");
  BundleInclusionReport rep;
  if (S.contact_count() == 0) {
    rep.vacuous = true;
    return rep;
  }
  const double cos_theta = std::cos(theta);
  const double tie = S.tie_tol();
  const std::uint64_t nblocks = (samples + rng::kBlockSize - 1) / rng::kBlockSize;
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    std::size_t count = static_cast<std::size_t>(
        std::min<std::uint64_t>(rng::kBlockSize, samples - b * rng::kBlockSize));
    Eigen::MatrixXd dirs(S.dim, static_cast<Eigen::Index>(count));
    auto gen = rng::block_engine(seed, b);
    rng::fill_uniform_directions(dirs, gen);
    Eigen::MatrixXd cd = S.contact_matrix().transpose() * dirs;
    Eigen::MatrixXd fd = S.free_matrix().transpose() * dirs;
    for (std::size_t j = 0; j < count; ++j) {
      double mc_ = cd.col(j).maxCoeff();
      // nu in N_x(Sigma cap C) iff x attains the contact maximum; restricted
      // bundle additionally needs nu . nu_C(x) >= cos theta.
      bool in_bundle = false;
      for (int c = 0; c < S.contact_count() && !in_bundle; ++c)
        if (cd(c, j) >= mc_ - tie &&
            S.contact_normal(c).dot(dirs.col(j)) >= cos_theta)
          in_bundle = true;
      if (!in_bundle) continue;
      ++rep.bundle_samples;
      double mf = fd.col(j).maxCoeff();
      if (mf < mc_ - tie) ++rep.violations;  // support point is contact-only
    }
  }
  return rep;
}

// --- mesh constructors ------------------------------------------------------

std::shared_ptr<convex::ConvexObstacle> facet_box(double side, double depth) {
  Eigen::VectorXd lo(3), hi(3);
  lo << -side / 2, -side / 2, -depth;
  hi << side / 2, side / 2, 0.0;
  return convex::PolytopeObstacle::box(lo, hi);
}

namespace {

struct RingMesh {
  std::vector<Eigen::VectorXd> verts;
  std::vector<std::vector<int>> facets;
};

// Latitude rings phi_i = phi_max * i / rings triangulated ring-to-ring.
RingMesh sphere_rings(double R, double phi_max, int rings) {
  RingMesh m;
  std::vector<std::vector<int>> ring_ids;
  for (int i = 0; i <= rings; ++i) {
    double phi = phi_max * i / rings;
    int count = (i == 0) ? 1
                         : std::max(3, static_cast<int>(std::ceil(
                                           2.0 * kPi * std::sin(phi) / (phi_max / rings))));
    std::vector<int> ids;
    for (int j = 0; j < count; ++j) {
      double lam = 2.0 * kPi * j / count;
      Eigen::VectorXd v(3);
      v << R * std::sin(phi) * std::cos(lam), R * std::sin(phi) * std::sin(lam),
          R * std::cos(phi);
      ids.push_back(static_cast<int>(m.verts.size()));
      m.verts.push_back(v);
    }
    ring_ids.push_back(ids);
  }
  // Strip triangulation between consecutive rings by advancing the pointer
  // with the smaller angular position.
  for (int i = 0; i < rings; ++i) {
    const auto& a = ring_ids[i];
    const auto& b = ring_ids[i + 1];
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    int ia = 0, ib = 0;
    while (ia < na || ib < nb) {
      double ang_a = (ia + 1.0) / na, ang_b = (ib + 1.0) / nb;
      if (ib >= nb || (ia < na && ang_a <= ang_b)) {
        m.facets.push_back({a[ia % na], b[ib % nb], a[(ia + 1) % na]});
        ++ia;
      } else {
        m.facets.push_back({a[ia % na], b[ib % nb], b[(ib + 1) % nb]});
        ++ib;
      }
    }
  }
  return m;
}

}  // namespace

Surface cap_on_facet_mesh(double theta0, double R, int rings,
                          std::shared_ptr<const convex::ConvexObstacle> obstacle,
                          double tilt, const Eigen::Vector2d& center, double scale) {
  if (!(theta0 > 0.0 && theta0 < kPi))
    throw std::invalid_argument("cap_on_facet_mesh: theta0 must lie in (0, pi)");
  if (rings < 2) throw std::invalid_argument("cap_on_facet_mesh: rings must be >= 2");
  RingMesh m = sphere_rings(R, theta0, rings);
  // Drop the sphere center so the rim ring z = R cos(theta0) lands on z = 0.
  const double cz = R * std::cos(theta0);
  for (auto& v : m.verts) v(2) -= cz;
  if (tilt != 0.0) {
    Eigen::Matrix3d rot =
        Eigen::AngleAxisd(tilt, Eigen::Vector3d::UnitY()).toRotationMatrix();
    double zmin = 1e300;
    for (auto& v : m.verts) {
      Eigen::Vector3d w = rot * Eigen::Vector3d(v(0), v(1), v(2));
      v(0) = w.x();
      v(1) = w.y();
      v(2) = w.z();
      zmin = std::min(zmin, w.z());
    }
    for (auto& v : m.verts) v(2) -= zmin;  // re-seat on the facet plane
  }
  for (auto& v : m.verts) {
    v(0) += center.x();
    v(1) += center.y();
    if (scale != 1.0) v *= scale;
  }
  return Surface(3, std::move(m.verts), std::move(m.facets), std::move(obstacle));
}

Surface sphere_mesh(double R, const Eigen::Vector3d& center, int rings,
                    std::shared_ptr<const convex::ConvexObstacle> obstacle) {
  RingMesh m = sphere_rings(R, kPi, rings);
  for (auto& v : m.verts) v += center;
  return Surface(3, std::move(m.verts), std::move(m.facets), std::move(obstacle));
}

std::shared_ptr<convex::ConvexObstacle> beveled_box(double side, double depth,
                                                    double knee, double slope) {
  // Box halfspaces plus the bevel plane slope*x + z <= slope*knee.
  Eigen::MatrixXd A(7, 3);
  Eigen::VectorXd b(7);
  A << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, slope, 0, 1;
  b << side / 2, side / 2, side / 2, side / 2, 0.0, depth, slope * knee;
  return std::make_shared<convex::PolytopeObstacle>(std::move(A), std::move(b));
}

Surface draped_cap_mesh(double theta0, double R, int rings,
                        std::shared_ptr<const convex::ConvexObstacle> obstacle) {
  RingMesh m = sphere_rings(R, theta0, rings);
  const double cz = R * std::cos(theta0);
  for (auto& v : m.verts) {
    v(2) -= cz;
    if (obstacle->contains(v)) v = obstacle->boundary_projection(v);
  }
  return Surface(3, std::move(m.verts), std::move(m.facets), std::move(obstacle));
}

Surface two_caps_mesh(double theta0, double R, int rings,
                      std::shared_ptr<const convex::ConvexObstacle> obstacle,
                      double separation) {
  RingMesh a = sphere_rings(R, theta0, rings);
  const double cz = R * std::cos(theta0);
  std::vector<Eigen::VectorXd> verts;
  std::vector<std::vector<int>> facets;
  for (int copy = 0; copy < 2; ++copy) {
    double xshift = (copy == 0 ? -1.0 : 1.0) * separation / 2.0;
    int base = static_cast<int>(verts.size());
    for (const auto& v : a.verts) {
      Eigen::VectorXd w = v;
      w(2) -= cz;
      w(0) += xshift;
      verts.push_back(w);
    }
    for (const auto& f : a.facets) facets.push_back({f[0] + base, f[1] + base, f[2] + base});
  }
  return Surface(3, std::move(verts), std::move(facets), std::move(obstacle));
}

}  // namespace capgeo::curvature
