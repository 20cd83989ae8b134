#include "capgeo/convex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "capgeo/rng.hpp"
#include "capgeo/simplex.hpp"
#include "capgeo/sphere.hpp"

namespace capgeo::convex {

namespace {
constexpr double kPi = std::numbers::pi;
}

PointCloud::PointCloud(int dim_, std::vector<Point> points_, double radius_bound_)
    : dim(dim_), points(std::move(points_)), radius_bound(radius_bound_) {
  if (dim < 1) throw std::invalid_argument("PointCloud: dimension must be >= 1");
  if (points.empty()) throw std::invalid_argument("PointCloud: point set must be nonempty");
  double max_norm = 0.0;
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("PointCloud: point dimension mismatch");
    max_norm = std::max(max_norm, p.norm());
  }
  if (radius_bound <= 0.0)
    radius_bound = max_norm;
  else if (max_norm > radius_bound * (1.0 + 1e-12))
    throw std::invalid_argument("PointCloud: point outside stated radius bound");
  mat_.resize(dim, static_cast<Eigen::Index>(points.size()));
  for (int j = 0; j < size(); ++j) mat_.col(j) = points[j];
}

int PointCloud::affine_rank(double tol) const {
  if (size() == 1) return 0;
  Eigen::MatrixXd centered = mat_.colwise() - mat_.rowwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const auto& s = svd.singularValues();
  double scale = std::max(s(0), 1e-300);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * scale) ++r;
  return r;
}

Direction PointCloud::flat_normal() const {
  Eigen::MatrixXd centered = mat_.colwise() - mat_.rowwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullU);
  return svd.matrixU().col(dim - 1);
}

bool in_normal_cone(const PointCloud& X, int i, const Direction& nu, double tol) {
  if (i < 0 || i >= X.size()) throw std::out_of_range("in_normal_cone: index");
  const double xi_dot = X.points[i].dot(nu);
  double max_dot = (X.matrix().transpose() * nu).maxCoeff();
  return max_dot - xi_dot <= tol;
}

std::vector<int> support_set(const PointCloud& X, const Direction& nu, double tie_tol) {
  Eigen::VectorXd dots = X.matrix().transpose() * nu;
  double m = dots.maxCoeff();
  std::vector<int> out;
  for (int j = 0; j < X.size(); ++j)
    if (dots(j) >= m - tie_tol) out.push_back(j);
  return out;
}

NormalConeInfo normal_cone_info(const PointCloud& X, int i) {
  NormalConeInfo info;
  if (X.size() == 1) {
    info.empty = false;
    info.witness = Eigen::VectorXd::Unit(X.dim, 0);
    return info;
  }
  if (X.affine_rank() < X.dim) {
    // The whole cloud lies in a hyperplane: its normal supports every point.
    info.empty = false;
    info.witness = X.flat_normal();
    return info;
  }
  std::vector<Eigen::VectorXd> shifted;
  shifted.reserve(X.size());
  for (int j = 0; j < X.size(); ++j) shifted.push_back(X.points[j] - X.points[i]);
  auto cert = detail::origin_interior_certificate(shifted);
  info.empty = cert.interior;
  if (!cert.interior) {
    if (cert.normal.size() == 0 || cert.normal.norm() < 0.5)
      throw std::runtime_error("normal_cone_info: LP failed to produce a certificate");
    info.witness = cert.normal;
  }
  return info;
}

NormalSelector NormalSelector::validated(const PointCloud& X, std::vector<Direction> sigma,
                                         double tol) {
  if (static_cast<int>(sigma.size()) != X.size())
    throw std::invalid_argument("NormalSelector: one direction per point required");
  for (int i = 0; i < X.size(); ++i) {
    if (sigma[i].size() != X.dim)
      throw std::invalid_argument("NormalSelector: direction dimension mismatch");
    if (std::abs(sigma[i].norm() - 1.0) > 1e-9)
      throw std::invalid_argument("NormalSelector: directions must be unit vectors");
    if (in_normal_cone(X, i, sigma[i], tol)) continue;
    if (!normal_cone_info(X, i).empty)
      throw std::invalid_argument("NormalSelector: sigma(x_" + std::to_string(i) +
                                  ") is not in the (nonempty) normal cone");
  }
  NormalSelector s;
  s.sigma = std::move(sigma);
  s.mat_.resize(X.dim, X.size());
  for (int j = 0; j < X.size(); ++j) s.mat_.col(j) = s.sigma[j];
  return s;
}

NormalSelector NormalSelector::generate(const PointCloud& X) {
  std::vector<Direction> sigma(X.size());
  for (int i = 0; i < X.size(); ++i) {
    auto info = normal_cone_info(X, i);
    sigma[i] = info.empty ? Eigen::VectorXd::Unit(X.dim, 0) : info.witness;
  }
  return validated(X, std::move(sigma), X.default_tie_tol());
}

namespace {

// Projection of `target` onto the cone {nu : d_j . nu <= 0} by Dykstra's
// alternating projections over the halfspaces.
Eigen::VectorXd project_into_cone(const std::vector<Eigen::VectorXd>& ds,
                                  const Eigen::VectorXd& target, int sweeps = 300) {
  Eigen::VectorXd x = target;
  std::vector<Eigen::VectorXd> corr(ds.size(), Eigen::VectorXd::Zero(target.size()));
  for (int s = 0; s < sweeps; ++s) {
    double moved = 0.0;
    for (std::size_t j = 0; j < ds.size(); ++j) {
      Eigen::VectorXd y = x + corr[j];
      double dn = ds[j].squaredNorm();
      Eigen::VectorXd p = y;
      if (dn > 1e-300) {
        double v = ds[j].dot(y);
        if (v > 0.0) p = y - (v / dn) * ds[j];
      }
      corr[j] = y - p;
      moved += (p - x).norm();
      x = p;
    }
    if (moved < 1e-14) break;
  }
  return x;
}

}  // namespace

NormalSelector NormalSelector::flattened(const PointCloud& X, const Direction& normal) {
  Direction n = normal.normalized();
  std::vector<Direction> sigma(X.size());
  for (int i = 0; i < X.size(); ++i) {
    std::vector<Eigen::VectorXd> ds;
    ds.reserve(X.size());
    for (int j = 0; j < X.size(); ++j)
      if (j != i) ds.push_back(X.points[j] - X.points[i]);
    Direction best;
    double best_dot = -1.0;
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd p = project_into_cone(ds, sign * n);
      if (p.norm() < 1e-9) continue;
      p.normalize();
      if (!in_normal_cone(X, i, p, X.default_tie_tol())) continue;
      double d = std::abs(p.dot(n));
      if (d > best_dot) {
        best_dot = d;
        best = p;
      }
    }
    if (best.size() == 0) {
      auto info = normal_cone_info(X, i);
      best = info.empty ? n : info.witness;
    }
    sigma[i] = best;
  }
  return validated(X, std::move(sigma), X.default_tie_tol());
}

mc::McEstimate bundle_measure(const PointCloud& X, const NormalSelector& sigma,
                              double theta, std::uint64_t samples, std::uint64_t seed,
                              int workers) {
  if (!(theta > 0.0 && theta < kPi))
    throw std::invalid_argument("bundle_measure: theta must lie in (0, pi)");
  const double cos_theta = std::cos(theta);
  const double tie_tol = X.default_tie_tol();
  const Eigen::MatrixXd& P = X.matrix();
  const Eigen::MatrixXd& S = sigma.matrix();

  auto kernel = [&](const Eigen::MatrixXd& dirs, std::vector<std::uint8_t>& hit) {
    Eigen::MatrixXd dots = P.transpose() * dirs;  // k x B
    for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
      double m = dots.col(j).maxCoeff();
      std::uint8_t h = 0;
      for (int v = 0; v < X.size(); ++v) {
        if (dots(v, j) >= m - tie_tol && S.col(v).dot(dirs.col(j)) >= cos_theta) {
          h = 1;
          break;
        }
      }
      hit[j] = h;
    }
  };
  return mc::sphere_mc(X.dim, samples, seed, kernel, workers);
}

double extent(const PointCloud& X, const Direction& nu) {
  Eigen::VectorXd dots = X.matrix().transpose() * nu;
  return dots.maxCoeff() - dots.minCoeff();
}

namespace {

WidthResult width_enumerate_2d(const PointCloud& X) {
  WidthResult best;
  best.value = std::numeric_limits<double>::infinity();
  const auto& pts = X.points;
  const int k = X.size();
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Eigen::Vector2d d = pts[j].head<2>() - pts[i].head<2>();
      double n = d.norm();
      if (n < 1e-15) continue;
      Eigen::VectorXd nu(2);
      nu << -d.y() / n, d.x() / n;
      double e = extent(X, nu);
      if (e < best.value) {
        best.value = e;
        best.direction = nu;
      }
    }
  }
  if (!std::isfinite(best.value)) {  // all points coincide
    best.value = 0.0;
    best.direction = Eigen::VectorXd::Unit(2, 0);
  }
  return best;
}

WidthResult width_enumerate_3d(const PointCloud& X) {
  // The optimal direction is a hull facet normal or orthogonal to two hull
  // edges; both lie in the cross products of pairs of point-pair segments,
  // and any superset of candidates keeps minimization exact.
  WidthResult best;
  best.value = std::numeric_limits<double>::infinity();
  const auto& pts = X.points;
  const int k = X.size();
  std::vector<Eigen::Vector3d> segs;
  std::vector<std::pair<int, int>> seg_idx;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Eigen::Vector3d d = (pts[j] - pts[i]).head<3>();
      if (d.norm() > 1e-15) {
        segs.push_back(d);
        seg_idx.emplace_back(i, j);
      }
    }
  Eigen::MatrixXd Pm = X.matrix();
  auto try_dir = [&](const Eigen::Vector3d& n) {
    double nn = n.norm();
    if (nn < 1e-13) return;
    Eigen::VectorXd nu = n / nn;
    Eigen::VectorXd dots = Pm.transpose() * nu;
    double e = dots.maxCoeff() - dots.minCoeff();
    if (e < best.value) {
      best.value = e;
      best.direction = nu;
    }
  };
  for (std::size_t a = 0; a < segs.size(); ++a)
    for (std::size_t b = a + 1; b < segs.size(); ++b) try_dir(segs[a].cross(segs[b]));
  if (!std::isfinite(best.value)) {
    // Collinear or single point: width 0 along any orthogonal direction.
    best.value = 0.0;
    if (!segs.empty()) {
      Eigen::Vector3d d = segs[0].normalized();
      Eigen::Vector3d probe = std::abs(d.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                    : Eigen::Vector3d::UnitY();
      best.direction = d.cross(probe).normalized();
    } else {
      best.direction = Eigen::VectorXd::Unit(3, 0);
    }
    best.value = extent(X, best.direction);
  }
  return best;
}

WidthResult width_multistart(const PointCloud& X, int restarts) {
  WidthResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.exact = false;
  const Eigen::MatrixXd& Pm = X.matrix();
  auto eval = [&](const Eigen::VectorXd& nu, int& argmax, int& argmin) {
    Eigen::VectorXd dots = Pm.transpose() * nu;
    double mx = dots.maxCoeff(&argmax);
    double mn = dots.minCoeff(&argmin);
    return mx - mn;
  };
  auto starts = sphere::sample_uniform(X.dim, std::max(restarts, 1), 0xC0FFEEull);
  for (auto& nu0 : starts) {
    Eigen::VectorXd nu = nu0;
    int ia = 0, ib = 0;
    double val = eval(nu, ia, ib);
    double step = 0.5;
    for (int it = 0; it < 400; ++it) {
      Eigen::VectorXd g = X.points[ia] - X.points[ib];  // subgradient of extent
      Eigen::VectorXd gt = g - g.dot(nu) * nu;          // tangential component
      if (gt.norm() < 1e-14) break;
      Eigen::VectorXd trial = (nu - step * gt / gt.norm()).normalized();
      int ja = 0, jb = 0;
      double tv = eval(trial, ja, jb);
      if (tv < val) {
        nu = trial;
        val = tv;
        ia = ja;
        ib = jb;
      } else {
        step *= 0.6;
        if (step < 1e-12) break;
      }
    }
    if (val < best.value) {
      best.value = val;
      best.direction = nu;
    }
  }
  // Certificate sweep: no sampled direction should do better.
  auto sweep = sphere::sample_uniform(X.dim, 100000, 0xBEEFull);
  double sweep_min = std::numeric_limits<double>::infinity();
  for (auto& nu : sweep) sweep_min = std::min(sweep_min, extent(X, nu));
  best.certificate_gap = sweep_min - best.value;
  return best;
}

}  // namespace

WidthResult width(const PointCloud& X, int restarts, double tol) {
  (void)tol;
  if (X.size() == 1) {
    WidthResult r;
    r.value = 0.0;
    r.direction = Eigen::VectorXd::Unit(X.dim, 0);
    return r;
  }
  if (X.affine_rank() < X.dim) {
    WidthResult r;
    r.direction = X.flat_normal();
    r.value = extent(X, r.direction);
    return r;
  }
  if (X.dim == 2) return width_enumerate_2d(X);
  if (X.dim == 3) return width_enumerate_3d(X);
  return width_multistart(X, restarts);
}

// ---------------------------------------------------------------------------
// Obstacles

std::vector<Eigen::Vector2d> ConvexObstacle::boundary_polyline(int) const {
  throw std::logic_error("boundary_polyline: only available for 2D obstacles");
}

Point ConvexObstacle::support_point(const Direction&) const {
  throw std::logic_error("support_point: not available for this obstacle");
}

BallObstacle::BallObstacle(Point center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (radius_ <= 0.0) throw std::invalid_argument("BallObstacle: radius must be positive");
}

double BallObstacle::distance(const Point& x) const {
  return std::max(0.0, (x - center_).norm() - radius_);
}

Point BallObstacle::project(const Point& x) const {
  Point d = x - center_;
  double n = d.norm();
  if (n <= radius_) return x;
  return center_ + d * (radius_ / n);
}

ObstacleNormal BallObstacle::normal_at(const Point& x, double tol) const {
  Point d = x - center_;
  double n = d.norm();
  if (std::abs(n - radius_) > tol * std::max(1.0, radius_))
    throw std::invalid_argument("BallObstacle::normal_at: point not on the boundary");
  if (n < 1e-300) throw std::invalid_argument("BallObstacle::normal_at: center query");
  return {d / n, true};
}

std::string BallObstacle::describe() const {
  return "ball(r=" + std::to_string(radius_) + ")";
}

Point BallObstacle::support_point(const Direction& u) const {
  return center_ + radius_ * u.normalized();
}

Point BallObstacle::boundary_projection(const Point& x) const {
  Point d = x - center_;
  double n = d.norm();
  if (n < 1e-300) throw std::invalid_argument("boundary_projection: center query");
  return center_ + d * (radius_ / n);
}

std::vector<Eigen::Vector2d> BallObstacle::boundary_polyline(int segments) const {
  if (dim() != 2) throw std::logic_error("boundary_polyline: 2D only");
  std::vector<Eigen::Vector2d> out;
  out.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    double a = 2.0 * kPi * i / segments;
    out.emplace_back(center_(0) + radius_ * std::cos(a), center_(1) + radius_ * std::sin(a));
  }
  return out;
}

PolytopeObstacle::PolytopeObstacle(Eigen::MatrixXd A, Eigen::VectorXd b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size() || A_.rows() == 0)
    throw std::invalid_argument("PolytopeObstacle: halfspace count mismatch");
  for (Eigen::Index i = 0; i < A_.rows(); ++i) {
    double n = A_.row(i).norm();
    if (n < 1e-14) throw std::invalid_argument("PolytopeObstacle: zero normal");
    A_.row(i) /= n;
    b_(i) /= n;
  }
  if (dim() == 2) {
    try {
      verts2d_ = compute_vertices2d();
    } catch (const std::exception&) {
      // unbounded or degenerate; vertex queries will throw on use
    }
  }
}

double PolytopeObstacle::distance(const Point& x) const { return (x - project(x)).norm(); }

Point PolytopeObstacle::project(const Point& x) const {
  Eigen::VectorXd slack = A_ * x - b_;
  if ((slack.array() <= 0.0).all()) return x;
  const int m = static_cast<int>(A_.rows());
  const int n = dim();
  // Active-set enumeration: project onto each affine subspace spanned by up
  // to n boundary constraints, keep feasible candidates, take the nearest.
  double best = std::numeric_limits<double>::infinity();
  Point best_p = x;
  std::vector<int> subset;
  auto consider = [&](const std::vector<int>& S) {
    Eigen::MatrixXd As(S.size(), n);
    Eigen::VectorXd rs(S.size());
    for (std::size_t r = 0; r < S.size(); ++r) {
      As.row(r) = A_.row(S[r]);
      rs(r) = slack(S[r]);
    }
    // y = x - As^T (As As^T)^-1 (As x - bs), via a rank-revealing solve.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(As);
    if (cod.rank() < static_cast<Eigen::Index>(S.size())) return;
    Eigen::VectorXd y = x - cod.pseudoInverse() * rs;
    Eigen::VectorXd sl = A_ * y - b_;
    if ((sl.array() <= 1e-10 * std::max(1.0, x.norm())).all()) {
      double d = (y - x).norm();
      if (d < best) {
        best = d;
        best_p = y;
      }
    }
  };
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (!subset.empty()) consider(subset);
    if (depth == n) return;
    for (int i = start; i < m; ++i) {
      subset.push_back(i);
      rec(i + 1, depth + 1);
      subset.pop_back();
    }
  };
  rec(0, 0);
  if (!std::isfinite(best))
    throw std::runtime_error("PolytopeObstacle::project: no feasible candidate (empty set?)");
  return best_p;
}

ObstacleNormal PolytopeObstacle::normal_at(const Point& x, double tol) const {
  double scale = std::max(1.0, x.norm());
  if (distance(x) > tol * scale)
    throw std::invalid_argument("PolytopeObstacle::normal_at: point not on the boundary");
  Eigen::VectorXd slack = A_ * x - b_;
  std::vector<int> active;
  for (Eigen::Index i = 0; i < A_.rows(); ++i)
    if (slack(i) >= -tol * scale) active.push_back(static_cast<int>(i));
  if (active.empty())
    throw std::invalid_argument("PolytopeObstacle::normal_at: interior point");
  ObstacleNormal out;
  out.normal = A_.row(active[0]).transpose();
  out.smooth = active.size() == 1;
  return out;
}

std::string PolytopeObstacle::describe() const {
  return "polytope(" + std::to_string(A_.rows()) + " halfspaces)";
}

Point PolytopeObstacle::boundary_projection(const Point& x) const {
  Eigen::VectorXd slack = A_ * x - b_;
  if ((slack.array() > 0.0).any()) return project(x);
  // Interior: move to the nearest facet plane.
  Eigen::Index i = 0;
  slack.maxCoeff(&i);
  return x - slack(i) * A_.row(i).transpose();
}

Point PolytopeObstacle::support_point(const Direction& u) const {
  if (dim() != 2) throw std::logic_error("support_point: 2D polytopes only");
  auto verts = vertices2d();
  double best = -1e300;
  Eigen::Vector2d arg = verts[0];
  for (const auto& v : verts) {
    double d = v.x() * u(0) + v.y() * u(1);
    if (d > best) {
      best = d;
      arg = v;
    }
  }
  Point p(2);
  p << arg.x(), arg.y();
  return p;
}

std::shared_ptr<PolytopeObstacle> PolytopeObstacle::box(const Point& lo, const Point& hi) {
  const int n = static_cast<int>(lo.size());
  Eigen::MatrixXd A(2 * n, n);
  Eigen::VectorXd b(2 * n);
  A.setZero();
  for (int i = 0; i < n; ++i) {
    A(2 * i, i) = 1.0;
    b(2 * i) = hi(i);
    A(2 * i + 1, i) = -1.0;
    b(2 * i + 1) = -lo(i);
  }
  return std::make_shared<PolytopeObstacle>(std::move(A), std::move(b));
}

std::vector<Eigen::Vector2d> PolytopeObstacle::vertices2d() const {
  if (dim() != 2) throw std::logic_error("vertices2d: 2D only");
  if (!verts2d_.empty()) return verts2d_;
  return compute_vertices2d();
}

std::vector<Eigen::Vector2d> PolytopeObstacle::compute_vertices2d() const {
  const int m = static_cast<int>(A_.rows());
  std::vector<Eigen::Vector2d> verts;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Eigen::Matrix2d M;
      M.row(0) = A_.row(i);
      M.row(1) = A_.row(j);
      if (std::abs(M.determinant()) < 1e-12) continue;
      Eigen::Vector2d v = M.inverse() * Eigen::Vector2d(b_(i), b_(j));
      if (((A_ * v - b_).array() <= 1e-9).all()) verts.push_back(v);
    }
  if (verts.size() < 3)
    throw std::runtime_error("vertices2d: polytope is unbounded or degenerate");
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (auto& v : verts) c += v;
  c /= static_cast<double>(verts.size());
  std::sort(verts.begin(), verts.end(), [&](const auto& a, const auto& b2) {
    return std::atan2(a.y() - c.y(), a.x() - c.x()) <
           std::atan2(b2.y() - c.y(), b2.x() - c.x());
  });
  // Drop duplicates from triple intersections.
  std::vector<Eigen::Vector2d> out;
  for (auto& v : verts)
    if (out.empty() || (v - out.back()).norm() > 1e-10) out.push_back(v);
  if (out.size() > 1 && (out.front() - out.back()).norm() < 1e-10) out.pop_back();
  return out;
}

std::vector<Eigen::Vector2d> PolytopeObstacle::boundary_polyline(int segments) const {
  auto verts = vertices2d();
  double per = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i)
    per += (verts[(i + 1) % verts.size()] - verts[i]).norm();
  double step = per / segments;
  std::vector<Eigen::Vector2d> out;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    Eigen::Vector2d a = verts[i], b = verts[(i + 1) % verts.size()];
    double len = (b - a).norm();
    int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int p = 0; p < pieces; ++p) out.emplace_back(a + (b - a) * (static_cast<double>(p) / pieces));
  }
  return out;
}

DilationObstacle::DilationObstacle(std::shared_ptr<const ConvexObstacle> base, double eta)
    : base_(std::move(base)), eta_(eta) {
  if (!base_) throw std::invalid_argument("DilationObstacle: null base");
  if (eta_ <= 0.0) throw std::invalid_argument("DilationObstacle: eta must be positive");
}

double DilationObstacle::distance(const Point& x) const {
  return std::max(0.0, base_->distance(x) - eta_);
}

Point DilationObstacle::project(const Point& x) const {
  double d = base_->distance(x);
  if (d <= eta_) return x;
  Point p = base_->project(x);
  return p + (x - p) * (eta_ / d);
}

ObstacleNormal DilationObstacle::normal_at(const Point& x, double tol) const {
  double d = base_->distance(x);
  if (std::abs(d - eta_) > tol * std::max(1.0, x.norm()))
    throw std::invalid_argument("DilationObstacle::normal_at: point not on the boundary");
  if (d < 1e-300)
    throw std::invalid_argument("DilationObstacle::normal_at: point inside base obstacle");
  Point p = base_->project(x);
  return {(x - p) / d, true};
}

std::string DilationObstacle::describe() const {
  return "dilation(" + base_->describe() + ", eta=" + std::to_string(eta_) + ")";
}

Point DilationObstacle::support_point(const Direction& u) const {
  return base_->support_point(u) + eta_ * u.normalized();
}

Point DilationObstacle::boundary_projection(const Point& x) const {
  double d = base_->distance(x);
  if (d > 1e-300) {
    Point p = base_->project(x);
    return p + (x - p) * (eta_ / d);
  }
  // Deep inside the base set: fall back to the base boundary pushed outward.
  Point p = base_->boundary_projection(x);
  Point q = base_->boundary_projection(p + (p - x) * 1e-6);
  Eigen::VectorXd u = (p - x);
  if (u.norm() < 1e-300) throw std::invalid_argument("boundary_projection: singular query");
  (void)q;
  return p + u.normalized() * eta_;
}

std::vector<Eigen::Vector2d> DilationObstacle::boundary_polyline(int segments) const {
  if (dim() != 2) throw std::logic_error("boundary_polyline: 2D only");
  // Angular support sweep: the support point of C_eta in direction u is the
  // base support point plus eta*u, which traces facet chords exactly and
  // resolves the corner arcs densely.
  std::vector<Eigen::Vector2d> out;
  out.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    double a = 2.0 * kPi * i / segments;
    Eigen::VectorXd u(2);
    u << std::cos(a), std::sin(a);
    Eigen::VectorXd s = support_point(u);
    Eigen::Vector2d p(s(0), s(1));
    if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
  }
  return out;
}

}  // namespace capgeo::convex
