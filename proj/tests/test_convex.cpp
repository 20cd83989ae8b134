#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "capgeo/convex.hpp"
#include "capgeo/simplex.hpp"
#include "capgeo/sphere.hpp"

using namespace capgeo;
using std::numbers::pi;

namespace {

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return v;
}

convex::PointCloud square_cloud() {
  return convex::PointCloud(2, {vec2(0, 0), vec2(1, 0), vec2(1, 1), vec2(0, 1)});
}

convex::PointCloud cube_cloud() {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 8; ++i)
    pts.push_back(vec3(i & 1 ? 1 : 0, i & 2 ? 1 : 0, i & 4 ? 1 : 0));
  return convex::PointCloud(3, pts);
}

convex::PointCloud random_ball_cloud(int dim, int k, double r, std::mt19937_64& gen) {
  std::vector<Eigen::VectorXd> pts;
  auto dirs = sphere::sample_uniform(dim, k, gen());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < k; ++i)
    pts.push_back(dirs[i] * (r * std::pow(unif(gen), 1.0 / dim)));
  return convex::PointCloud(dim, pts, r);
}

}  // namespace

TEST_CASE("in_normal_cone basics") {
  convex::PointCloud two(2, {vec2(0, 0), vec2(1, 0)});
  CHECK(convex::in_normal_cone(two, 0, vec2(-1, 0), 1e-12));
  CHECK_FALSE(convex::in_normal_cone(two, 0, vec2(1, 0), 1e-12));
  auto sq = square_cloud();
  Eigen::VectorXd diag = vec2(1, 1).normalized();
  CHECK(convex::in_normal_cone(sq, 2, diag, 1e-12));
  CHECK_FALSE(convex::in_normal_cone(sq, 0, diag, 1e-12));
}

TEST_CASE("support_set: edges, corners, singleton") {
  auto sq = square_cloud();
  auto right = convex::support_set(sq, vec2(1, 0), 1e-9);
  CHECK(right == std::vector<int>{1, 2});
  auto corner = convex::support_set(sq, vec2(1, 1).normalized(), 1e-9);
  CHECK(corner == std::vector<int>{2});
  convex::PointCloud single(2, {vec2(0.3, -0.2)});
  CHECK(convex::support_set(single, vec2(0, 1), 1e-9) == std::vector<int>{0});
}

TEST_CASE("normal cone emptiness via LP certificates") {
  // Square plus its center: the center has an empty cone, vertices do not.
  std::vector<Eigen::VectorXd> pts = {vec2(0, 0), vec2(1, 0), vec2(1, 1), vec2(0, 1),
                                      vec2(0.5, 0.5)};
  convex::PointCloud X(2, pts);
  CHECK(convex::normal_cone_info(X, 4).empty);
  for (int i = 0; i < 4; ++i) {
    auto info = convex::normal_cone_info(X, i);
    CHECK_FALSE(info.empty);
    CHECK(convex::in_normal_cone(X, i, info.witness, 1e-9));
  }
  // Mid-edge point: a single-ray cone, still nonempty.
  pts.push_back(vec2(0.5, 0.0));
  convex::PointCloud Y(2, pts);
  auto mid = convex::normal_cone_info(Y, 5);
  CHECK_FALSE(mid.empty);
  CHECK(convex::in_normal_cone(Y, 5, mid.witness, 1e-9));
  CHECK(mid.witness.dot(vec2(0, -1)) == doctest::Approx(1.0).epsilon(1e-7));
  // Coplanar clouds in R^3 keep every cone nonempty.
  convex::PointCloud flat(3, {vec3(0, 0, 0), vec3(1, 0, 0), vec3(0, 1, 0), vec3(0.2, 0.2, 0)});
  for (int i = 0; i < flat.size(); ++i) CHECK_FALSE(convex::normal_cone_info(flat, i).empty);
}

TEST_CASE("selector validation rejects invalid directions at support points") {
  auto sq = square_cloud();
  std::vector<Eigen::VectorXd> sigma(4, vec2(1, 0));
  // (1,0) is not a support normal at the left vertices.
  CHECK_THROWS_AS(convex::NormalSelector::validated(sq, sigma, 1e-9), std::invalid_argument);
  auto ok = convex::NormalSelector::generate(sq);
  for (int i = 0; i < 4; ++i) CHECK(convex::in_normal_cone(sq, i, ok.sigma[i], 1e-9));
}

TEST_CASE("bundle measure: single point equals a cap") {
  convex::PointCloud X(3, {vec3(0.4, -0.1, 0.2)});
  auto sel = convex::NormalSelector::generate(X);
  for (double theta : {0.6, pi / 2, 2.1}) {
    auto est = convex::bundle_measure(X, sel, theta, 100000, 5);
    CHECK(std::abs(est.value - sphere::cap_measure(3, theta)) <= 3 * est.stderr_ + 1e-12);
  }
}

TEST_CASE("bundle measure: coplanar cloud with orthogonal selector is the equality case") {
  std::mt19937_64 gen(404);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(vec3(unif(gen), unif(gen), 0.25));
  convex::PointCloud X(3, pts, 3.0);
  auto sel = convex::NormalSelector::validated(
      X, std::vector<Eigen::VectorXd>(20, vec3(0, 0, 1)), X.default_tie_tol());
  auto est = convex::bundle_measure(X, sel, pi / 2, 200000, 17);
  CHECK(std::abs(est.value - 2 * pi) <= 3 * est.stderr_);
}

TEST_CASE("bundle measure: cube with radial selector accepts every direction") {
  auto cube = cube_cloud();
  std::vector<Eigen::VectorXd> sigma;
  Eigen::VectorXd c = vec3(0.5, 0.5, 0.5);
  for (const auto& p : cube.points) sigma.push_back((p - c).normalized());
  auto sel = convex::NormalSelector::validated(cube, sigma, cube.default_tie_tol());
  auto est = convex::bundle_measure(cube, sel, pi / 2, 50000, 3);
  // Every support vertex has nu.sigma > 0, so the bundle is the whole sphere;
  // in particular it clears the 2*pi lower bound by a wide margin.
  CHECK(est.value == doctest::Approx(4 * pi).epsilon(1e-12));
  CHECK(est.value - 2 * pi > 3 * est.stderr_);
}

TEST_CASE("bundle lower bound holds over random clouds (unit-scale suite)") {
  std::mt19937_64 gen(999);
  for (int trial = 0; trial < 40; ++trial) {
    int dim = 2 + static_cast<int>(gen() % 3);
    int k = 3 + static_cast<int>(gen() % 38);
    auto X = random_ball_cloud(dim, k, 2.0, gen);
    auto sel = convex::NormalSelector::generate(X);
    double theta0 = std::uniform_real_distribution<double>(0.4, 2.4)(gen);
    double theta = std::uniform_real_distribution<double>(theta0 / 2, theta0)(gen);
    auto est = convex::bundle_measure(X, sel, theta, 20000, gen());
    CHECK(est.value >= sphere::cap_measure(dim, theta) - 3 * est.stderr_);
  }
}

TEST_CASE("bundle measure is nondecreasing in theta") {
  std::mt19937_64 gen(77);
  auto X = random_ball_cloud(3, 15, 1.5, gen);
  auto sel = convex::NormalSelector::generate(X);
  double prev = 0.0, prev_err = 0.0;
  for (double theta : {0.4, 0.8, 1.2, 1.6, 2.0, 2.4}) {
    auto est = convex::bundle_measure(X, sel, theta, 40000, 12);
    CHECK(est.value >= prev - 3 * (est.stderr_ + prev_err));
    prev = est.value;
    prev_err = est.stderr_;
  }
}

TEST_CASE("slab stability: width <= t and bundle excess shrinks with t") {
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> unif(-1.2, 1.2), h(0.0, 1.0);
  std::vector<Eigen::Vector2d> base;
  for (int i = 0; i < 18; ++i) base.emplace_back(unif(gen), unif(gen));
  double prev_excess = 1e300;
  double last = 0.0;
  for (double t : {0.2, 0.1, 0.05, 0.025}) {
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 18; ++i) pts.push_back(vec3(base[i].x(), base[i].y(), t * h(gen)));
    convex::PointCloud X(3, pts, 2.0);
    auto w = convex::width(X);
    CHECK(w.value <= t + 1e-12);
    auto sel = convex::NormalSelector::flattened(X, vec3(0, 0, 1));
    auto est = convex::bundle_measure(X, sel, pi / 2, 60000, 212);
    double excess = est.value - sphere::cap_measure(3, pi / 2);
    CHECK(excess >= -3 * est.stderr_);
    CHECK(excess <= prev_excess + 3 * est.stderr_);
    prev_excess = excess;
    last = 3 * est.stderr_;
  }
  CHECK(prev_excess <= 3 * last);  // final excess within a few stderr of zero
}

TEST_CASE("width: points, square, cube, certificates") {
  convex::PointCloud two(3, {vec3(0.3, 0.1, -1.0), vec3(-0.4, 0.8, 0.2)});
  CHECK(convex::width(two).value == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(convex::width(square_cloud()).value == doctest::Approx(1.0).epsilon(1e-12));
  auto cw = convex::width(cube_cloud());
  CHECK(cw.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(convex::extent(cube_cloud(), cw.direction) == doctest::Approx(cw.value).epsilon(1e-10));

  // 2D enumeration against a dense angular sweep.
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 5; ++trial) {
    auto X = random_ball_cloud(2, 12, 1.0, gen);
    auto w = convex::width(X);
    double sweep = 1e300;
    for (int i = 0; i < 20000; ++i) {
      double a = pi * i / 20000.0;
      sweep = std::min(sweep, convex::extent(X, vec2(std::cos(a), std::sin(a))));
    }
    CHECK(w.value <= sweep + 1e-12);
    CHECK(w.value >= sweep - 1e-3);
    CHECK(convex::extent(X, w.direction) == doctest::Approx(w.value).epsilon(1e-10));
  }

  // N=4 multistart with sampled certificate.
  auto X4 = random_ball_cloud(4, 25, 1.0, gen);
  auto w4 = convex::width(X4, 24);
  CHECK_FALSE(w4.exact);
  CHECK(convex::extent(X4, w4.direction) == doctest::Approx(w4.value).epsilon(1e-10));
  CHECK(w4.certificate_gap >= -1e-9);
}

TEST_CASE("obstacles: projection and normals") {
  convex::BallObstacle ball(vec2(0, 0), 1.0);
  CHECK((ball.project(vec2(2, 0)) - vec2(1, 0)).norm() == doctest::Approx(0.0));
  CHECK((ball.normal_at(vec2(1, 0)).normal - vec2(1, 0)).norm() == doctest::Approx(0.0));
  CHECK(ball.distance(vec2(0.2, 0.1)) == 0.0);

  auto sq = convex::PolytopeObstacle::box(vec2(0, 0), vec2(1, 1));
  CHECK((sq->project(vec2(2, 2)) - vec2(1, 1)).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((sq->project(vec2(0.5, 0.5)) - vec2(0.5, 0.5)).norm() == 0.0);
  auto n = sq->normal_at(vec2(1.0, 0.5));
  CHECK(n.smooth);
  CHECK((n.normal - vec2(1, 0)).norm() == doctest::Approx(0.0).epsilon(1e-12));
  auto corner = sq->normal_at(vec2(1.0, 1.0));
  CHECK_FALSE(corner.smooth);

  convex::DilationObstacle dil(sq, 0.25);
  for (double alpha : {0.3, 0.8, 1.2}) {
    Eigen::VectorXd x = vec2(1.0 + 0.25 * std::cos(alpha), 1.0 + 0.25 * std::sin(alpha));
    auto dn = dil.normal_at(x);
    CHECK((dn.normal - vec2(std::cos(alpha), std::sin(alpha))).norm() ==
          doctest::Approx(0.0).epsilon(1e-10));
  }
  CHECK(dil.distance(vec2(1.5, 1.0)) == doctest::Approx(0.25).epsilon(1e-12));

  // Dilation projection offsets the supporting point by eta.
  Eigen::VectorXd far = vec2(3.0, 1.0);
  CHECK((dil.project(far) - vec2(1.25, 1.0)).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("projection is idempotent and nonexpansive") {
  std::mt19937_64 gen(123);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  auto sq = convex::PolytopeObstacle::box(vec2(-0.5, -0.5), vec2(0.7, 0.4));
  convex::DilationObstacle dil(sq, 0.3);
  convex::BallObstacle ball(vec2(0.1, -0.2), 0.8);
  const convex::ConvexObstacle* obstacles[] = {sq.get(), &dil, &ball};
  for (const auto* C : obstacles) {
    for (int i = 0; i < 3000; ++i) {
      Eigen::VectorXd x = vec2(unif(gen), unif(gen)), y = vec2(unif(gen), unif(gen));
      Eigen::VectorXd px = C->project(x), py = C->project(y);
      CHECK((C->project(px) - px).norm() <= 1e-10);
      CHECK((px - py).norm() <= (x - y).norm() + 1e-10);
      CHECK(C->distance(px) <= 1e-10);
    }
  }
}

TEST_CASE("2D polytope vertices and boundary polyline") {
  auto sq = convex::PolytopeObstacle::box(vec2(0, 0), vec2(2, 1));
  auto verts = sq->vertices2d();
  CHECK(verts.size() == 4);
  auto chain = sq->boundary_polyline(60);
  double per = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i)
    per += (chain[(i + 1) % chain.size()] - chain[i]).norm();
  CHECK(per == doctest::Approx(6.0).epsilon(1e-9));

  convex::DilationObstacle dil(sq, 0.5);
  auto dchain = dil.boundary_polyline(2000);
  double dper = 0.0;
  for (std::size_t i = 0; i < dchain.size(); ++i)
    dper += (dchain[(i + 1) % dchain.size()] - dchain[i]).norm();
  CHECK(dper == doctest::Approx(6.0 + 2 * pi * 0.5).epsilon(1e-4));
}
