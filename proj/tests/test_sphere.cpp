#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "capgeo/sphere.hpp"

using namespace capgeo;
using std::numbers::pi;

namespace {

// Composite-Simpson oracle for (n-1) w_{n-1} Int_0^theta sin^{n-2}, kept
// independent of the GSL-backed implementation.
double cap_measure_simpson(int n, double theta, int panels = 4000) {
  auto f = [n](double s) { return std::pow(std::sin(s), n - 2); };
  const double h = theta / panels;
  double acc = f(0.0) + f(theta);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return (n - 1) * sphere::unit_ball_volume(n - 1) * acc * h / 3.0;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(sphere::unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sphere::unit_ball_volume(2) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(sphere::unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-14));
  CHECK(sphere::unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(sphere::unit_ball_volume(0), std::invalid_argument);
}

TEST_CASE("cap measure closed forms") {
  // N=2: integrand sin^0 = 1, w_1 = 2, so the cap is an arc of length 2*theta.
  for (double theta : {0.05, 0.3, 1.0, 2.0, 3.0})
    CHECK(sphere::cap_measure(2, theta) == doctest::Approx(2.0 * theta).epsilon(1e-13));
  // N=3: antiderivative gives 2*pi*(1-cos theta).
  for (double theta : {0.05, 0.5, pi / 2, 2.5})
    CHECK(sphere::cap_measure(3, theta) ==
          doctest::Approx(2.0 * pi * (1.0 - std::cos(theta))).epsilon(1e-13));
  CHECK(sphere::cap_measure(3, pi / 2) == doctest::Approx(2.0 * pi).epsilon(1e-13));
  CHECK_THROWS_AS(sphere::cap_measure(3, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(sphere::cap_measure(3, pi + 0.1), std::invalid_argument);
}

TEST_CASE("cap measure matches an independent quadrature and full-sphere limits") {
  for (int n = 2; n <= 8; ++n) {
    CHECK(sphere::cap_measure(n, pi) ==
          doctest::Approx(sphere::sphere_measure(n)).epsilon(1e-12));
    for (double theta : {0.2, 1.1, 2.7})
      CHECK(sphere::cap_measure(n, theta) ==
            doctest::Approx(cap_measure_simpson(n, theta)).epsilon(1e-10));
  }
}

TEST_CASE("cap measure is increasing and satisfies the complement identity") {
  for (int n : {2, 3, 4, 5, 6}) {
    double prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
      double theta = pi * i / 41.0;
      double v = sphere::cap_measure(n, theta);
      CHECK(v > prev);
      prev = v;
      CHECK(v + sphere::cap_measure(n, pi - theta) ==
            doctest::Approx(sphere::sphere_measure(n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("uniform sampling: norms, determinism, CLT mean bound") {
  auto a = sphere::sample_uniform(2, 4, 7);
  CHECK(a.size() == 4);
  for (const auto& v : a) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));

  auto b = sphere::sample_uniform(5, 3000, 99);
  auto c = sphere::sample_uniform(5, 3000, 99);
  for (size_t i = 0; i < b.size(); ++i) CHECK((b[i] - c[i]).norm() == 0.0);

  const std::uint64_t n = 1000000;
  auto dirs = sphere::sample_uniform(3, n, 2024);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& v : dirs) mean += v;
  mean /= static_cast<double>(n);
  CHECK(mean.norm() < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("polytope measure: whole sphere, caps and a lune") {
  // No constraints: hit fraction 1 exactly.
  auto whole = sphere::polytope_measure(sphere::SphericalPolytope::whole_sphere(3), 20000, 1);
  CHECK(whole.value == doctest::Approx(sphere::sphere_measure(3)).epsilon(1e-15));
  CHECK(whole.stderr_ == 0.0);

  // Single cap constraint against the exact cap measure.
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> unif(0.15, 2.9);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 2 + static_cast<int>(gen() % 4);
    double theta = unif(gen);
    auto axis = sphere::sample_uniform(n, 1, gen())[0];
    sphere::SphericalPolytope cap(n, {{axis, std::cos(theta)}});
    auto est = sphere::polytope_measure(cap, 100000, gen());
    CHECK(std::abs(est.value - sphere::cap_measure(n, theta)) <= 3.0 * est.stderr_ + 1e-12);
  }

  // Two orthogonal hemispheres in R^3: a lune of dihedral angle pi/2, area pi.
  Eigen::Vector3d e1(1, 0, 0), e2(0, 1, 0);
  sphere::SphericalPolytope lune(3, {{e1, 0.0}, {e2, 0.0}});
  auto est = sphere::polytope_measure(lune, 400000, 5);
  CHECK(std::abs(est.value - pi) <= 3.0 * est.stderr_);
}

TEST_CASE("polytope measure is independent of worker count") {
  Eigen::Vector3d e3(0, 0, 1);
  sphere::SphericalPolytope cap(3, {{e3, 0.4}});
  auto s1 = sphere::polytope_measure(cap, 150000, 77, 1);
  auto s4 = sphere::polytope_measure(cap, 150000, 77, 4);
  CHECK(s1.hits == s4.hits);
  CHECK(s1.value == s4.value);
}

TEST_CASE("spheco: cap base case, equality for hemispheres, tiny cap") {
  // X = cap S_{pi/3} about e_N, x = e_N, theta = pi/2: both sides in closed form.
  Eigen::Vector3d pole(0, 0, 1);
  sphere::SphericalPolytope X(3, {{pole, std::cos(pi / 3)}});
  auto rep = sphere::spheco_check(X, pole, pi / 2, 200000, 42);
  CHECK(rep.margin >= -3.0 * rep.margin_stderr);
  // X inside S_{pi/2,x}: lhs = H(X) and rhs = H(X)/2, so margin ~ H(X)/2.
  double hx = sphere::cap_measure(3, pi / 3);
  CHECK(rep.lhs.value == doctest::Approx(hx).epsilon(0.02));
  CHECK(rep.margin == doctest::Approx(hx / 2).epsilon(0.05));

  // X a hemisphere with x on its boundary great circle: -x lies in X, so
  // equality holds for every theta.
  Eigen::Vector3d a(1, 0, 0);
  sphere::SphericalPolytope hemi(3, {{a, 0.0}});
  for (double theta : {0.8, pi / 2, 2.2}) {
    auto eq = sphere::spheco_check(hemi, pole, theta, 200000, 9);
    CHECK(std::abs(eq.margin) <= 3.0 * eq.margin_stderr + 1e-12);
  }

  // Tiny cap around x with theta = pi/2: margin ~ lhs/2 > 0.
  sphere::SphericalPolytope tiny(3, {{pole, std::cos(0.15)}});
  auto t = sphere::spheco_check(tiny, pole, pi / 2, 400000, 3);
  CHECK(t.margin > 0.0);
  CHECK(t.margin == doctest::Approx(t.lhs.value / 2).epsilon(0.1));

  // Base point must belong to X.
  Eigen::Vector3d bad(0, 0, -1);
  CHECK_THROWS_AS(sphere::spheco_check(X, bad, 1.0, 100, 1), std::invalid_argument);
}

TEST_CASE("spheco margin is nonnegative over randomized spherical polytopes") {
  std::mt19937_64 gen(555);
  std::uniform_real_distribution<double> ang(0.4, 2.6);
  int ran = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(gen() % 3);
    auto axis = sphere::sample_uniform(n, 1, gen())[0];
    // Intersection of up to 3 caps around nearby axes; x = common axis point.
    std::vector<std::pair<sphere::Direction, double>> cons;
    int k = 1 + static_cast<int>(gen() % 3);
    for (int i = 0; i < k; ++i) {
      auto jitter = sphere::sample_uniform(n, 1, gen())[0];
      Eigen::VectorXd a = (axis + 0.35 * jitter).normalized();
      double alpha = std::uniform_real_distribution<double>(0.5, 1.4)(gen);
      if (a.dot(axis) < std::cos(alpha) + 0.05) continue;  // keep x inside X
      cons.emplace_back(a, std::cos(alpha));
    }
    if (cons.empty()) continue;
    sphere::SphericalPolytope X(n, cons);
    auto rep = sphere::spheco_check(X, axis, ang(gen), 20000, gen());
    if (rep.x_measure.hits < 50) continue;  // too small to resolve
    CHECK(rep.margin >= -3.0 * rep.margin_stderr);
    ++ran;
  }
  CHECK(ran > 120);
}

TEST_CASE("spheco stability: shrinking equality gap pulls X toward -x") {
  // X_k = caps of half-angle alpha_k -> pi: the relative gap in the cap
  // inequality tends to 0 while dist(-x, X_k) = pi - alpha_k -> 0.
  Eigen::Vector3d pole(0, 0, 1);
  double prev_gap = 1e300, prev_dist = 1e300;
  for (double alpha : {2.0, 2.4, 2.8, 3.05}) {
    sphere::SphericalPolytope X(3, {{pole, std::cos(alpha)}});
    auto rep = sphere::spheco_check(X, pole, 1.2, 150000, 11);
    double gap = rep.margin / rep.x_measure.value;
    double dist = rep.dist_minus_x;
    CHECK(gap <= prev_gap + 3.0 * rep.margin_stderr / rep.x_measure.value);
    CHECK(dist <= prev_dist + 0.05);
    CHECK(dist == doctest::Approx(pi - alpha).epsilon(0.2));
    prev_gap = gap;
    prev_dist = dist;
  }
}
