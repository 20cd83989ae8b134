#include "capgeo/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "capgeo/rng.hpp"

namespace capgeo::sphere {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SinPowParams {
  double exponent;
};

double sin_pow(double s, void* params) {
  const double k = static_cast<SinPowParams*>(params)->exponent;
  if (k == 0.0) return 1.0;
  return std::pow(std::sin(s), k);
}

struct GslWorkspace {
  gsl_integration_workspace* w;
  explicit GslWorkspace(std::size_t n) : w(gsl_integration_workspace_alloc(n)) {}
  ~GslWorkspace() { gsl_integration_workspace_free(w); }
  GslWorkspace(const GslWorkspace&) = delete;
  GslWorkspace& operator=(const GslWorkspace&) = delete;
};

}  // namespace

double unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("unit_ball_volume: dimension must be >= 1");
  return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double sphere_measure(int n) {
  if (n < 1) throw std::invalid_argument("sphere_measure: dimension must be >= 1");
  return n * unit_ball_volume(n);
}

double cap_measure(int n, double theta) {
  if (n < 2) throw std::invalid_argument("cap_measure: dimension must be >= 2");
  if (theta < 0.0 || theta > kPi)
    throw std::invalid_argument("cap_measure: angle must lie in [0, pi]");
  if (theta == 0.0) return 0.0;

  SinPowParams params{static_cast<double>(n - 2)};
  gsl_function f;
  f.function = &sin_pow;
  f.params = &params;

  GslWorkspace ws(256);
  double result = 0.0, abserr = 0.0;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  int status = gsl_integration_qag(&f, 0.0, theta, 1e-13, 1e-13, 256,
                                   GSL_INTEG_GAUSS31, ws.w, &result, &abserr);
  gsl_set_error_handler(old);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw std::runtime_error("cap_measure: quadrature failed");
  return (n - 1) * unit_ball_volume(n - 1) * result;
}

CapSpec::CapSpec(int dim_, Direction axis_, double angle_)
    : dim(dim_), axis(std::move(axis_)), angle(angle_) {
  if (dim < 2) throw std::invalid_argument("CapSpec: dimension must be >= 2");
  if (axis.size() != dim) throw std::invalid_argument("CapSpec: axis dimension mismatch");
  if (std::abs(axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("CapSpec: axis must be a unit vector");
  if (!(angle > 0.0 && angle <= kPi))
    throw std::invalid_argument("CapSpec: angle must lie in (0, pi]");
}

SphericalPolytope::SphericalPolytope(int dim_,
                                     std::vector<std::pair<Direction, double>> constraints_)
    : dim(dim_), constraints(std::move(constraints_)) {
  if (dim < 2) throw std::invalid_argument("SphericalPolytope: dimension must be >= 2");
  for (const auto& [a, c] : constraints) {
    (void)c;
    if (a.size() != dim)
      throw std::invalid_argument("SphericalPolytope: constraint dimension mismatch");
    if (std::abs(a.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("SphericalPolytope: constraint axis must be unit");
  }
}

bool SphericalPolytope::contains(const Eigen::Ref<const Eigen::VectorXd>& y,
                                 double tol) const {
  for (const auto& [a, c] : constraints)
    if (a.dot(y) < c - tol) return false;
  return true;
}

SphericalPolytope SphericalPolytope::cap(const CapSpec& c) {
  return SphericalPolytope(c.dim, {{c.axis, std::cos(c.angle)}});
}

std::vector<Direction> sample_uniform(int n, std::uint64_t count, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_uniform: dimension must be >= 2");
  if (count < 1) throw std::invalid_argument("sample_uniform: count must be >= 1");
  std::vector<Direction> out;
  out.reserve(count);
  const std::uint64_t nblocks = (count + rng::kBlockSize - 1) / rng::kBlockSize;
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    std::size_t c = static_cast<std::size_t>(
        std::min<std::uint64_t>(rng::kBlockSize, count - b * rng::kBlockSize));
    Eigen::MatrixXd dirs(n, static_cast<Eigen::Index>(c));
    auto gen = rng::block_engine(seed, b);
    rng::fill_uniform_directions(dirs, gen);
    for (std::size_t j = 0; j < c; ++j) out.emplace_back(dirs.col(j));
  }
  return out;
}

mc::McEstimate polytope_measure(const SphericalPolytope& P, std::uint64_t samples,
                                std::uint64_t seed, int workers) {
  auto kernel = [&P](const Eigen::MatrixXd& dirs, std::vector<std::uint8_t>& hit) {
    for (Eigen::Index j = 0; j < dirs.cols(); ++j)
      hit[j] = P.contains(dirs.col(j), 0.0) ? 1 : 0;
  };
  return mc::sphere_mc(P.dim, samples, seed, kernel, workers);
}

SphecoReport spheco_check(const SphericalPolytope& X, const Direction& x, double theta,
                          std::uint64_t samples, std::uint64_t seed, int workers) {
  if (x.size() != X.dim) throw std::invalid_argument("spheco_check: base point dimension");
  if (!X.contains(x, 1e-9))
    throw std::invalid_argument("spheco_check: base point x must satisfy all constraints of X");
  if (!(theta > 0.0 && theta < kPi))
    throw std::invalid_argument("spheco_check: theta must lie in (0, pi)");

  const double cos_theta = std::cos(theta);
  const double total = sphere_measure(X.dim);
  const double ratio = cap_measure(X.dim, theta) / total;

  // One pass over a shared stream: counts for X and X cap S_{theta,x} plus the
  // minimum geodesic distance from -x among accepted samples.
  struct Tally {
    std::uint64_t in_x = 0;
    std::uint64_t in_both = 0;
    double best_dot = -1.0;  // max over X of nu . (-x)
  };
  const std::uint64_t nblocks = (samples + rng::kBlockSize - 1) / rng::kBlockSize;
  std::vector<Tally> tallies(nblocks);
  auto kernel_block = [&](std::uint64_t b) {
    std::size_t count = static_cast<std::size_t>(
        std::min<std::uint64_t>(rng::kBlockSize, samples - b * rng::kBlockSize));
    Eigen::MatrixXd dirs(X.dim, static_cast<Eigen::Index>(count));
    auto gen = rng::block_engine(seed, b);
    rng::fill_uniform_directions(dirs, gen);
    Tally t;
    for (std::size_t j = 0; j < count; ++j) {
      if (!X.contains(dirs.col(j), 0.0)) continue;
      ++t.in_x;
      const double dx = dirs.col(j).dot(x);
      if (dx >= cos_theta) ++t.in_both;
      t.best_dot = std::max(t.best_dot, -dx);
    }
    tallies[b] = t;
  };
  (void)workers;
  for (std::uint64_t b = 0; b < nblocks; ++b) kernel_block(b);

  std::uint64_t in_x = 0, in_both = 0;
  double best_dot = -1.0;
  for (const auto& t : tallies) {
    in_x += t.in_x;
    in_both += t.in_both;
    best_dot = std::max(best_dot, t.best_dot);
  }

  const double n = static_cast<double>(samples);
  const double p_x = in_x / n;
  const double p_both = in_both / n;

  SphecoReport rep;
  rep.lhs = {total * p_both, total * std::sqrt(p_both * (1 - p_both) / n),
             in_both, samples, seed};
  rep.x_measure = {total * p_x, total * std::sqrt(p_x * (1 - p_x) / n), in_x, samples, seed};
  rep.rhs = ratio * rep.x_measure.value;
  rep.margin = rep.lhs.value - rep.rhs;

  // Per-sample margin contribution is total*(1{both} - ratio*1{X}); its
  // empirical standard error accounts for the correlation of the two counts.
  const double mean = p_both - ratio * p_x;
  const double second_moment = p_both * (1 - ratio) * (1 - ratio) +
                               (p_x - p_both) * ratio * ratio;
  rep.margin_stderr = total * std::sqrt(std::max(0.0, second_moment - mean * mean) / n);
  rep.dist_minus_x = (in_x == 0) ? kPi : std::acos(std::clamp(best_dot, -1.0, 1.0));
  return rep;
}

}  // namespace capgeo::sphere
