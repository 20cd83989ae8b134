#pragma once

#include <vector>

#include <Eigen/Core>

namespace capgeo::detail {

// Decides whether the origin lies in the interior of conv(points) for a set
// spanning R^N. When it does not, `normal` is a unit vector nu with
// p . nu <= 0 for every input point, i.e. a supporting direction at 0.
struct InteriorCertificate {
  bool interior = false;
  double margin = 0.0;  // optimal value of the interior LP (>= 0)
  Eigen::VectorXd normal;
};

InteriorCertificate origin_interior_certificate(const std::vector<Eigen::VectorXd>& points,
                                                double tol = 1e-11);

}  // namespace capgeo::detail
