#include "capgeo/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace capgeo::detail {

namespace {

// Dense two-phase tableau simplex (Bland's rule) for min c.z, A z = b, z >= 0.
// Small instances only: the interior test below has N+1 rows and k+1 columns.
class Simplex {
 public:
  Simplex(Eigen::MatrixXd A, Eigen::VectorXd b, Eigen::VectorXd c)
      : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())) {
    for (int i = 0; i < m_; ++i)
      if (b(i) < 0) {
        A.row(i) = -A.row(i);
        b(i) = -b(i);
      }
    // Tableau columns: structural | artificial | rhs.
    T_.setZero(m_ + 1, n_ + m_ + 1);
    T_.block(0, 0, m_, n_) = A;
    T_.block(0, n_, m_, m_).setIdentity();
    T_.col(n_ + m_).head(m_) = b;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;

    // Phase 1: minimize sum of artificials.
    Eigen::RowVectorXd cost1 = Eigen::RowVectorXd::Zero(n_ + m_);
    cost1.segment(n_, m_).setOnes();
    set_objective_row(cost1);
    solve_lp();
    if (T_(m_, n_ + m_) < -1e-9)
      feasible_ = false;
    else {
      feasible_ = true;
      drive_artificials_out();
      Eigen::RowVectorXd cost2 = Eigen::RowVectorXd::Zero(n_ + m_);
      cost2.head(n_) = c.transpose();
      allow_artificials_ = false;
      set_objective_row(cost2);
      solve_lp();
    }
  }

  bool feasible() const { return feasible_; }
  double objective() const { return -T_(m_, n_ + m_); }

  // Dual vector y = c_B B^{-1}, read from the artificial reduced costs.
  Eigen::VectorXd dual() const {
    Eigen::VectorXd y(m_);
    for (int i = 0; i < m_; ++i) y(i) = -T_(m_, n_ + i);
    return y;
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) z(basis_[i]) = T_(i, n_ + m_);
    return z;
  }

 private:
  void set_objective_row(const Eigen::RowVectorXd& cost) {
    T_.row(m_).setZero();
    T_.row(m_).head(n_ + m_) = cost;
    for (int i = 0; i < m_; ++i)
      if (cost(basis_[i]) != 0.0) T_.row(m_) -= cost(basis_[i]) * T_.row(i);
  }

  void pivot(int row, int col) {
    T_.row(row) /= T_(row, col);
    for (int i = 0; i <= m_; ++i)
      if (i != row && T_(i, col) != 0.0) T_.row(i) -= T_(i, col) * T_.row(row);
    basis_[row] = col;
  }

  void solve_lp() {
    const int max_iter = 200 * (m_ + n_);
    for (int iter = 0; iter < max_iter; ++iter) {
      int col = -1;
      int limit = allow_artificials_ ? n_ + m_ : n_;
      for (int j = 0; j < limit; ++j)
        if (T_(m_, j) < -1e-11) {  // Bland: first improving column
          col = j;
          break;
        }
      if (col < 0) return;
      int row = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (T_(i, col) > 1e-11) {
          double ratio = T_(i, n_ + m_) / T_(i, col);
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && (row < 0 || basis_[i] < basis_[row]))) {
            best = ratio;
            row = i;
          }
        }
      }
      if (row < 0) throw std::runtime_error("simplex: unbounded LP");
      pivot(row, col);
    }
    throw std::runtime_error("simplex: iteration limit");
  }

  void drive_artificials_out() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j)
        if (std::abs(T_(i, j)) > 1e-9) {
          col = j;
          break;
        }
      if (col >= 0) pivot(i, col);
      // Otherwise the row is redundant; the artificial stays basic at 0.
    }
  }

  int m_, n_;
  Eigen::MatrixXd T_;
  std::vector<int> basis_;
  bool feasible_ = false;
  bool allow_artificials_ = true;
};

}  // namespace

InteriorCertificate origin_interior_certificate(const std::vector<Eigen::VectorXd>& points,
                                                double tol) {
  if (points.empty()) throw std::invalid_argument("origin_interior_certificate: empty set");
  const int dim = static_cast<int>(points[0].size());
  const int k = static_cast<int>(points.size());

  // max t  s.t.  sum_j mu_j d_j + t sum_j d_j = 0,  sum_j mu_j + k t = 1,
  // mu, t >= 0. Optimum > 0 iff 0 is interior (points spanning R^N).
  Eigen::MatrixXd A(dim + 1, k + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim + 1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(k + 1);
  Eigen::VectorXd dsum = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < k; ++j) {
    A.col(j).head(dim) = points[j];
    A(dim, j) = 1.0;
    dsum += points[j];
  }
  A.col(k).head(dim) = dsum;
  A(dim, k) = static_cast<double>(k);
  b(dim) = 1.0;
  c(k) = -1.0;  // minimize -t

  Simplex lp(A, b, c);
  InteriorCertificate cert;
  if (!lp.feasible()) {
    // 0 not even in conv(points): separate via the dual of phase 1; fall back
    // to the mean direction, which is guaranteed to separate in this case.
    cert.interior = false;
    cert.margin = 0.0;
    Eigen::VectorXd nu = -dsum;
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, p.dot(nu));
    if (nu.norm() < 1e-14 || worst > tol * nu.norm()) {
      cert.normal = Eigen::VectorXd::Zero(dim);
    } else {
      cert.normal = nu.normalized();
    }
    return cert;
  }
  cert.margin = -lp.objective();  // objective() = min -t
  cert.interior = cert.margin > tol;
  if (!cert.interior) {
    Eigen::VectorXd y = lp.dual();
    Eigen::VectorXd nu = y.head(dim);
    if (nu.norm() > 1e-12) {
      nu.normalize();
      // Clean the certificate: it must satisfy p . nu <= O(tol) for all p.
      double worst = -1e300;
      for (const auto& p : points) worst = std::max(worst, p.dot(nu));
      if (worst <= 1e-7) {
        cert.normal = nu;
        return cert;
      }
    }
    cert.normal = Eigen::VectorXd::Zero(dim);
  }
  return cert;
}

}  // namespace capgeo::detail
