#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "mironov/error.hpp"

namespace mironov {

using complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr complex kI{0.0, 1.0};

namespace tol {
/// Smallest/largest singular value ratio at or below which a frame is singular.
inline constexpr double kRank = 1e-10;
/// Gauge-fixed projective comparison (absolute, unit-normalized vectors).
inline constexpr double kProjective = 1e-9;
/// Relative singular-value cutoff for tangent-span ranks.
inline constexpr double kSpanRank = 1e-8;
/// Absolute floor for tangent-span ranks, in units of |z|.
inline constexpr double kSpanRankFloor = 1e-10;
inline constexpr double kIsotropy = 1e-8;
inline constexpr double kMoment = 1e-12;
inline constexpr double kCritical = 1e-9;
inline constexpr double kFiniteDifference = 1e-4;
inline constexpr double kZeroBase = 1e-300;
}  // namespace tol

/// Hermitian inner product, antilinear in the first argument.
inline complex inner(const ComplexVector& u, const ComplexVector& v) {
  return u.dot(v);
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const complex x = m.data()[i];
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  return true;
}

/// Singular values in decreasing order.
inline RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

inline RealVector singular_values(const RealMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<RealMatrix> svd(m);
  return svd.singularValues();
}

/// Counts singular values above max(rel * largest, abs_floor).
inline int numerical_rank(const RealMatrix& m, double rel, double abs_floor) {
  const RealVector s = singular_values(m);
  if (s.size() == 0) return 0;
  const double cutoff = std::max(rel * s(0), abs_floor);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

/// A k x (n+1) complex matrix whose rows span a k-dimensional subspace.
class Frame {
 public:
  explicit Frame(ComplexMatrix rows) : rows_(std::move(rows)) {
    if (rows_.rows() < 1 || rows_.rows() > rows_.cols()) {
      throw Error(ErrorCode::InvalidArgument,
                  "frame needs 1 <= k <= n+1, got k=" + std::to_string(rows_.rows()) +
                      " n+1=" + std::to_string(rows_.cols()));
    }
    if (!all_finite(rows_)) {
      throw Error(ErrorCode::InvalidArgument, "frame has non-finite entries");
    }
    const RealVector s = singular_values(rows_);
    if (!(s(0) > 0.0) || s(s.size() - 1) <= tol::kRank * s(0)) {
      throw Error(ErrorCode::RankDeficient, "frame rows are linearly dependent");
    }
  }

  static Frame from_real(const RealMatrix& rows) { return Frame(rows.cast<complex>()); }

  int k() const { return static_cast<int>(rows_.rows()); }
  int n_plus_1() const { return static_cast<int>(rows_.cols()); }
  const ComplexMatrix& rows() const { return rows_; }
  ComplexVector row(int r) const { return rows_.row(r).transpose(); }

  bool is_real(double eps = 0.0) const {
    return rows_.imag().cwiseAbs().maxCoeff() <= eps;
  }

 private:
  ComplexMatrix rows_;
};

/// Modified Gram-Schmidt with one reorthogonalization pass.
inline Frame orthonormalize(const Frame& frame) {
  ComplexMatrix q = frame.rows();
  const double scale = q.rowwise().norm().maxCoeff();
  for (Eigen::Index r = 0; r < q.rows(); ++r) {
    ComplexVector v = q.row(r).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index p = 0; p < r; ++p) {
        const ComplexVector qp = q.row(p).transpose();
        v -= inner(qp, v) * qp;
      }
    }
    const double norm = v.norm();
    if (norm <= tol::kRank * scale) {
      throw Error(ErrorCode::RankDeficient, "frame rows are linearly dependent");
    }
    q.row(r) = (v / norm).transpose();
  }
  return Frame(std::move(q));
}

/// Orthogonal projector onto the row span: P = sum_r q_r q_r^*.
inline ComplexMatrix projector(const Frame& frame) {
  const ComplexMatrix q = orthonormalize(frame).rows();
  return q.transpose() * q.conjugate();
}

/// Gauge-fixed distance between two projective points: both vectors are
/// unit-normalized and phase-aligned on the largest-modulus coordinate of `a`.
inline double projective_distance(const ComplexVector& a, const ComplexVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0) || a.size() != b.size()) {
    return std::numeric_limits<double>::infinity();
  }
  const ComplexVector ua = a / na;
  const ComplexVector ub = b / nb;
  Eigen::Index pivot = 0;
  ua.cwiseAbs().maxCoeff(&pivot);
  if (std::abs(ub(pivot)) == 0.0) return (ua - ub).cwiseAbs().maxCoeff() + 1.0;
  const complex ratio = ua(pivot) / ub(pivot);
  const complex phase = ratio / std::abs(ratio);
  return (ua - phase * ub).cwiseAbs().maxCoeff();
}

inline bool projectively_equal(const ComplexVector& a, const ComplexVector& b,
                               double eps = tol::kProjective) {
  return projective_distance(a, b) <= eps;
}

/// Stacks two frames and returns dim(span A + span B).
inline int joint_rank(const Frame& a, const Frame& b) {
  ComplexMatrix stacked(a.k() + b.k(), a.n_plus_1());
  stacked << a.rows(), b.rows();
  const RealVector s = singular_values(stacked);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol::kRank * s(0)) ++rank;
  }
  return rank;
}

}  // namespace mironov
