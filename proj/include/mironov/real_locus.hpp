#pragma once

#include <cmath>
#include <vector>

#include "mironov/linalg.hpp"
#include "mironov/moment.hpp"
#include "mironov/pluecker.hpp"
#include "mironov/random.hpp"

namespace mironov {

inline PlueckerPoint sigma(const PlueckerPoint& w) {
  return PlueckerPoint(w.k(), w.n_plus_1(), w.coords().conjugate());
}

/// Distance between sigma(w) and w in the projective gauge.
inline double reality_defect(const PlueckerPoint& w) {
  return projective_distance(w.coords(), w.coords().conjugate());
}

inline bool is_real_point(const PlueckerPoint& w, double eps = tol::kProjective) {
  return reality_defect(w) <= eps;
}

/// Gaussian k x n_plus_1 matrix, orthonormalized. Distribution is invariant
/// under O(k) on the left and O(n+1) on the right.
inline Frame sample_real_grassmannian(int k, int n_plus_1, Rng& rng) {
  if (k < 1 || k > n_plus_1) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n+1");
  while (true) {
    try {
      return orthonormalize(Frame::from_real(rng.gaussian_matrix(k, n_plus_1)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
    }
  }
}

/// Complex Gaussian frame; its span is Haar-distributed on Gr(k, n+1).
inline Frame sample_complex_grassmannian(int k, int n_plus_1, Rng& rng) {
  if (k < 1 || k > n_plus_1) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n+1");
  while (true) {
    try {
      return orthonormalize(Frame(rng.complex_gaussian_matrix(k, n_plus_1)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
    }
  }
}

/// Real orthonormal k-frame inside the hyperplane x_n = 0 of R^{n+1}.
class RealBasePoint {
 public:
  explicit RealBasePoint(RealMatrix rows) : rows_(std::move(rows)) {
    const Eigen::Index k = rows_.rows();
    const Eigen::Index n1 = rows_.cols();
    if (k < 1 || k >= n1) throw Error(ErrorCode::InvalidArgument, "base needs 1 <= k <= n");
    if (rows_.col(n1 - 1).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "base rows must have zero last coordinate");
    }
    const RealMatrix gram = rows_ * rows_.transpose();
    if ((gram - RealMatrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "base rows must be orthonormal");
    }
  }

  /// Lifts a k x n real frame into the hyperplane orthogonal to e_n.
  static RealBasePoint lift(const Frame& frame_in_rn) {
    const Frame q = orthonormalize(frame_in_rn);
    RealMatrix rows = RealMatrix::Zero(q.k(), q.n_plus_1() + 1);
    rows.leftCols(q.n_plus_1()) = q.rows().real();
    return RealBasePoint(std::move(rows));
  }

  int k() const { return static_cast<int>(rows_.rows()); }
  int n_plus_1() const { return static_cast<int>(rows_.cols()); }
  const RealMatrix& rows() const { return rows_; }

  /// Orthonormal basis of the complement of the base inside e_n^perp, as rows.
  RealMatrix complement() const {
    const int n = n_plus_1() - 1;
    const RealMatrix b = rows_.leftCols(n);
    const RealMatrix p = RealMatrix::Identity(n, n) - b.transpose() * b;
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(p);
    const int m = n - k();
    RealMatrix out = RealMatrix::Zero(m, n_plus_1());
    // eigenvalues ascending; the complement sits at eigenvalue 1
    for (int j = 0; j < m; ++j) out.row(j).head(n) = eig.eigenvectors().col(n - m + j).transpose();
    return out;
  }

 private:
  RealMatrix rows_;
};

/// Unit vector in the row span of a base point.
class FiberDirection {
 public:
  FiberDirection(const RealBasePoint& base, RealVector u) : u_(std::move(u)) {
    if (u_.size() != base.n_plus_1()) throw Error(ErrorCode::InvalidArgument, "fiber direction has wrong length");
    if (std::abs(u_.norm() - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "fiber direction must be a unit vector");
    const RealVector inside = base.rows().transpose() * (base.rows() * u_);
    if ((inside - u_).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "fiber direction must lie in the base span");
    }
  }

  /// Unit vector with coefficients `coeffs` in the base's row basis.
  static FiberDirection from_coefficients(const RealBasePoint& base, const RealVector& coeffs) {
    RealVector u = base.rows().transpose() * coeffs;
    return FiberDirection(base, u / u.norm());
  }

  static FiberDirection random(const RealBasePoint& base, Rng& rng) {
    RealVector g(base.k());
    do {
      for (int j = 0; j < base.k(); ++j) g(j) = rng.gaussian();
    } while (g.norm() < 1e-8);
    return from_coefficients(base, g);
  }

  const RealVector& u() const { return u_; }
  FiberDirection operator-() const { return FiberDirection(u_ * -1.0); }

 private:
  explicit FiberDirection(RealVector u) : u_(std::move(u)) {}
  RealVector u_;
};

struct LevelFiberParam {
  RealBasePoint base;
  FiberDirection u;
  double c;
  double t;
};

inline void check_level(double c) {
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::InvalidLevel, "level must lie in (0,1)");
}

/// Tilt angle with sin^2(theta) = c, theta in (0, pi/2).
inline double level_angle(double c) { return std::asin(std::sqrt(c)); }

/// Orthonormal basis (rows) of u^perp inside the base span; identical for u and -u.
inline RealMatrix fiber_complement(const RealBasePoint& base, const FiberDirection& u) {
  const int k = base.k();
  const RealVector& uv = u.u();
  RealMatrix m = RealMatrix::Zero(k - 1, base.n_plus_1());
  if (k == 1) return m;
  // drop the base row most aligned with u; the rest stay well conditioned
  const RealVector overlap = (base.rows() * uv).cwiseAbs();
  Eigen::Index drop = 0;
  overlap.maxCoeff(&drop);
  int filled = 0;
  for (int r = 0; r < k; ++r) {
    if (r == drop) continue;
    RealVector v = base.rows().row(r).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      v -= uv.dot(v) * uv;
      for (int p = 0; p < filled; ++p) v -= m.row(p).dot(v) * m.row(p).transpose();
    }
    m.row(filled++) = (v / v.norm()).transpose();
  }
  return m;
}

/// The level-c subspace span(M, cos(theta) u + sin(theta) e_n) with
/// M = u^perp within the base. The other solution over M is at -u.
inline Frame level_fiber_solve(const RealBasePoint& base, const FiberDirection& u, double c) {
  check_level(c);
  const int k = base.k();
  const int n1 = base.n_plus_1();
  const double theta = level_angle(c);
  RealMatrix rows(k, n1);
  rows.topRows(k - 1) = fiber_complement(base, u);
  RealVector tilted = std::cos(theta) * u.u();
  tilted(n1 - 1) += std::sin(theta);
  rows.row(k - 1) = tilted.transpose();
  return Frame::from_real(rows);
}

inline RealBasePoint sample_base_point(int k, int n_plus_1, Rng& rng) {
  if (k < 1 || k >= n_plus_1) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n");
  return RealBasePoint::lift(sample_real_grassmannian(k, n_plus_1 - 1, rng));
}

struct LevelSample {
  LevelFiberParam param;
  Frame frame;
};

/// Independent samples of the restricted level set S_R(c) of F(mu_n), at t = 0.
inline std::vector<LevelSample> sample_level_set(int k, int n_plus_1, double c, int count, Rng& rng) {
  check_level(c);
  std::vector<LevelSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    RealBasePoint base = sample_base_point(k, n_plus_1, rng);
    FiberDirection u = FiberDirection::random(base, rng);
    Frame frame = level_fiber_solve(base, u, c);
    out.push_back({LevelFiberParam{std::move(base), std::move(u), c, 0.0}, std::move(frame)});
  }
  return out;
}

}  // namespace mironov
