#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mironov/linalg.hpp"

namespace mironov {

/// Strictly increasing column tuple (i_1 < ... < i_k).
using MultiIndex = std::vector<int>;

/// All k-subsets of {0, ..., n_plus_1 - 1} in lexicographic order.
inline std::vector<MultiIndex> multi_indices(int n_plus_1, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > n_plus_1) return out;
  MultiIndex idx(k);
  for (int j = 0; j < k; ++j) idx[j] = j;
  while (true) {
    out.push_back(idx);
    int j = k - 1;
    while (j >= 0 && idx[j] == n_plus_1 - k + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int m = j + 1; m < k; ++m) idx[m] = idx[m - 1] + 1;
  }
  return out;
}

inline std::string index_label(const MultiIndex& idx) {
  std::string s;
  for (int i : idx) s += std::to_string(i);
  return s;
}

/// Plücker coordinates of a k-plane in C^{n+1}, lexicographic multi-index order.
class PlueckerPoint {
 public:
  PlueckerPoint(int k, int n_plus_1, ComplexVector coords)
      : k_(k), n_plus_1_(n_plus_1), coords_(std::move(coords)) {
    const auto expected = multi_indices(n_plus_1, k).size();
    if (static_cast<std::size_t>(coords_.size()) != expected) {
      throw Error(ErrorCode::InvalidArgument, "Pluecker vector has wrong length");
    }
    if (!all_finite(coords_) || !(coords_.norm() > tol::kZeroBase)) {
      throw Error(ErrorCode::ZeroBasePoint, "Pluecker vector is zero or non-finite");
    }
  }

  int k() const { return k_; }
  int n_plus_1() const { return n_plus_1_; }
  const ComplexVector& coords() const { return coords_; }
  complex operator[](Eigen::Index i) const { return coords_(i); }
  Eigen::Index size() const { return coords_.size(); }

  bool projectively_equals(const PlueckerPoint& other, double eps = tol::kProjective) const {
    return k_ == other.k_ && n_plus_1_ == other.n_plus_1_ &&
           projectively_equal(coords_, other.coords_, eps);
  }

 private:
  int k_;
  int n_plus_1_;
  ComplexVector coords_;
};

/// Tangent vector to the affine cone over P(Λ^k C^{n+1}) at `base`.
struct TangentAtEmbedding {
  ComplexVector base;
  ComplexVector direction;
};

namespace detail {

inline ComplexMatrix columns(const ComplexMatrix& m, const MultiIndex& idx) {
  ComplexMatrix sub(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) sub.col(c) = m.col(idx[c]);
  return sub;
}

inline complex det(const ComplexMatrix& m) {
  switch (m.rows()) {
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default: return m.determinant();
  }
}

}  // namespace detail

inline PlueckerPoint pluecker_embed(const Frame& frame) {
  const auto indices = multi_indices(frame.n_plus_1(), frame.k());
  ComplexVector w(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    w(i) = detail::det(detail::columns(frame.rows(), indices[i]));
  }
  const double scale = std::pow(frame.rows().rowwise().norm().maxCoeff(), frame.k());
  if (w.cwiseAbs().maxCoeff() <= tol::kRank * scale) {
    throw Error(ErrorCode::RankDeficient, "all Pluecker minors vanish");
  }
  return PlueckerPoint(frame.k(), frame.n_plus_1(), std::move(w));
}

/// Derivative of pluecker_embed(frame + s * velocities) at s = 0 (Leibniz rule).
inline TangentAtEmbedding pluecker_tangent(const Frame& frame,
                                           const ComplexMatrix& row_velocities) {
  if (row_velocities.rows() != frame.k() || row_velocities.cols() != frame.n_plus_1()) {
    throw Error(ErrorCode::InvalidArgument, "velocity matrix shape must match the frame");
  }
  const auto indices = multi_indices(frame.n_plus_1(), frame.k());
  ComplexVector base(static_cast<Eigen::Index>(indices.size()));
  ComplexVector dir = ComplexVector::Zero(base.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const ComplexMatrix sub = detail::columns(frame.rows(), indices[i]);
    const ComplexMatrix vel = detail::columns(row_velocities, indices[i]);
    base(i) = detail::det(sub);
    for (Eigen::Index j = 0; j < sub.rows(); ++j) {
      if (vel.row(j).isZero(0.0)) continue;
      ComplexMatrix replaced = sub;
      replaced.row(j) = vel.row(j);
      dir(i) += detail::det(replaced);
    }
  }
  return {std::move(base), std::move(dir)};
}

}  // namespace mironov
