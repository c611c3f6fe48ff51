#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mironov/linalg.hpp"

namespace mironov {

/// Base point z on the affine cone plus tangent directions at z.
struct TangentFrameAtPoint {
  ComplexVector base;
  std::vector<ComplexVector> directions;
};

namespace detail {

inline double checked_norm2(const ComplexVector& z) {
  const double n2 = z.squaredNorm();
  if (!(std::sqrt(n2) >= tol::kZeroBase)) {
    throw Error(ErrorCode::ZeroBasePoint, "base point is zero");
  }
  return n2;
}

}  // namespace detail

/// Fubini-Study form on the affine cone:
/// Im[(<u,v>|z|^2 - <u,z><z,v>) / |z|^4].
inline double fs_form(const ComplexVector& z, const ComplexVector& u, const ComplexVector& v) {
  const double n2 = detail::checked_norm2(z);
  const complex num = inner(u, v) * n2 - inner(u, z) * inner(z, v);
  return (num / (n2 * n2)).imag();
}

/// Component of d orthogonal to the complex line through z (kills z and iz).
inline ComplexVector gauge_project(const ComplexVector& z, const ComplexVector& d) {
  const double n2 = detail::checked_norm2(z);
  return d - z * (inner(z, d) / n2);
}

inline double isotropy_residual(const TangentFrameAtPoint& frame) {
  detail::checked_norm2(frame.base);
  double worst = 0.0;
  const auto& d = frame.directions;
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t b = a + 1; b < d.size(); ++b) {
      worst = std::max(worst, std::abs(fs_form(frame.base, d[a], d[b])));
    }
  }
  return worst;
}

/// Real rank of the directions inside T_z CP^N = z^perp, with directions
/// scaled by 1/|z|.
inline int tangent_span_rank(const ComplexVector& z, const std::vector<ComplexVector>& dirs) {
  if (dirs.empty()) return 0;
  const double nz = std::sqrt(detail::checked_norm2(z));
  const Eigen::Index len = z.size();
  RealMatrix real(2 * len, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    const ComplexVector p = gauge_project(z, dirs[j]) / nz;
    real.col(j).head(len) = p.real();
    real.col(j).tail(len) = p.imag();
  }
  return numerical_rank(real, tol::kSpanRank, tol::kSpanRankFloor);
}

struct LagrangianResidual {
  double isotropy = 0.0;
  int rank = 0;

  bool passes(int expected_dim, double eps = tol::kIsotropy) const {
    return isotropy <= eps && rank == expected_dim;
  }
};

inline LagrangianResidual lagrangian_residual(const TangentFrameAtPoint& frame) {
  return {isotropy_residual(frame), tangent_span_rank(frame.base, frame.directions)};
}

}  // namespace mironov
