#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mironov/linalg.hpp"
#include "mironov/pluecker.hpp"
#include "mironov/symplectic.hpp"

namespace mironov {

/// Integer weights (a_0, ..., a_n) selecting a circle in the diagonal torus.
class MomentWeights {
 public:
  explicit MomentWeights(std::vector<int> a) : a_(std::move(a)) {
    bool any = false;
    for (int x : a_) any = any || x != 0;
    if (!any) throw Error(ErrorCode::InvalidWeights, "moment weights must not all be zero");
  }

  /// Weight vector e_i of length n_plus_1.
  static MomentWeights unit(int n_plus_1, int i) {
    if (i < 0 || i >= n_plus_1) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
    std::vector<int> a(static_cast<std::size_t>(n_plus_1), 0);
    a[static_cast<std::size_t>(i)] = 1;
    return MomentWeights(std::move(a));
  }

  int size() const { return static_cast<int>(a_.size()); }
  int operator[](int j) const { return a_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& values() const { return a_; }

  friend bool operator==(const MomentWeights&, const MomentWeights&) = default;

 private:
  std::vector<int> a_;
};

enum class CriticalClass { Value1Stratum, Value0Stratum, Regular };

inline const char* to_string(CriticalClass c) {
  switch (c) {
    case CriticalClass::Value1Stratum: return "Value1Stratum";
    case CriticalClass::Value0Stratum: return "Value0Stratum";
    case CriticalClass::Regular: return "Regular";
  }
  return "Unknown";
}

namespace detail {

inline void check_index(int i, int n_plus_1) {
  if (i < 0 || i >= n_plus_1) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
}

inline void check_weights(const MomentWeights& a, int n_plus_1) {
  if (a.size() != n_plus_1) {
    throw Error(ErrorCode::InvalidWeights, "weight vector length must equal n+1");
  }
}

}  // namespace detail

/// mu_i(z) = |z_i|^2 / |z|^2 on CP^n.
inline double mu(int i, const ComplexVector& z) {
  detail::check_index(i, static_cast<int>(z.size()));
  const double n2 = z.squaredNorm();
  if (!(std::sqrt(n2) >= tol::kZeroBase)) throw Error(ErrorCode::ZeroBasePoint, "base point is zero");
  return std::norm(z(i)) / n2;
}

/// F(mu_i)(w): share of |w|^2 carried by multi-indices containing i.
inline double grassmann_moment(int i, const PlueckerPoint& w) {
  detail::check_index(i, w.n_plus_1());
  const auto indices = multi_indices(w.n_plus_1(), w.k());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t m = 0; m < indices.size(); ++m) {
    const double a2 = std::norm(w[static_cast<Eigen::Index>(m)]);
    den += a2;
    for (int j : indices[m]) {
      if (j == i) {
        num += a2;
        break;
      }
    }
  }
  return num / den;
}

inline double combined_moment(const MomentWeights& weights, const PlueckerPoint& w) {
  detail::check_weights(weights, w.n_plus_1());
  double total = 0.0;
  for (int j = 0; j < weights.size(); ++j) {
    if (weights[j] != 0) total += weights[j] * grassmann_moment(j, w);
  }
  return total;
}

/// Multiplies column j of the frame by exp(i a_j t).
inline Frame torus_flow(const MomentWeights& weights, double t, const Frame& frame) {
  detail::check_weights(weights, frame.n_plus_1());
  ComplexMatrix rows = frame.rows();
  for (int j = 0; j < weights.size(); ++j) {
    rows.col(j) *= std::polar(1.0, weights[j] * t);
  }
  return Frame(std::move(rows));
}

/// Same column phases applied to an arbitrary k x (n+1) matrix (velocities).
inline ComplexMatrix torus_flow_matrix(const MomentWeights& weights, double t, ComplexMatrix m) {
  for (int j = 0; j < weights.size(); ++j) m.col(j) *= std::polar(1.0, weights[j] * t);
  return m;
}

/// Generator of the circle action at the embedded point:
/// direction[I] = i * (sum_{j in I} a_j) * w_I.
inline TangentAtEmbedding hamiltonian_field(const MomentWeights& weights, const Frame& frame) {
  detail::check_weights(weights, frame.n_plus_1());
  ComplexMatrix velocities = frame.rows();
  for (int j = 0; j < weights.size(); ++j) velocities.col(j) *= kI * static_cast<double>(weights[j]);
  return pluecker_tangent(frame, velocities);
}

/// With fs_form normalized as above the flow generator X_gen satisfies
/// fs_form(X_gen, v) = -dF(v) / 2, so the field with i_X omega = dF is -2 X_gen.
inline constexpr double kGeneratorToHamiltonian = -2.0;

inline ComplexVector hamiltonian_vector(const MomentWeights& weights, const Frame& frame) {
  return kGeneratorToHamiltonian * hamiltonian_field(weights, frame).direction;
}

/// |X| in T_[w] P(Λ^k C^{n+1}) after removing the w and iw components, scaled by 1/|w|.
inline double projected_field_norm(const TangentAtEmbedding& field) {
  return gauge_project(field.base, field.direction).norm() / field.base.norm();
}

inline CriticalClass classify_critical(int i, const Frame& frame, double eps = tol::kCritical) {
  detail::check_index(i, frame.n_plus_1());
  const double p = projector(frame)(i, i).real();
  if (p > 1.0 - eps) return CriticalClass::Value1Stratum;
  if (p < eps) return CriticalClass::Value0Stratum;
  return CriticalClass::Regular;
}

struct DeterminantalCheck {
  int rank = 0;
  bool nonvanishing = false;
};

/// Rank of the projected Hamiltonian fields; nonvanishing iff the wedge of
/// all fields is nonzero.
inline DeterminantalCheck determinantal_check(const std::vector<MomentWeights>& weight_list,
                                              const Frame& frame) {
  if (weight_list.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one weight vector");
  std::vector<ComplexVector> fields;
  ComplexVector base;
  for (const auto& a : weight_list) {
    auto f = hamiltonian_field(a, frame);
    base = f.base;
    fields.push_back(std::move(f.direction));
  }
  const int rank = tangent_span_rank(base, fields);
  return {rank, rank == static_cast<int>(weight_list.size())};
}

}  // namespace mironov
