#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mironov/linalg.hpp"
#include "mironov/moment.hpp"
#include "mironov/parallel.hpp"
#include "mironov/pluecker.hpp"
#include "mironov/random.hpp"
#include "mironov/real_locus.hpp"
#include "mironov/symplectic.hpp"

namespace mironov {

inline constexpr double kPi = std::numbers::pi;

/// Product grid (bases x fiber directions x flow times), or `random_count`
/// fully random samples when that is positive.
struct SamplingGrid {
  int bases = 4;
  int u_count = 8;
  int t_count = 8;
  int random_count = 0;

  std::size_t size() const {
    return random_count > 0 ? static_cast<std::size_t>(random_count)
                            : static_cast<std::size_t>(bases) * u_count * t_count;
  }
};

inline int lagrangian_dimension(int k, int n_plus_1) { return k * (n_plus_1 - k); }

struct CycleSample {
  LevelFiberParam param;
  Frame frame;
  PlueckerPoint embedding;
  /// Base variations, then fiber-sphere directions, then the flow direction.
  TangentFrameAtPoint tangents;
};

struct CyclePointCloud {
  int k = 0;
  int n_plus_1 = 0;
  double c = 0.0;
  MomentWeights weights = MomentWeights({1});
  std::uint64_t seed = 0;
  std::vector<CycleSample> samples;

  int expected_dim() const { return lagrangian_dimension(k, n_plus_1); }

  /// Samples at t = 0, one per flow orbit in grid mode; all samples otherwise.
  std::vector<std::size_t> orbit_starts() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].param.t == 0.0) out.push_back(i);
    }
    if (out.empty()) {
      for (std::size_t i = 0; i < samples.size(); ++i) out.push_back(i);
    }
    return out;
  }
};

/// Row velocities of the level-set parametrization at t = 0: k(n-k) base
/// rotations followed by k-1 rotations of u inside the base.
inline std::vector<ComplexMatrix> level_set_velocities(const RealBasePoint& base,
                                                       const FiberDirection& u, double c) {
  const int k = base.k();
  const int n1 = base.n_plus_1();
  const double cos_theta = std::cos(level_angle(c));
  const RealMatrix m = fiber_complement(base, u);
  const RealMatrix q = base.complement();

  // Frame rows are (m_0, ..., m_{k-2}, cos(theta) u + sin(theta) e_n).
  RealMatrix moving(k, n1);
  moving.topRows(k - 1) = m;
  moving.row(k - 1) = cos_theta * u.u().transpose();

  std::vector<ComplexMatrix> out;
  for (int a = 0; a < k; ++a) {
    const RealVector coeff = moving * base.rows().row(a).transpose();
    for (Eigen::Index b = 0; b < q.rows(); ++b) {
      out.push_back((coeff * q.row(b)).cast<complex>());
    }
  }
  for (int j = 0; j < k - 1; ++j) {
    RealMatrix v = RealMatrix::Zero(k, n1);
    v.row(j) = -u.u().transpose();
    v.row(k - 1) = cos_theta * m.row(j);
    out.push_back(v.cast<complex>());
  }
  return out;
}

/// Cycle point flow_t(level_fiber_solve(base, u, c)) with exact tangents.
inline CycleSample make_cycle_sample(LevelFiberParam param, const MomentWeights& weights) {
  const Frame start = level_fiber_solve(param.base, param.u, param.c);
  Frame frame = torus_flow(weights, param.t, start);
  TangentFrameAtPoint tangents;
  for (const auto& v : level_set_velocities(param.base, param.u, param.c)) {
    auto tan = pluecker_tangent(frame, torus_flow_matrix(weights, param.t, v));
    tangents.directions.push_back(std::move(tan.direction));
  }
  auto field = hamiltonian_field(weights, frame);
  tangents.base = field.base;
  tangents.directions.push_back(std::move(field.direction));
  PlueckerPoint w(frame.k(), frame.n_plus_1(), tangents.base);
  return CycleSample{std::move(param), std::move(frame), std::move(w), std::move(tangents)};
}

namespace detail {

inline std::vector<FiberDirection> fiber_grid(const RealBasePoint& base, int count, Rng& rng) {
  std::vector<FiberDirection> out;
  const int k = base.k();
  for (int j = 0; j < count; ++j) {
    if (k == 1) {
      RealVector g(1);
      g(0) = (j % 2 == 0) ? 1.0 : -1.0;
      out.push_back(FiberDirection::from_coefficients(base, g));
    } else if (k == 2) {
      const double phi = 2.0 * kPi * j / count;
      RealVector g(2);
      g << std::cos(phi), std::sin(phi);
      out.push_back(FiberDirection::from_coefficients(base, g));
    } else if (j % 2 == 0) {
      out.push_back(FiberDirection::random(base, rng));
    } else {
      out.push_back(-out.back());
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<LevelFiberParam> cycle_parameters(int k, int n_plus_1, double c,
                                                     const SamplingGrid& grid, std::uint64_t seed) {
  check_level(c);
  if (k < 1 || k >= n_plus_1) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n");
  std::vector<LevelFiberParam> params;
  params.reserve(grid.size());
  Rng rng(seed);
  if (grid.random_count > 0) {
    for (int s = 0; s < grid.random_count; ++s) {
      Rng local = rng.split(static_cast<std::uint64_t>(s));
      RealBasePoint base = sample_base_point(k, n_plus_1, local);
      FiberDirection u = FiberDirection::random(base, local);
      const double t = local.uniform(0.0, 2.0 * kPi);
      params.push_back({std::move(base), std::move(u), c, t});
    }
    return params;
  }
  if (grid.bases < 1 || grid.u_count < 1 || grid.t_count < 1) {
    throw Error(ErrorCode::InvalidArgument, "grid counts must be positive");
  }
  for (int b = 0; b < grid.bases; ++b) {
    const RealBasePoint base = sample_base_point(k, n_plus_1, rng);
    for (const auto& u : detail::fiber_grid(base, grid.u_count, rng)) {
      for (int j = 0; j < grid.t_count; ++j) {
        params.push_back({base, u, c, 2.0 * kPi * j / grid.t_count});
      }
    }
  }
  return params;
}

inline CyclePointCloud generate_cycle(int k, int n_plus_1, double c, const MomentWeights& weights,
                                      const SamplingGrid& grid, std::uint64_t seed,
                                      int threads = default_thread_count()) {
  check_level(c);
  if (weights.size() != n_plus_1) throw Error(ErrorCode::InvalidWeights, "weight vector length must equal n+1");
  auto params = cycle_parameters(k, n_plus_1, c, grid, seed);
  std::vector<std::optional<CycleSample>> slots(params.size());
  parallel_for(params.size(), threads, [&](std::size_t i) {
    slots[i].emplace(make_cycle_sample(params[i], weights));
  });
  CyclePointCloud cloud{k, n_plus_1, c, weights, seed, {}};
  cloud.samples.reserve(slots.size());
  for (auto& s : slots) cloud.samples.push_back(std::move(*s));
  return cloud;
}

inline CyclePointCloud generate_cycle(int k, int n_plus_1, double c, const SamplingGrid& grid,
                                      std::uint64_t seed, int threads = default_thread_count()) {
  return generate_cycle(k, n_plus_1, c, MomentWeights::unit(n_plus_1, n_plus_1 - 1), grid, seed,
                        threads);
}

// ---------------------------------------------------------------------------
// Verification

struct CheckRecord {
  std::string name;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Every record is an upper bound: pass iff max_residual <= tolerance.
inline CheckRecord make_record(std::string name, std::size_t samples, double residual, double tolerance) {
  const bool pass = std::isfinite(residual) && residual <= tolerance;
  return {std::move(name), samples, residual, tolerance, pass};
}

struct VerificationReport {
  std::vector<CheckRecord> checks;

  bool overall_pass() const {
    if (checks.empty()) return false;
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.pass; });
  }

  const CheckRecord* find(const std::string& name) const {
    for (const auto& r : checks)
      if (r.name == name) return &r;
    return nullptr;
  }

  void append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }
};

inline std::vector<LagrangianResidual> sample_residuals(const CyclePointCloud& cloud,
                                                        int threads = default_thread_count()) {
  std::vector<LagrangianResidual> out(cloud.samples.size());
  parallel_for(out.size(), threads, [&](std::size_t i) {
    out[i] = lagrangian_residual(cloud.samples[i].tangents);
  });
  return out;
}

inline VerificationReport verify_lagrangian(const CyclePointCloud& cloud, double eps = tol::kIsotropy,
                                            int threads = default_thread_count()) {
  if (cloud.samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty cycle");
  const auto res = sample_residuals(cloud, threads);
  double worst = 0.0;
  int deficit = 0;
  for (const auto& r : res) {
    worst = std::max(worst, r.isotropy);
    deficit = std::max(deficit, std::abs(cloud.expected_dim() - r.rank));
  }
  return {{make_record("lagrangian.isotropy", res.size(), worst, eps),
           make_record("lagrangian.rank_deficit", res.size(), deficit, 0.0)}};
}

inline double swap_distance(const RealBasePoint& base, const FiberDirection& u, double c) {
  const auto en = MomentWeights::unit(base.n_plus_1(), base.n_plus_1() - 1);
  const auto flowed = pluecker_embed(torus_flow(en, kPi, level_fiber_solve(base, u, c)));
  const auto other = pluecker_embed(level_fiber_solve(base, -u, c));
  return projective_distance(flowed.coords(), other.coords());
}

/// Flow by pi along F(mu_n) carries the +u solution onto the -u solution.
inline bool verify_swap_at_pi(const RealBasePoint& base, const FiberDirection& u, double c,
                              double eps = tol::kProjective) {
  return swap_distance(base, u, c) <= eps;
}

inline double z2_distance(const RealBasePoint& base, const FiberDirection& u, double c, double t,
                          double shift = kPi) {
  const auto en = MomentWeights::unit(base.n_plus_1(), base.n_plus_1() - 1);
  const auto a = pluecker_embed(torus_flow(en, t, level_fiber_solve(base, u, c)));
  const auto b = pluecker_embed(torus_flow(en, t + shift, level_fiber_solve(base, -u, c)));
  return projective_distance(a.coords(), b.coords());
}

/// (u, t) and (-u, t + pi) name the same cycle point.
inline bool verify_z2_identification(const RealBasePoint& base, const FiberDirection& u, double c,
                                     double t, double eps = tol::kProjective) {
  return z2_distance(base, u, c, t) <= eps;
}

inline VerificationReport verify_swap_and_z2(const CyclePointCloud& cloud, double eps = tol::kProjective,
                                             int threads = default_thread_count()) {
  const auto starts = cloud.orbit_starts();
  std::vector<double> swap(starts.size());
  std::vector<double> z2(cloud.samples.size());
  parallel_for(starts.size(), threads, [&](std::size_t i) {
    const auto& p = cloud.samples[starts[i]].param;
    swap[i] = swap_distance(p.base, p.u, p.c);
  });
  parallel_for(z2.size(), threads, [&](std::size_t i) {
    const auto& p = cloud.samples[i].param;
    z2[i] = z2_distance(p.base, p.u, p.c, p.t);
  });
  const auto max_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  };
  return {{make_record("swap_at_pi", swap.size(), max_of(swap), eps),
           make_record("z2_identification", z2.size(), max_of(z2), eps)}};
}

/// At t = 0 the level-set directions plus the Hamiltonian field span a
/// k(n+1-k)-dimensional subspace.
inline VerificationReport verify_transversality(const CyclePointCloud& cloud,
                                                int threads = default_thread_count()) {
  if (cloud.samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty cycle");
  const auto starts = cloud.orbit_starts();
  std::vector<int> deficit(starts.size());
  parallel_for(starts.size(), threads, [&](std::size_t i) {
    const auto& s = cloud.samples[starts[i]];
    int rank = 0;
    if (s.param.t == 0.0) {
      rank = tangent_span_rank(s.tangents.base, s.tangents.directions);
    } else {
      LevelFiberParam p = s.param;
      p.t = 0.0;
      const auto at0 = make_cycle_sample(std::move(p), cloud.weights);
      rank = tangent_span_rank(at0.tangents.base, at0.tangents.directions);
    }
    deficit[i] = std::abs(cloud.expected_dim() - rank);
  });
  int worst = 0;
  for (int d : deficit) worst = std::max(worst, d);
  return {{make_record("transversality.rank_deficit", starts.size(), worst, 0.0)}};
}

/// F(mu_n) = c on the whole cycle; every F(mu_i) matches its value at the
/// orbit's t = 0 point.
inline VerificationReport verify_moment_constancy(const CyclePointCloud& cloud, double eps = tol::kMoment,
                                                  int threads = default_thread_count()) {
  const int n = cloud.n_plus_1 - 1;
  std::vector<double> level(cloud.samples.size());
  std::vector<double> orbit(cloud.samples.size());
  parallel_for(cloud.samples.size(), threads, [&](std::size_t i) {
    const auto& s = cloud.samples[i];
    level[i] = std::abs(grassmann_moment(n, s.embedding) - cloud.c);
    const auto start = pluecker_embed(level_fiber_solve(s.param.base, s.param.u, s.param.c));
    double worst = 0.0;
    for (int j = 0; j <= n; ++j) {
      worst = std::max(worst, std::abs(grassmann_moment(j, s.embedding) - grassmann_moment(j, start)));
    }
    orbit[i] = worst;
  });
  double lv = 0.0;
  double ob = 0.0;
  for (std::size_t i = 0; i < level.size(); ++i) {
    lv = std::max(lv, level[i]);
    ob = std::max(ob, orbit[i]);
  }
  return {{make_record("moment.level", level.size(), lv, eps),
           make_record("moment.orbit_invariance", orbit.size(), ob, eps)}};
}

/// Along each F(mu_n) orbit the point is real at t in {0, pi} and leaves the
/// real locus at t in {pi/4, pi/2, 3pi/4}. The excursion record carries the
/// inverse reality defect so that it is an upper bound like every other record.
inline VerificationReport verify_reality(const CyclePointCloud& cloud, double eps = tol::kProjective,
                                         int threads = default_thread_count()) {
  const auto starts = cloud.orbit_starts();
  const auto en = MomentWeights::unit(cloud.n_plus_1, cloud.n_plus_1 - 1);
  std::vector<double> fixed(starts.size());
  std::vector<double> away(starts.size());
  parallel_for(starts.size(), threads, [&](std::size_t i) {
    const auto& p = cloud.samples[starts[i]].param;
    const Frame start = level_fiber_solve(p.base, p.u, p.c);
    double f = 0.0;
    for (double t : {0.0, kPi}) f = std::max(f, reality_defect(pluecker_embed(torus_flow(en, t, start))));
    double a = 0.0;
    for (double t : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
      a = std::max(a, 1.0 / reality_defect(pluecker_embed(torus_flow(en, t, start))));
    }
    fixed[i] = f;
    away[i] = a;
  });
  double f = 0.0;
  double a = 0.0;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    f = std::max(f, fixed[i]);
    a = std::max(a, away[i]);
  }
  return {{make_record("reality.fixed_at_0_pi", fixed.size(), f, eps),
           make_record("reality.excursion_inverse_defect", away.size(), a, 1.0 / eps)}};
}

// ---------------------------------------------------------------------------
// Critical values of F(mu_n)

struct LevelScan {
  double c = 0.0;
  std::size_t samples = 0;
  double min_field_norm = 0.0;
};

struct CriticalScan {
  std::vector<LevelScan> levels;
  double value0_field_norm = 0.0;
  double value1_field_norm = 0.0;

  double min_regular_norm() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& l : levels) m = std::min(m, l.min_field_norm);
    return m;
  }
};

/// A point of the value-0 stratum (L inside e_n^perp) and of the value-1
/// stratum (e_n in L), both complex Gaussian otherwise.
inline Frame value0_point(int k, int n_plus_1, Rng& rng) {
  ComplexMatrix rows = sample_complex_grassmannian(k, n_plus_1 - 1, rng).rows();
  ComplexMatrix padded = ComplexMatrix::Zero(k, n_plus_1);
  padded.leftCols(n_plus_1 - 1) = rows;
  return Frame(std::move(padded));
}

inline Frame value1_point(int k, int n_plus_1, Rng& rng) {
  ComplexMatrix padded = ComplexMatrix::Zero(k, n_plus_1);
  if (k > 1) padded.topLeftCorner(k - 1, n_plus_1 - 1) = sample_complex_grassmannian(k - 1, n_plus_1 - 1, rng).rows();
  padded(k - 1, n_plus_1 - 1) = 1.0;
  return Frame(std::move(padded));
}

inline std::vector<double> default_scan_levels() {
  std::vector<double> c;
  for (int j = 1; j <= 19; ++j) c.push_back(0.05 * j);
  return c;
}

inline CriticalScan critical_scan(int k, int n_plus_1, const std::vector<double>& levels,
                                  int samples_per_level, std::uint64_t seed,
                                  int threads = default_thread_count()) {
  const auto en = MomentWeights::unit(n_plus_1, n_plus_1 - 1);
  CriticalScan scan;
  scan.levels.resize(levels.size());
  Rng root(seed);
  parallel_for(levels.size(), threads, [&](std::size_t i) {
    Rng rng = root.split(i);
    const auto pts = sample_level_set(k, n_plus_1, levels[i], samples_per_level, rng);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) m = std::min(m, projected_field_norm(hamiltonian_field(en, p.frame)));
    scan.levels[i] = {levels[i], pts.size(), m};
  });
  Rng rng = root.split(levels.size());
  scan.value0_field_norm = projected_field_norm(hamiltonian_field(en, value0_point(k, n_plus_1, rng)));
  scan.value1_field_norm = projected_field_norm(hamiltonian_field(en, value1_point(k, n_plus_1, rng)));
  return scan;
}

/// Lower bound on regular levels is reported as an inverse norm.
inline VerificationReport critical_report(const CriticalScan& scan, double regular_floor = 1e-6,
                                          double critical_ceiling = 1e-12) {
  std::size_t n = 0;
  for (const auto& l : scan.levels) n += l.samples;
  return {{make_record("critical.regular_inverse_field_norm", n, 1.0 / scan.min_regular_norm(),
                       1.0 / regular_floor),
           make_record("critical.value0_field_norm", 1, scan.value0_field_norm, critical_ceiling),
           make_record("critical.value1_field_norm", 1, scan.value1_field_norm, critical_ceiling)}};
}

// ---------------------------------------------------------------------------
// Gr(2,3) = CP^2

/// Moduli of [w01 : (w02 + i w12)/sqrt2 : (w02 - i w12)/sqrt2] after unit
/// normalization. The unitary turns the fiber circle into a phase on each
/// coordinate, so the moduli are constant on the cycle.
inline Eigen::Vector3d clifford_moduli(const PlueckerPoint& w) {
  if (w.k() != 2 || w.n_plus_1() != 3) throw Error(ErrorCode::WrongGrassmannian, "Clifford coordinates need Gr(2,3)");
  const ComplexVector z = w.coords() / w.coords().norm();
  const double r = 1.0 / std::sqrt(2.0);
  return {std::abs(z(0)), std::abs(r * (z(1) + kI * z(2))), std::abs(r * (z(1) - kI * z(2)))};
}

inline double clifford_deviation(const CyclePointCloud& cloud) {
  const double target = 1.0 / std::sqrt(3.0);
  double worst = 0.0;
  for (const auto& s : cloud.samples) {
    worst = std::max(worst, (clifford_moduli(s.embedding).array() - target).abs().maxCoeff());
  }
  return worst;
}

/// (a) |w01| = sqrt(1-c) and sqrt(|w02|^2 + |w12|^2) = sqrt(c) over the whole
/// cycle; (b) all three Clifford moduli equal 1/sqrt3.
inline VerificationReport clifford_check(const CyclePointCloud& cloud, double eps = 1e-10) {
  if (cloud.k != 2 || cloud.n_plus_1 != 3) {
    throw Error(ErrorCode::WrongGrassmannian, "Clifford check needs Gr(2,3)");
  }
  double lo01 = std::numeric_limits<double>::infinity(), hi01 = 0.0;
  double lo_rest = std::numeric_limits<double>::infinity(), hi_rest = 0.0;
  double off = 0.0;
  for (const auto& s : cloud.samples) {
    const ComplexVector z = s.embedding.coords() / s.embedding.coords().norm();
    const double a = std::abs(z(0));
    const double b = std::sqrt(std::norm(z(1)) + std::norm(z(2)));
    lo01 = std::min(lo01, a);
    hi01 = std::max(hi01, a);
    lo_rest = std::min(lo_rest, b * b);
    hi_rest = std::max(hi_rest, b * b);
    off = std::max({off, std::abs(a - std::sqrt(1.0 - cloud.c)), std::abs(b - std::sqrt(cloud.c))});
  }
  const double structural = std::max({hi01 - lo01, hi_rest - lo_rest, off});
  return {{make_record("clifford.structural", cloud.samples.size(), structural, eps),
           make_record("clifford.equal_moduli", cloud.samples.size(), clifford_deviation(cloud), eps)}};
}

inline VerificationReport clifford_check(double c, const SamplingGrid& grid, double eps = 1e-10,
                                         std::uint64_t seed = 0, int threads = default_thread_count()) {
  return clifford_check(generate_cycle(2, 3, c, grid, seed, threads), eps);
}

struct CliffordLevel {
  double c = 0.0;
  double deviation = 0.0;
  /// Number of distinct levels whose refined deviation fell below tolerance.
  int candidates = 0;
};

/// Brute-force scan of c in (0,1) for the level at which the Gr(2,3) cycle
/// has equal Clifford moduli: coarse grid, then golden-section refinement of
/// every local minimum.
inline CliffordLevel locate_clifford_level(int coarse = 200, double eps = 1e-10, std::uint64_t seed = 0) {
  const SamplingGrid grid{1, 4, 4, 0};
  const auto deviation = [&](double c) { return clifford_deviation(generate_cycle(2, 3, c, grid, seed, 1)); };
  std::vector<double> cs(static_cast<std::size_t>(coarse));
  std::vector<double> ds(cs.size());
  for (int j = 0; j < coarse; ++j) {
    cs[j] = (j + 0.5) / coarse;
    ds[j] = deviation(cs[j]);
  }
  CliffordLevel best{0.0, std::numeric_limits<double>::infinity(), 0};
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int j = 0; j < coarse; ++j) {
    const bool left_ok = j == 0 || ds[j] <= ds[j - 1];
    const bool right_ok = j == coarse - 1 || ds[j] <= ds[j + 1];
    if (!left_ok || !right_ok) continue;
    double a = j == 0 ? 1e-9 : cs[j - 1];
    double b = j == coarse - 1 ? 1.0 - 1e-9 : cs[j + 1];
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = deviation(x1), f2 = deviation(x2);
    while (b - a > 1e-15) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - golden * (b - a);
        f1 = deviation(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + golden * (b - a);
        f2 = deviation(x2);
      }
    }
    const double c = f1 <= f2 ? x1 : x2;
    const double d = std::min(f1, f2);
    if (d <= eps) ++best.candidates;
    if (d < best.deviation) {
      best.c = c;
      best.deviation = d;
    }
  }
  return best;
}

}  // namespace mironov
