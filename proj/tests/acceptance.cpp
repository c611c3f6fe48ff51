// Acceptance suite: one PASS/FAIL line per criterion, with pinned tolerances
// and wall-time limits. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mironov/mironov.hpp"

using namespace mironov;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Criterion 1: the Pluecker formula for F(mu_i) equals the squared norm of the
// orthogonal projection of e_i onto L.
Outcome moment_formula() {
  const std::vector<std::pair<int, int>> shapes = {{1, 3}, {2, 3}, {2, 4}, {2, 5}, {3, 5}, {3, 6}};
  Rng root(101);
  double worst = 0.0;
  int points = 0;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const auto [k, n1] = shapes[s];
    Rng rng = root.split(s);
    for (int p = 0; p < 1000; ++p) {
      const Frame frame(rng.complex_gaussian_matrix(k, n1));
      const auto w = pluecker_embed(frame);
      const ComplexMatrix q = orthonormalize(frame).rows();
      for (int i = 0; i < n1; ++i) {
        worst = std::max(worst, std::abs(grassmann_moment(i, w) - q.col(i).squaredNorm()));
      }
      ++points;
    }
  }
  return {worst < 1e-12, std::to_string(points) + " points, max error " + fmt("%.3g", worst) + " < 1e-12"};
}

// Criterion 2: isotropy and full rank of the tangent frames.
Outcome lagrangian(double special_c) {
  double worst = 0.0;
  int deficit = 0;
  std::size_t samples = 0;
  const auto run = [&](int k, int n1, double c, SamplingGrid grid) {
    const auto cloud = generate_cycle(k, n1, c, grid, 7, default_thread_count());
    for (const auto& r : sample_residuals(cloud)) {
      worst = std::max(worst, r.isotropy);
      deficit = std::max(deficit, std::abs(cloud.expected_dim() - r.rank));
      ++samples;
    }
  };
  for (double c : {0.2, 0.5, special_c, 0.9}) run(2, 3, c, SamplingGrid{1, 16, 16, 0});
  for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) run(2, 4, c, SamplingGrid{4, 8, 8, 0});
  return {worst < 1e-8 && deficit == 0, std::to_string(samples) + " samples, max isotropy " + fmt("%.3g", worst) +
                                            " < 1e-8, max rank deficit " + std::to_string(deficit)};
}

// Criterion 3: flow by pi swaps the two fiber solutions; (u,t) ~ (-u,t+pi).
Outcome swap_and_z2() {
  const std::vector<std::pair<int, int>> shapes = {{2, 3}, {2, 4}, {3, 5}};
  Rng root(303);
  double worst = 0.0;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const auto [k, n1] = shapes[s];
    Rng rng = root.split(s);
    for (int trial = 0; trial < 100; ++trial) {
      const auto base = sample_base_point(k, n1, rng);
      const auto u = FiberDirection::random(base, rng);
      const double c = rng.uniform(0.01, 0.99);
      const double t = rng.uniform(0.0, 2.0 * kPi);
      worst = std::max({worst, swap_distance(base, u, c), z2_distance(base, u, c, t)});
    }
  }
  return {worst < 1e-9, "300 tuples, max projective distance " + fmt("%.3g", worst) + " < 1e-9"};
}

// Criterion 4: regular levels have a nonvanishing field, critical strata a
// vanishing one, and the moments F(mu_i) sum to k.
Outcome critical_values() {
  const auto scan = critical_scan(2, 4, default_scan_levels(), 200, 404);
  const double min_norm = scan.min_regular_norm();
  Rng rng(405);
  double sum_err = 0.0;
  for (int p = 0; p < 1000; ++p) {
    const auto w = pluecker_embed(Frame(rng.complex_gaussian_matrix(2, 4)));
    double total = 0.0;
    for (int i = 0; i < 4; ++i) total += grassmann_moment(i, w);
    sum_err = std::max(sum_err, std::abs(total - 2.0));
  }
  const bool pass = min_norm > 1e-6 && scan.value0_field_norm < 1e-12 && scan.value1_field_norm < 1e-12 &&
                    sum_err < 1e-12;
  return {pass, "min regular norm " + fmt("%.4g", min_norm) + " > 1e-6, critical norms " +
                    fmt("%.3g", std::max(scan.value0_field_norm, scan.value1_field_norm)) + " < 1e-12, sum error " +
                    fmt("%.3g", sum_err) + " < 1e-12"};
}

// Criterion 5: torus orbits preserve every moment and the symplectic form.
Outcome flow_invariance() {
  Rng rng(505);
  double moment_err = 0.0;
  double form_err = 0.0;
  for (int orbit = 0; orbit < 10; ++orbit) {
    std::vector<int> a(4);
    do {
      for (auto& x : a) x = static_cast<int>(std::floor(rng.uniform(-3.0, 3.0)));
    } while (a == std::vector<int>(4, 0));
    const MomentWeights weights(a);
    const Frame start(rng.complex_gaussian_matrix(2, 4));
    const ComplexMatrix v1 = rng.complex_gaussian_matrix(2, 4);
    const ComplexMatrix v2 = rng.complex_gaussian_matrix(2, 4);
    const auto w0 = pluecker_embed(start);
    const auto t1 = pluecker_tangent(start, v1);
    const auto t2 = pluecker_tangent(start, v2);
    const double form0 = fs_form(t1.base, t1.direction, t2.direction);
    for (int s = 1; s <= 10; ++s) {
      const double t = 0.7 * s;
      const Frame moved = torus_flow(weights, t, start);
      const auto w = pluecker_embed(moved);
      for (int i = 0; i < 4; ++i) {
        moment_err = std::max(moment_err, std::abs(grassmann_moment(i, w) - grassmann_moment(i, w0)));
      }
      const auto m1 = pluecker_tangent(moved, torus_flow_matrix(weights, t, v1));
      const auto m2 = pluecker_tangent(moved, torus_flow_matrix(weights, t, v2));
      form_err = std::max(form_err, std::abs(fs_form(m1.base, m1.direction, m2.direction) - form0));
    }
  }
  return {moment_err < 1e-12 && form_err < 1e-8, "10 orbits x 10 times, moment drift " + fmt("%.3g", moment_err) +
                                                     " < 1e-12, form drift " + fmt("%.3g", form_err) + " < 1e-8"};
}

// Criterion 6: Gr(2,3) torus structure and the special level.
Outcome clifford(CliffordLevel& level) {
  double structural = 0.0;
  for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    structural = std::max(structural, clifford_check(c, SamplingGrid{1, 16, 16, 0}, 1e-10, 6)
                                          .find("clifford.structural")
                                          ->max_residual);
  }
  level = locate_clifford_level(200, 1e-10, 6);
  const double moduli = clifford_check(level.c, SamplingGrid{1, 16, 16, 0}, 1e-10, 6)
                            .find("clifford.equal_moduli")
                            ->max_residual;
  const bool pass = structural < 1e-10 && level.candidates == 1 && moduli < 1e-10;
  return {pass, "structural " + fmt("%.3g", structural) + " < 1e-10, c* = " + fmt("%.17g", level.c) + " (" +
                    std::to_string(level.candidates) + " candidate), moduli deviation " + fmt("%.3g", moduli) +
                    " < 1e-10"};
}

// Criterion 7: real at t in {0, pi}, not real at pi/4, pi/2, 3pi/4.
Outcome reality() {
  double fixed = 0.0;
  double min_away = std::numeric_limits<double>::infinity();
  Rng rng(707);
  for (const auto& [k, n1] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 5}}) {
    const auto en = MomentWeights::unit(n1, n1 - 1);
    for (int trial = 0; trial < 50; ++trial) {
      const auto base = sample_base_point(k, n1, rng);
      const auto u = FiberDirection::random(base, rng);
      const Frame start = level_fiber_solve(base, u, rng.uniform(0.01, 0.99));
      for (double t : {0.0, kPi}) fixed = std::max(fixed, reality_defect(pluecker_embed(torus_flow(en, t, start))));
      for (double t : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
        min_away = std::min(min_away, reality_defect(pluecker_embed(torus_flow(en, t, start))));
      }
    }
  }
  return {fixed <= 1e-9 && min_away > 1e-9,
          "defect at 0,pi " + fmt("%.3g", fixed) + " <= 1e-9, min defect elsewhere " + fmt("%.3g", min_away) +
              " > 1e-9"};
}

// Criterion 8: corrupted inputs are rejected.
Outcome negative_controls() {
  auto cloud = generate_cycle(2, 4, 0.5, SamplingGrid{2, 4, 4, 0}, 8, 1);
  auto corrupted = cloud;
  for (auto& s : corrupted.samples) {
    auto& d = s.tangents.directions;
    d[0] += kI * d[1];
  }
  const double isotropy = verify_lagrangian(corrupted).find("lagrangian.isotropy")->max_residual;
  auto duplicated = cloud;
  for (auto& s : duplicated.samples) s.tangents.directions[1] = s.tangents.directions[0];
  const double deficit = verify_transversality(duplicated).checks[0].max_residual;
  Rng rng(808);
  const Frame generic(rng.complex_gaussian_matrix(2, 4));
  const auto e3 = MomentWeights::unit(4, 3);
  const auto same = determinantal_check({e3, e3}, generic);
  const auto distinct = determinantal_check({MomentWeights::unit(4, 0), e3}, generic);
  const bool pass = isotropy > 1e-3 && deficit >= 1.0 && !same.nonvanishing && same.rank == 1 &&
                    distinct.nonvanishing && cloud.samples.size() > 0;
  return {pass, "corrupted isotropy " + fmt("%.3g", isotropy) + " > 1e-3, duplicated rank deficit " +
                    fmt("%.0f", deficit) + ", repeated weights rank " + std::to_string(same.rank)};
}

// Criterion 9: outputs are byte-identical across reruns and thread counts.
Outcome determinism() {
  RunConfig cfg;
  cfg.k = 2;
  cfg.n_plus_1 = 4;
  cfg.c = 0.5;
  cfg.grid = {2, 4, 4, 0};
  cfg.scan_samples = 50;
  const auto json1 = report_json(cfg, run_verify(cfg, 1));
  const auto json1b = report_json(cfg, run_verify(cfg, 1));
  const auto json4 = report_json(cfg, run_verify(cfg, 4));
  const auto csv = [](int threads) {
    return cycle_csv(generate_cycle(2, 3, 0.5, SamplingGrid{1, 32, 32, 0}, 42, threads), threads);
  };
  const auto csv1 = csv(1);
  const bool pass = json1 == json1b && json1 == json4 && csv1 == csv(1) && csv1 == csv(4);
  return {pass, "JSON report and CSV identical across reruns and 1 vs 4 threads"};
}

}  // namespace

int main() {
  CliffordLevel level;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "moment formula matches projector", 10, moment_formula},
      {6, "Gr(2,3) torus and special level", 60, [&] { return clifford(level); }},
      {2, "cycle is Lagrangian", 60, [&] { return lagrangian(level.c); }},
      {3, "swap at pi and Z2 identification", 30, swap_and_z2},
      {4, "critical values", 60, critical_values},
      {5, "moments and form preserved by flow", 10, flow_invariance},
      {7, "real locus along orbits", 10, reality},
      {8, "negative controls", 10, negative_controls},
      {9, "determinism", 60, determinism},
  };
  std::vector<std::string> lines(10);
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs <= c.limit_s;
    all = all && pass;
    char head[160];
    std::snprintf(head, sizeof head, "%s criterion %d: %s [%.2f s, limit %.0f s] ", pass ? "PASS" : "FAIL", c.id,
                  c.name, secs, c.limit_s);
    lines[c.id] = head + o.detail;
  }
  for (int id = 1; id <= 9; ++id) std::printf("%s\n", lines[id].c_str());
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
