#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mironov/cycle.hpp"

namespace mironov {

inline constexpr const char* kToolVersion = "0.1.0";

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"lagrangian", "transversality", "swap",     "z2",
                                                 "moment",     "reality",        "critical", "clifford"};
  return names;
}

struct Tolerances {
  double projective = tol::kProjective;
  double isotropy = tol::kIsotropy;
  double moment = tol::kMoment;
  double finite_difference = tol::kFiniteDifference;
};

struct RunConfig {
  int k = 2;
  int n_plus_1 = 4;
  double c = 0.5;
  std::vector<int> weights;  // empty means e_n
  SamplingGrid grid;
  std::uint64_t seed = 42;
  Tolerances tolerances;
  std::set<std::string> checks;  // empty means all
  int scan_samples = 200;
  std::vector<double> scan_levels = default_scan_levels();
  std::string projection;

  MomentWeights moment_weights() const {
    if (weights.empty()) return MomentWeights::unit(n_plus_1, n_plus_1 - 1);
    return MomentWeights(weights);
  }

  bool wants(const std::string& check) const { return checks.empty() || checks.count(check) > 0; }
};

/// Throws Error(InvalidArgument / InvalidLevel / InvalidWeights /
/// WrongGrassmannian) with a user-facing message.
inline void validate(const RunConfig& cfg) {
  if (cfg.n_plus_1 < 2 || cfg.k < 1 || cfg.k > cfg.n_plus_1 - 1) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n (ambient dimension n+1)");
  }
  if (!(cfg.c > 0.0 && cfg.c < 1.0)) throw Error(ErrorCode::InvalidLevel, "level must lie in (0,1)");
  if (!cfg.weights.empty()) {
    if (static_cast<int>(cfg.weights.size()) != cfg.n_plus_1) {
      throw Error(ErrorCode::InvalidWeights, "weights must have n+1 entries");
    }
    MomentWeights check(cfg.weights);
  }
  if (cfg.grid.random_count <= 0 && (cfg.grid.bases < 1 || cfg.grid.u_count < 2 || cfg.grid.t_count < 2)) {
    throw Error(ErrorCode::InvalidArgument, "grid counts must be >= 2");
  }
  for (const auto& name : cfg.checks) {
    bool known = false;
    for (const auto& n : check_names()) known = known || n == name;
    if (!known) throw Error(ErrorCode::InvalidArgument, "unknown check '" + name + "'");
  }
  if (cfg.checks.count("clifford") && (cfg.k != 2 || cfg.n_plus_1 != 3)) {
    throw Error(ErrorCode::WrongGrassmannian, "the clifford check needs Gr(2,3)");
  }
  if (cfg.scan_samples < 1) throw Error(ErrorCode::InvalidArgument, "scan samples must be positive");
  for (double c : cfg.scan_levels) {
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::InvalidLevel, "level must lie in (0,1)");
  }
}

struct VerifyOutcome {
  VerificationReport report;
  std::map<std::string, double> findings;
};

inline VerifyOutcome run_verify(const RunConfig& cfg, int threads = default_thread_count()) {
  validate(cfg);
  VerifyOutcome out;
  const auto cloud = generate_cycle(cfg.k, cfg.n_plus_1, cfg.c, cfg.moment_weights(), cfg.grid, cfg.seed, threads);
  auto& rep = out.report;
  if (cfg.wants("lagrangian")) rep.append(verify_lagrangian(cloud, cfg.tolerances.isotropy, threads));
  if (cfg.wants("transversality")) rep.append(verify_transversality(cloud, threads));
  if (cfg.wants("swap") || cfg.wants("z2")) {
    for (const auto& r : verify_swap_and_z2(cloud, cfg.tolerances.projective, threads).checks) {
      if ((r.name == "swap_at_pi" && cfg.wants("swap")) || (r.name == "z2_identification" && cfg.wants("z2"))) {
        rep.checks.push_back(r);
      }
    }
  }
  if (cfg.wants("moment")) rep.append(verify_moment_constancy(cloud, cfg.tolerances.moment, threads));
  if (cfg.wants("reality")) rep.append(verify_reality(cloud, cfg.tolerances.projective, threads));
  if (cfg.wants("critical")) {
    const auto scan = critical_scan(cfg.k, cfg.n_plus_1, cfg.scan_levels, cfg.scan_samples, cfg.seed, threads);
    rep.append(critical_report(scan));
    out.findings["critical_min_regular_field_norm"] = scan.min_regular_norm();
  }
  const bool gr23 = cfg.k == 2 && cfg.n_plus_1 == 3;
  if (gr23 && cfg.wants("clifford")) {
    const auto structural = clifford_check(cloud);
    rep.checks.push_back(*structural.find("clifford.structural"));
    const auto level = locate_clifford_level(200, 1e-10, cfg.seed);
    const auto special = clifford_check(level.c, cfg.grid, 1e-10, cfg.seed, threads);
    CheckRecord rec = *special.find("clifford.equal_moduli");
    rec.name = "clifford.special_level";
    rep.checks.push_back(rec);
    rep.checks.push_back(make_record("clifford.special_level_unique", 1, std::abs(level.candidates - 1), 0.0));
    out.findings["clifford_special_level"] = level.c;
    out.findings["clifford_special_level_deviation"] = level.deviation;
  }
  return out;
}

inline nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["k"] = cfg.k;
  j["n_plus_1"] = cfg.n_plus_1;
  j["c"] = cfg.c;
  j["weights"] = cfg.moment_weights().values();
  if (cfg.grid.random_count > 0) {
    j["grid"] = {{"random", cfg.grid.random_count}};
  } else {
    j["grid"] = {cfg.grid.bases, cfg.grid.u_count, cfg.grid.t_count};
  }
  j["seed"] = cfg.seed;
  j["tolerances"] = {{"projective", cfg.tolerances.projective},
                     {"isotropy", cfg.tolerances.isotropy},
                     {"moment", cfg.tolerances.moment},
                     {"finite_difference", cfg.tolerances.finite_difference}};
  std::vector<std::string> checks;
  for (const auto& n : check_names())
    if (cfg.wants(n)) checks.push_back(n);
  j["checks"] = checks;
  return j;
}

inline nlohmann::ordered_json checks_json(const VerificationReport& report) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : report.checks) {
    arr.push_back({{"name", r.name},
                   {"samples", r.samples},
                   {"max_residual", r.max_residual},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass}});
  }
  return arr;
}

inline std::string report_json(const RunConfig& cfg, const VerifyOutcome& outcome) {
  nlohmann::ordered_json j;
  j["config"] = config_json(cfg);
  j["checks"] = checks_json(outcome.report);
  j["overall_pass"] = outcome.report.overall_pass();
  j["tool_version"] = kToolVersion;
  if (!outcome.findings.empty()) j["findings"] = outcome.findings;
  return j.dump(2) + "\n";
}

/// Structural validation of a report document; returns an empty string when valid.
inline std::string report_schema_error(const nlohmann::json& j) {
  if (!j.is_object()) return "report is not a JSON object";
  for (const char* key : {"config", "checks", "overall_pass", "tool_version"}) {
    if (!j.contains(key)) return std::string("missing key '") + key + "'";
  }
  if (!j["checks"].is_array()) return "'checks' is not an array";
  if (!j["overall_pass"].is_boolean()) return "'overall_pass' is not a boolean";
  bool all = !j["checks"].empty();
  for (const auto& c : j["checks"]) {
    if (!c.contains("name") || !c["name"].is_string()) return "check without a name";
    if (!c.contains("samples") || !c["samples"].is_number_integer()) return "check without integer 'samples'";
    if (!c.contains("max_residual") || !c["max_residual"].is_number()) return "check without numeric 'max_residual'";
    if (!c.contains("tolerance") || !c["tolerance"].is_number()) return "check without numeric 'tolerance'";
    if (!c.contains("pass") || !c["pass"].is_boolean()) return "check without boolean 'pass'";
    const bool consistent = c["max_residual"].get<double>() <= c["tolerance"].get<double>();
    if (consistent != c["pass"].get<bool>()) return "check '" + c["name"].get<std::string>() + "' pass flag disagrees with residual";
    all = all && c["pass"].get<bool>();
  }
  if (all != j["overall_pass"].get<bool>()) return "overall_pass disagrees with the checks";
  return {};
}

// ---------------------------------------------------------------------------
// Point-cloud export

/// Shortest round-trip decimal form.
inline std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

inline std::string cycle_csv(const CyclePointCloud& cloud, int threads = default_thread_count()) {
  const auto indices = multi_indices(cloud.n_plus_1, cloud.k);
  const auto residuals = sample_residuals(cloud, threads);
  std::ostringstream os;
  os << "k,n_plus_1,c,t";
  for (int j = 0; j < cloud.n_plus_1; ++j) os << ",u_" << j;
  for (const auto& idx : indices) os << ",w" << index_label(idx) << "_re,w" << index_label(idx) << "_im";
  os << ",lagrangian_residual\n";
  for (std::size_t i = 0; i < cloud.samples.size(); ++i) {
    const auto& s = cloud.samples[i];
    os << cloud.k << ',' << cloud.n_plus_1 << ',' << format_double(cloud.c) << ',' << format_double(s.param.t);
    for (Eigen::Index j = 0; j < s.param.u.u().size(); ++j) os << ',' << format_double(s.param.u.u()(j));
    for (Eigen::Index j = 0; j < s.embedding.size(); ++j) {
      os << ',' << format_double(s.embedding[j].real()) << ',' << format_double(s.embedding[j].imag());
    }
    os << ',' << format_double(residuals[i].isotropy) << '\n';
  }
  return os.str();
}

/// Map from a cycle point to R^3 for PLY output. Either the Gr(2,3) torus
/// chart (phases of the Clifford coordinates relative to w01) or three
/// features "kind:position" with kind in {re, im, abs, arg} and position a
/// 0-based index into the lexicographic Pluecker vector.
class Projection {
 public:
  static Projection parse(const std::string& spec, int k, int n_plus_1) {
    Projection p;
    if (spec == "torus") {
      if (k != 2 || n_plus_1 != 3) throw Error(ErrorCode::WrongGrassmannian, "the torus projection needs Gr(2,3)");
      p.torus_ = true;
      return p;
    }
    const auto count = static_cast<int>(multi_indices(n_plus_1, k).size());
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "projection feature must be kind:position");
      const std::string kind = item.substr(0, colon);
      if (kind != "re" && kind != "im" && kind != "abs" && kind != "arg") {
        throw Error(ErrorCode::InvalidArgument, "projection kind must be re, im, abs or arg");
      }
      int pos = -1;
      const std::string rest = item.substr(colon + 1);
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), pos);
      if (ec != std::errc() || ptr != rest.data() + rest.size() || pos < 0 || pos >= count) {
        throw Error(ErrorCode::InvalidArgument, "projection position out of range: " + rest);
      }
      p.features_.push_back({kind, pos});
    }
    if (p.features_.size() != 3) throw Error(ErrorCode::InvalidArgument, "projection needs exactly three features");
    return p;
  }

  /// Declared default for cycles of dimension <= 3; none otherwise.
  static std::optional<std::string> default_spec(int k, int n_plus_1) {
    if (lagrangian_dimension(k, n_plus_1) > 3) return std::nullopt;
    if (k == 2 && n_plus_1 == 3) return std::string("torus");
    const auto last = multi_indices(n_plus_1, k).size() - 1;
    return "re:0,re:" + std::to_string(last) + ",im:" + std::to_string(last);
  }

  Eigen::Vector3d operator()(const PlueckerPoint& w) const {
    if (torus_) {
      const ComplexVector z = w.coords();
      const double r = 1.0 / std::sqrt(2.0);
      const double alpha = std::arg(r * (z(1) + kI * z(2)) / z(0));
      const double beta = std::arg(r * (z(1) - kI * z(2)) / z(0));
      return {(2.0 + std::cos(beta)) * std::cos(alpha), (2.0 + std::cos(beta)) * std::sin(alpha), std::sin(beta)};
    }
    Eigen::Vector3d out;
    const double norm = w.coords().norm();
    for (int a = 0; a < 3; ++a) {
      const complex x = w[features_[a].second] / norm;
      const auto& kind = features_[a].first;
      out(a) = kind == "re" ? x.real() : kind == "im" ? x.imag() : kind == "abs" ? std::abs(x) : std::arg(x);
    }
    return out;
  }

 private:
  bool torus_ = false;
  std::vector<std::pair<std::string, int>> features_;
};

inline std::string cycle_ply(const CyclePointCloud& cloud, const Projection& projection) {
  std::ostringstream os;
  os << "ply\nformat ascii 1.0\n";
  os << "comment Gr(" << cloud.k << "," << cloud.n_plus_1 << ") c=" << format_double(cloud.c) << "\n";
  os << "element vertex " << cloud.samples.size() << "\n";
  os << "property double x\nproperty double y\nproperty double z\nend_header\n";
  for (const auto& s : cloud.samples) {
    const auto p = projection(s.embedding);
    os << format_double(p(0)) << ' ' << format_double(p(1)) << ' ' << format_double(p(2)) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Level scan

inline std::string scan_json(const RunConfig& cfg, const CriticalScan& scan) {
  nlohmann::ordered_json j;
  j["config"] = config_json(cfg);
  const VerificationReport rep = critical_report(scan);
  j["checks"] = checks_json(rep);
  j["overall_pass"] = rep.overall_pass();
  j["tool_version"] = kToolVersion;
  auto levels = nlohmann::ordered_json::array();
  for (const auto& l : scan.levels) {
    levels.push_back({{"c", l.c}, {"samples", l.samples}, {"min_field_norm", l.min_field_norm}});
  }
  j["levels"] = levels;
  j["critical_points"] = {{{"stratum", "Value0Stratum"}, {"field_norm", scan.value0_field_norm}},
                          {{"stratum", "Value1Stratum"}, {"field_norm", scan.value1_field_norm}}};
  return j.dump(2) + "\n";
}

}  // namespace mironov
