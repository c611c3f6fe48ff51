// mironov: construct and verify homogeneity-1 Mironov cycles in Gr(k, n+1).
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration error, 3 I/O error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mironov/mironov.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Keys shared by the config file and the command line (flag = "--" + key).
const std::vector<std::pair<std::string, std::string>> kKeys = {
    {"k", "subspace dimension k"},
    {"n", "n, so the ambient space is C^{n+1}"},
    {"ambient", "ambient dimension n+1 (alternative to --n)"},
    {"c", "level value of F(mu_n), in (0,1)"},
    {"weights", "comma-separated integer circle weights (default e_n)"},
    {"grid", "UxT, BxUxT or random:N sampling grid"},
    {"seed", "unsigned 64-bit seed"},
    {"tol-projective", "projective equality tolerance"},
    {"tol-isotropy", "isotropy residual tolerance"},
    {"tol-moment", "moment equality tolerance"},
    {"tol-fd", "finite-difference cross-check tolerance"},
    {"out", "output path (default stdout)"},
    {"format", "csv, json or ply"},
    {"check", "check name or 'all' (comma-separated)"},
    {"projection", "PLY projection: 'torus' or kind:pos,kind:pos,kind:pos"},
    {"levels", "comma-separated scan levels"},
    {"scan-samples", "level-set samples per scan level"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    bool known = false;
    for (const auto& [k, _] : kKeys) known = known || k == key;
    if (!known) throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  std::istringstream is(text);
  is >> value;
  if (is.fail() || !is.eof()) throw ConfigError("invalid value for --" + key + ": '" + text + "'");
  return value;
}

mironov::SamplingGrid parse_grid(const std::string& text) {
  mironov::SamplingGrid grid;
  if (text.rfind("random:", 0) == 0) {
    grid.random_count = parse_number<int>("grid", text.substr(7));
    if (grid.random_count < 1) throw ConfigError("random grid needs a positive sample count");
    return grid;
  }
  const auto parts = split(text, "x,");
  std::vector<int> counts;
  for (const auto& p : parts) counts.push_back(parse_number<int>("grid", p));
  if (counts.size() == 2) {
    grid = {1, counts[0], counts[1], 0};
  } else if (counts.size() == 3) {
    grid = {counts[0], counts[1], counts[2], 0};
  } else {
    throw ConfigError("--grid takes UxT, BxUxT or random:N");
  }
  return grid;
}

mironov::RunConfig build_config(const std::map<std::string, std::string>& kv) {
  mironov::RunConfig cfg;
  const auto has = [&](const char* key) { return kv.count(key) > 0; };
  if (has("k")) cfg.k = parse_number<int>("k", kv.at("k"));
  if (has("n") && has("ambient")) {
    if (parse_number<int>("n", kv.at("n")) + 1 != parse_number<int>("ambient", kv.at("ambient"))) {
      throw ConfigError("--n and --ambient disagree (ambient must equal n+1)");
    }
  }
  if (has("n")) cfg.n_plus_1 = parse_number<int>("n", kv.at("n")) + 1;
  if (has("ambient")) cfg.n_plus_1 = parse_number<int>("ambient", kv.at("ambient"));
  if (has("c")) cfg.c = parse_number<double>("c", kv.at("c"));
  if (has("weights")) {
    for (const auto& w : split(kv.at("weights"), ",")) cfg.weights.push_back(parse_number<int>("weights", w));
  }
  if (has("grid")) cfg.grid = parse_grid(kv.at("grid"));
  if (has("seed")) cfg.seed = parse_number<std::uint64_t>("seed", kv.at("seed"));
  if (has("tol-projective")) cfg.tolerances.projective = parse_number<double>("tol-projective", kv.at("tol-projective"));
  if (has("tol-isotropy")) cfg.tolerances.isotropy = parse_number<double>("tol-isotropy", kv.at("tol-isotropy"));
  if (has("tol-moment")) cfg.tolerances.moment = parse_number<double>("tol-moment", kv.at("tol-moment"));
  if (has("tol-fd")) cfg.tolerances.finite_difference = parse_number<double>("tol-fd", kv.at("tol-fd"));
  if (has("check")) {
    for (const auto& name : split(kv.at("check"), ",")) {
      if (name == "all") {
        cfg.checks.clear();
        break;
      }
      cfg.checks.insert(name);
    }
  }
  if (has("projection")) cfg.projection = kv.at("projection");
  if (has("levels")) {
    cfg.scan_levels.clear();
    for (const auto& c : split(kv.at("levels"), ",")) cfg.scan_levels.push_back(parse_number<double>("levels", c));
  }
  if (has("scan-samples")) cfg.scan_samples = parse_number<int>("scan-samples", kv.at("scan-samples"));
  try {
    mironov::validate(cfg);
  } catch (const mironov::Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_summary(const mironov::VerificationReport& report) {
  for (const auto& r : report.checks) {
    std::fprintf(stderr, "%-4s %-40s samples=%-6zu max_residual=%-12.4g tol=%.4g\n", r.pass ? "PASS" : "FAIL",
                 r.name.c_str(), r.samples, r.max_residual, r.tolerance);
  }
}

int cmd_verify(const mironov::RunConfig& cfg, const std::string& format, const std::string& out, int threads) {
  if (!format.empty() && format != "json") throw ConfigError("verify writes json reports only");
  const auto outcome = mironov::run_verify(cfg, threads);
  write_output(out, mironov::report_json(cfg, outcome));
  print_summary(outcome.report);
  for (const auto& [key, value] : outcome.findings) std::fprintf(stderr, "%s = %.17g\n", key.c_str(), value);
  return outcome.report.overall_pass() ? kExitPass : kExitFail;
}

int cmd_generate(const mironov::RunConfig& cfg, const std::string& format, const std::string& out, int threads) {
  const std::string fmt = format.empty() ? "csv" : format;
  if (fmt != "csv" && fmt != "ply") throw ConfigError("generate writes csv or ply");
  std::optional<mironov::Projection> projection;
  if (fmt == "ply") {
    std::string spec = cfg.projection;
    if (spec.empty()) {
      const auto dflt = mironov::Projection::default_spec(cfg.k, cfg.n_plus_1);
      if (!dflt) {
        throw ConfigError("PLY output for a cycle of dimension " +
                          std::to_string(mironov::lagrangian_dimension(cfg.k, cfg.n_plus_1)) +
                          " needs --projection (three features kind:pos)");
      }
      spec = *dflt;
    }
    try {
      projection = mironov::Projection::parse(spec, cfg.k, cfg.n_plus_1);
    } catch (const mironov::Error& e) {
      throw ConfigError(e.what());
    }
  }
  const auto cloud =
      mironov::generate_cycle(cfg.k, cfg.n_plus_1, cfg.c, cfg.moment_weights(), cfg.grid, cfg.seed, threads);
  write_output(out, fmt == "csv" ? mironov::cycle_csv(cloud, threads) : mironov::cycle_ply(cloud, *projection));
  return kExitPass;
}

int cmd_scan(const mironov::RunConfig& cfg, const std::string& format, const std::string& out, int threads) {
  if (!format.empty() && format != "json") throw ConfigError("scan writes json only");
  const auto scan = mironov::critical_scan(cfg.k, cfg.n_plus_1, cfg.scan_levels, cfg.scan_samples, cfg.seed, threads);
  write_output(out, mironov::scan_json(cfg, scan));
  for (const auto& l : scan.levels) std::fprintf(stderr, "c=%-6g min_field_norm=%.6g\n", l.c, l.min_field_norm);
  std::fprintf(stderr, "Value0Stratum field_norm=%.3g\nValue1Stratum field_norm=%.3g\n", scan.value0_field_norm,
               scan.value1_field_norm);
  const auto rep = mironov::critical_report(scan);
  print_summary(rep);
  return rep.overall_pass() ? kExitPass : kExitFail;
}

int cmd_report(const std::string& in, const std::string& out) {
  if (in.empty()) throw ConfigError("report needs --in <report.json>");
  const std::string text = read_file(in);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (const auto err = mironov::report_schema_error(j); !err.empty()) throw ConfigError("invalid report: " + err);
  std::ostringstream os;
  const auto& cfg = j["config"];
  os << "Gr(" << cfg.value("k", 0) << "," << cfg.value("n_plus_1", 0) << ")  c=" << cfg.value("c", 0.0)
     << "  tool " << j["tool_version"].get<std::string>() << "\n";
  for (const auto& c : j["checks"]) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-40s samples=%-6lld max_residual=%-12.4g tol=%.4g\n",
                  c["pass"].get<bool>() ? "PASS" : "FAIL", c["name"].get<std::string>().c_str(),
                  c["samples"].get<long long>(), c["max_residual"].get<double>(), c["tolerance"].get<double>());
    os << line;
  }
  if (j.contains("findings")) {
    for (const auto& [key, value] : j["findings"].items()) os << key << " = " << value.dump() << "\n";
  }
  os << "overall: " << (j["overall_pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  write_output(out, os.str());
  return j["overall_pass"].get<bool>() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct and verify Mironov Lagrangian cycles in complex Grassmannians"};
  app.set_version_flag("--version", std::string(mironov::kToolVersion));
  app.require_subcommand(1);

  std::map<std::string, std::string> cli_values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::string in_path;

  for (const char* name : {"verify", "generate", "scan"}) {
    auto* sub = app.add_subcommand(name);
    for (const auto& [key, help] : kKeys) {
      options[std::string(name) + ":" + key] = sub->add_option("--" + key, cli_values[key], help);
    }
    sub->add_option("--config", config_path, "flat key = value file; flags override it");
  }
  auto* report = app.add_subcommand("report", "summarize a JSON verification report");
  report->add_option("--in", in_path, "report file")->required();
  report->add_option("--out", cli_values["out"], "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  const int threads = mironov::default_thread_count();
  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "report") return cmd_report(in_path, cli_values["out"]);

    std::map<std::string, std::string> kv;
    if (!config_path.empty()) kv = read_config_file(config_path);
    for (const auto& [key, _] : kKeys) {
      if (options[name + ":" + key]->count() > 0) kv[key] = cli_values[key];
    }
    const auto cfg = build_config(kv);
    const std::string format = kv.count("format") ? kv.at("format") : "";
    const std::string out = kv.count("out") ? kv.at("out") : "";

    int code = kExitPass;
    if (name == "verify") code = cmd_verify(cfg, format, out, threads);
    if (name == "generate") code = cmd_generate(cfg, format, out, threads);
    if (name == "scan") code = cmd_scan(cfg, format, out, threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "wall time %.3f s (%d threads)\n", secs, threads);
    return code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const mironov::Error& e) {
    std::fprintf(stderr, "error: %s (%s)\n", e.what(), mironov::to_string(e.code()));
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
}
