#include "toda/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "toda/error.hpp"

namespace toda {

namespace {

using nlohmann::json;

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  raise(ErrorKind::ConfigParse, "field '" + path + "': " + what);
}

[[noreturn]] void invalid(const std::string& what) { raise(ErrorKind::ConfigValidation, what); }

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad_field(path, "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad_field(path, "expected an integer, got " + std::string(j.type_name()));
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad_field(path, "expected a string, got " + std::string(j.type_name()));
  return j.get<std::string>();
}

const json& get_array(const json& j, const std::string& path) {
  if (!j.is_array()) bad_field(path, "expected an array, got " + std::string(j.type_name()));
  return j;
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < get_array(j, path).size(); ++i)
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad_field(path.empty() ? "<root>" : path, "expected an object, got " + std::string(j.type_name()));
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) invalid("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
}

complex get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) bad_field(path, "expected [re, im]");
  return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

json complex_json(complex c) { return json::array({c.real(), c.imag()}); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate(const ScenarioConfig& c) {
  if (c.n < 1) raise(ErrorKind::ArityMismatch, "n must be at least 1");
  if (static_cast<int>(c.gamma.size()) != c.n)
    raise(ErrorKind::ArityMismatch,
          "gamma has " + std::to_string(c.gamma.size()) + " entries, rank " + std::to_string(c.n) + " needs " + std::to_string(c.n));
  make_exponent_data(c.n, c.gamma);  // IllegalWeight
  if (static_cast<int>(c.g.size()) != c.n + 1)
    raise(ErrorKind::ArityMismatch,
          "g has " + std::to_string(c.g.size()) + " seeds, rank " + std::to_string(c.n) + " needs " + std::to_string(c.n + 1));
  for (std::size_t i = 0; i < c.g.size(); ++i) {
    if (c.g[i].empty()) invalid("g[" + std::to_string(i) + "] is empty");
    if (static_cast<int>(c.g[i].size()) > c.truncation_order + 1)
      invalid("g[" + std::to_string(i) + "] has degree above truncation_order");
  }
  if (c.truncation_order < c.n + 4) invalid("truncation_order must be at least n + 4 = " + std::to_string(c.n + 4));
  std::set<std::string> seen;
  for (const auto& t : c.tasks) {
    if (std::find(known_tasks().begin(), known_tasks().end(), t) == known_tasks().end()) invalid("unknown task '" + t + "'");
    if (!seen.insert(t).second) invalid("task '" + t + "' listed twice");
  }
  try {
    check_grid(c.grid);
  } catch (const Error& e) {
    invalid(std::string("grid: ") + e.what());
  }
  for (const auto& [name, value] : c.tolerances)
    if (!(value > 0.0) || !std::isfinite(value)) invalid("tolerance '" + name + "' must be positive");
  if (c.cone_radii.empty()) invalid("cone.radii must not be empty");
  for (double r : c.cone_radii)
    if (!(r > 0.0)) invalid("cone.radii must be positive");
  if (!(c.energy_radius > 0.0)) invalid("energy.radius must be positive");
  if (c.energy_epsilons.size() < 3) invalid("energy.epsilons needs at least three values");
  for (double e : c.energy_epsilons)
    if (!(e > 0.0) || e >= c.energy_radius) invalid("energy.epsilons must lie in (0, energy.radius)");
  if (!(c.validity_radius > 0.0)) invalid("validity_radius must be positive");
}

double tolerance(const ScenarioConfig& c, const std::string& name) { return c.tolerances.at(name); }

CheckEntry normalize_entry(const PreparedSeed& p, double tol) {
  CheckEntry e;
  e.name = "normalize";
  e.tolerance = tol;
  e.max_residual = p.defect;
  e.parameters = {{"root_branch", "principal (n+1)-th root of G_n(0)"}};
  e.metrics = {{"applied", p.seed.normalization_root.has_value()},
               {"defect_before", p.raw_defect},
               {"validity_radius", p.seed.validity_radius},
               {"order", p.seed.order}};
  if (p.seed.normalization_root) e.metrics["root"] = complex_json(*p.seed.normalization_root);
  e.status = p.defect <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  if (e.status == CheckStatus::Fail) e.message = "G_n differs from 1 after normalization";
  return e;
}

json entry_json(const CheckEntry& e) {
  json j = {{"name", e.name},
            {"status", to_string(e.status)},
            {"max_residual", e.max_residual},
            {"tolerance", e.tolerance},
            {"parameters", e.parameters},
            {"metrics", e.metrics}};
  if (!e.message.empty()) j["message"] = e.message;
  return j;
}

}  // namespace

const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks{"normalize", "pde",   "plucker", "fuchsian", "cone-angle",
                                              "energy",    "metric-grid", "chart", "branch"};
  return tasks;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol{
      {"pde", 1e-6},         {"plucker", 1e-6},      {"fd_order_band", 0.2}, {"cone_angle", 0.01},
      {"energy_ratio_band", 0.3}, {"branch", 1e-10}, {"chart", 1e-8},        {"normalize", 1e-10},
      {"trace", 1e-10},      {"exponents", 1e-10},   {"operator", 1e-9},     {"frobenius", 1e-8},
      {"obstruction", 1e-8}};
  return tol;
}

ScenarioConfig config_from_json(const json& j) {
  check_keys(j, "", {"n", "gamma", "g", "truncation_order", "tasks", "grid", "tolerances", "cone", "energy",
                     "validity_radius", "output"});
  ScenarioConfig c;
  if (!j.contains("n")) invalid("missing required key 'n'");
  if (!j.contains("gamma")) invalid("missing required key 'gamma'");
  if (!j.contains("g")) invalid("missing required key 'g'");
  c.n = get_int(j["n"], "n");
  c.gamma = get_numbers(j["gamma"], "gamma");
  const json& g = get_array(j["g"], "g");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::string path = "g[" + std::to_string(i) + "]";
    std::vector<complex> coeffs;
    for (std::size_t k = 0; k < get_array(g[i], path).size(); ++k)
      coeffs.push_back(get_complex(g[i][k], path + "[" + std::to_string(k) + "]"));
    c.g.push_back(std::move(coeffs));
  }
  if (j.contains("truncation_order")) c.truncation_order = get_int(j["truncation_order"], "truncation_order");
  if (j.contains("tasks"))
    for (std::size_t i = 0; i < get_array(j["tasks"], "tasks").size(); ++i)
      c.tasks.push_back(get_string(j["tasks"][i], "tasks[" + std::to_string(i) + "]"));
  if (j.contains("grid")) {
    const json& gr = j["grid"];
    check_keys(gr, "grid", {"r_min", "r_max", "n_r", "n_theta", "fd_step"});
    if (gr.contains("r_min")) c.grid.r_min = get_number(gr["r_min"], "grid.r_min");
    if (gr.contains("r_max")) c.grid.r_max = get_number(gr["r_max"], "grid.r_max");
    if (gr.contains("n_r")) c.grid.n_r = get_int(gr["n_r"], "grid.n_r");
    if (gr.contains("n_theta")) c.grid.n_theta = get_int(gr["n_theta"], "grid.n_theta");
    if (gr.contains("fd_step")) c.grid.fd_step = get_number(gr["fd_step"], "grid.fd_step");
  }
  c.tolerances = default_tolerances();
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) bad_field("tolerances", "expected an object");
    for (const auto& [name, value] : t.items()) {
      if (!c.tolerances.count(name)) invalid("unknown tolerance '" + name + "'");
      c.tolerances[name] = get_number(value, "tolerances." + name);
    }
  }
  if (j.contains("cone")) {
    const json& cone = j["cone"];
    check_keys(cone, "cone", {"radii", "theta0"});
    if (cone.contains("radii")) c.cone_radii = get_numbers(cone["radii"], "cone.radii");
    if (cone.contains("theta0")) c.cone_theta0 = get_number(cone["theta0"], "cone.theta0");
  }
  if (j.contains("energy")) {
    const json& en = j["energy"];
    check_keys(en, "energy", {"radius", "epsilons"});
    if (en.contains("radius")) c.energy_radius = get_number(en["radius"], "energy.radius");
    if (en.contains("epsilons")) c.energy_epsilons = get_numbers(en["epsilons"], "energy.epsilons");
  }
  if (j.contains("validity_radius")) c.validity_radius = get_number(j["validity_radius"], "validity_radius");
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "output", {"report", "grid_csv", "normalized_seed", "operator"});
    if (o.contains("report")) c.output.report = get_string(o["report"], "output.report");
    if (o.contains("grid_csv")) c.output.grid_csv = get_string(o["grid_csv"], "output.grid_csv");
    if (o.contains("normalized_seed")) c.output.normalized_seed = get_string(o["normalized_seed"], "output.normalized_seed");
    if (o.contains("operator")) c.output.operator_file = get_string(o["operator"], "output.operator");
  }
  validate(c);
  return c;
}

ScenarioConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Locate the failing byte as line:column.
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    raise(ErrorKind::ConfigParse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
  return config_from_json(j);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::Io, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json config_to_json(const ScenarioConfig& c) {
  json g = json::array();
  for (const auto& seed : c.g) {
    json coeffs = json::array();
    for (const auto& v : seed) coeffs.push_back(complex_json(v));
    g.push_back(coeffs);
  }
  return {{"n", c.n},
          {"gamma", c.gamma},
          {"g", g},
          {"truncation_order", c.truncation_order},
          {"tasks", c.tasks},
          {"grid", {{"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}, {"n_r", c.grid.n_r}, {"n_theta", c.grid.n_theta}, {"fd_step", c.grid.fd_step}}},
          {"tolerances", c.tolerances},
          {"cone", {{"radii", c.cone_radii}, {"theta0", c.cone_theta0}}},
          {"energy", {{"radius", c.energy_radius}, {"epsilons", c.energy_epsilons}}},
          {"validity_radius", c.validity_radius},
          {"output", {{"report", c.output.report}, {"grid_csv", c.output.grid_csv},
                      {"normalized_seed", c.output.normalized_seed}, {"operator", c.output.operator_file}}}};
}

void set_tolerance(ScenarioConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) invalid("tolerance override must read NAME=VALUE, got '" + std::string(assignment) + "'");
  const std::string name(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));
  if (!default_tolerances().count(name)) invalid("unknown tolerance '" + name + "'");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) invalid("tolerance '" + name + "' needs a number, got '" + value + "'");
  if (!(v > 0.0) || !std::isfinite(v)) invalid("tolerance '" + name + "' must be positive");
  config.tolerances[name] = v;
}

std::string seed_fingerprint(const ScenarioConfig& c) {
  const json j = config_to_json(c);
  const std::string text = json{{"n", j["n"]}, {"gamma", j["gamma"]}, {"g", j["g"]}, {"truncation_order", j["truncation_order"]},
                                {"validity_radius", j["validity_radius"]}}
                               .dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
  return buf;
}

PreparedSeed prepare_seed(const ScenarioConfig& c) {
  std::vector<TruncatedSeries> g;
  for (const auto& coeffs : c.g) g.push_back(TruncatedSeries::polynomial(coeffs, c.truncation_order));
  PreparedSeed p;
  p.raw = make_seed(make_exponent_data(c.n, c.gamma), std::move(g), c.validity_radius);
  p.raw_defect = normalization_defect(p.raw);
  p.seed = normalize(p.raw, c.tolerances.count("normalize") ? c.tolerances.at("normalize") : 1e-10);
  p.defect = normalization_defect(p.seed);
  if (p.seed.order < p.seed.n() + 1)
    raise(ErrorKind::InsufficientOrder, "normalized seed order " + std::to_string(p.seed.order) + " is too small");
  return p;
}

std::string metric_grid_csv(const CanonicalCurve& curve, const GridSpec& grid, int threads) {
  const int n = curve.n();
  std::string out = "x,y";
  for (int k = 1; k <= n; ++k) out += ",u_" + std::to_string(k);
  for (int k = 1; k <= n; ++k) out += ",density_" + std::to_string(k);
  out += "\n";
  if (grid.empty()) return out;
  check_grid(grid, curve.seed().validity_radius);
  const auto points = grid_points(grid);
  std::vector<std::string> rows(points.size());
  parallel_for(points.size(), threads, [&](std::size_t p) {
    const auto s = curve.samples(points[p]);
    std::string row = format_double(points[p].real()) + "," + format_double(points[p].imag());
    for (int k = 0; k < n; ++k) row += "," + format_double(s[sz(k)].u);
    for (int k = 0; k < n; ++k) row += "," + format_double(s[sz(k)].density);
    rows[p] = row + "\n";
  });
  for (const auto& r : rows) out += r;
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioResult result;
  result.report.fingerprint = seed_fingerprint(config);
  result.prepared = prepare_seed(config);
  const CanonicalCurve curve(result.prepared.seed);
  const int threads = options.threads;

  FdOptions fd;
  fd.order_band = tolerance(config, "fd_order_band");
  fd.threads = threads;

  for (const auto& task : config.tasks) {
    const auto start = std::chrono::steady_clock::now();
    CheckEntry entry;
    try {
      if (task == "normalize") {
        entry = normalize_entry(result.prepared, tolerance(config, "normalize"));
      } else if (task == "pde") {
        fd.tolerance = tolerance(config, "pde");
        entry = pde_residual(curve, config.grid, fd);
      } else if (task == "plucker") {
        fd.tolerance = tolerance(config, "plucker");
        entry = plucker_residual(curve, config.grid, fd);
      } else if (task == "fuchsian") {
        entry = fuchsian_round_trip(curve, config.grid,
                                    FuchsianCheckOptions{tolerance(config, "trace"), tolerance(config, "exponents"),
                                                         tolerance(config, "operator"), tolerance(config, "frobenius"),
                                                         tolerance(config, "obstruction")});
      } else if (task == "cone-angle") {
        entry = cone_angle(curve, ConeOptions{config.cone_radii, config.cone_theta0, tolerance(config, "cone_angle")});
      } else if (task == "energy") {
        entry = energy(curve, EnergyOptions{config.energy_radius, config.energy_epsilons, tolerance(config, "energy_ratio_band")});
      } else if (task == "chart") {
        entry = chart_invariance(curve, config.grid, ChartOptions{tolerance(config, "chart"), threads});
      } else if (task == "branch") {
        entry = branch_consistency(curve, config.grid, BranchOptions{tolerance(config, "branch"), threads});
      } else if (task == "metric-grid") {
        result.grid_csv = metric_grid_csv(curve, config.grid, threads);
        entry.name = "metric-grid";
        entry.status = CheckStatus::Pass;
        entry.parameters = {{"file", config.output.grid_csv}};
        entry.metrics = {{"rows", config.grid.empty() ? 0 : config.grid.n_r * config.grid.n_theta}};
        if (config.grid.empty()) entry.status = CheckStatus::Skipped;
      }
    } catch (const Error& e) {
      entry = CheckEntry{};
      entry.status = CheckStatus::Error;
      entry.message = e.what();
    }
    entry.name = task;
    result.report.timings[task] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.report.checks.push_back(std::move(entry));
  }
  return result;
}

json report_json(const ScenarioResult& result, const ScenarioConfig& config) {
  const SeedData& seed = result.prepared.seed;
  json checks = json::array();
  for (const auto& e : result.report.checks) checks.push_back(entry_json(e));
  json normalization = {{"applied", seed.normalization_root.has_value()},
                        {"defect", result.prepared.defect},
                        {"root_branch", "principal"}};
  if (seed.normalization_root) normalization["root"] = complex_json(*seed.normalization_root);
  return {{"fingerprint", result.report.fingerprint},
          {"config", config_to_json(config)},
          {"exponents", {{"alpha", seed.exponents.alpha}, {"beta", seed.exponents.beta}}},
          {"seed", {{"order", seed.order}, {"validity_radius", seed.validity_radius}}},
          {"normalization", normalization},
          {"branch", "principal, arg in (-pi, pi]"},
          {"checks", checks},
          {"passed", result.report.all_passed()},
          {"timings", result.report.timings}};
}

json normalized_seed_json(const PreparedSeed& prepared, const ScenarioConfig& config) {
  ScenarioConfig out = config;
  out.truncation_order = prepared.seed.order;
  out.g.clear();
  for (const auto& s : prepared.seed.g) {
    const TruncatedSeries t = s.truncated(prepared.seed.order);
    out.g.emplace_back(t.coeffs().begin(), t.coeffs().end());
  }
  return config_to_json(out);
}

json operator_json(const FuchsianOperator& op, const SeedData& seed) {
  json coefficients = json::array();
  for (int k = 0; k < op.n; ++k) {
    const auto& c = op.coefficients[sz(k)];
    json series = json::array();
    for (const auto& v : c.series.coeffs()) series.push_back(complex_json(v));
    coefficients.push_back({{"derivative", k}, {"pole_order", c.pole_order}, {"series", series}});
  }
  return {{"n", op.n},
          {"beta", seed.exponents.beta},
          {"indicial_roots", indicial_roots(op)},
          {"dropped_trace", op.dropped_trace},
          {"order", op.order()},
          {"form", "y^(n+1) + sum_k z^(-pole_order) series_k(z) y^(k) = 0"},
          {"coefficients", coefficients}};
}

std::filesystem::path write_output(const std::filesystem::path& out_dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) raise(ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  const auto path = out_dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  out.close();
  if (!out) raise(ErrorKind::Io, "write failed for " + path.string());
  return path;
}

void emit_outputs(const ScenarioResult& result, const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  write_output(out_dir, config.output.report, report_json(result, config).dump(2) + "\n");
  if (result.grid_csv) write_output(out_dir, config.output.grid_csv, *result.grid_csv);
}

}  // namespace toda
