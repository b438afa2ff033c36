#include "ibody/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "ibody/asymptotics.hpp"
#include "ibody/body.hpp"
#include "ibody/convexity.hpp"
#include "ibody/error.hpp"
#include "ibody/numerics.hpp"
#include "ibody/radon.hpp"
#include "ibody/sections.hpp"
#include "json.hpp"

namespace ibody {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// configuration

template <class T>
T get_checked(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::Config, std::string("config: bad value for '") + key + "'");
  }
}

std::vector<double> parse_ladder(const json& j, const char* key) {
  if (!j.is_array()) fail(ErrorKind::Config, std::string("config: '") + key + "' must be an array");
  return get_checked<std::vector<double>>(j, key);
}

int auto_or_int(const json& j, const char* key) {
  if (j.is_string()) {
    if (j.get<std::string>() == "auto") return 0;
    fail(ErrorKind::Config, std::string("config: '") + key + "' must be an integer or \"auto\"");
  }
  return get_checked<int>(j, key);
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// NaN and infinities are not representable in JSON.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------
// shared pipeline pieces

struct Context {
  const RunConfig& cfg;
  GradedGridSpec grid;
  FunkOptions funk;
  std::optional<std::filesystem::path> cache_dir;

  explicit Context(const RunConfig& c) : cfg(c) {
    grid.panel_nodes = c.resolved_grid_resolution();
    funk.resolution = c.subsphere_resolution;
    cache_dir = c.cache_dir;
    if (!cache_dir) {
      if (const char* env = std::getenv("IBODY_CACHE_DIR"); env != nullptr && *env != '\0') cache_dir = env;
    }
  }

  UnitVector pole() const {
    if (cfg.x0.empty()) return UnitVector::axis(cfg.n, 0);
    return UnitVector(Eigen::Map<const Vec>(cfg.x0.data(), static_cast<Eigen::Index>(cfg.x0.size())));
  }

  StarBody body(double eps) const {
    if (eps == 0.0) {
      return make_star_body(cfg.n, [cn = c_n(cfg.n)](const Vec&) { return cn; }, pole(), 0.3, grid);
    }
    BodyOptions opts;
    opts.grid = grid;
    return construct_body(BumpParams(cfg.n, pole(), eps), opts);
  }

  SectionOptions sections() const {
    SectionOptions o;
    o.inner_grid = grid;
    o.funk = funk;
    o.cache_dir = cache_dir;
    return o;
  }
};

double angle_to_pole(const Vec& direction, const UnitVector& pole) {
  return std::acos(std::min(1.0, std::abs(direction.dot(pole.vec()))));
}

json body_json(const StarBody& b, double eps, int resolution) {
  return json{{"n", b.n},
              {"eps", eps},
              {"x0", vec_json(b.pole.vec())},
              {"grid_resolution", resolution},
              {"C_n", c_n(b.n)},
              {"rho_min", b.rho_min},
              {"rho_max", b.rho_max},
              {"grid_nodes", b.grid->size()},
              {"grid_hash", hex(b.grid->hash())}};
}

json convexity_json(const ConvexityCertificate& c) {
  return json{{"j_min", c.j_min},
              {"positive", c.j_min > 0.0},
              {"worst_plane", c.worst_plane},
              {"worst_is_axial", c.worst_is_axial},
              {"worst_angle", c.worst_angle},
              {"worst_xi1", vec_json(c.worst_xi1)},
              {"worst_xi2", vec_json(c.worst_xi2)},
              {"num_random_planes", c.num_planes},
              {"num_axial_planes", c.num_axial},
              {"m_angles", c.m},
              {"seed", c.seed}};
}

json certificate_json(const IntersectionCertificate& c, const UnitVector& pole) {
  return json{{"verdict", to_string(c.verdict)},
              {"min_preimage", c.min_preimage},
              {"argmin_node", c.argmin},
              {"argmin_direction", vec_json(c.argmin_direction)},
              {"argmin_angle_to_x0", angle_to_pole(c.argmin_direction, pole)},
              {"residual", c.residual},
              {"residual_scale", c.residual_scale},
              {"max_abs_preimage", c.max_abs_preimage},
              {"rank", c.rank}};
}

struct IntersectionRun {
  IntersectionCertificate cert;
  json provenance;
};

IntersectionRun intersection_run(const Context& ctx, const StarBody& b) {
  FunkOperator op = assemble_operator_cached(b.grid, ctx.funk, ctx.cache_dir);
  IntersectionRun run{intersection_certificate(op, b.sampled), json::object()};
  run.provenance = json{{"grid_hash", hex(b.grid->hash())},
                        {"even_nodes", b.grid->representatives().size()},
                        {"operator_resolution", op.resolution()},
                        {"operator_cache_key", operator_cache_path(".", *b.grid, op.resolution()).filename().string()}};
  return run;
}

json section_json(const SectionCertificate& s, const UnitVector& pole) {
  return json{{"frame_id", s.frame_id},
              {"kind", s.kind},
              {"normal", vec_json(s.frame.normal.vec())},
              {"verdict", to_string(s.inner.verdict)},
              {"min_preimage", s.inner.min_preimage},
              {"argmin_angle_to_x0_projection", s.inner.argmin_direction.size() > 0
                                                     ? json(std::acos(std::min(1.0, std::abs(s.inner.argmin_direction.dot(
                                                                                        (s.frame.basis.transpose() * pole.vec()).normalized())))))
                                                     : json(nullptr)},
              {"residual", s.inner.residual},
              {"residual_scale", s.inner.residual_scale},
              {"rank", s.inner.rank},
              {"deficit_max", s.deficit_max},
              {"baseline", s.baseline},
              {"feature_angle", s.feature_angle},
              {"grid_nodes", s.grid_nodes},
              {"grid_hash", hex(s.grid_hash)}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "short write to " + path.string());
}

void prepare_output(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
}

// Report plus a metadata file holding everything that varies between runs.
RunResult finish(const RunConfig& cfg, const std::string& command, json report, ExitCode code, std::string summary,
                 std::chrono::steady_clock::time_point start) {
  RunResult r;
  r.exit_code = code;
  r.report = report.dump(2) + "\n";
  r.summary = std::move(summary);
  write_text(cfg.output_dir / "report.json", r.report);
  const auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto now = std::chrono::system_clock::now();
  json meta{{"command", command},
            {"version", kVersion},
            {"unix_time", std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()},
            {"wall_seconds", wall}};
  write_text(cfg.output_dir / "metadata.json", meta.dump(2) + "\n");
  return r;
}

json verdict_json(const std::string& status, const std::string& detail_key, const std::string& detail) {
  json v{{"status", status}};
  if (!detail.empty()) v[detail_key] = detail;
  return v;
}

// ---------------------------------------------------------------------------
// scaling experiment block (shared by verify and asymptotics)

json fits_json(const SlopeFits& f, double target, double tol) {
  return json{{"slope", f.slope()},
              {"target", target},
              {"tolerance", tol},
              {"pass", std::abs(f.slope() - target) <= tol},
              {"fit_used", f.use_smallest ? "three_smallest" : "all"},
              {"all", {{"slope", f.all.slope}, {"intercept", f.all.intercept}, {"rms_residual", f.all.rms_residual}}},
              {"three_smallest",
               {{"slope", f.smallest.slope}, {"intercept", f.smallest.intercept}, {"rms_residual", f.smallest.rms_residual}}}};
}

struct AsymptoticsBlock {
  json report;
  bool pass = false;
};

AsymptoticsBlock asymptotics_block(const Context& ctx, const std::vector<double>& ladder, std::string* csv) {
  const int n = ctx.cfg.n;
  ScalingOptions opts;
  opts.body.grid = ctx.grid;
  const ScalingExperiment ex = scaling_experiment(n, ladder, opts);
  AsymptoticsBlock block;
  json rows = json::array();
  for (std::size_t k = 0; k < ex.eps.size(); ++k)
    rows.push_back({{"eps", ex.eps[k]}, {"sup", ex.sup[k]}, {"grad_sup", ex.grad[k]}, {"hess_sup", ex.hess[k]}});
  const json sup = fits_json(ex.sup_fit, n - 2, 0.35);
  const json grad_c = fits_json(ex.grad_corrected_fit, n - 3, 0.5);
  const json grad_raw = fits_json(ex.grad_fit, n - 3, 0.5);
  const json hess = fits_json(ex.hess_fit, n - 4, 0.5);
  const bool lap_ok = ex.laplacian.relative_gap <= 0.2;
  block.pass = sup["pass"].get<bool>() && grad_c["pass"].get<bool>() && hess["pass"].get<bool>() && lap_ok;
  block.report = json{{"n", n},
                      {"rungs", rows},
                      {"slopes",
                       {{"sup", sup}, {"grad_log_corrected", grad_c}, {"grad_uncorrected", grad_raw}, {"hess", hess}}},
                      {"laplacian_check",
                       {{"eps", ex.laplacian.eps},
                        {"direction", vec_json(ex.laplacian.direction)},
                        {"second_derivative", ex.laplacian.second_derivative},
                        {"laplacian_fd", ex.laplacian.laplacian_fd},
                        {"laplacian_transform", ex.laplacian.laplacian_transform},
                        {"relative_gap", ex.laplacian.relative_gap},
                        {"pass", lap_ok}}},
                      {"pass", block.pass}};
  if (csv != nullptr) {
    std::ostringstream out;
    out << "n,eps,sup,grad_sup,hess_sup\n";
    for (std::size_t k = 0; k < ex.eps.size(); ++k)
      out << n << ',' << fmt(ex.eps[k]) << ',' << fmt(ex.sup[k]) << ',' << fmt(ex.grad[k]) << ',' << fmt(ex.hess[k])
          << '\n';
    *csv = out.str();
  }
  return block;
}

}  // namespace

// ---------------------------------------------------------------------------

int RunConfig::resolved_grid_resolution() const { return grid_resolution > 0 ? grid_resolution : 8; }

int RunConfig::resolved_m_angles() const {
  const int policy = eps > 0.0 ? default_angle_count(eps) : 256;
  return m_angles > 0 ? m_angles : std::max(policy, 2048);
}

void apply_preset(RunConfig& cfg, std::string_view preset) {
  if (preset == "fast") {
    cfg.eps = 0.3;
    cfg.grid_resolution = 6;
    cfg.num_planes = 20;
    cfg.num_subspaces = 10;
    cfg.m_angles = default_angle_count(0.3);
    cfg.scan_ladder = {0.8, 0.4, 0.2};
    cfg.bisection_steps = 6;
    cfg.asymptotics_ladder = {0.4, 0.3, 0.2, 0.15};
  } else if (preset == "full") {
    cfg.eps = 0.1;
    cfg.grid_resolution = 8;
    cfg.num_planes = 200;
    cfg.num_subspaces = 100;
    cfg.m_angles = 2048;
    cfg.scan_ladder = {0.8, 0.4, 0.2, 0.1};
    cfg.bisection_steps = 10;
    cfg.asymptotics_ladder = {0.4, 0.3, 0.2, 0.15, 0.1};
  } else {
    fail(ErrorKind::Config, "unknown preset '" + std::string(preset) + "'");
  }
}

void merge_config_json(RunConfig& cfg, std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::Config, "config: top level must be an object");
  if (j.contains("preset")) apply_preset(cfg, get_checked<std::string>(j["preset"], "preset"));
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "preset") continue;
    if (key == "n") cfg.n = get_checked<int>(value, k);
    else if (key == "eps") cfg.eps = get_checked<double>(value, k);
    else if (key == "x0") {
      if (value.is_string()) {
        if (value.get<std::string>() != "e1") fail(ErrorKind::Config, "config: x0 must be \"e1\" or an array");
        cfg.x0.clear();
      } else {
        cfg.x0 = get_checked<std::vector<double>>(value, k);
      }
    } else if (key == "grid_resolution") cfg.grid_resolution = auto_or_int(value, k);
    else if (key == "subsphere_resolution") cfg.subsphere_resolution = auto_or_int(value, k);
    else if (key == "planes" || key == "num_planes") cfg.num_planes = get_checked<int>(value, k);
    else if (key == "subspaces" || key == "num_subspaces") cfg.num_subspaces = get_checked<int>(value, k);
    else if (key == "m_angles") cfg.m_angles = auto_or_int(value, k);
    else if (key == "seed") cfg.seed = get_checked<std::uint64_t>(value, k);
    else if (key == "out" || key == "output_dir") cfg.output_dir = get_checked<std::string>(value, k);
    else if (key == "cache_dir") cfg.cache_dir = get_checked<std::string>(value, k);
    else if (key == "scan_ladder") cfg.scan_ladder = parse_ladder(value, k);
    else if (key == "asymptotics_ladder") cfg.asymptotics_ladder = parse_ladder(value, k);
    else if (key == "bisection_steps") cfg.bisection_steps = get_checked<int>(value, k);
    else if (key == "with_asymptotics") cfg.with_asymptotics = get_checked<bool>(value, k);
    else if (key == "write_convexity_csv") cfg.write_convexity_csv = get_checked<bool>(value, k);
    else fail(ErrorKind::Config, "config: unknown key '" + key + "'");
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.n < 5) fail(ErrorKind::Config, "n must be >= 5 (every symmetric convex body in dimension <= 4 is an intersection body)");
  if (cfg.n > 12) fail(ErrorKind::Config, "n must be <= 12");
  if (!(cfg.eps >= 0.0 && cfg.eps < 1.0)) fail(ErrorKind::Config, "eps must lie in [0, 1)");
  if (!cfg.x0.empty()) {
    if (static_cast<int>(cfg.x0.size()) != cfg.n) fail(ErrorKind::Config, "x0 must have n entries");
    double norm2 = 0.0;
    for (double v : cfg.x0) norm2 += v * v;
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) fail(ErrorKind::Config, "x0 must be a nonzero finite vector");
  }
  if (cfg.resolved_grid_resolution() < 4) fail(ErrorKind::Config, "grid_resolution must be >= 4");
  if (cfg.subsphere_resolution != 0 && cfg.subsphere_resolution < 4)
    fail(ErrorKind::Config, "subsphere_resolution must be >= 4");
  if (cfg.num_planes < 1) fail(ErrorKind::Config, "planes must be >= 1");
  if (cfg.num_subspaces < 1) fail(ErrorKind::Config, "subspaces must be >= 1");
  const int m = cfg.resolved_m_angles();
  if (m < 64 || m % 2 != 0) fail(ErrorKind::Config, "m_angles must be even and >= 64");
  if (cfg.eps > 0.0 && m < default_angle_count(cfg.eps))
    fail(ErrorKind::Config, "m_angles below max(256, ceil(64 pi / eps)) = " + std::to_string(default_angle_count(cfg.eps)));
  auto check_ladder = [](const std::vector<double>& l, std::size_t min_size, const char* name) {
    if (l.size() < min_size) fail(ErrorKind::Config, std::string(name) + " needs at least " + std::to_string(min_size) + " rungs");
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (!(l[k] > 0.0 && l[k] < 1.0)) fail(ErrorKind::Config, std::string(name) + " values must lie in (0, 1)");
      if (k > 0 && !(l[k] < l[k - 1])) fail(ErrorKind::Config, std::string(name) + " must be strictly decreasing");
    }
  };
  check_ladder(cfg.scan_ladder, 2, "scan_ladder");
  check_ladder(cfg.asymptotics_ladder, 4, "asymptotics_ladder");
  if (cfg.bisection_steps < 0 || cfg.bisection_steps > 10) fail(ErrorKind::Config, "bisection_steps must lie in [0, 10]");
}

std::string config_to_json(const RunConfig& cfg) {
  json j{{"n", cfg.n},
         {"eps", cfg.eps},
         {"x0", cfg.x0.empty() ? json("e1") : json(cfg.x0)},
         {"grid_resolution", cfg.resolved_grid_resolution()},
         {"subsphere_resolution", cfg.subsphere_resolution > 0 ? json(cfg.subsphere_resolution) : json("auto")},
         {"planes", cfg.num_planes},
         {"subspaces", cfg.num_subspaces},
         {"m_angles", cfg.resolved_m_angles()},
         {"seed", cfg.seed},
         {"scan_ladder", cfg.scan_ladder},
         {"asymptotics_ladder", cfg.asymptotics_ladder},
         {"bisection_steps", cfg.bisection_steps},
         {"with_asymptotics", cfg.with_asymptotics}};
  return j.dump();
}

// ---------------------------------------------------------------------------
// verify

RunResult run_verify(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  validate(cfg);
  prepare_output(cfg);
  const Context ctx(cfg);
  json report{{"command", "verify"}, {"config", json::parse(config_to_json(cfg))}};

  std::optional<StarBody> body;
  try {
    body = ctx.body(cfg.eps);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Construction) throw;
    report["verdict"] = verdict_json("failed", "reason", e.what());
    return finish(cfg, "verify", report, ExitCode::Failed, std::string("failed: ") + e.what(), start);
  }
  const StarBody& b = *body;
  report["body"] = body_json(b, cfg.eps, cfg.resolved_grid_resolution());

  // convexity
  std::ostringstream conv_csv;
  conv_csv << "plane_id,phi,rho,drho,d2rho,J\n";
  ConvexitySink sink;
  if (cfg.write_convexity_csv) {
    sink = [&](int plane, const PlaneSectionProfile& p, const CurvatureSamples& s) {
      for (std::size_t i = 0; i < p.angles.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        conv_csv << plane << ',' << fmt(p.angles[i]) << ',' << fmt(p.rho(k)) << ',' << fmt(s.d1(k)) << ','
                 << fmt(s.d2(k)) << ',' << fmt(s.j(k)) << '\n';
      }
    };
  }
  const ConvexityCertificate conv = convexity_scan(b, cfg.num_planes, cfg.resolved_m_angles(), cfg.seed, sink);
  report["convexity"] = convexity_json(conv);
  if (cfg.write_convexity_csv) write_text(cfg.output_dir / "convexity.csv", conv_csv.str());

  // n-dimensional certificate
  const IntersectionRun full = intersection_run(ctx, b);
  report["intersection"] = certificate_json(full.cert, b.pole);

  // sections
  const std::vector<SectionCertificate> secs = section_scan(b, cfg.num_subspaces, cfg.seed, ctx.sections());
  json sec_list = json::array();
  std::ostringstream sec_csv;
  sec_csv << "frame_id,kind,min_preimage,deficit_max,baseline,residual,verdict\n";
  bool all_intersection = true, any_inconclusive = false;
  double min_inner = std::numeric_limits<double>::infinity(), max_deficit = 0.0;
  for (const auto& s : secs) {
    sec_list.push_back(section_json(s, b.pole));
    sec_csv << s.frame_id << ',' << s.kind << ',' << fmt(s.inner.min_preimage) << ',' << fmt(s.deficit_max) << ','
            << fmt(s.baseline) << ',' << fmt(s.inner.residual) << ',' << to_string(s.inner.verdict) << '\n';
    all_intersection = all_intersection && s.inner.verdict == Verdict::Intersection;
    any_inconclusive = any_inconclusive || s.inner.verdict == Verdict::Inconclusive;
    min_inner = std::min(min_inner, s.inner.min_preimage);
    max_deficit = std::max(max_deficit, s.deficit_max);
  }
  write_text(cfg.output_dir / "sections.csv", sec_csv.str());
  report["sections"] = json{{"count", secs.size()},
                            {"all_intersection", all_intersection},
                            {"min_inner_preimage", min_inner},
                            {"max_deficit", max_deficit},
                            {"baseline", sin_power_integral(cfg.n - 3)},
                            {"certificates", sec_list}};

  if (cfg.with_asymptotics) {
    std::string csv;
    report["asymptotics"] = asymptotics_block(ctx, cfg.asymptotics_ladder, &csv).report;
    write_text(cfg.output_dir / "asymptotics.csv", csv);
  }

  json provenance = full.provenance;
  json inner_hashes = json::array();
  for (const auto& s : secs) inner_hashes.push_back(hex(s.grid_hash));
  provenance["section_grid_hashes"] = inner_hashes;
  report["provenance"] = provenance;

  // overall verdict: definite failures first, then inconclusive stages
  std::string reason;
  if (!(conv.j_min > 0.0)) reason = "not convex: J_min = " + fmt(conv.j_min);
  else if (full.cert.verdict == Verdict::Intersection) reason = "n-dim body IS an intersection body";
  else if (!all_intersection && !any_inconclusive) reason = "a hyperplane section is not an intersection body";
  else if (!all_intersection) {
    for (const auto& s : secs)
      if (s.inner.verdict == Verdict::NotIntersection) reason = "a hyperplane section is not an intersection body";
  }
  ExitCode code;
  std::string summary;
  if (!reason.empty()) {
    report["verdict"] = verdict_json("failed", "reason", reason);
    code = ExitCode::Failed;
    summary = "failed: " + reason;
  } else if (full.cert.verdict == Verdict::Inconclusive || any_inconclusive) {
    const std::string stage = full.cert.verdict == Verdict::Inconclusive ? "intersection" : "sections";
    report["verdict"] = verdict_json("inconclusive", "stage", stage);
    code = ExitCode::Inconclusive;
    summary = "inconclusive: " + stage;
  } else {
    report["verdict"] = verdict_json("counterexample_certified", "", "");
    code = ExitCode::Certified;
    summary = "counterexample_certified";
  }
  return finish(cfg, "verify", report, code, summary, start);
}

// ---------------------------------------------------------------------------
// scan-epsilon

namespace {

struct Rung {
  double eps = 0.0;
  bool star = false;
  double rho_min = std::numeric_limits<double>::quiet_NaN();
  double j_min = std::numeric_limits<double>::quiet_NaN();
  bool convex = false;
  double full_min = std::numeric_limits<double>::quiet_NaN();
  Verdict full_verdict = Verdict::Inconclusive;
  double section_min = std::numeric_limits<double>::quiet_NaN();
  bool sections = false;
  std::string error;

  bool certified() const { return star && convex && sections && full_verdict == Verdict::NotIntersection; }
};

enum class Check { Star, Convexity, Sections };

const char* check_name(Check c) {
  switch (c) {
    case Check::Star: return "star";
    case Check::Convexity: return "convexity";
    case Check::Sections: return "sections";
  }
  return "";
}

bool passes(const Rung& r, Check c) {
  switch (c) {
    case Check::Star: return r.star;
    case Check::Convexity: return r.convex;
    case Check::Sections: return r.sections;
  }
  return false;
}

// Evaluates the requested checks at one eps (all of them when `only` is empty).
Rung evaluate(const Context& ctx, double eps, std::optional<Check> only) {
  const RunConfig& cfg = ctx.cfg;
  Rung r;
  r.eps = eps;
  std::optional<StarBody> body;
  try {
    body = ctx.body(eps);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Construction) throw;
    r.error = e.what();
    return r;
  }
  r.star = true;
  r.rho_min = body->rho_min;
  if (!only || *only == Check::Convexity) {
    const int m = std::max(cfg.m_angles > 0 ? cfg.m_angles : 0, eps > 0.0 ? default_angle_count(eps) : 256);
    r.j_min = convexity_scan(*body, cfg.num_planes, m, cfg.seed).j_min;
    r.convex = r.j_min > 0.0;
  }
  if (!only) {
    const IntersectionRun full = intersection_run(ctx, *body);
    r.full_min = full.cert.min_preimage;
    r.full_verdict = full.cert.verdict;
  }
  if (!only || *only == Check::Sections) {
    const auto secs = section_scan(*body, cfg.num_subspaces, cfg.seed, ctx.sections());
    r.sections = true;
    r.section_min = std::numeric_limits<double>::infinity();
    for (const auto& s : secs) {
      r.sections = r.sections && s.inner.verdict == Verdict::Intersection;
      r.section_min = std::min(r.section_min, s.inner.min_preimage);
    }
  }
  return r;
}

json rung_json(const Rung& r) {
  json j{{"eps", r.eps},
         {"star", r.star},
         {"rho_min", num(r.rho_min)},
         {"j_min", num(r.j_min)},
         {"convex", r.convex},
         {"n_dim_min_preimage", num(r.full_min)},
         {"n_dim_verdict", to_string(r.full_verdict)},
         {"worst_section_min_preimage", num(r.section_min)},
         {"sections_intersection", r.sections},
         {"verdict", r.certified() ? "counterexample_certified" : "failed"}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

RunResult run_scan_epsilon(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  validate(cfg);
  prepare_output(cfg);
  const Context ctx(cfg);
  json report{{"command", "scan-epsilon"}, {"config", json::parse(config_to_json(cfg))}};

  std::vector<Rung> rungs;
  for (double eps : cfg.scan_ladder) rungs.push_back(evaluate(ctx, eps, std::nullopt));
  json rows = json::array();
  std::ostringstream csv;
  csv << "eps,star,rho_min,j_min,n_dim_min_preimage,n_dim_verdict,worst_section_min_preimage,verdict\n";
  for (const auto& r : rungs) {
    rows.push_back(rung_json(r));
    csv << fmt(r.eps) << ',' << (r.star ? 1 : 0) << ',' << fmt(r.rho_min) << ',' << fmt(r.j_min) << ','
        << fmt(r.full_min) << ',' << to_string(r.full_verdict) << ',' << fmt(r.section_min) << ','
        << (r.certified() ? "counterexample_certified" : "failed") << '\n';
  }
  report["rungs"] = rows;

  // eps -> 0 limit: the ball of radius C_n
  {
    const StarBody ball = ctx.body(0.0);
    const double j = convexity_scan(ball, 1, 256, cfg.seed).j_min;
    const IntersectionRun full = intersection_run(ctx, ball);
    report["ball_limit"] = json{{"j_min", j}, {"C_n_squared", c_n(cfg.n) * c_n(cfg.n)},
                                {"n_dim_min_preimage", full.cert.min_preimage},
                                {"n_dim_verdict", to_string(full.cert.verdict)}};
  }

  json thresholds = json::object();
  for (Check c : {Check::Star, Check::Convexity, Check::Sections}) {
    // last failing rung followed by a passing one
    int bracket = -1;
    for (std::size_t k = 0; k + 1 < rungs.size(); ++k)
      if (!passes(rungs[k], c) && passes(rungs[k + 1], c)) bracket = static_cast<int>(k);
    json t;
    if (bracket < 0) {
      const bool all_pass = std::all_of(rungs.begin(), rungs.end(), [&](const Rung& r) { return passes(r, c); });
      t = json{{"bracketed", false},
               {"note", all_pass ? "passes at every rung" : "no failing-to-passing transition on the ladder"}};
    } else {
      double hi = rungs[static_cast<std::size_t>(bracket)].eps;      // fails
      double lo = rungs[static_cast<std::size_t>(bracket) + 1].eps;  // passes
      json steps = json::array();
      for (int s = 0; s < cfg.bisection_steps; ++s) {
        const double mid = 0.5 * (lo + hi);
        const bool ok = passes(evaluate(ctx, mid, c), c);
        steps.push_back({{"eps", mid}, {"pass", ok}});
        (ok ? lo : hi) = mid;
      }
      t = json{{"bracketed", true}, {"pass_below", lo}, {"fail_above", hi}, {"estimate", 0.5 * (lo + hi)},
               {"steps", steps}};
    }
    thresholds[check_name(c)] = t;
  }
  report["thresholds"] = thresholds;

  // once every check passes, smaller rungs should pass too
  json anomalies = json::array();
  bool seen = false;
  for (const auto& r : rungs) {
    if (seen && !r.certified()) anomalies.push_back(r.eps);
    seen = seen || r.certified();
  }
  report["monotonicity_anomalies"] = anomalies;
  json certified = nullptr;
  for (const auto& r : rungs)
    if (r.certified()) {
      certified = r.eps;
      break;
    }
  report["largest_certified_eps"] = certified;
  write_text(cfg.output_dir / "epsilon_scan.csv", csv.str());

  const bool any = !certified.is_null();
  return finish(cfg, "scan-epsilon", report, any ? ExitCode::Certified : ExitCode::Failed,
                any ? "certified at eps = " + fmt(certified.get<double>()) : "no rung certified", start);
}

// ---------------------------------------------------------------------------

RunResult run_asymptotics(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  validate(cfg);
  prepare_output(cfg);
  const Context ctx(cfg);
  std::string csv;
  const AsymptoticsBlock block = asymptotics_block(ctx, cfg.asymptotics_ladder, &csv);
  write_text(cfg.output_dir / "asymptotics.csv", csv);
  json report{{"command", "asymptotics"}, {"config", json::parse(config_to_json(cfg))}, {"asymptotics", block.report}};
  report["verdict"] = verdict_json(block.pass ? "pass" : "failed", "reason", block.pass ? "" : "a slope is outside its tolerance");
  return finish(cfg, "asymptotics", report, block.pass ? ExitCode::Certified : ExitCode::Failed,
                block.pass ? "all slopes within tolerance" : "a slope is outside its tolerance", start);
}

RunResult run_export_body(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  validate(cfg);
  prepare_output(cfg);
  const Context ctx(cfg);
  json report{{"command", "export-body"}, {"config", json::parse(config_to_json(cfg))}};
  std::optional<StarBody> body;
  try {
    body = ctx.body(cfg.eps);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Construction) throw;
    report["verdict"] = verdict_json("failed", "reason", e.what());
    return finish(cfg, "export-body", report, ExitCode::Failed, std::string("failed: ") + e.what(), start);
  }
  const json bj = body_json(*body, cfg.eps, cfg.resolved_grid_resolution());
  write_text(cfg.output_dir / "body.json", bj.dump(2) + "\n");
  std::ostringstream csv;
  for (int i = 0; i < cfg.n; ++i) csv << 'x' << (i + 1) << ',';
  csv << "rho\n";
  const SphereGrid& g = *body->grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec x = g.node(i);
    for (Eigen::Index k = 0; k < x.size(); ++k) csv << fmt(x(k)) << ',';
    csv << fmt(body->sampled(static_cast<Eigen::Index>(i))) << '\n';
  }
  write_text(cfg.output_dir / "body.csv", csv.str());
  report["body"] = bj;
  report["verdict"] = verdict_json("exported", "", "");
  return finish(cfg, "export-body", report, ExitCode::Certified, "exported " + std::to_string(g.size()) + " nodes",
                start);
}

RunResult run_command(std::string_view command, const RunConfig& cfg) {
  if (command == "verify") return run_verify(cfg);
  if (command == "scan-epsilon") return run_scan_epsilon(cfg);
  if (command == "asymptotics") return run_asymptotics(cfg);
  if (command == "export-body") return run_export_body(cfg);
  fail(ErrorKind::Config, "unknown command '" + std::string(command) + "'");
}

}  // namespace ibody
