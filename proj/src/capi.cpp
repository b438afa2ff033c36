#include "ibody/ibody.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "ibody/body.hpp"
#include "ibody/bump.hpp"
#include "ibody/convexity.hpp"
#include "ibody/error.hpp"
#include "ibody/numerics.hpp"
#include "ibody/pipeline.hpp"
#include "ibody/radon.hpp"

struct ibody_body {
  ibody::StarBody body;
};

struct ibody_result {
  ibody::RunResult result;
};

namespace {

thread_local std::string last_error;

ibody_status status_of(ibody::ErrorKind kind) {
  switch (kind) {
    case ibody::ErrorKind::Domain: return IBODY_ERR_DOMAIN;
    case ibody::ErrorKind::Config: return IBODY_ERR_CONFIG;
    case ibody::ErrorKind::Resource: return IBODY_ERR_RESOURCE;
    case ibody::ErrorKind::Construction: return IBODY_ERR_CONSTRUCTION;
    case ibody::ErrorKind::Io: return IBODY_ERR_IO;
  }
  return IBODY_ERR_INTERNAL;
}

template <class F>
ibody_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return IBODY_OK;
  } catch (const ibody::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return IBODY_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return IBODY_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return IBODY_ERR_INTERNAL;
  }
}

ibody_status null_argument(const char* name) {
  last_error = std::string("null argument: ") + name;
  return IBODY_ERR_NULL_ARGUMENT;
}

ibody::Vec to_vec(const double* x, int n) { return Eigen::Map<const ibody::Vec>(x, n); }

ibody::RunConfig config_from(const char* json_text) {
  ibody::RunConfig cfg;
  if (json_text != nullptr && *json_text != '\0') ibody::merge_config_json(cfg, json_text);
  return cfg;
}

}  // namespace

extern "C" {

const char* ibody_version(void) { return "1.0.0"; }

const char* ibody_last_error(void) { return last_error.c_str(); }

const char* ibody_status_string(ibody_status status) {
  switch (status) {
    case IBODY_OK: return "ok";
    case IBODY_ERR_DOMAIN: return "domain error";
    case IBODY_ERR_CONFIG: return "configuration error";
    case IBODY_ERR_RESOURCE: return "resource limit exceeded";
    case IBODY_ERR_CONSTRUCTION: return "construction failed";
    case IBODY_ERR_IO: return "i/o error";
    case IBODY_ERR_NULL_ARGUMENT: return "null argument";
    case IBODY_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ibody_status ibody_c_n(int n, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = ibody::c_n(n); });
}

ibody_status ibody_sphere_area(int d, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = ibody::sphere_area(d); });
}

ibody_status ibody_bump_eval(int n, const double* x0, double eps, const double* x, double* out) {
  if (x0 == nullptr) return null_argument("x0");
  if (x == nullptr) return null_argument("x");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    if (n < 2) ibody::fail(ibody::ErrorKind::Domain, "n must be >= 2");
    const ibody::BumpParams p(n, ibody::UnitVector(to_vec(x0, n)), eps);
    *out = ibody::bump_eval(p, to_vec(x, n));
  });
}

ibody_status ibody_body_create(int n, const double* x0, double eps, int grid_resolution, ibody_body** out) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    ibody::RunConfig cfg;
    cfg.n = n;
    cfg.eps = eps;
    if (x0 != nullptr) cfg.x0.assign(x0, x0 + n);
    cfg.grid_resolution = grid_resolution > 0 ? grid_resolution : 0;
    if (n < 2) ibody::fail(ibody::ErrorKind::Domain, "n must be >= 2");
    if (!(eps >= 0.0 && eps < 1.0)) ibody::fail(ibody::ErrorKind::Domain, "eps must lie in [0, 1)");
    ibody::GradedGridSpec grid;
    grid.panel_nodes = cfg.resolved_grid_resolution();
    const ibody::UnitVector pole = x0 != nullptr ? ibody::UnitVector(to_vec(x0, n)) : ibody::UnitVector::axis(n, 0);
    std::optional<ibody::StarBody> b;
    if (eps == 0.0) {
      b = ibody::make_star_body(n, [cn = ibody::c_n(n)](const ibody::Vec&) { return cn; }, pole, 0.3, grid);
    } else {
      ibody::BodyOptions opts;
      opts.grid = grid;
      b = ibody::construct_body(ibody::BumpParams(n, pole, eps), opts);
    }
    *out = new ibody_body{std::move(*b)};
  });
}

void ibody_body_destroy(ibody_body* body) { delete body; }

ibody_status ibody_body_dim(const ibody_body* body, int* out) {
  if (body == nullptr) return null_argument("body");
  if (out == nullptr) return null_argument("out");
  *out = body->body.n;
  return IBODY_OK;
}

ibody_status ibody_body_radial(const ibody_body* body, const double* x, double* out) {
  if (body == nullptr) return null_argument("body");
  if (x == nullptr) return null_argument("x");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = body->body.radial(to_vec(x, body->body.n)); });
}

ibody_status ibody_body_norm(const ibody_body* body, const double* x, double* out) {
  if (body == nullptr) return null_argument("body");
  if (x == nullptr) return null_argument("x");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = ibody::minkowski_norm(body->body, to_vec(x, body->body.n)); });
}

ibody_status ibody_body_extremes(const ibody_body* body, double* rho_min, double* rho_max) {
  if (body == nullptr) return null_argument("body");
  if (rho_min == nullptr) return null_argument("rho_min");
  if (rho_max == nullptr) return null_argument("rho_max");
  *rho_min = body->body.rho_min;
  *rho_max = body->body.rho_max;
  return IBODY_OK;
}

ibody_status ibody_body_grid_size(const ibody_body* body, size_t* out) {
  if (body == nullptr) return null_argument("body");
  if (out == nullptr) return null_argument("out");
  *out = body->body.grid->size();
  return IBODY_OK;
}

ibody_status ibody_body_certificate(const ibody_body* body, const char* cache_dir, ibody_certificate* out) {
  if (body == nullptr) return null_argument("body");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    std::optional<std::filesystem::path> dir;
    if (cache_dir != nullptr && *cache_dir != '\0') dir = cache_dir;
    const ibody::FunkOperator op = ibody::assemble_operator_cached(body->body.grid, {}, dir);
    const ibody::IntersectionCertificate c = ibody::intersection_certificate(op, body->body.sampled);
    out->min_preimage = c.min_preimage;
    out->residual = c.residual;
    out->residual_scale = c.residual_scale;
    out->max_abs_preimage = c.max_abs_preimage;
    out->rank = c.rank;
    out->argmin_node = c.argmin;
    out->verdict = c.verdict == ibody::Verdict::Intersection      ? IBODY_VERDICT_INTERSECTION
                   : c.verdict == ibody::Verdict::NotIntersection ? IBODY_VERDICT_NOT_INTERSECTION
                                                                  : IBODY_VERDICT_INCONCLUSIVE;
  });
}

ibody_status ibody_body_convexity(const ibody_body* body, int num_planes, int m_angles, uint64_t seed, double* j_min) {
  if (body == nullptr) return null_argument("body");
  if (j_min == nullptr) return null_argument("j_min");
  return guarded([&] { *j_min = ibody::convexity_scan(body->body, num_planes, m_angles, seed).j_min; });
}

ibody_status ibody_run(const char* command, const char* config_json, ibody_result** out) {
  if (command == nullptr) return null_argument("command");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const ibody::RunConfig cfg = config_from(config_json);
    *out = new ibody_result{ibody::run_command(command, cfg)};
  });
}

int ibody_result_exit_code(const ibody_result* result) {
  return result != nullptr ? static_cast<int>(result->result.exit_code) : static_cast<int>(ibody::ExitCode::Usage);
}

const char* ibody_result_report(const ibody_result* result) {
  return result != nullptr ? result->result.report.c_str() : "";
}

const char* ibody_result_summary(const ibody_result* result) {
  return result != nullptr ? result->result.summary.c_str() : "";
}

void ibody_result_destroy(ibody_result* result) { delete result; }

ibody_status ibody_config_resolve(const char* config_json, char** out) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const ibody::RunConfig cfg = config_from(config_json);
    ibody::validate(cfg);
    const std::string text = ibody::config_to_json(cfg);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void ibody_string_free(char* text) { std::free(text); }

}  // extern "C"
