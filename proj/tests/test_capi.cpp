#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <string>

#include "ibody/ibody.h"

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STRNE(ibody_version(), "");
  EXPECT_STREQ(ibody_status_string(IBODY_OK), "ok");
  EXPECT_STREQ(ibody_status_string(IBODY_ERR_CONFIG), "configuration error");
}

TEST(CApi, Scalars) {
  double v = 0.0;
  ASSERT_EQ(ibody_c_n(5, &v), IBODY_OK);
  EXPECT_NEAR(v, 2.0 * std::pow(std::numbers::pi, 3), 1e-12);
  ASSERT_EQ(ibody_sphere_area(3, &v), IBODY_OK);
  EXPECT_NEAR(v, 4.0 * std::numbers::pi, 1e-13);
  EXPECT_EQ(ibody_sphere_area(0, &v), IBODY_ERR_DOMAIN);
  EXPECT_STRNE(ibody_last_error(), "");
  EXPECT_EQ(ibody_c_n(5, nullptr), IBODY_ERR_NULL_ARGUMENT);
}

TEST(CApi, BumpEval) {
  const double x0[5] = {0, 0, 3, 0, 0};
  const double x[5] = {0, 0, 1, 0, 0};
  double v = 0.0;
  ASSERT_EQ(ibody_bump_eval(5, x0, 0.2, x, &v), IBODY_OK);
  EXPECT_DOUBLE_EQ(v, 2.0);
  EXPECT_EQ(ibody_bump_eval(4, x0, 0.2, x, &v), IBODY_ERR_DOMAIN);
  EXPECT_EQ(ibody_bump_eval(5, x0, 1.5, x, &v), IBODY_ERR_DOMAIN);
}

TEST(CApi, BodyLifecycle) {
  ibody_body* body = nullptr;
  ASSERT_EQ(ibody_body_create(5, nullptr, 0.3, 6, &body), IBODY_OK) << ibody_last_error();
  ASSERT_NE(body, nullptr);
  int n = 0;
  EXPECT_EQ(ibody_body_dim(body, &n), IBODY_OK);
  EXPECT_EQ(n, 5);
  double lo = 0.0, hi = 0.0, r = 0.0, norm = 0.0;
  EXPECT_EQ(ibody_body_extremes(body, &lo, &hi), IBODY_OK);
  EXPECT_LT(lo, hi);
  const double x[5] = {0, 2, 0, 0, 0};
  EXPECT_EQ(ibody_body_radial(body, x, &r), IBODY_OK);
  EXPECT_EQ(ibody_body_norm(body, x, &norm), IBODY_OK);
  EXPECT_NEAR(norm * r, 1.0, 1e-12);
  size_t nodes = 0;
  EXPECT_EQ(ibody_body_grid_size(body, &nodes), IBODY_OK);
  EXPECT_GT(nodes, 0u);
  double j = 0.0;
  EXPECT_EQ(ibody_body_convexity(body, 4, 672, 42, &j), IBODY_OK);
  EXPECT_GT(j, 0.0);
  ibody_certificate cert{};
  ASSERT_EQ(ibody_body_certificate(body, nullptr, &cert), IBODY_OK) << ibody_last_error();
  EXPECT_EQ(cert.verdict, IBODY_VERDICT_NOT_INTERSECTION);
  EXPECT_NEAR(cert.min_preimage, -1.0, 0.1);
  const double zero[5] = {0, 0, 0, 0, 0};
  EXPECT_EQ(ibody_body_radial(body, zero, &r), IBODY_ERR_DOMAIN);
  ibody_body_destroy(body);
  ibody_body_destroy(nullptr);
}

TEST(CApi, BodyCreateErrors) {
  ibody_body* body = reinterpret_cast<ibody_body*>(0x1);
  EXPECT_EQ(ibody_body_create(5, nullptr, 1.5, 0, &body), IBODY_ERR_DOMAIN);
  EXPECT_EQ(body, nullptr);
  EXPECT_EQ(ibody_body_create(5, nullptr, 0.3, 0, nullptr), IBODY_ERR_NULL_ARGUMENT);
  EXPECT_EQ(ibody_body_radial(nullptr, nullptr, nullptr), IBODY_ERR_NULL_ARGUMENT);
}

TEST(CApi, RunRejectsBadConfig) {
  ibody_result* result = nullptr;
  EXPECT_EQ(ibody_run("verify", R"({"n": 4})", &result), IBODY_ERR_CONFIG);
  EXPECT_EQ(result, nullptr);
  EXPECT_NE(std::string(ibody_last_error()).find("n must be >= 5"), std::string::npos);
  EXPECT_EQ(ibody_run("verify", "{oops", &result), IBODY_ERR_CONFIG);
  EXPECT_EQ(ibody_run("dance", "{}", &result), IBODY_ERR_CONFIG);
  EXPECT_EQ(ibody_result_exit_code(nullptr), 1);
}

TEST(CApi, ConfigResolve) {
  char* text = nullptr;
  ASSERT_EQ(ibody_config_resolve(R"({"preset": "fast"})", &text), IBODY_OK);
  ASSERT_NE(text, nullptr);
  EXPECT_NE(std::strstr(text, "\"eps\":0.3"), nullptr) << text;
  ibody_string_free(text);
}

TEST(CApi, RunExportBody) {
  ibody_result* result = nullptr;
  const std::string cfg = R"({"preset": "fast", "out": ")" +
                          (std::filesystem::temp_directory_path() / "ibody-capi-export").string() + "\"}";
  ASSERT_EQ(ibody_run("export-body", cfg.c_str(), &result), IBODY_OK) << ibody_last_error();
  EXPECT_EQ(ibody_result_exit_code(result), 0);
  EXPECT_NE(std::string(ibody_result_report(result)).find("\"export-body\""), std::string::npos);
  EXPECT_STRNE(ibody_result_summary(result), "");
  ibody_result_destroy(result);
}
