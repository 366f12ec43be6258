// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fibercz/fibercz.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

std::string take(char* s) {
    std::string out = s != nullptr ? s : "";
    fcz_string_free(s);
    return out;
}

const char* kTensor = R"({"gridX":{"origin":0,"step":0.25,"count":4},"gridY":{"origin":0,"step":0.5,"count":4},
  "terms":[{"values":[8,0,0,1],"indexSet":[0]},{"values":[-1,3,0,2],"indexSet":[2,3]}]})";

} // namespace

TEST_CASE("signals and decomposition") {
    const double v[4] = {4.0, 4.0, 0.0, 0.0};
    fcz_signal* s = nullptr;
    REQUIRE(fcz_signal_create(0.0, 0.5, 4, v, &s) == FCZ_OK);
    CHECK(fcz_signal_size(s) == 4);
    CHECK(fcz_signal_values(s)[1] == 4.0);
    char* json = nullptr;
    int ok = 0;
    REQUIRE(fcz_decompose_1d(s, 1.0, &json, &ok) == FCZ_OK);
    CHECK(ok == 1);
    const std::string doc = take(json);
    CHECK(doc.find("\"atoms\"") != std::string::npos);
    CHECK(fcz_decompose_1d(s, -1.0, &json, &ok) == FCZ_INVALID_ARGUMENT);
    CHECK(std::strlen(fcz_last_error()) > 0);
    REQUIRE(fcz_signal_to_json(s, &json) == FCZ_OK);
    fcz_signal* back = nullptr;
    CHECK(fcz_signal_from_json(take(json).c_str(), &back) == FCZ_OK);
    fcz_signal_destroy(back);
    fcz_signal_destroy(s);
}

TEST_CASE("error codes") {
    fcz_signal* s = nullptr;
    CHECK(fcz_signal_from_json("{oops", &s) == FCZ_PARSE_ERROR);
    CHECK(s == nullptr);
    CHECK(fcz_signal_from_json(R"({"origin":0,"step":1,"count":2,"values":[1]})", &s) != FCZ_OK);
    CHECK(fcz_signal_create(0.0, 0.0, 2, nullptr, &s) == FCZ_INVALID_ARGUMENT);
    CHECK(fcz_signal_create(0.0, 1.0, 2, nullptr, nullptr) == FCZ_INVALID_ARGUMENT);
    char* report = nullptr;
    CHECK(fcz_verify("unknown", 1, 1, &report, nullptr) == FCZ_INVALID_ARGUMENT);
    CHECK(report == nullptr);
    CHECK(fcz_sweep("good_part", "[1,2", 1, &report, nullptr, nullptr) == FCZ_PARSE_ERROR);
    fcz_signal_destroy(nullptr);
    fcz_dense_destroy(nullptr);
}

TEST_CASE("tensor and operators") {
    fcz_tensor* t = nullptr;
    REQUIRE(fcz_tensor_from_json(kTensor, &t) == FCZ_OK);
    CHECK(fcz_tensor_l1_norm(t) > 0.0);
    fcz_dense* f = nullptr;
    REQUIRE(fcz_tensor_to_dense(t, &f) == FCZ_OK);
    CHECK(fcz_dense_count_x(f) == 4);
    CHECK(fcz_dense_count_y(f) == 4);
    CHECK(fcz_dense_values(f)[0] == 8.0);

    std::vector<double> ones(16, 1.0);
    fcz_dense* g = nullptr;
    REQUIRE(fcz_dense_create(0.0, 0.25, 4, 0.0, 0.5, 4, ones.data(), &g) == FCZ_OK);
    fcz_config* cfg = nullptr;
    REQUIRE(fcz_config_from_json(R"({"ladder":{"jMin":0,"jMax":0},"profileStep":0.25})", &cfg) == FCZ_OK);

    fcz_dense* a = nullptr;
    fcz_dense* b = nullptr;
    REQUIRE(fcz_apply_T(f, g, cfg, 1, &a) == FCZ_OK);
    REQUIRE(fcz_apply_T_fiberwise(t, g, cfg, 2, &b) == FCZ_OK);
    CHECK(std::memcmp(fcz_dense_values(a), fcz_dense_values(b), 16 * sizeof(double)) == 0);

    double lhs = 0.0;
    double mid = 0.0;
    fcz_dense* t1 = nullptr;
    REQUIRE(fcz_inner_product(a, g, &lhs) == FCZ_OK);
    REQUIRE(fcz_apply_T1(g, g, cfg, &t1) == FCZ_OK);
    REQUIRE(fcz_inner_product(f, t1, &mid) == FCZ_OK);
    CHECK(mid == doctest::Approx(lhs).epsilon(1e-10));
    fcz_dense* t2 = nullptr;
    double rhs = 0.0;
    REQUIRE(fcz_apply_T2(f, g, cfg, &t2) == FCZ_OK);
    REQUIRE(fcz_inner_product(g, t2, &rhs) == FCZ_OK);
    CHECK(rhs == doctest::Approx(lhs).epsilon(1e-10));

    fcz_dense* m = nullptr;
    REQUIRE(fcz_maximal_axis(f, FCZ_AXIS_Y, &m) == FCZ_OK);
    CHECK(fcz_dense_values(m)[0] == 8.0);
    double norm = 0.0;
    REQUIRE(fcz_lp_norm(f, INFINITY, &norm) == FCZ_OK);
    CHECK(norm == 8.0);
    CHECK(fcz_lp_norm(f, 0.5, &norm) == FCZ_INVALID_ARGUMENT);

    char* csv = nullptr;
    REQUIRE(fcz_dense_to_csv(a, &csv) == FCZ_OK);
    const std::string text = take(csv);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(std::count(text.begin(), text.end(), ',') == 12);

    char* json = nullptr;
    REQUIRE(fcz_fiberwise_decompose(t, 1.0, 2, &json) == FCZ_OK);
    CHECK(take(json).find("exceptionalSet") != std::string::npos);

    fcz_dense* wrong = nullptr;
    REQUIRE(fcz_dense_create(0.0, 0.5, 4, 0.0, 0.5, 4, ones.data(), &wrong) == FCZ_OK);
    fcz_dense* none = nullptr;
    CHECK(fcz_apply_T(f, wrong, cfg, 1, &none) == FCZ_INVALID_ARGUMENT);
    CHECK(none == nullptr);

    for (fcz_dense* d : {f, g, a, b, t1, t2, m, wrong}) fcz_dense_destroy(d);
    fcz_config_destroy(cfg);
    fcz_tensor_destroy(t);
}

TEST_CASE("classical paraproduct") {
    std::vector<double> one(64, 1.0);
    std::vector<double> ramp(64);
    for (std::size_t i = 0; i < 64; ++i) ramp[i] = std::sin(0.3 * static_cast<double>(i));
    fcz_signal* f = nullptr;
    fcz_signal* g = nullptr;
    fcz_signal* out = nullptr;
    REQUIRE(fcz_signal_create(0.0, 1.0 / 64.0, 64, one.data(), &f) == FCZ_OK);
    REQUIRE(fcz_signal_create(0.0, 1.0 / 64.0, 64, ramp.data(), &g) == FCZ_OK);
    REQUIRE(fcz_apply_pi(f, g, nullptr, &out) == FCZ_OK);
    CHECK(std::abs(fcz_signal_values(out)[32]) <= 1e-12);  // psi kills the constant away from the edges
    char* csv = nullptr;
    REQUIRE(fcz_signal_to_csv(out, &csv) == FCZ_OK);
    CHECK(take(csv).rfind("x,value\n", 0) == 0);
    fcz_signal_destroy(f);
    fcz_signal_destroy(g);
    fcz_signal_destroy(out);
}

TEST_CASE("filter profiles") {
    char* csv = nullptr;
    REQUIRE(fcz_filter_profile_csv("phi", nullptr, 1.0, &csv) == FCZ_OK);
    const std::string phi = take(csv);
    CHECK(phi.rfind("x,value\n", 0) == 0);
    REQUIRE(fcz_filter_profile_csv("psi", nullptr, 0.5, &csv) == FCZ_OK);
    CHECK(take(csv).size() > 10);
    CHECK(fcz_filter_profile_csv("chi", nullptr, 1.0, &csv) == FCZ_INVALID_ARGUMENT);
    CHECK(fcz_filter_profile_csv("psi", nullptr, -1.0, &csv) == FCZ_INVALID_ARGUMENT);
}

TEST_CASE("verify and sweep are deterministic") {
    char* a = nullptr;
    char* b = nullptr;
    int pa = 0;
    int pb = 0;
    REQUIRE(fcz_verify("czd", 7, 1, &a, &pa) == FCZ_OK);
    REQUIRE(fcz_verify("czd", 7, 3, &b, &pb) == FCZ_OK);
    CHECK(pa == 1);
    CHECK(take(a) == take(b));

    char* csv = nullptr;
    REQUIRE(fcz_sweep("h_l1", "{}", 1, &a, &csv, &pa) == FCZ_OK);
    REQUIRE(fcz_sweep("h_l1", "{}", 2, &b, nullptr, &pb) == FCZ_OK);
    const std::string ra = take(a);
    CHECK(pa == 1);
    CHECK(ra == take(b));
    CHECK(ra.find("\"slope\"") != std::string::npos);
    CHECK(take(csv).find("gamma") != std::string::npos);
    CHECK(std::string(fcz_version()).size() > 0);
}
