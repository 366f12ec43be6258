#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fibercz/czd.hpp"
#include "fibercz/error.hpp"
#include "fibercz/harness.hpp"
#include "fibercz/norms.hpp"
#include "fibercz/verify.hpp"

#include <cmath>

using namespace fcz;

namespace {

ExperimentConfig config(std::uint64_t seed, unsigned threads = 1) {
    ExperimentConfig c;
    c.seed = seed;
    c.threads = threads;
    return c;
}

void require_passed(const ExperimentResult& r) {
    for (const auto& c : r.checks) {
        INFO(r.name << ": " << c.name << " measured " << c.measured << " " << c.relation << " " << c.limit);
        CHECK(c.passed);
    }
}

} // namespace

TEST_CASE("log-log fit") {
    const std::vector<double> x{1, 2, 4, 8, 16};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -0.75));
    const FitResult f = fit_log_log(x, y);
    CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
    CHECK(f.max_residual <= 1e-12);
    CHECK(f.point_count == 5);
    const std::vector<double> with_zero{0.0, 1.0, 2.0};
    CHECK_THROWS_AS(fit_log_log(std::vector<double>{1, 2, 3}, with_zero), Error);
    CHECK_THROWS_AS(fit_log_log(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("experiment config parsing") {
    const auto j = io::parse(R"({"gridX":{"origin":0,"step":0.015625,"count":256},"ladder":{"jMin":-4,"jMax":-1},
        "exponents":{"p":3,"q":"inf"},"seed":9,"sweep":{"param":"gamma","values":[1,2,3]},
        "trials":4,"tolerances":{"slope":0.2},"out":"r.json"})");
    const ExperimentConfig c = experiment_config_from_json(j);
    REQUIRE(c.grid_x.has_value());
    CHECK(c.grid_x->count() == 256);
    CHECK_FALSE(c.grid_y.has_value());
    CHECK(c.ladder->j_min == -4);
    CHECK(c.p == 3.0);
    CHECK(std::isinf(c.q));
    CHECK(c.seed == 9);
    CHECK(c.sweep_values.size() == 3);
    CHECK(*c.trials == 4);
    CHECK(c.tolerances.slope == 0.2);
    CHECK(c.tolerances.uniformity == 2.0);
    CHECK(c.out == "r.json");
    CHECK_THROWS_AS(experiment_config_from_json(io::parse("[]")), Error);
    CHECK_THROWS_AS(experiment_config_from_json(io::parse(R"({"exponents":{"p":0.5}})")), Error);
    CHECK_THROWS_AS(experiment_config_from_json(io::parse(R"({"seed":"x"})")), Error);
}

TEST_CASE("experiments pass on their defaults") {
    for (const auto& name : experiment_names()) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const ExperimentResult r = run_experiment(name, config(seed));
            CHECK(r.name == name);
            CHECK_FALSE(r.checks.empty());
            require_passed(r);
        }
    }
    CHECK_THROWS_AS(run_experiment("nope", config(1)), Error);
}

TEST_CASE("reports are identical across thread counts") {
    for (const auto& name : experiment_names()) {
        const std::string a = to_json(run_experiment(name, config(5, 1))).dump();
        const std::string b = to_json(run_experiment(name, config(5, 3))).dump();
        CHECK(a == b);
    }
    const auto va = run_verify("operators", 4, 1);
    const auto vb = run_verify("operators", 4, 2);
    CHECK(to_json(va.front()).dump() == to_json(vb.front()).dump());
}

TEST_CASE("saturated sweep") {
    ExperimentConfig c = config(1);
    c.sweep_values = {1e4, 1e5, 1e6};
    const ExperimentResult good = run_experiment("good_part", c);
    const auto& pts = good.data.at("points");
    CHECK(pts[0].at("ratio").get<double>() > pts[1].at("ratio").get<double>());
    CHECK(pts[1].at("ratio").get<double>() > pts[2].at("ratio").get<double>());
    const ExperimentResult bad = run_experiment("bad_set", c);
    for (const auto& p : bad.data.at("points")) CHECK(p.at("measure") == 0.0);
    CHECK(bad.passed());
    const ExperimentResult h = run_experiment("h_l1", c);
    for (const auto& p : h.data.at("points")) CHECK(p.at("hL1") == 0.0);
    c.sweep_values = {1.0, 2.0};
    CHECK_THROWS_AS(run_experiment("bad_set", c), Error);
}

TEST_CASE("indicator good part") {
    // f = 1 on [0,1) x [0,1) inside [0,2) x [0,1): for gamma in [1/2, 1) the
    // interval [0,1) is selected and b = f, so ||b||_2 = 1 <= sqrt(2 gamma).
    const Grid1D gx(0.0, 1.0 / 64.0, 128);
    const Grid1D gy(0.0, 1.0 / 64.0, 64);
    std::vector<double> v(128, 0.0);
    for (std::size_t i = 0; i < 64; ++i) v[i] = 1.0;
    std::vector<std::size_t> rows(64);
    for (std::size_t n = 0; n < 64; ++n) rows[n] = n;
    const TensorFunction2D f(gx, gy, {TensorTerm{SampledFunction1D(gx, v), rows}});
    for (double gamma : {0.5, 0.6, 0.8, 0.99}) {
        const double b2 = lp_norm(materialize(fiberwise_decompose(f, gamma).good_part), 2.0);
        CHECK(b2 == doctest::Approx(1.0));
        CHECK(b2 <= std::sqrt(2.0 * gamma) * (1.0 + 1e-12));
    }
}

TEST_CASE("weak type report states its conditional nature") {
    const ExperimentResult r = run_experiment("weak_type", config(1));
    CHECK(r.note.rfind("CONDITIONAL", 0) == 0);
    CHECK(r.data.at("trials").size() == 10);
    CHECK(r.data.at("s").get<double>() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("atom decay report") {
    const ExperimentResult r = run_experiment("atom_decay", config(1));
    CHECK(r.data.at("pointsChecked").get<std::size_t>() > 0);
    CHECK(r.data.at("interval").at("generation") == 4);
    require_passed(r);
}

TEST_CASE("verify suites pass") {
    for (const auto& rep : run_verify("all", 7, 1)) {
        for (const auto& c : rep.checks) {
            INFO(rep.suite << ": " << c.name << " " << c.measured);
            CHECK(c.passed);
        }
    }
    CHECK_THROWS_AS(run_verify("bogus", 1, 1), Error);
}

TEST_CASE("plot data") {
    const std::string csv = experiment_csv(run_experiment("bad_set", config(1)));
    CHECK(csv.rfind("constant,doublingRatio,gamma", 0) == 0);
    const std::string weak = experiment_csv(run_experiment("weak_type", config(1)));
    CHECK(weak.rfind("trial,alpha,measure\n", 0) == 0);
}
