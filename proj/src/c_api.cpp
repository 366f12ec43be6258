#include "fibercz/fibercz.h"

#include "fibercz/czd.hpp"
#include "fibercz/error.hpp"
#include "fibercz/filters.hpp"
#include "fibercz/harness.hpp"
#include "fibercz/io.hpp"
#include "fibercz/norms.hpp"
#include "fibercz/operators.hpp"
#include "fibercz/verify.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct fcz_signal {
    fcz::SampledFunction1D v;
};
struct fcz_tensor {
    fcz::TensorFunction2D v;
};
struct fcz_dense {
    fcz::DenseFunction2D v;
};
struct fcz_config {
    fcz::ParaproductConfig v;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
fcz_status guard(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FCZ_OK;
    } catch (const fcz::Error& e) {
        g_last_error = e.what();
        switch (e.code()) {
        case fcz::ErrorCode::Parse: return FCZ_PARSE_ERROR;
        case fcz::ErrorCode::Io: return FCZ_IO_ERROR;
        default: return FCZ_INVALID_ARGUMENT;
        }
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return FCZ_PARSE_ERROR;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return FCZ_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FCZ_INTERNAL_ERROR;
    } catch (...) {
        g_last_error = "unknown error";
        return FCZ_INTERNAL_ERROR;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw fcz::Error(what);
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p == nullptr) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::string dump(const fcz::io::Json& j) { return j.dump(2) + "\n"; }

const fcz::ParaproductConfig& config_or_default(const fcz_config* c) {
    static const fcz::ParaproductConfig fallback = fcz::default_config();
    return c != nullptr ? c->v : fallback;
}

template <class Handle, class Value>
Handle* wrap(Value&& v) {
    return new Handle{std::forward<Value>(v)};
}

} // namespace

extern "C" {

const char* fcz_last_error(void) { return g_last_error.c_str(); }
const char* fcz_version(void) { return "0.1.0"; }
void fcz_string_free(char* s) { std::free(s); }

fcz_status fcz_signal_create(double origin, double step, size_t count, const double* values, fcz_signal** out) {
    return guard([&] {
        require(out != nullptr && (values != nullptr || count == 0), "null argument");
        fcz::Grid1D g(origin, step, count);
        *out = wrap<fcz_signal>(fcz::SampledFunction1D(g, std::vector<double>(values, values + count)));
    });
}

fcz_status fcz_signal_from_json(const char* json, fcz_signal** out) {
    return guard([&] {
        require(json != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_signal>(fcz::io::signal_from_json(fcz::io::parse(json)));
    });
}

fcz_status fcz_signal_to_json(const fcz_signal* s, char** out) {
    return guard([&] {
        require(s != nullptr && out != nullptr, "null argument");
        *out = dup(dump(fcz::io::to_json(s->v)));
    });
}

fcz_status fcz_signal_to_csv(const fcz_signal* s, char** out) {
    return guard([&] {
        require(s != nullptr && out != nullptr, "null argument");
        *out = dup(fcz::io::signal_to_csv(s->v));
    });
}

size_t fcz_signal_size(const fcz_signal* s) { return s != nullptr ? s->v.size() : 0; }
const double* fcz_signal_values(const fcz_signal* s) { return s != nullptr ? s->v.values().data() : nullptr; }
void fcz_signal_destroy(fcz_signal* s) { delete s; }

fcz_status fcz_tensor_from_json(const char* json, fcz_tensor** out) {
    return guard([&] {
        require(json != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_tensor>(fcz::io::tensor_from_json(fcz::io::parse(json)));
    });
}

fcz_status fcz_tensor_to_json(const fcz_tensor* t, char** out) {
    return guard([&] {
        require(t != nullptr && out != nullptr, "null argument");
        *out = dup(dump(fcz::io::to_json(t->v)));
    });
}

fcz_status fcz_tensor_to_dense(const fcz_tensor* t, fcz_dense** out) {
    return guard([&] {
        require(t != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_dense>(fcz::materialize(t->v));
    });
}

double fcz_tensor_l1_norm(const fcz_tensor* t) { return t != nullptr ? t->v.l1_norm() : 0.0; }
void fcz_tensor_destroy(fcz_tensor* t) { delete t; }

fcz_status fcz_dense_create(double origin_x, double step_x, size_t count_x, double origin_y, double step_y,
                            size_t count_y, const double* values, fcz_dense** out) {
    return guard([&] {
        require(out != nullptr && values != nullptr, "null argument");
        fcz::Grid1D gx(origin_x, step_x, count_x);
        fcz::Grid1D gy(origin_y, step_y, count_y);
        *out = wrap<fcz_dense>(fcz::DenseFunction2D(gx, gy, std::vector<double>(values, values + count_x * count_y)));
    });
}

fcz_status fcz_dense_from_json(const char* json, fcz_dense** out) {
    return guard([&] {
        require(json != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_dense>(fcz::io::dense_or_tensor_from_json(fcz::io::parse(json)));
    });
}

fcz_status fcz_dense_to_json(const fcz_dense* d, char** out) {
    return guard([&] {
        require(d != nullptr && out != nullptr, "null argument");
        *out = dup(dump(fcz::io::to_json(d->v)));
    });
}

fcz_status fcz_dense_to_csv(const fcz_dense* d, char** out) {
    return guard([&] {
        require(d != nullptr && out != nullptr, "null argument");
        *out = dup(fcz::io::dense_to_csv(d->v));
    });
}

size_t fcz_dense_count_x(const fcz_dense* d) { return d != nullptr ? d->v.count_x() : 0; }
size_t fcz_dense_count_y(const fcz_dense* d) { return d != nullptr ? d->v.count_y() : 0; }
const double* fcz_dense_values(const fcz_dense* d) { return d != nullptr ? d->v.values().data() : nullptr; }
void fcz_dense_destroy(fcz_dense* d) { delete d; }

fcz_status fcz_config_default(int strict, fcz_config** out) {
    return guard([&] {
        require(out != nullptr, "null argument");
        *out = wrap<fcz_config>(fcz::default_config(strict != 0));
    });
}

fcz_status fcz_config_from_json(const char* json, fcz_config** out) {
    return guard([&] {
        require(json != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_config>(fcz::io::config_from_json(fcz::io::parse(json)));
    });
}

void fcz_config_destroy(fcz_config* c) { delete c; }

fcz_status fcz_decompose_1d(const fcz_signal* f, double gamma, char** json, int* invariants_ok) {
    return guard([&] {
        require(f != nullptr && json != nullptr, "null argument");
        const fcz::CZDecomposition d = fcz::cz_decompose_1d(f->v, gamma);
        const fcz::CZReport r = fcz::verify_cz_invariants(d, f->v);
        fcz::io::Json j = fcz::io::to_json(d);
        j["report"] = fcz::io::to_json(r);
        *json = dup(dump(j));
        if (invariants_ok != nullptr) *invariants_ok = r.all_passed() ? 1 : 0;
    });
}

fcz_status fcz_fiberwise_decompose(const fcz_tensor* f, double gamma, unsigned threads, char** json) {
    return guard([&] {
        require(f != nullptr && json != nullptr, "null argument");
        *json = dup(dump(fcz::io::to_json(fcz::fiberwise_decompose(f->v, gamma, threads))));
    });
}

fcz_status fcz_apply_pi(const fcz_signal* f, const fcz_signal* g, const fcz_config* c, fcz_signal** out) {
    return guard([&] {
        require(f != nullptr && g != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_signal>(fcz::paraproduct_pi(f->v, g->v, config_or_default(c)));
    });
}

fcz_status fcz_apply_T(const fcz_dense* f, const fcz_dense* g, const fcz_config* c, unsigned threads,
                       fcz_dense** out) {
    return guard([&] {
        require(f != nullptr && g != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_dense>(fcz::paraproduct_T(f->v, g->v, config_or_default(c), threads));
    });
}

fcz_status fcz_apply_T_fiberwise(const fcz_tensor* f, const fcz_dense* g, const fcz_config* c, unsigned threads,
                                 fcz_dense** out) {
    return guard([&] {
        require(f != nullptr && g != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_dense>(fcz::paraproduct_T_fiberwise(f->v, g->v, config_or_default(c), threads));
    });
}

fcz_status fcz_apply_T1(const fcz_dense* h, const fcz_dense* g, const fcz_config* c, fcz_dense** out) {
    return guard([&] {
        require(h != nullptr && g != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_dense>(fcz::dual_T1(h->v, g->v, config_or_default(c)));
    });
}

fcz_status fcz_apply_T2(const fcz_dense* f, const fcz_dense* h, const fcz_config* c, fcz_dense** out) {
    return guard([&] {
        require(f != nullptr && h != nullptr && out != nullptr, "null argument");
        *out = wrap<fcz_dense>(fcz::dual_T2(f->v, h->v, config_or_default(c)));
    });
}

fcz_status fcz_maximal_axis(const fcz_dense* g, fcz_axis axis, fcz_dense** out) {
    return guard([&] {
        require(g != nullptr && out != nullptr, "null argument");
        require(axis == FCZ_AXIS_X || axis == FCZ_AXIS_Y, "axis must be FCZ_AXIS_X or FCZ_AXIS_Y");
        *out = wrap<fcz_dense>(fcz::hl_maximal_axis(g->v, axis == FCZ_AXIS_X ? fcz::Axis::X : fcz::Axis::Y));
    });
}

fcz_status fcz_inner_product(const fcz_dense* a, const fcz_dense* b, double* out) {
    return guard([&] {
        require(a != nullptr && b != nullptr && out != nullptr, "null argument");
        *out = fcz::inner_product(a->v, b->v);
    });
}

fcz_status fcz_lp_norm(const fcz_dense* f, double p, double* out) {
    return guard([&] {
        require(f != nullptr && out != nullptr, "null argument");
        *out = fcz::lp_norm(f->v, p);
    });
}

fcz_status fcz_filter_profile_csv(const char* kind, const fcz_config* c, double t, char** csv) {
    return guard([&] {
        require(kind != nullptr && csv != nullptr, "null argument");
        const std::string k = kind;
        require(k == "psi" || k == "phi", "filter kind must be 'psi' or 'phi'");
        const fcz::ParaproductConfig& cfg = config_or_default(c);
        const fcz::MotherFilter& mother = k == "psi" ? cfg.psi : cfg.phi;
        if (t == 1.0) {
            *csv = dup(fcz::io::signal_to_csv(mother.profile()));
        } else {
            *csv = dup(fcz::io::signal_to_csv(fcz::DilatedFilter(mother, t, mother.profile().grid().step()).as_function()));
        }
    });
}

fcz_status fcz_verify(const char* suite, uint64_t seed, unsigned threads, char** report, int* passed) {
    return guard([&] {
        require(suite != nullptr && report != nullptr, "null argument");
        const auto reports = fcz::run_verify(suite, seed, threads);
        fcz::io::Json arr = fcz::io::Json::array();
        bool ok = true;
        for (const auto& r : reports) {
            arr.push_back(fcz::to_json(r));
            ok = ok && r.passed();
        }
        const fcz::io::Json j{{"suite", suite}, {"seed", seed}, {"suites", arr}, {"passed", ok}};
        *report = dup(dump(j));
        if (passed != nullptr) *passed = ok ? 1 : 0;
    });
}

fcz_status fcz_sweep(const char* name, const char* config_json, unsigned threads, char** report, char** csv,
                     int* passed) {
    return guard([&] {
        require(name != nullptr && report != nullptr, "null argument");
        fcz::ExperimentConfig cfg =
            fcz::experiment_config_from_json(fcz::io::parse(config_json != nullptr ? config_json : "{}"));
        cfg.threads = threads;
        const fcz::ExperimentResult r = fcz::run_experiment(name, cfg);
        fcz::io::Json j = fcz::to_json(r);
        j["slope"] = r.fit.slope;
        j["seed"] = cfg.seed;
        std::string csv_text = csv != nullptr ? fcz::experiment_csv(r) : std::string();
        char* rep = dup(dump(j));
        if (csv != nullptr) {
            try {
                *csv = dup(csv_text);
            } catch (...) {
                std::free(rep);
                throw;
            }
        }
        *report = rep;
        if (passed != nullptr) *passed = r.passed() ? 1 : 0;
    });
}

} // extern "C"
