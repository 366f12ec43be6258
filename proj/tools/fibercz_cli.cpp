// Command-line front end. Talks to the library only through the C API.
#include "fibercz/fibercz.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Failure {
    std::string message;
};

void check(fcz_status s) {
    if (s != FCZ_OK) throw Failure{fcz_last_error()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{"cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Failure{"cannot write '" + path + "'"};
}

struct CString {
    char* p = nullptr;
    ~CString() { fcz_string_free(p); }
    std::string str() const { return p != nullptr ? std::string(p) : std::string(); }
};

template <class T, void (*Destroy)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Destroy(p); }
};

using Signal = Handle<fcz_signal, fcz_signal_destroy>;
using Tensor = Handle<fcz_tensor, fcz_tensor_destroy>;
using Dense = Handle<fcz_dense, fcz_dense_destroy>;
using Config = Handle<fcz_config, fcz_config_destroy>;

enum class Doc { Signal, Tensor, Dense };

Doc classify(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Failure{std::string("invalid JSON: ") + e.what()};
    }
    if (!j.is_object()) throw Failure{"input must be a JSON object"};
    if (j.contains("terms")) return Doc::Tensor;
    if (j.contains("gridX")) return Doc::Dense;
    if (j.contains("values")) return Doc::Signal;
    throw Failure{"cannot tell the input document kind"};
}

void load_config(const std::string& path, Config& cfg) {
    if (path.empty()) {
        check(fcz_config_default(0, &cfg.p));
    } else {
        check(fcz_config_from_json(slurp(path).c_str(), &cfg.p));
    }
}

int run_decompose(const std::string& input, double gamma, unsigned threads, const std::string& out) {
    const std::string text = slurp(input);
    CString json;
    int ok = 1;
    if (classify(text) == Doc::Signal) {
        Signal f;
        check(fcz_signal_from_json(text.c_str(), &f.p));
        check(fcz_decompose_1d(f.p, gamma, &json.p, &ok));
    } else {
        Tensor f;
        check(fcz_tensor_from_json(text.c_str(), &f.p));
        check(fcz_fiberwise_decompose(f.p, gamma, threads, &json.p));
    }
    emit(out, json.str());
    return ok ? kExitOk : kExitFailed;
}

int run_apply(const std::string& op, const std::string& fpath, const std::string& gpath, const std::string& hpath,
              const std::string& cfg_path, unsigned threads, const std::string& out) {
    Config cfg;
    load_config(cfg_path, cfg);
    auto need = [](const std::string& path, const char* flag) {
        if (path.empty()) throw Failure{std::string("operator needs ") + flag};
        return slurp(path);
    };
    auto dense = [](const std::string& text, Dense& d) { check(fcz_dense_from_json(text.c_str(), &d.p)); };
    CString csv;
    if (op == "pi") {
        Signal f;
        Signal g;
        Signal r;
        check(fcz_signal_from_json(need(fpath, "--f").c_str(), &f.p));
        check(fcz_signal_from_json(need(gpath, "--g").c_str(), &g.p));
        check(fcz_apply_pi(f.p, g.p, cfg.p, &r.p));
        check(fcz_signal_to_csv(r.p, &csv.p));
        emit(out, csv.str());
        return kExitOk;
    }
    Dense result;
    if (op == "T") {
        const std::string ftext = need(fpath, "--f");
        Dense g;
        dense(need(gpath, "--g"), g);
        if (classify(ftext) == Doc::Tensor) {
            Tensor f;
            check(fcz_tensor_from_json(ftext.c_str(), &f.p));
            check(fcz_apply_T_fiberwise(f.p, g.p, cfg.p, threads, &result.p));
        } else {
            Dense f;
            dense(ftext, f);
            check(fcz_apply_T(f.p, g.p, cfg.p, threads, &result.p));
        }
    } else if (op == "T1") {
        Dense h;
        Dense g;
        dense(need(hpath, "--h"), h);
        dense(need(gpath, "--g"), g);
        check(fcz_apply_T1(h.p, g.p, cfg.p, &result.p));
    } else if (op == "T2") {
        Dense f;
        Dense h;
        dense(need(fpath, "--f"), f);
        dense(need(hpath, "--h"), h);
        check(fcz_apply_T2(f.p, h.p, cfg.p, &result.p));
    } else {
        throw Failure{"unknown operator '" + op + "'"};
    }
    check(fcz_dense_to_csv(result.p, &csv.p));
    emit(out, csv.str());
    return kExitOk;
}

int run_verify(const std::string& suite, std::uint64_t seed, unsigned threads, const std::string& out) {
    CString report;
    int passed = 0;
    check(fcz_verify(suite.c_str(), seed, threads, &report.p, &passed));
    emit(out, report.str());
    return passed ? kExitOk : kExitFailed;
}

std::string csv_path_for(const std::string& json_path) {
    const auto dot = json_path.rfind('.');
    const auto slash = json_path.rfind('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return json_path.substr(0, dot) + ".csv";
    return json_path + ".csv";
}

int run_sweep(const std::string& name, const std::string& cfg_path, unsigned threads, std::string out,
              std::string csv_out) {
    const std::string text = cfg_path.empty() ? std::string("{}") : slurp(cfg_path);
    if (out.empty()) {
        try {
            const auto j = nlohmann::json::parse(text);
            if (j.is_object() && j.contains("out")) out = j.at("out").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            // reported by the library below
        }
    }
    if (csv_out.empty() && !out.empty() && out != "-") csv_out = csv_path_for(out);
    CString report;
    CString csv;
    int passed = 0;
    check(fcz_sweep(name.c_str(), text.c_str(), threads, &report.p, csv_out.empty() ? nullptr : &csv.p, &passed));
    emit(out, report.str());
    if (!csv_out.empty()) emit(csv_out, csv.str());
    return passed ? kExitOk : kExitFailed;
}

int run_filters(const std::string& kind, double scale, const std::string& cfg_path, const std::string& out) {
    Config cfg;
    load_config(cfg_path, cfg);
    CString csv;
    check(fcz_filter_profile_csv(kind.c_str(), cfg.p, scale, &csv.p));
    emit(out, csv.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fiber-wise Calderon-Zygmund decomposition and bi-dimensional paraproduct toolkit"};
    app.require_subcommand(1);
    unsigned threads = 1;
    std::string out;
    app.add_option("--threads", threads, "worker threads (results do not depend on this)")->check(CLI::Range(1u, 256u));

    auto* decompose = app.add_subcommand("decompose", "CZ decomposition of a 1D signal or tensor function (JSON)");
    std::string input;
    double gamma = 0.0;
    decompose->add_option("--input,-i", input, "signal or tensor JSON")->required();
    decompose->add_option("--gamma", gamma, "threshold")->required();
    decompose->add_option("--out,-o", out, "output file (default stdout)");

    auto* apply = app.add_subcommand("apply", "evaluate pi, T, T1 or T2 (CSV)");
    std::string op;
    std::string fpath;
    std::string gpath;
    std::string hpath;
    std::string cfg_path;
    apply->add_option("--op", op, "pi, T, T1 or T2")->required()->check(CLI::IsMember({"pi", "T", "T1", "T2"}));
    apply->add_option("--f", fpath, "first operand");
    apply->add_option("--g", gpath, "second operand");
    apply->set_help_flag("--help", "print this help message and exit");
    apply->add_option("--h", hpath, "test function for the duals");
    apply->add_option("--config", cfg_path, "filter and ladder JSON");
    apply->add_option("--out,-o", out, "output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "run invariant suites (JSON report)");
    std::string suite = "all";
    std::uint64_t seed = 1;
    verify->add_option("--suite", suite, "czd, filters, operators, norms or all")
        ->check(CLI::IsMember({"czd", "filters", "operators", "norms", "all"}));
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--out,-o", out, "output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "run an experiment (JSON report, CSV plot data)");
    std::string experiment;
    std::string csv_out;
    sweep->add_option("--experiment,-e", experiment, "good_part, bad_set, h_l1, weak_type or atom_decay")
        ->required()
        ->check(CLI::IsMember({"good_part", "bad_set", "h_l1", "weak_type", "atom_decay"}));
    sweep->add_option("--config", cfg_path, "ExperimentConfig JSON");
    sweep->add_option("--out,-o", out, "report file (overrides the config's out)");
    sweep->add_option("--csv", csv_out, "plot data file");

    auto* filters = app.add_subcommand("filters", "filter profile as x,value CSV");
    std::string kind = "psi";
    double scale = 1.0;
    filters->add_option("--kind", kind, "psi or phi")->check(CLI::IsMember({"psi", "phi"}));
    filters->add_option("--scale", scale, "dilation t")->check(CLI::PositiveNumber);
    filters->add_option("--config", cfg_path, "filter and ladder JSON");
    filters->add_option("--out,-o", out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (decompose->parsed()) return run_decompose(input, gamma, threads, out);
        if (apply->parsed()) return run_apply(op, fpath, gpath, hpath, cfg_path, threads, out);
        if (verify->parsed()) return run_verify(suite, seed, threads, out);
        if (sweep->parsed()) return run_sweep(experiment, cfg_path, threads, out, csv_out);
        if (filters->parsed()) return run_filters(kind, scale, cfg_path, out);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return kExitUsage;
    }
    std::cerr << app.help();
    return kExitUsage;
}
