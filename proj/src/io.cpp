#include "fibercz/io.hpp"

#include "fibercz/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fcz::io {

namespace {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("bad field '") + key + "': " + e.what());
    }
}

} // namespace

Json to_json(const Grid1D& g) {
    return Json{{"origin", g.origin()}, {"step", g.step()}, {"count", g.count()}};
}

Grid1D grid_from_json(const Json& j) {
    return Grid1D(field<double>(j, "origin"), field<double>(j, "step"), field<std::size_t>(j, "count"));
}

Json to_json(const SampledFunction1D& f) {
    Json j = to_json(f.grid());
    j["values"] = std::vector<double>(f.values().begin(), f.values().end());
    return j;
}

SampledFunction1D signal_from_json(const Json& j) {
    return SampledFunction1D(grid_from_json(j), field<std::vector<double>>(j, "values"));
}

Json to_json(const TensorFunction2D& f) {
    Json terms = Json::array();
    for (const auto& t : f.terms()) {
        terms.push_back(Json{{"values", std::vector<double>(t.fiber.values().begin(), t.fiber.values().end())},
                             {"indexSet", t.index_set}});
    }
    return Json{{"gridX", to_json(f.grid_x())}, {"gridY", to_json(f.grid_y())}, {"terms", terms}};
}

TensorFunction2D tensor_from_json(const Json& j) {
    const Grid1D gx = grid_from_json(field<Json>(j, "gridX"));
    const Grid1D gy = grid_from_json(field<Json>(j, "gridY"));
    std::vector<TensorTerm> terms;
    for (const auto& t : field<Json>(j, "terms")) {
        terms.push_back(TensorTerm{SampledFunction1D(gx, field<std::vector<double>>(t, "values")),
                                   field<std::vector<std::size_t>>(t, "indexSet")});
    }
    return TensorFunction2D(gx, gy, std::move(terms));
}

Json to_json(const DenseFunction2D& f) {
    Json rows = Json::array();
    for (std::size_t n = 0; n < f.count_y(); ++n) {
        rows.push_back(std::vector<double>(f.row(n).begin(), f.row(n).end()));
    }
    return Json{{"gridX", to_json(f.grid_x())}, {"gridY", to_json(f.grid_y())}, {"values", rows}};
}

DenseFunction2D dense_from_json(const Json& j) {
    const Grid1D gx = grid_from_json(field<Json>(j, "gridX"));
    const Grid1D gy = grid_from_json(field<Json>(j, "gridY"));
    const auto rows = field<std::vector<std::vector<double>>>(j, "values");
    if (rows.size() != gy.count()) throw Error(ErrorCode::Parse, "dense document needs one row per y index");
    std::vector<double> flat;
    flat.reserve(gx.count() * gy.count());
    for (const auto& row : rows) {
        if (row.size() != gx.count()) throw Error(ErrorCode::Parse, "dense row length does not match gridX count");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return DenseFunction2D(gx, gy, std::move(flat));
}

DocumentKind detect_kind(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Parse, "function document must be a JSON object");
    if (j.contains("terms")) return DocumentKind::Tensor;
    if (j.contains("gridX")) return DocumentKind::Dense;
    if (j.contains("values")) return DocumentKind::Signal;
    throw Error(ErrorCode::Parse, "unrecognized function document");
}

DenseFunction2D dense_or_tensor_from_json(const Json& j) {
    switch (detect_kind(j)) {
    case DocumentKind::Tensor:
        return materialize(tensor_from_json(j));
    case DocumentKind::Dense:
        return dense_from_json(j);
    case DocumentKind::Signal:
        break;
    }
    throw Error(ErrorCode::Parse, "expected a 2D (dense or tensor) document");
}

Json to_json(const CZDecomposition& d) {
    Json atoms = Json::array();
    for (const auto& a : d.atoms) {
        atoms.push_back(Json{{"generation", a.interval.generation}, {"offset", a.interval.offset}, {"values", a.values}});
    }
    return Json{{"gamma", d.gamma}, {"good", to_json(d.good)}, {"atoms", atoms}};
}

Json to_json(const CZReport& r) {
    return Json{
        {"goodL1Ratio", {{"measured", r.good_l1_ratio}, {"limit", 1.0}, {"passed", r.good_l1_ok}}},
        {"goodSupRatio", {{"measured", r.good_sup_ratio}, {"limit", kGoodSupConstant}, {"passed", r.good_sup_ok}}},
        {"measureRatio", {{"measured", r.measure_ratio}, {"limit", 1.0}, {"passed", r.measure_ok}}},
        {"maxAtomMean", {{"measured", r.max_atom_mean}, {"limit", kAtomMeanTolerance}, {"passed", r.atom_mean_ok}}},
        {"maxAtomL1Ratio", {{"measured", r.max_atom_l1_ratio}, {"limit", kAtomL1Constant}, {"passed", r.atom_l1_ok}}},
        {"reconstructionError",
         {{"measured", r.reconstruction_error}, {"limit", kReconstructionTolerance}, {"passed", r.reconstruction_ok}}},
        {"disjoint", r.disjoint_ok},
        {"maximal", r.maximal_ok},
        {"passed", r.all_passed()},
    };
}

Json to_json(const FiberDecomposition& d) {
    Json terms = Json::array();
    const auto& t = d.good_part.terms();
    for (std::size_t j = 0; j < t.size(); ++j) {
        terms.push_back(Json{{"indexSet", t[j].index_set}, {"decomposition", to_json(d.per_term[j])}});
    }
    const ExceptionalSet ex = exceptional_set(d);
    return Json{{"gamma", d.gamma},
                {"goodPart", to_json(d.good_part)},
                {"terms", terms},
                {"exceptionalSet", {{"measure", ex.measure}, {"rowMeasure", ex.row_measure}}}};
}

ParaproductConfig config_from_json(const Json& j) {
    if (!j.is_null() && !j.is_object()) throw Error(ErrorCode::Parse, "operator config must be an object");
    const Json cfg = j.is_null() ? Json::object() : j;
    const double step = cfg.value("profileStep", 1.0 / 64.0);
    const double psi_r = cfg.value("psiRadius", kDefaultSupportRadius);
    const double phi_r = cfg.value("phiRadius", kDefaultSupportRadius);
    const int decay = cfg.value("decayOrder", kDefaultDecayOrder);
    const Grid1D profile_grid(0.0, step, 1);
    ParaproductConfig out;
    out.psi = make_mother_psi(psi_r, profile_grid, decay);
    out.phi = make_mother_phi(phi_r, profile_grid, decay);
    out.strict = cfg.value("strict", false);
    if (cfg.contains("ladder")) {
        const Json& l = cfg.at("ladder");
        out.ladder = ScaleLadder(field<int>(l, "jMin"), field<int>(l, "jMax"));
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string dense_to_csv(const DenseFunction2D& f) {
    std::string out;
    for (std::size_t n = 0; n < f.count_y(); ++n) {
        const auto row = f.row(n);
        for (std::size_t m = 0; m < row.size(); ++m) {
            if (m) out += ',';
            out += format_number(row[m]);
        }
        out += '\n';
    }
    return out;
}

std::string signal_to_csv(const SampledFunction1D& f) {
    std::string out = "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out += format_number(f.grid().point(i)) + ',' + format_number(f[i]) + '\n';
    }
    return out;
}

std::string weak_to_csv(const WeakNormEstimate& w) {
    std::string out = "alpha,measure\n";
    for (std::size_t k = 0; k < w.alphas.size(); ++k) {
        out += format_number(w.alphas[k]) + ',' + format_number(w.measures[k]) + '\n';
    }
    return out;
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << text;
}

} // namespace fcz::io
