#pragma once

// JSON containers for matrices, reports and diagnostics, plus a small CSV
// writer with a documented, stable column order.

#include "csl/bos.hpp"
#include "csl/numerics.hpp"
#include "csl/solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csl {

using nlohmann::json;

inline json to_json(const CVector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back({v(i).real(), v(i).imag()});
    return arr;
}

inline CVector cvector_from_json(const json& arr) {
    CVector v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
        v(static_cast<Eigen::Index>(i)) =
            Complex(arr[i][0].get<double>(), arr[i][1].get<double>());
    return v;
}

inline json to_json(const CMatrix& M) {
    json entries = json::array(); // row-major [re, im] pairs
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            entries.push_back({M(r, c).real(), M(r, c).imag()});
    return {{"rows", M.rows()}, {"cols", M.cols()}, {"entries", entries}};
}

inline CMatrix cmatrix_from_json(const json& j) {
    Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const json& e = j.at("entries");
    if (static_cast<Eigen::Index>(e.size()) != rows * cols)
        throw std::invalid_argument("cmatrix_from_json: entry count mismatch");
    CMatrix M(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, ++k)
            M(r, c) = Complex(e[k][0].get<double>(), e[k][1].get<double>());
    return M;
}

inline json to_json(const SensingMatrix& S) {
    json points = json::array();
    for (const auto& p : S.provenance.points) points.push_back(p);
    json j = to_json(S.A);
    j["provenance"] = {{"system", S.provenance.system},
                       {"points", points},
                       {"seed", S.provenance.seed},
                       {"stream", S.provenance.stream},
                       {"mode", S.provenance.mode}};
    return j;
}

inline SensingMatrix sensing_matrix_from_json(const json& j) {
    SensingMatrix S;
    S.A = cmatrix_from_json(j);
    const json& p = j.at("provenance");
    S.provenance.system = p.at("system").get<std::string>();
    S.provenance.seed = p.at("seed").get<std::uint64_t>();
    S.provenance.stream = p.at("stream").get<std::uint64_t>();
    S.provenance.mode = p.at("mode").get<std::string>();
    for (const auto& pt : p.at("points"))
        S.provenance.points.push_back(pt.get<Point>());
    return S;
}

inline json to_json(const SolveReport& rep) {
    return {{"x", to_json(rep.x)},
            {"objective", rep.objective},
            {"residual", rep.residual},
            {"iterations", rep.iterations},
            {"converged", rep.converged},
            {"infeasible", rep.infeasible},
            {"duality_gap", rep.duality_gap}};
}

inline SolveReport solve_report_from_json(const json& j) {
    SolveReport rep;
    rep.x = cvector_from_json(j.at("x"));
    rep.objective = j.at("objective").get<double>();
    rep.residual = j.at("residual").get<double>();
    rep.iterations = j.at("iterations").get<int>();
    rep.converged = j.at("converged").get<bool>();
    rep.infeasible = j.at("infeasible").get<bool>();
    rep.duality_gap = j.at("duality_gap").get<double>();
    return rep;
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_json: cannot open " + path);
    out << j.dump(2) << '\n';
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_json: cannot open " + path);
    return json::parse(in);
}

/// Shortest-roundtrip formatting for doubles so CSV replays are
/// byte-identical.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim to shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& comment,
              const std::vector<std::string>& columns)
        : out_(path), columns_(columns) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        out_ << "# " << comment << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_.size())
            throw std::invalid_argument("CsvWriter: field count mismatch");
        for (std::size_t i = 0; i < fields.size(); ++i)
            out_ << fields[i] << (i + 1 < fields.size() ? "," : "\n");
    }

  private:
    std::ofstream out_;
    std::vector<std::string> columns_;
};

} // namespace csl
