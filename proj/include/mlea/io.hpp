// io.hpp: JSON matrix serialization and the CSV trace format.
//
// Matrix files: {"dim": d, "entries": [[re, im], ...]} with entries row-major.
// Trace CSV: header "t,loss,cum_regret,bound", one row per round, floats
// printed with 17 significant digits so that reruns are byte-comparable.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlea/errors.hpp"
#include "mlea/learners.hpp"
#include "mlea/matrix.hpp"
#include "mlea/spectral.hpp"

namespace mlea {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ------------------------------- matrix JSON ---------------------------------

inline nlohmann::json to_json(const HermitianMatrix& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (const cplx& v : m.data()) entries.push_back({v.real(), v.imag()});
    return nlohmann::json{{"dim", m.dim()}, {"entries", std::move(entries)}};
}

inline HermitianMatrix hermitian_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw config_error(path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "dim" && key != "entries") throw config_error(path + "." + key + ": unknown key");
    }
    if (!j.contains("dim") || !j.contains("entries"))
        throw config_error(path + ": requires dim and entries");
    const int d = j.at("dim").get<int>();
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != static_cast<size_t>(d) * d)
        throw config_error(path + ".entries: expected " + std::to_string(d * d) + " pairs");
    std::vector<cplx> raw;
    raw.reserve(entries.size());
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2)
            throw config_error(path + ".entries: each entry must be [re, im]");
        raw.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return HermitianMatrix::from_entries(d, raw);
}

inline DensityMatrix density_from_json(const nlohmann::json& j, const std::string& path) {
    return DensityMatrix::checked(hermitian_from_json(j, path));
}

// --------------------------------- trace CSV ---------------------------------

inline std::string trace_to_csv(const RegretTrace& trace) {
    std::string out = "t,loss,cum_regret,bound\n";
    for (const RegretTraceRow& row : trace.rows) {
        out += std::to_string(row.t);
        out += ',';
        out += format_g17(row.loss);
        out += ',';
        out += format_g17(row.cum_regret);
        out += ',';
        out += format_g17(row.bound);
        out += '\n';
    }
    return out;
}

// --------------------------------- file io -----------------------------------

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error("cannot open for writing: " + path);
    f << content;
    if (!f) throw error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline nlohmann::json json_from_file(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

}  // namespace mlea
