/*
 * Text format for matrices: JSON nested arrays of [re, im] pairs, row-major.
 * See docs/matrix.schema for the documented schema.
 */
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tcorr/matrix.hpp"

namespace tcorr {

inline nlohmann::json to_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix json: expected rows array");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j.at(0).size());
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto& row = j.at(i);
        if (static_cast<int>(row.size()) != cols)
            throw std::invalid_argument("matrix json: ragged rows");
        for (int k = 0; k < cols; ++k) {
            const auto& entry = row.at(k);
            if (!entry.is_array() || entry.size() != 2)
                throw std::invalid_argument("matrix json: entries must be [re, im] pairs");
            m(i, k) = complexd(entry.at(0).get<double>(), entry.at(1).get<double>());
        }
    }
    return m;
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
    nlohmann::json j;
    in >> j;
    return matrix_from_json(j);
}

inline void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write matrix file: " + path);
    out << to_json(m).dump(1) << "\n";
}

}  // namespace tcorr
