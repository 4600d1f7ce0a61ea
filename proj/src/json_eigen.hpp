#pragma once

#include "lsvv/core.hpp"

#include <nlohmann/json.hpp>

namespace lsvv::detail {

// Matrices are stored as arrays of rows.
inline nlohmann::json matrix_to_json(const Matrix& m) {
    auto rows = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const auto& data = j.at("data");
    if (static_cast<Index>(data.size()) != rows) {
        throw parse_error("matrix row count does not match its data", 0);
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto& row = data.at(static_cast<std::size_t>(r));
        if (static_cast<Index>(row.size()) != cols) {
            throw parse_error("matrix column count does not match its data", 0);
        }
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
    }
    return m;
}

inline nlohmann::json vector_to_json(const Vector& v) {
    auto out = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

inline Vector vector_from_json(const nlohmann::json& j) {
    Vector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) {
        v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
    }
    return v;
}

}  // namespace lsvv::detail
