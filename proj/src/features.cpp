#include "lsvv/features.hpp"

#include "json_eigen.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace lsvv {

FeatureMap::FeatureMap(RffMap map) : map_(std::move(map)) {
    const auto& rff = std::get<RffMap>(map_);
    if (!(rff.sigma > 0.0)) {
        throw parameter_error(fmt::format("RFF bandwidth must be positive, got {}", rff.sigma));
    }
    if (rff.omega.cols() != rff.offset.size() || rff.omega.cols() < 1) {
        throw dimension_error("RFF frequency matrix and offset disagree in feature count");
    }
}

Index FeatureMap::input_dim() const noexcept {
    if (const auto* id = std::get_if<IdentityMap>(&map_)) {
        return id->dim;
    }
    return std::get<RffMap>(map_).omega.rows();
}

Index FeatureMap::output_dim() const noexcept {
    if (const auto* id = std::get_if<IdentityMap>(&map_)) {
        return id->dim;
    }
    return std::get<RffMap>(map_).omega.cols();
}

Matrix FeatureMap::apply(const Matrix& X) const {
    if (X.cols() != input_dim()) {
        throw dimension_error(fmt::format("feature map expects {} input columns, got {}", input_dim(), X.cols()));
    }
    if (is_identity()) {
        return X;
    }
    const auto& rff = std::get<RffMap>(map_);
    const double scale = std::sqrt(2.0 / static_cast<double>(rff.omega.cols()));
    Matrix projected = X * rff.omega;
    projected.rowwise() += rff.offset.transpose();
    return scale * projected.array().cos().matrix();
}

FeatureMap build_rff(Index input_dim, Index feature_count, double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0)) {
        throw parameter_error(fmt::format("RFF bandwidth must be positive, got {}", sigma));
    }
    if (feature_count < 1 || input_dim < 0) {
        throw parameter_error(fmt::format("invalid RFF shape {} x {}", input_dim, feature_count));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> frequency(0.0, 1.0 / sigma);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    RffMap rff;
    rff.sigma = sigma;
    rff.seed = seed;
    rff.omega.resize(input_dim, feature_count);
    rff.offset.resize(feature_count);
    for (Index c = 0; c < feature_count; ++c) {
        for (Index r = 0; r < input_dim; ++r) {
            rff.omega(r, c) = frequency(rng);
        }
    }
    for (Index c = 0; c < feature_count; ++c) {
        rff.offset(c) = phase(rng);
    }
    return FeatureMap(std::move(rff));
}

Matrix gram(const FeatureMap& map, const Matrix& X) {
    if (X.rows() < 1) {
        throw dimension_error("gram: need at least one sample");
    }
    const Matrix phi = map.apply(X);
    Matrix K = (phi * phi.transpose()) / static_cast<double>(X.rows());
    return 0.5 * (K + K.transpose());
}

void to_json(nlohmann::json& j, const FeatureMap& map) {
    if (const auto* rff = map.rff()) {
        j = {{"kind", "rff"},
             {"sigma", rff->sigma},
             {"seed", rff->seed},
             {"omega", detail::matrix_to_json(rff->omega)},
             {"offset", detail::vector_to_json(rff->offset)}};
    } else {
        j = {{"kind", "identity"}, {"dim", map.input_dim()}};
    }
}

FeatureMap feature_map_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "identity") {
        return FeatureMap::identity(j.at("dim").get<Index>());
    }
    if (kind == "rff") {
        RffMap rff;
        rff.sigma = j.at("sigma").get<double>();
        rff.seed = j.at("seed").get<std::uint64_t>();
        rff.omega = detail::matrix_from_json(j.at("omega"));
        rff.offset = detail::vector_from_json(j.at("offset"));
        return FeatureMap(std::move(rff));
    }
    throw parse_error(fmt::format("unknown feature map kind '{}'", kind), 0);
}

}  // namespace lsvv
