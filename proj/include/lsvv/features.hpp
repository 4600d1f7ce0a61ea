#pragma once

#include "lsvv/core.hpp"

#include <nlohmann/json_fwd.hpp>

#include <variant>

namespace lsvv {

/// phi(x) = x; the linear hypothesis space.
struct IdentityMap {
    Index dim = 0;
};

/// Random Fourier features for the Gaussian kernel exp(-|x - x'|^2 / 2 sigma^2):
/// phi(x) = sqrt(2 / D) cos(omega^T x + offset).
struct RffMap {
    Matrix omega;   // d x D frequency matrix
    Vector offset;  // length D, uniform on [0, 2 pi]
    double sigma = 1.0;
    std::uint64_t seed = 0;
};

/// Immutable feature map. Samples are rows on both sides of `apply`.
class FeatureMap {
  public:
    explicit FeatureMap(IdentityMap map) : map_(map) {}
    explicit FeatureMap(RffMap map);

    [[nodiscard]] static FeatureMap identity(Index dim) { return FeatureMap(IdentityMap{dim}); }

    [[nodiscard]] Index input_dim() const noexcept;
    [[nodiscard]] Index output_dim() const noexcept;
    [[nodiscard]] bool is_identity() const noexcept { return std::holds_alternative<IdentityMap>(map_); }
    [[nodiscard]] const RffMap* rff() const noexcept { return std::get_if<RffMap>(&map_); }

    /// n x d input to n x output_dim() features.
    [[nodiscard]] Matrix apply(const Matrix& X) const;

  private:
    std::variant<IdentityMap, RffMap> map_;
};

/// Draws omega ~ N(0, sigma^-2) entrywise and offset ~ U[0, 2 pi]. Deterministic in `seed`.
[[nodiscard]] FeatureMap build_rff(Index input_dim, Index feature_count, double sigma, std::uint64_t seed);

[[nodiscard]] inline Matrix apply(const FeatureMap& map, const Matrix& X) { return map.apply(X); }

/// Normalized Gram matrix (1/n) Phi Phi^T of the mapped rows of `X`.
[[nodiscard]] Matrix gram(const FeatureMap& map, const Matrix& X);

void to_json(nlohmann::json& j, const FeatureMap& map);
[[nodiscard]] FeatureMap feature_map_from_json(const nlohmann::json& j);

}  // namespace lsvv
