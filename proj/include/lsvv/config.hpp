#pragma once

#include "lsvv/experiment.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace lsvv {

// Experiment configuration as a flat JSON object. Keys match the CLI flag names.
enum class FieldKind { String, Integer, Unsigned, Real, Boolean, RealList, StringList };

struct ConfigField {
    std::string name;
    FieldKind kind;
    std::string help;
};

[[nodiscard]] const std::vector<ConfigField>& config_fields();

/// Unknown keys are rejected. `grid` ("reduced" or "paper") picks the base candidate sets;
/// explicit `tau_A`, `tau_I`, `tau_S`, `theta_fraction`, `sigma` lists replace single sets.
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json config_to_json(const ExperimentConfig& config);

/// Parses `text` according to the kind of field `name` and stores it in `j`.
/// List fields take comma-separated values; a scalar becomes a one-element list.
void apply_override(nlohmann::json& j, std::string_view name, std::string_view text);

[[nodiscard]] nlohmann::json read_json_file(const std::string& path);

}  // namespace lsvv
