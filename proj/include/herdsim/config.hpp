#pragma once

#include "herdsim/analysis.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>

namespace herdsim {

enum class NumericMode { Exact, Float };
enum class OutputFormat { Json, Csv };

struct RunConfig {
    ModelParams model;
    CongestionSpec congestion;
    int horizon = 0;  // 0 = variant default (10 baseline, 7 appendix)
    Tiebreak tiebreak = Tiebreak::PreferR;
    NumericMode numeric_mode = NumericMode::Exact;
    OutputFormat format = OutputFormat::Json;
    std::uint64_t seed = 0;

    int effective_horizon() const {
        if (horizon > 0) return horizon;
        return model.variant == SignalVariant::Baseline4 ? 10 : 7;
    }
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);

// Built-in reproduction scenarios: example1a, example1b, appendix, herd_demo.
RunConfig bundled_config(const std::string& name);

}  // namespace herdsim
