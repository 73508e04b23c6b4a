#pragma once

#include <nlohmann/json.hpp>

#include "arena/config.hpp"
#include "arena/reward.hpp"

namespace arena {

/// Full EnvConfig as JSON, every field present.
nlohmann::json to_json(const EnvConfig& c);
nlohmann::json to_json(const RewardConfig& c);

/// Overlays the keys present in `j` onto `base`. Unknown keys and wrongly
/// typed values throw ConfigError naming the offending key.
EnvConfig env_config_from_json(const nlohmann::json& j, EnvConfig base = {});
/// Accepts either an object of coefficients or {"preset": NAME, ...} where
/// the remaining keys override the preset.
RewardConfig reward_config_from_json(const nlohmann::json& j);

}  // namespace arena
