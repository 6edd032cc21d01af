#pragma once

#include "flame/config.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace flame {

inline constexpr int checkpoint_format_version = 1;

struct Checkpoint {
    int format_version = checkpoint_format_version;
    FrontState state;
    std::optional<RunConfig> config;
    TurbulenceField turbulence;
    long step = 0;
    std::string config_hash;
};

nlohmann::json state_to_json(const FrontState& s);
FrontState state_from_json(const nlohmann::json& j);
nlohmann::json turbulence_to_json(const TurbulenceField& t);
TurbulenceField turbulence_from_json(const nlohmann::json& j);

nlohmann::json checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace flame
