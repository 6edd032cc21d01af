#pragma once

#include "flame/evolution.hpp"
#include "flame/turbulence.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <string>

namespace flame {

struct InitialConfig {
    double radius = 1.0;
    Vec2 center = Vec2::Zero();
    std::vector<Perturbation> modes;
};

struct TurbulenceConfig {
    bool enabled = false;
    double u_rms = 0.0;
    double integral_scale = 1.0;
    int n_modes = 64;
    double spectrum_exponent = -5.0 / 3.0;
};

struct OutputConfig {
    std::string directory = "flame_output";
    int snapshot_every = 0;   // 0 writes only the first and last snapshot
    int timeseries_every = 1;
    int checkpoint_every = 0; // 0 disables periodic checkpoints
};

struct RunConfig {
    PhysicalParams physical;
    InitialConfig initial;
    int n_markers = 256;
    StepConfig numerical;
    TurbulenceConfig turbulence;
    OutputConfig output;
    std::uint64_t seed = 0;

    void validate() const;
};

// Parses a JSON config. Errors name the offending line or key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

nlohmann::json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

// Stable 64-bit FNV-1a hash of the canonical JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& c);

FrontState initial_state(const RunConfig& c);
// Null pointer result means no external flow.
std::unique_ptr<TurbulenceField> make_turbulence(const RunConfig& c);

}  // namespace flame
