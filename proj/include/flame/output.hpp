#pragma once

#include "flame/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <string>

namespace flame {

// Writes metadata, time series, snapshots and checkpoints for one run directory.
class OutputWriter {
public:
    // On resume, time-series rows at or after resume_tau are dropped before appending.
    OutputWriter(std::filesystem::path dir, const RunConfig& config,
                 const TurbulenceField* turbulence, const std::string& solver,
                 std::optional<double> resume_tau = std::nullopt);

    void write_metadata(const nlohmann::json& extra = {});
    void on_step(const StepRecord& rec, const FrontState& state, const GeometryFrame& frame,
                 const TraceSolution* trace, const Field* v_s = nullptr);
    // Writes checkpoint_<step>.json and refreshes checkpoint_latest.json.
    void checkpoint(const FrontState& state, long step);
    void write_summary(const RunSummary& s);
    // Final time-series row (if not yet written) and a final snapshot.
    void finish(const StepRecord& rec, const FrontState& state, const GeometryFrame& frame,
                const TraceSolution* trace, const Field* v_s = nullptr);

    const std::filesystem::path& directory() const { return dir_; }

private:
    std::filesystem::path dir_;
    RunConfig config_;
    const TurbulenceField* turbulence_;
    std::string solver_;
    std::ofstream series_;
    bool force_snapshot_ = true;
    double last_tau_ = -1e300;

    void write_row(const StepRecord& rec);
    void snapshot(const StepRecord& rec, const FrontState& state, const GeometryFrame& frame,
                  const TraceSolution* trace, const Field* v_s);
};

void write_snapshot(const std::filesystem::path& file, const RunConfig& config,
                    const FrontState& state, const GeometryFrame& frame,
                    const TraceSolution* trace, const Field* v_s);

// Output directory: FLAME_OUTPUT_DIR if set, otherwise the configured one.
std::filesystem::path resolve_output_dir(const RunConfig& config);

}  // namespace flame
