#include "flame/frankel.hpp"
#include "flame/linear_theory.hpp"
#include "flame/output.hpp"
#include "flame/validation.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace flame;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_error = 2;

struct LastStep {
    StepRecord rec;
    FrontState state;
    GeometryFrame frame;
    TraceSolution trace;
    Field v_s;
    bool have = false;
};

void dump_failure(const std::filesystem::path& dir, const RunConfig& cfg, const LastStep& last) {
    if (!last.have) return;
    const auto file = dir / "failure_snapshot.csv";
    write_snapshot(file, cfg, last.state, last.frame, last.trace.v_s.size() ? &last.trace : nullptr,
                   last.v_s.size() ? &last.v_s : nullptr);
    std::cerr << "last good state written to " << file << '\n';
}

json summary_json(const RunSummary& s, const std::filesystem::path& dir) {
    return {{"output_dir", dir.string()},     {"steps", s.steps},
            {"tau", s.final_state.tau},       {"perimeter", s.perimeter},
            {"area", s.area},                 {"mean_Vs", s.mean_vs},
            {"mode_amplitudes", s.amplitudes}, {"wall_seconds", s.wall_seconds}};
}

int cmd_dispersion(double theta, double k, double lambda_c) {
    const DispersionResult r = lambda_c > 0.0 ? stabilized_growth_rate(theta, k, lambda_c)
                                              : dl_growth_rate(theta, k);
    json j = {{"theta", theta},
              {"k", k},
              {"lambda_c", lambda_c},
              {"sigma", r.sigma},
              {"sigma_other", r.sigma_other},
              {"residual", r.residual},
              {"small_expansion_sigma", small_expansion_rate(theta, k)}};
    std::cout << j.dump(2) << '\n';
    return exit_ok;
}

int cmd_run(const std::string& config_path, const std::string& resume, bool force) {
    const RunConfig cfg = load_config(config_path);
    const auto dir = resolve_output_dir(cfg);
    std::unique_ptr<TurbulenceField> turbulence = make_turbulence(cfg);

    FrontState state = initial_state(cfg);
    long first_step = 0;
    std::optional<double> resume_tau;
    if (!resume.empty()) {
        Checkpoint ck = load_checkpoint(resume);
        if (ck.config_hash != config_hash(cfg)) {
            if (!force) {
                std::cerr << "error: checkpoint was written with a different configuration (hash "
                          << ck.config_hash << " vs " << config_hash(cfg)
                          << "); pass --force to resume anyway\n";
                return exit_error;
            }
            std::cerr << "warning: resuming despite configuration hash mismatch\n";
        }
        state = ck.state;
        first_step = ck.step;
        resume_tau = ck.state.tau;
        if (turbulence) *turbulence = ck.turbulence;
    }

    OutputWriter writer(dir, cfg, turbulence.get(), "full", resume_tau);
    json extra;
    if (!resume.empty()) extra["resumed_from"] = resume;
    writer.write_metadata(extra);

    LastStep last;
    RunObserver obs;
    obs.on_step = [&](const StepRecord& rec, const FrontState& s, const GeometryFrame& f,
                      const TraceSolution& t) {
        writer.on_step(rec, s, f, &t);
        last.rec = rec;
        last.state = s;
        last.frame = f;
        last.trace = t;
        last.have = true;
    };
    obs.on_checkpoint = [&](const FrontState& s, long step) {
        const int every = cfg.output.checkpoint_every;
        if (every > 0 && step % every == 0) writer.checkpoint(s, step);
    };

    try {
        const RunSummary sum = run(state, cfg.physical, cfg.numerical, turbulence.get(), obs, first_step);
        writer.finish(last.rec, last.state, last.frame, &last.trace);
        writer.checkpoint(sum.final_state, first_step + sum.steps);
        writer.write_summary(sum);
        std::cout << summary_json(sum, dir).dump(2) << '\n';
    } catch (const SolveError& e) {
        write_snapshot(dir / "failure_markers.csv", cfg, make_front(e.markers()),
                       build_frame(e.markers()), nullptr, nullptr);
        throw;
    } catch (const GeometryError&) {
        dump_failure(dir, cfg, last);
        throw;
    }
    return exit_ok;
}

int cmd_frankel(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const auto dir = resolve_output_dir(cfg);
    OutputWriter writer(dir, cfg, nullptr, "frankel");
    writer.write_metadata();

    LastStep last;
    auto on_step = [&](const StepRecord& rec, const FrontState& s) {
        const GeometryFrame f = build_frame(s.markers);
        const Field vs = frankel_front_speed(f, cfg.physical.theta);
        writer.on_step(rec, s, f, nullptr, &vs);
        last.rec = rec;
        last.state = s;
        last.frame = f;
        last.v_s = vs;
        last.have = true;
    };
    try {
        const RunSummary sum = frankel_run(initial_state(cfg), cfg.physical.theta, cfg.numerical, on_step);
        writer.finish(last.rec, last.state, last.frame, nullptr, &last.v_s);
        writer.write_summary(sum);
        std::cout << summary_json(sum, dir).dump(2) << '\n';
    } catch (const GeometryError&) {
        dump_failure(dir, cfg, last);
        throw;
    }
    return exit_ok;
}

int cmd_validate(bool full) {
    const auto results = run_suite(full ? SuiteMode::full : SuiteMode::quick, &std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? exit_ok : exit_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-integral simulator for 2D premixed flame fronts"};
    app.set_version_flag("--version", std::string(FLAME_VERSION));
    app.require_subcommand(1);

    double theta = 0.0, k = 0.0, lambda_c = 0.0;
    auto* disp = app.add_subcommand("dispersion", "Linear growth rate of a planar front");
    disp->add_option("--theta", theta, "Density ratio")->required();
    disp->add_option("--k", k, "Wavenumber")->required();
    disp->add_option("--lambda-c", lambda_c, "Cutoff wavelength (0 for none)");

    std::string config, resume;
    bool force = false;
    auto* runc = app.add_subcommand("run", "Evolve a front with the full solver");
    runc->add_option("--config", config, "JSON configuration file")->required();
    runc->add_option("--resume", resume, "Checkpoint file to continue from");
    runc->add_flag("--force", force, "Resume even if the configuration changed");

    auto* frank = app.add_subcommand("frankel", "Evolve a front with the small-expansion model");
    frank->add_option("--config", config, "JSON configuration file")->required();

    bool quick = false, full = false;
    auto* val = app.add_subcommand("validate", "Run the acceptance suite (quick by default)");
    auto* q = val->add_flag("--quick", quick, "Skip the long growth-rate runs");
    val->add_flag("--full", full, "Run every criterion")->excludes(q);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_error;
    }

    try {
        if (disp->parsed()) return cmd_dispersion(theta, k, lambda_c);
        if (runc->parsed()) return cmd_run(config, resume, force);
        if (frank->parsed()) return cmd_frankel(config);
        if (val->parsed()) return cmd_validate(full);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
