#include "flame/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace flame {

using nlohmann::json;

namespace {

json field_to_json(const Field& f) { return std::vector<double>(f.data(), f.data() + f.size()); }

Field field_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Field>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

json state_to_json(const FrontState& s) {
    return {{"tau", s.tau},
            {"x", field_to_json(s.markers.col(0))},
            {"y", field_to_json(s.markers.col(1))},
            {"psi", field_to_json(s.psi)},
            {"omega", field_to_json(s.omega)}};
}

FrontState state_from_json(const json& j) {
    FrontState s;
    s.tau = j.at("tau").get<double>();
    const Field x = field_from_json(j.at("x")), y = field_from_json(j.at("y"));
    if (x.size() != y.size()) throw FlameError("checkpoint: x and y lengths differ");
    s.markers.resize(x.size(), 2);
    s.markers.col(0) = x;
    s.markers.col(1) = y;
    s.psi = field_from_json(j.at("psi"));
    s.omega = field_from_json(j.at("omega"));
    if (s.psi.size() != x.size() || s.omega.size() != x.size())
        throw FlameError("checkpoint: field lengths differ from marker count");
    return s;
}

json turbulence_to_json(const TurbulenceField& t) {
    json modes = json::array();
    for (const auto& m : t.modes)
        modes.push_back({{"k", {m.k.x(), m.k.y()}}, {"a", {m.a.x(), m.a.y()}}, {"phase", m.phase}});
    return {{"u_rms", t.u_rms},
            {"integral_scale", t.integral_scale},
            {"spectrum_exponent", t.spectrum_exponent},
            {"seed", t.seed},
            {"modes", modes}};
}

TurbulenceField turbulence_from_json(const json& j) {
    TurbulenceField t;
    t.u_rms = j.at("u_rms").get<double>();
    t.integral_scale = j.at("integral_scale").get<double>();
    t.spectrum_exponent = j.at("spectrum_exponent").get<double>();
    t.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& m : j.at("modes")) {
        TurbulenceMode mode;
        mode.k = Vec2(m.at("k")[0].get<double>(), m.at("k")[1].get<double>());
        mode.a = Vec2(m.at("a")[0].get<double>(), m.at("a")[1].get<double>());
        mode.phase = m.at("phase").get<double>();
        t.modes.push_back(mode);
    }
    return t;
}

json checkpoint_to_json(const Checkpoint& c) {
    json j = {{"format_version", c.format_version},
              {"step", c.step},
              {"state", state_to_json(c.state)},
              {"turbulence", turbulence_to_json(c.turbulence)},
              {"config_hash", c.config_hash}};
    if (c.config) j["config"] = config_to_json(*c.config);
    return j;
}

Checkpoint checkpoint_from_json(const json& j) {
    Checkpoint c;
    try {
        c.format_version = j.at("format_version").get<int>();
        if (c.format_version != checkpoint_format_version)
            throw FlameError("unsupported checkpoint format version " +
                             std::to_string(c.format_version));
        c.step = j.at("step").get<long>();
        c.state = state_from_json(j.at("state"));
        c.turbulence = turbulence_from_json(j.at("turbulence"));
        c.config_hash = j.value("config_hash", std::string());
        if (j.contains("config")) c.config = config_from_json(j.at("config"));
    } catch (const json::exception& e) {
        throw FlameError(std::string("malformed checkpoint: ") + e.what());
    }
    return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw FlameError("cannot write checkpoint '" + path + "'");
        out << checkpoint_to_json(c).dump(1) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FlameError("cannot open checkpoint '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FlameError("checkpoint '" + path + "' is not valid JSON: " + e.what());
    }
    return checkpoint_from_json(j);
}

std::filesystem::path resolve_output_dir(const RunConfig& config) {
    if (const char* env = std::getenv("FLAME_OUTPUT_DIR"); env && *env) return env;
    return config.output.directory;
}

void write_snapshot(const std::filesystem::path& file, const RunConfig& config,
                    const FrontState& state, const GeometryFrame& frame,
                    const TraceSolution* trace, const Field* v_s) {
    std::ofstream out(file);
    if (!out) throw FlameError("cannot write snapshot '" + file.string() + "'");
    const int n = state.size();
    out << "# tau=" << num(state.tau) << ", theta=" << num(config.physical.theta)
        << ", lambda_c=" << num(config.physical.lambda_c) << ", N=" << n << '\n';
    out << "idx,x,y,phi_minus,V_s,psi,omega,Y,kappa\n";
    const std::string missing = "nan";
    for (int i = 0; i < n; ++i) {
        out << i << ',' << num(state.markers(i, 0)) << ',' << num(state.markers(i, 1)) << ',';
        out << (trace ? num(trace->phi_minus[i]) : missing) << ',';
        if (trace) out << num(trace->v_s[i]);
        else if (v_s) out << num((*v_s)[i]);
        else out << missing;
        out << ',' << num(state.psi[i]) << ',' << num(state.omega[i]) << ','
            << (trace ? num(trace->y[i]) : missing) << ',' << num(frame.kappa[i]) << '\n';
    }
}

OutputWriter::OutputWriter(std::filesystem::path dir, const RunConfig& config,
                           const TurbulenceField* turbulence, const std::string& solver,
                           std::optional<double> resume_tau)
    : dir_(std::move(dir)), config_(config), turbulence_(turbulence), solver_(solver) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw FlameError("cannot create output directory '" + dir_.string() + "': " + ec.message());

    const auto series_path = dir_ / "timeseries.csv";
    std::vector<std::string> kept;
    if (resume_tau) {
        std::ifstream in(series_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line.rfind("tau", 0) == 0) continue;
            if (std::stod(line.substr(0, line.find(','))) < *resume_tau) kept.push_back(line);
        }
    }
    series_.open(series_path, std::ios::trunc);
    if (!series_) throw FlameError("cannot write '" + series_path.string() + "'");
    series_ << "tau,perimeter,area,mean_Vs,residual";
    for (int m = 1; m <= 8; ++m) series_ << ",amp_m" << m;
    series_ << '\n';
    for (const auto& l : kept) series_ << l << '\n';
}

void OutputWriter::write_metadata(const json& extra) {
    json meta = {
        {"code_version", FLAME_VERSION},
        {"solver", solver_},
        {"config", config_to_json(config_)},
        {"config_hash", config_hash(config_)},
        {"filter", {{"type", "sharp Fourier cutoff in marker index"},
                    {"keep_fraction", config_.numerical.filter_keep}}},
        {"resample_every", config_.numerical.resample_every},
        {"gauge_fixed", config_.numerical.gauge_fixed},
        {"turbulence", turbulence_ ? turbulence_to_json(*turbulence_) : json(nullptr)},
    };
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
    std::ofstream out(dir_ / "metadata.json");
    if (!out) throw FlameError("cannot write metadata.json");
    out << meta.dump(2) << '\n';
}

void OutputWriter::write_row(const StepRecord& rec) {
    series_ << num(rec.tau) << ',' << num(rec.perimeter) << ',' << num(rec.area) << ','
            << num(rec.mean_vs) << ',' << num(rec.residual);
    for (double a : rec.amplitudes) series_ << ',' << num(a);
    series_ << '\n';
    series_.flush();
    last_tau_ = rec.tau;
}

void OutputWriter::snapshot(const StepRecord& rec, const FrontState& state,
                            const GeometryFrame& frame, const TraceSolution* trace,
                            const Field* v_s) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%08ld.csv", rec.step);
    write_snapshot(dir_ / name, config_, state, frame, trace, v_s);
}

void OutputWriter::on_step(const StepRecord& rec, const FrontState& state,
                           const GeometryFrame& frame, const TraceSolution* trace,
                           const Field* v_s) {
    if (rec.tau > last_tau_ && (rec.step % config_.output.timeseries_every == 0 || force_snapshot_))
        write_row(rec);
    const int every = config_.output.snapshot_every;
    if (force_snapshot_ || (every > 0 && rec.step % every == 0)) {
        snapshot(rec, state, frame, trace, v_s);
        force_snapshot_ = false;
    }
}

void OutputWriter::finish(const StepRecord& rec, const FrontState& state,
                          const GeometryFrame& frame, const TraceSolution* trace,
                          const Field* v_s) {
    if (rec.tau > last_tau_) write_row(rec);
    snapshot(rec, state, frame, trace, v_s);
}

void OutputWriter::checkpoint(const FrontState& state, long step) {
    Checkpoint c;
    c.state = state;
    c.config = config_;
    c.config_hash = config_hash(config_);
    c.step = step;
    if (turbulence_) c.turbulence = *turbulence_;
    char name[64];
    std::snprintf(name, sizeof name, "checkpoint_%08ld.json", step);
    save_checkpoint((dir_ / name).string(), c);
    save_checkpoint((dir_ / "checkpoint_latest.json").string(), c);
}

void OutputWriter::write_summary(const RunSummary& s) {
    json j = {{"steps", s.steps},
              {"tau", s.final_state.tau},
              {"perimeter", s.perimeter},
              {"area", s.area},
              {"mean_Vs", s.mean_vs},
              {"mode_amplitudes", s.amplitudes},
              {"wall_seconds", s.wall_seconds}};
    std::ofstream out(dir_ / "summary.json");
    out << j.dump(2) << '\n';
}

}  // namespace flame
