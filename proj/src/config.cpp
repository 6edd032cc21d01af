#include "flame/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace flame {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so leftovers can be
// reported as unknown.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError("'" + path_ + "' must be an object");
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!j_.contains(key) || j_.at(key).is_null()) return fallback;
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("key '" + name(key) + "' has the wrong type");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown key '" + name(it.key()) + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

void RunConfig::validate() const {
    physical.validate();
    numerical.validate();
    if (!(initial.radius > 0.0)) throw ConfigError("initial.radius must be positive");
    for (const auto& m : initial.modes) {
        if (m.mode < 1) throw ConfigError("initial.modes: mode numbers must be >= 1");
        if (!(std::abs(m.amplitude) < 0.2 * initial.radius))
            throw ConfigError("initial.modes: amplitude must be below 0.2 x radius");
    }
    if (n_markers < 64 || n_markers % 2 != 0)
        throw ConfigError("numerical.n_markers must be even and >= 64");
    if (n_markers > numerical.max_markers)
        throw ConfigError("numerical.n_markers exceeds numerical.max_markers");
    if (turbulence.enabled) {
        if (turbulence.u_rms < 0.0) throw ConfigError("turbulence.u_rms must be >= 0");
        if (turbulence.n_modes < 1) throw ConfigError("turbulence.n_modes must be >= 1");
        if (!(turbulence.integral_scale > 0.0))
            throw ConfigError("turbulence.integral_scale must be positive");
        if (turbulence.u_rms > 0.0 && physical.theta <= 1.0)
            throw ConfigError("turbulence requires theta > 1");
    }
    if (output.timeseries_every < 1) throw ConfigError("output.timeseries_every must be >= 1");
    if (output.snapshot_every < 0 || output.checkpoint_every < 0)
        throw ConfigError("output cadences must be >= 0");
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    Section top(j, "");
    if (top.has("physical")) {
        Section s(top.raw("physical"), "physical");
        c.physical.theta = s.get("theta", c.physical.theta);
        c.physical.lambda_c = s.get("lambda_c", c.physical.lambda_c);
        s.finish();
    }
    if (top.has("initial")) {
        Section s(top.raw("initial"), "initial");
        c.initial.radius = s.get("radius", c.initial.radius);
        if (s.has("center")) {
            const auto v = s.get<std::vector<double>>("center", {});
            if (v.size() != 2) throw ConfigError("key 'initial.center' needs two numbers");
            c.initial.center = Vec2(v[0], v[1]);
        }
        if (s.has("modes")) {
            const json& arr = s.raw("modes");
            if (!arr.is_array()) throw ConfigError("'initial.modes' must be an array");
            for (size_t i = 0; i < arr.size(); ++i) {
                Section ms(arr[i], "initial.modes[" + std::to_string(i) + "]");
                Perturbation p;
                p.mode = ms.get("m", 0);
                p.amplitude = ms.get("amplitude", 0.0);
                p.phase = ms.get("phase", 0.0);
                ms.finish();
                c.initial.modes.push_back(p);
            }
        }
        s.finish();
    }
    if (top.has("numerical")) {
        Section s(top.raw("numerical"), "numerical");
        StepConfig& n = c.numerical;
        c.n_markers = s.get("n_markers", c.n_markers);
        n.cfl = s.get("cfl", n.cfl);
        n.filter_keep = s.get("filter_keep", n.filter_keep);
        n.resample_every = s.get("resample_every", n.resample_every);
        n.target_spacing = s.get("target_spacing", n.target_spacing);
        n.max_markers = s.get("max_markers", n.max_markers);
        n.t_end = s.get("t_end", n.t_end);
        n.gauge_fixed = s.get("gauge_fixed", n.gauge_fixed);
        if (s.has("fixed_dt")) n.fixed_dt = s.get("fixed_dt", 0.0);
        else s.get("fixed_dt", 0.0);
        s.finish();
    }
    if (top.has("turbulence")) {
        Section s(top.raw("turbulence"), "turbulence");
        TurbulenceConfig& t = c.turbulence;
        t.enabled = s.get("enabled", t.enabled);
        t.u_rms = s.get("u_rms", t.u_rms);
        t.integral_scale = s.get("integral_scale", t.integral_scale);
        t.n_modes = s.get("n_modes", t.n_modes);
        t.spectrum_exponent = s.get("spectrum_exponent", t.spectrum_exponent);
        s.finish();
    }
    if (top.has("output")) {
        Section s(top.raw("output"), "output");
        OutputConfig& o = c.output;
        o.directory = s.get("directory", o.directory);
        o.snapshot_every = s.get("snapshot_every", o.snapshot_every);
        o.timeseries_every = s.get("timeseries_every", o.timeseries_every);
        o.checkpoint_every = s.get("checkpoint_every", o.checkpoint_every);
        s.finish();
    }
    c.seed = top.get<std::uint64_t>("seed", 0);
    top.finish();
    c.validate();
    return c;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line number.
        const size_t upto = std::min<size_t>(e.byte, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
    }
    return config_from_json(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json config_to_json(const RunConfig& c) {
    json modes = json::array();
    for (const auto& m : c.initial.modes)
        modes.push_back({{"m", m.mode}, {"amplitude", m.amplitude}, {"phase", m.phase}});
    json numerical = {
        {"n_markers", c.n_markers},
        {"cfl", c.numerical.cfl},
        {"filter_keep", c.numerical.filter_keep},
        {"resample_every", c.numerical.resample_every},
        {"target_spacing", c.numerical.target_spacing},
        {"max_markers", c.numerical.max_markers},
        {"t_end", c.numerical.t_end},
        {"gauge_fixed", c.numerical.gauge_fixed},
    };
    if (c.numerical.fixed_dt) numerical["fixed_dt"] = *c.numerical.fixed_dt;
    return {
        {"physical", {{"theta", c.physical.theta}, {"lambda_c", c.physical.lambda_c}}},
        {"initial",
         {{"radius", c.initial.radius},
          {"center", {c.initial.center.x(), c.initial.center.y()}},
          {"modes", modes}}},
        {"numerical", numerical},
        {"turbulence",
         {{"enabled", c.turbulence.enabled},
          {"u_rms", c.turbulence.u_rms},
          {"integral_scale", c.turbulence.integral_scale},
          {"n_modes", c.turbulence.n_modes},
          {"spectrum_exponent", c.turbulence.spectrum_exponent}}},
        {"output",
         {{"directory", c.output.directory},
          {"snapshot_every", c.output.snapshot_every},
          {"timeseries_every", c.output.timeseries_every},
          {"checkpoint_every", c.output.checkpoint_every}}},
        {"seed", c.seed},
    };
}

std::string config_hash(const RunConfig& c) {
    json j = config_to_json(c);
    j.erase("output");  // output settings do not affect the solution
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
    return buf;
}

FrontState initial_state(const RunConfig& c) {
    return make_front(make_perturbed_circle(c.n_markers, c.initial.radius, c.initial.center,
                                            c.initial.modes));
}

std::unique_ptr<TurbulenceField> make_turbulence(const RunConfig& c) {
    if (!c.turbulence.enabled) return nullptr;
    return std::make_unique<TurbulenceField>(synthesize(c.turbulence.u_rms,
                                                        c.turbulence.integral_scale,
                                                        c.turbulence.n_modes,
                                                        c.turbulence.spectrum_exponent, c.seed));
}

}  // namespace flame
