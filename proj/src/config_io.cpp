#include <fstream>
#include <set>

#include <json.hpp>

#include "scaforge/store.hpp"

namespace scaforge::store {

namespace {

using nlohmann::json;

// Strict object access: every key must be known, every read key must exist.
class StrictObject {
  public:
    StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object())
            throw ConfigError(path_, "expected an object");
        for (const auto& [key, value] : j_.items())
            unknown_.insert(key);
    }

    ~StrictObject() = default;

    const json* find(const std::string& key) {
        unknown_.erase(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    template <typename T>
    void get(const std::string& key, T& dst) {
        if (const json* v = find(key)) {
            try {
                dst = v->get<T>();
            } catch (const json::exception& e) {
                throw ConfigError(path_ + "." + key, e.what());
            }
        }
    }

    StrictObject child(const std::string& key) {
        const json* v = find(key);
        if (!v)
            return StrictObject(json::object(), path_ + "." + key);
        return StrictObject(*v, path_ + "." + key);
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    void finish() const {
        if (!unknown_.empty())
            throw ConfigError(path_ + "." + *unknown_.begin(), "unknown field");
    }

  private:
    json j_;
    std::string path_;
    std::set<std::string> unknown_;
};

std::vector<std::uint8_t> hex_to_bytes(const std::string& s, const std::string& field) {
    auto nib = [&](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        throw ConfigError(field, "invalid hex digit");
    };
    if (s.size() % 2)
        throw ConfigError(field, "odd hex string length");
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nib(s[2 * i]) << 4) | nib(s[2 * i + 1]));
    return out;
}

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (std::uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

LeakModel parse_model(const std::string& s, const std::string& field) {
    if (s == "hw" || s == "hamming_weight")
        return LeakModel::HammingWeight;
    if (s == "hd" || s == "hamming_distance")
        return LeakModel::HammingDistance;
    throw ConfigError(field, "expected hw|hd");
}

} // namespace

void ExperimentConfig::validate() const {
    leakage.validate();
    dsac.validate();
    bleed.validate();
    tvtf.validate();
    supply.validate();
    ro_tracker.validate();
    if (attack.budget < 2)
        throw ConfigError("attack.budget", "must be >= 2");
    if (attack.checkpoint_start < 2)
        throw ConfigError("attack.checkpoint_start", "must be >= 2");
    if (attack.checkpoint_factor <= 1.0)
        throw ConfigError("attack.checkpoint_factor", "must be > 1");
    if (attack.stability_window < 1)
        throw ConfigError("attack.stability_window", "must be >= 1");
    if (detector.n_samples < 32)
        throw ConfigError("detector.n_samples", "must be >= 32");
    if (detector.learning_rate <= 0)
        throw ConfigError("detector.learning_rate", "must be > 0");
    if (detector.batch_size < 1)
        throw ConfigError("detector.batch_size", "must be >= 1");
    if (detector.sensor.sigma < 0)
        throw ConfigError("detector.sensor.sigma", "must be >= 0");
    if (sim_samples < 16)
        throw ConfigError("sim_samples", "must be >= 16");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), e.what()); // carries byte/line context
    }

    ExperimentConfig cfg;
    StrictObject root(j, "config");

    int version = 1;
    root.get("version", version);
    if (version != 1)
        throw VersionMismatch("unsupported config version " + std::to_string(version));

    {
        auto o = root.child("leakage");
        std::string model = "hw", variant = "aes128", key_hex;
        o.get("model", model);
        cfg.leakage.model = parse_model(model, "leakage.model");
        o.get("alpha", cfg.leakage.alpha);
        o.get("baseline", cfg.leakage.baseline);
        o.get("sigma", cfg.leakage.sigma);
        o.get("aes_variant", variant);
        if (variant == "aes128")
            cfg.leakage.aes_variant = AesVariant::Aes128;
        else if (variant == "aes256")
            cfg.leakage.aes_variant = AesVariant::Aes256;
        else
            throw ConfigError("leakage.aes_variant", "expected aes128|aes256");
        o.get("key", key_hex);
        if (!key_hex.empty())
            cfg.leakage.key = hex_to_bytes(key_hex, "leakage.key");
        o.finish();
    }
    {
        auto o = root.child("dsac");
        o.get("attenuation", cfg.dsac.attenuation);
        o.get("i_unit", cfg.dsac.i_unit);
        o.get("v_low", cfg.dsac.v_low);
        o.get("v_high", cfg.dsac.v_high);
        o.get("cap", cfg.dsac.cap);
        o.get("max_slices", cfg.dsac.max_slices);
        o.finish();
    }
    {
        auto o = root.child("bleed");
        o.get("max_strength", cfg.bleed.max_strength);
        o.get("window", cfg.bleed.window);
        o.finish();
    }
    {
        auto o = root.child("tvtf");
        o.get("window", cfg.tvtf.window);
        o.get("gain_spread", cfg.tvtf.gain_spread);
        o.finish();
    }
    {
        auto o = root.child("supply");
        o.get("vdd", cfg.supply.vdd);
        o.get("v_sat", cfg.supply.v_sat);
        o.get("v_lin", cfg.supply.v_lin);
        o.get("v_fail", cfg.supply.v_fail);
        o.finish();
    }
    {
        auto o = root.child("attack");
        std::string model = "hw";
        o.get("model", model);
        cfg.attack.model = parse_model(model, "attack.model");
        o.get("budget", cfg.attack.budget);
        o.get("checkpoint_start", cfg.attack.checkpoint_start);
        o.get("checkpoint_factor", cfg.attack.checkpoint_factor);
        o.get("stability_window", cfg.attack.stability_window);
        o.finish();
    }
    {
        auto o = root.child("detector");
        o.get("n_samples", cfg.detector.n_samples);
        o.get("hidden", cfg.detector.hidden);
        o.get("learning_rate", cfg.detector.learning_rate);
        o.get("epochs", cfg.detector.epochs);
        o.get("batch_size", cfg.detector.batch_size);
        auto s = o.child("sensor");
        s.get("baseline", cfg.detector.sensor.baseline);
        s.get("sigma", cfg.detector.sensor.sigma);
        s.get("pulse_amp", cfg.detector.sensor.pulse_amp);
        s.get("pulse_width", cfg.detector.sensor.pulse_width);
        s.get("sag_depth", cfg.detector.sensor.sag_depth);
        s.get("sag_width", cfg.detector.sensor.sag_width);
        s.get("coupling", cfg.detector.sensor.coupling);
        s.get("sample_rate", cfg.detector.sensor.sample_rate);
        s.finish();
        o.finish();
    }
    {
        auto o = root.child("ro_tracker");
        o.get("k_ro", cfg.ro_tracker.k_ro);
        o.get("epoch", cfg.ro_tracker.epoch);
        o.get("tau", cfg.ro_tracker.tau);
        o.get("divider", cfg.ro_tracker.divider);
        o.finish();
    }
    root.get("sim_samples", cfg.sim_samples);
    root.finish();

    cfg.validate();
    return cfg;
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
    json j;
    j["version"] = 1;
    j["leakage"] = {
        {"model", cfg.leakage.model == LeakModel::HammingWeight ? "hw" : "hd"},
        {"alpha", cfg.leakage.alpha},
        {"baseline", cfg.leakage.baseline},
        {"sigma", cfg.leakage.sigma},
        {"aes_variant", cfg.leakage.aes_variant == AesVariant::Aes128 ? "aes128" : "aes256"},
        {"key", bytes_to_hex(cfg.leakage.key)},
    };
    j["dsac"] = {
        {"attenuation", cfg.dsac.attenuation}, {"i_unit", cfg.dsac.i_unit},
        {"v_low", cfg.dsac.v_low},             {"v_high", cfg.dsac.v_high},
        {"cap", cfg.dsac.cap},                 {"max_slices", cfg.dsac.max_slices},
    };
    j["bleed"] = {{"max_strength", cfg.bleed.max_strength}, {"window", cfg.bleed.window}};
    j["tvtf"] = {{"window", cfg.tvtf.window}, {"gain_spread", cfg.tvtf.gain_spread}};
    j["supply"] = {
        {"vdd", cfg.supply.vdd},
        {"v_sat", cfg.supply.v_sat},
        {"v_lin", cfg.supply.v_lin},
        {"v_fail", cfg.supply.v_fail},
    };
    j["attack"] = {
        {"model", cfg.attack.model == LeakModel::HammingWeight ? "hw" : "hd"},
        {"budget", cfg.attack.budget},
        {"checkpoint_start", cfg.attack.checkpoint_start},
        {"checkpoint_factor", cfg.attack.checkpoint_factor},
        {"stability_window", cfg.attack.stability_window},
    };
    j["detector"] = {
        {"n_samples", cfg.detector.n_samples},
        {"hidden", cfg.detector.hidden},
        {"learning_rate", cfg.detector.learning_rate},
        {"epochs", cfg.detector.epochs},
        {"batch_size", cfg.detector.batch_size},
        {"sensor",
         {
             {"baseline", cfg.detector.sensor.baseline},
             {"sigma", cfg.detector.sensor.sigma},
             {"pulse_amp", cfg.detector.sensor.pulse_amp},
             {"pulse_width", cfg.detector.sensor.pulse_width},
             {"sag_depth", cfg.detector.sensor.sag_depth},
             {"sag_width", cfg.detector.sensor.sag_width},
             {"coupling", cfg.detector.sensor.coupling},
             {"sample_rate", cfg.detector.sensor.sample_rate},
         }},
    };
    j["ro_tracker"] = {
        {"k_ro", cfg.ro_tracker.k_ro},
        {"epoch", cfg.ro_tracker.epoch},
        {"tau", cfg.ro_tracker.tau},
        {"divider", cfg.ro_tracker.divider},
    };
    j["sim_samples"] = cfg.sim_samples;
    write_file_atomic(path, j.dump(2) + "\n");
}

TraceMeta parse_trace_meta(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("trace sidecar", e.what());
    }
    TraceMeta m;
    StrictObject o(j, "meta");
    if (const json* lp = o.find("leak_positions")) {
        const auto vec = lp->get<std::vector<std::uint32_t>>();
        if (vec.size() != m.leak_positions.size())
            throw ConfigError("meta.leak_positions", "expected 16 entries");
        std::copy(vec.begin(), vec.end(), m.leak_positions.begin());
    }
    std::string key_hex;
    o.get("key", key_hex);
    if (!key_hex.empty())
        m.key = hex_to_bytes(key_hex, "meta.key");
    if (const json* mv = o.find("model"))
        m.model = parse_model(mv->get<std::string>(), "meta.model");
    o.get("sample_rate", m.sample_rate);
    o.finish();
    return m;
}

void write_detector_model(const std::filesystem::path& path, const detect::DetectorModel& m) {
    json j;
    j["version"] = 1;
    j["final_train_loss"] = m.final_train_loss;
    j["degenerate_single_class"] = m.degenerate_single_class;
    j["feat_mean"] = m.feat_mean;
    j["feat_scale"] = m.feat_scale;
    j["layers"] = json::array();
    for (const auto& layer : m.layers)
        j["layers"].push_back({{"in", layer.in}, {"out", layer.out}, {"w", layer.w},
                               {"b", layer.b}});
    write_file_atomic(path, j.dump() + "\n");
}

detect::DetectorModel read_detector_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open model file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), e.what());
    }
    if (!j.contains("version"))
        throw BadMagic("not a detector model file: " + path.string());
    if (j["version"].get<int>() != 1)
        throw VersionMismatch("unsupported model version");

    detect::DetectorModel m;
    m.final_train_loss = j.value("final_train_loss", 0.0);
    m.degenerate_single_class = j.value("degenerate_single_class", false);
    m.feat_mean = j.value("feat_mean", std::vector<double>{});
    m.feat_scale = j.value("feat_scale", std::vector<double>{});
    for (const auto& jl : j.at("layers")) {
        detect::MlpLayer layer;
        layer.in = jl.at("in").get<std::size_t>();
        layer.out = jl.at("out").get<std::size_t>();
        layer.w = jl.at("w").get<std::vector<double>>();
        layer.b = jl.at("b").get<std::vector<double>>();
        if (layer.w.size() != layer.in * layer.out || layer.b.size() != layer.out)
            throw DimensionError("model layer dims inconsistent with arrays");
        m.layers.push_back(std::move(layer));
    }
    for (std::size_t i = 1; i < m.layers.size(); ++i)
        if (m.layers[i].in != m.layers[i - 1].out)
            throw DimensionError("model layer chain mismatched");
    return m;
}

} // namespace scaforge::store
