#include "beamopt/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "beamopt/errors.hpp"

namespace beamopt {

namespace {

using nlohmann::json;

constexpr const char* kBaseline = "default:baseline";
constexpr const char* kChosen = "default:chosen";

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

template <typename T>
T convert(const json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        bad(path + ": " + e.what());
    }
}

// One JSON object being consumed key by key. finish() rejects leftovers so
// typos fail loudly instead of silently keeping a default.
class Section {
public:
    Section(const json* j, std::string path, SourceMap& sources)
        : j_(j), path_(std::move(path)), sources_(&sources) {}

    bool has(const char* key) const {
        return j_ != nullptr && j_->contains(key);
    }

    template <typename T>
    T value(const char* key, T fallback, const char* default_kind) {
        seen_.insert(key);
        if (has(key)) {
            record(key, "config");
            return convert<T>((*j_)[key], path_ + key);
        }
        record(key, default_kind);
        return fallback;
    }

    template <typename T>
    T require(const char* key) {
        seen_.insert(key);
        if (!has(key)) bad(path_ + key + ": required field missing");
        record(key, "config");
        return convert<T>((*j_)[key], path_ + key);
    }

    const json* raw(const char* key) {
        seen_.insert(key);
        return has(key) ? &(*j_)[key] : nullptr;
    }

    Section child(const char* key) {
        seen_.insert(key);
        const json* sub = nullptr;
        if (has(key)) {
            sub = &(*j_)[key];
            if (!sub->is_object()) bad(path_ + key + ": expected an object");
        }
        return Section(sub, path_ + key + ".", *sources_);
    }

    void record(const char* key, const char* source) {
        sources_->emplace_back(path_ + key, source);
    }

    void finish() const {
        if (j_ == nullptr) return;
        // Keys starting with '_' are annotations (and the _sources block of a
        // resolved dump); they are never config values.
        for (const auto& item : j_->items())
            if (!item.key().empty() && item.key()[0] != '_' &&
                seen_.find(item.key()) == seen_.end())
                bad(path_ + item.key() + ": unknown key");
    }

    const std::string& path() const { return path_; }

private:
    const json* j_;
    std::string path_;
    SourceMap* sources_;
    std::set<std::string> seen_;
};

ScenarioDef parse_scenario(const json& j, const std::string& path,
                           SourceMap& sources) {
    if (!j.is_object()) bad(path + ": expected an object");
    Section s(&j, path + ".", sources);
    ScenarioDef def;
    def.id = s.require<std::string>("id");
    def.x_min = s.require<double>("x_min");
    def.x_max = s.require<double>("x_max");
    def.y_min = s.require<double>("y_min");
    def.y_max = s.require<double>("y_max");
    def.z_min = s.value<double>("z_min", 1.5, kChosen);
    def.z_max = s.value<double>("z_max", def.z_min, kChosen);
    s.finish();
    def.validate();
    return def;
}

PoolEntry parse_pool_entry(const json& j, const std::string& path,
                           SourceMap& sources) {
    if (!j.is_object()) bad(path + ": expected an object");
    Section s(&j, path + ".", sources);
    PoolEntry entry;
    entry.spec.elev_bw_deg = s.require<double>("elev_bw_deg");
    entry.spec.az_bw_deg = s.require<double>("az_bw_deg");
    entry.spec.etilt_deg = s.require<double>("etilt_deg");
    if (s.has("weights_re") || s.has("weights_im")) {
        const auto re = s.require<std::vector<double>>("weights_re");
        const auto im = s.require<std::vector<double>>("weights_im");
        if (re.size() != im.size())
            bad(path + ": weights_re and weights_im lengths differ");
        entry.explicit_w.reserve(re.size());
        for (size_t i = 0; i < re.size(); ++i)
            entry.explicit_w.emplace_back(re[i], im[i]);
    }
    s.finish();
    return entry;
}

std::vector<PoolEntry> parse_pool(const json& j, const std::string& path,
                                  SourceMap& sources) {
    if (!j.is_array()) bad(path + ": expected an array of beams");
    std::vector<PoolEntry> pool;
    pool.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        pool.push_back(parse_pool_entry(j[i],
                                        path + "[" + std::to_string(i) + "]",
                                        sources));
    return pool;
}

std::vector<ConvLayerConfig> default_conv_stack() {
    return {{32, 8, 8, 4, 4}, {64, 4, 4, 2, 2}, {64, 3, 3, 1, 1}};
}

void parse_mobility(Section& root, MobilityConfig& mob, SourceMap& sources) {
    Section s = root.child("mobility");
    const std::string type = s.value<std::string>("type", "periodic", kChosen);
    if (type == "periodic")
        mob.type = MobilityType::Periodic;
    else if (type == "markov")
        mob.type = MobilityType::Markov;
    else
        bad(s.path() + "type: expected \"periodic\" or \"markov\"");

    const std::string resample =
        s.value<std::string>("resample", "on_change", kChosen);
    if (resample == "on_change")
        mob.resample_every_step = false;
    else if (resample == "every_step")
        mob.resample_every_step = true;
    else
        bad(s.path() + "resample: expected \"on_change\" or \"every_step\"");

    const json* scen = s.raw("scenarios");
    if (scen == nullptr || !scen->is_array() || scen->empty())
        bad(s.path() + "scenarios: a non-empty array is required");
    s.record("scenarios", "config");
    std::vector<std::string> ids;
    for (size_t i = 0; i < scen->size(); ++i) {
        mob.scenarios.push_back(parse_scenario(
            (*scen)[i], s.path() + "scenarios[" + std::to_string(i) + "]",
            sources));
        ids.push_back(mob.scenarios.back().id);
    }

    if (mob.type == MobilityType::Periodic) {
        mob.periodic.period_steps = s.value<int>("period_steps", 8, kBaseline);
        mob.periodic.cycle =
            s.value<std::vector<std::string>>("cycle", ids, kChosen);
        mob.periodic.validate();
        for (const auto& id : mob.periodic.cycle) {
            bool known = false;
            for (const auto& def : mob.scenarios)
                if (def.id == id) known = true;
            if (!known) bad(s.path() + "cycle: unknown scenario id " + id);
        }
    } else {
        mob.markov.states = ids;
        std::vector<std::vector<double>> fallback;
        if (ids.size() == 2) fallback = {{0.7, 0.3}, {0.3, 0.7}};
        if (s.has("transition")) {
            mob.markov.transition =
                s.require<std::vector<std::vector<double>>>("transition");
        } else if (!fallback.empty()) {
            s.record("transition", kChosen);
            mob.markov.transition = fallback;
        } else {
            bad(s.path() +
                "transition: required for Markov mobility with more than "
                "two scenarios");
        }
        mob.markov.initial = s.value<std::string>("initial", ids[0], kChosen);
        mob.markov.validate();
    }
    s.finish();
}

void parse_channel(Section& root, ChannelConfig& ch) {
    Section s = root.child("channel");
    const std::string source =
        s.value<std::string>("source", "synthetic", kChosen);
    if (source == "synthetic")
        ch.source = ChannelSource::Synthetic;
    else if (source == "files")
        ch.source = ChannelSource::Files;
    else
        bad(s.path() + "source: expected \"synthetic\" or \"files\"");

    ch.synth.carrier_freq_hz = s.value<double>("carrier_hz", 2.0e9, kChosen);
    ch.synth.n_nlos_paths = s.value<int>("n_nlos_paths", 0, kChosen);
    ch.synth.nlos_excess_loss_db =
        s.value<double>("nlos_excess_loss_db", 20.0, kChosen);
    ch.synth.shadowing_sigma_db =
        s.value<double>("shadowing_sigma_db", 0.0, kChosen);
    ch.synth.los_blockage_prob =
        s.value<double>("los_blockage_prob", 0.0, kChosen);
    ch.synth.validate();

    if (ch.source == ChannelSource::Files) {
        ch.raytrace_file = s.require<std::string>("raytrace_file");
        ch.locations_file = s.value<std::string>("locations_file",
                                                 std::string(), kChosen);
    } else {
        ch.raytrace_file = s.value<std::string>("raytrace_file",
                                                std::string(), kChosen);
        ch.locations_file = s.value<std::string>("locations_file",
                                                 std::string(), kChosen);
    }
    s.finish();
}

void parse_agent(Section& root, AgentSection& agent, SourceMap& sources) {
    Section s = root.child("agent");
    agent.core.gamma = s.value<double>("gamma", 0.0001, kBaseline);
    agent.core.learning_rate =
        s.value<double>("learning_rate", 0.001, kBaseline);
    agent.core.batch_size = s.value<int>("batch_size", 32, kBaseline);
    agent.core.replay_capacity = static_cast<size_t>(
        s.value<std::uint64_t>("replay_capacity", 10000, kBaseline));
    agent.core.target_sync_period =
        s.value<long long>("target_sync_period", 100, kChosen);
    agent.core.double_dqn = s.value<bool>("double_dqn", true, kChosen);
    agent.core.shared_exploration_coin =
        s.value<bool>("shared_exploration_coin", true, kChosen);

    Section eps = s.child("epsilon");
    agent.core.epsilon.eps_max = eps.value<double>("max", 1.0, kBaseline);
    agent.core.epsilon.eps_min = eps.value<double>("min", 1e-6, kBaseline);
    agent.core.epsilon.decay = eps.value<double>("decay", 5e-4, kChosen);
    eps.finish();

    Section adam = s.child("adam");
    agent.core.adam_beta1 = adam.value<double>("beta1", 0.9, kChosen);
    agent.core.adam_beta2 = adam.value<double>("beta2", 0.999, kChosen);
    agent.core.adam_eps = adam.value<double>("eps", 1e-8, kChosen);
    adam.finish();

    const std::string arch =
        s.value<std::string>("architecture", "conv", kBaseline);
    if (arch == "conv")
        agent.architecture = ArchChoice::Conv;
    else if (arch == "mlp")
        agent.architecture = ArchChoice::Mlp;
    else
        bad(s.path() + "architecture: expected \"conv\" or \"mlp\"");

    const json* conv = s.raw("conv_layers");
    if (conv != nullptr) {
        if (!conv->is_array() || conv->empty())
            bad(s.path() + "conv_layers: expected a non-empty array");
        s.record("conv_layers", "config");
        for (size_t i = 0; i < conv->size(); ++i) {
            const std::string path =
                s.path() + "conv_layers[" + std::to_string(i) + "]";
            if (!(*conv)[i].is_object()) bad(path + ": expected an object");
            Section layer(&(*conv)[i], path + ".", sources);
            ConvLayerConfig lc;
            lc.filters = layer.require<int>("filters");
            const auto kernel = layer.require<std::vector<int>>("kernel");
            const auto stride = layer.require<std::vector<int>>("stride");
            if (kernel.size() != 2 || stride.size() != 2)
                bad(path + ": kernel and stride must be [h, w] pairs");
            lc.kernel_h = kernel[0];
            lc.kernel_w = kernel[1];
            lc.stride_h = stride[0];
            lc.stride_w = stride[1];
            layer.finish();
            agent.conv_layers.push_back(lc);
        }
    } else {
        // filter counts and kernel sizes follow the reference stack; the
        // strides are this implementation's choice
        s.record("conv_layers.filters_kernels", kBaseline);
        s.record("conv_layers.strides", kChosen);
        agent.conv_layers = default_conv_stack();
    }

    agent.mlp_hidden = s.value<std::vector<int>>(
        "mlp_hidden", std::vector<int>{128, 64}, kChosen);
    agent.frame_cols = s.value<int>("frame_cols", 100, kBaseline);
    s.finish();
}

json scenario_to_json(const ScenarioDef& def) {
    return json{{"id", def.id},       {"x_min", def.x_min},
                {"x_max", def.x_max}, {"y_min", def.y_min},
                {"y_max", def.y_max}, {"z_min", def.z_min},
                {"z_max", def.z_max}};
}

json pool_to_json(const std::vector<PoolEntry>& pool) {
    json arr = json::array();
    for (const auto& entry : pool) {
        json e{{"elev_bw_deg", entry.spec.elev_bw_deg},
               {"az_bw_deg", entry.spec.az_bw_deg},
               {"etilt_deg", entry.spec.etilt_deg}};
        if (!entry.explicit_w.empty()) {
            json re = json::array(), im = json::array();
            for (const auto& w : entry.explicit_w) {
                re.push_back(w.real());
                im.push_back(w.imag());
            }
            e["weights_re"] = re;
            e["weights_im"] = im;
        }
        arr.push_back(e);
    }
    return arr;
}

}  // namespace

LoadedConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        bad(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) bad("config: top level must be an object");

    LoadedConfig lc;
    ExperimentConfig& cfg = lc.config;
    Section root(&doc, "", lc.sources);

    cfg.experiment = root.value<std::string>("experiment", "run", kChosen);
    cfg.seed = root.value<std::uint64_t>("seed", 1, kChosen);
    cfg.out_dir = root.value<std::string>("out_dir", "out", kChosen);
    cfg.kernel_backend =
        root.value<std::string>("kernel_backend", "auto", kChosen);
    if (cfg.kernel_backend != "auto" && cfg.kernel_backend != "scalar" &&
        cfg.kernel_backend != "avx2" && cfg.kernel_backend != "neon")
        bad("kernel_backend: expected auto, scalar, avx2 or neon");

    Section arr = root.child("array");
    cfg.array.n_elev = arr.value<int>("n_elev", 4, kBaseline);
    cfg.array.n_az = arr.value<int>("n_az", 4, kBaseline);
    cfg.array.d_elev = arr.value<double>("d_elev_wavelengths", 0.5, kBaseline);
    cfg.array.d_az = arr.value<double>("d_az_wavelengths", 1.48, kBaseline);
    cfg.array.height_m = arr.value<double>("height_m", 35.0, kBaseline);
    arr.finish();
    cfg.array.validate();

    Section radio = root.child("radio");
    cfg.radio.noise_power_dbm =
        radio.value<double>("noise_power_dbm", -95.0, kBaseline);
    cfg.radio.sinr_threshold_db =
        radio.value<double>("sinr_threshold_db", -6.0, kBaseline);
    radio.finish();

    const json* sectors = root.raw("sectors");
    if (sectors == nullptr) {
        // single co-located sector at the array height, facing +x
        root.record("sectors", kChosen);
        cfg.sectors.push_back(
            SectorGeometry{Vec3{0.0, 0.0, cfg.array.height_m}, 0.0});
    } else {
        if (!sectors->is_array() || sectors->empty())
            bad("sectors: expected a non-empty array");
        root.record("sectors", "config");
        for (size_t i = 0; i < sectors->size(); ++i) {
            const std::string path = "sectors[" + std::to_string(i) + "]";
            if (!(*sectors)[i].is_object()) bad(path + ": expected an object");
            Section sec(&(*sectors)[i], path + ".", lc.sources);
            SectorGeometry g;
            g.position.x = sec.require<double>("x");
            g.position.y = sec.require<double>("y");
            g.position.z = sec.value<double>("z", cfg.array.height_m, kBaseline);
            g.boresight_az_deg = sec.value<double>("boresight_az_deg", 0.0, kChosen);
            sec.finish();
            cfg.sectors.push_back(g);
        }
    }

    Section ue = root.child("ue");
    cfg.n_ues = ue.value<int>("count", 100, kBaseline);
    ue.finish();
    if (cfg.n_ues < 1) bad("ue.count: must be positive");

    const json* shared_pool = root.raw("beam_pool");
    const json* per_sector = root.raw("beam_pools");
    if (shared_pool != nullptr && per_sector != nullptr)
        bad("give either beam_pool or beam_pools, not both");
    if (shared_pool != nullptr) {
        root.record("beam_pool", "config");
        const auto pool = parse_pool(*shared_pool, "beam_pool", lc.sources);
        cfg.pools.assign(cfg.sectors.size(), pool);
    } else if (per_sector != nullptr) {
        if (!per_sector->is_array()) bad("beam_pools: expected an array");
        root.record("beam_pools", "config");
        for (size_t i = 0; i < per_sector->size(); ++i)
            cfg.pools.push_back(
                parse_pool((*per_sector)[i],
                           "beam_pools[" + std::to_string(i) + "]",
                           lc.sources));
    } else {
        bad("beam_pool (shared) or beam_pools (per sector) is required");
    }

    parse_mobility(root, cfg.mobility, lc.sources);
    parse_channel(root, cfg.channel);
    parse_agent(root, cfg.agent, lc.sources);

    Section train = root.child("train");
    cfg.train.episodes = train.value<long long>("episodes", 250, kChosen);
    cfg.train.steps_per_episode =
        train.value<long long>("steps_per_episode", 200, kChosen);
    cfg.train.metrics_window =
        train.value<int>("metrics_window", 200, kBaseline);
    cfg.train.stop_on_convergence =
        train.value<bool>("stop_on_convergence", true, kChosen);
    train.finish();

    root.finish();
    cfg.validate();
    return lc;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

void set_source(SourceMap& sources, const std::string& key,
                const std::string& value) {
    for (auto& [k, v] : sources)
        if (k == key) {
            v = value;
            return;
        }
    sources.emplace_back(key, value);
}

}  // namespace

void override_seed(LoadedConfig& lc, std::uint64_t seed) {
    lc.config.seed = seed;
    set_source(lc.sources, "seed", "cli");
}

void override_out_dir(LoadedConfig& lc, const std::string& out_dir) {
    lc.config.out_dir = out_dir;
    set_source(lc.sources, "out_dir", "cli");
}

void override_episodes(LoadedConfig& lc, long long episodes) {
    if (episodes < 0) throw ConfigError("episodes: must be non-negative");
    lc.config.train.episodes = episodes;
    set_source(lc.sources, "train.episodes", "cli");
}

void ExperimentConfig::validate() const {
    if (sectors.empty()) throw ConfigError("at least one sector is required");
    if (pools.size() != sectors.size())
        throw ConfigError("beam_pools: need exactly one pool per sector (" +
                          std::to_string(sectors.size()) + " sectors, " +
                          std::to_string(pools.size()) + " pools)");
    const size_t j = pools[0].size();
    for (const auto& pool : pools) {
        if (pool.empty()) throw ConfigError("every beam pool needs beams");
        if (pool.size() != j)
            throw ConfigError("all sectors must offer the same pool size");
    }
    if (n_ues < 1) throw ConfigError("ue.count: must be positive");
    if (agent.frame_cols < 1)
        throw ConfigError("agent.frame_cols: must be positive");
    if (train.episodes < 0 || train.steps_per_episode < 1)
        throw ConfigError("train: episodes >= 0, steps_per_episode >= 1");
    if (train.metrics_window < 1)
        throw ConfigError("train.metrics_window: must be positive");
    if (agent.architecture == ArchChoice::Conv && agent.conv_layers.empty())
        throw ConfigError("agent.conv_layers: conv architecture needs layers");
    if (channel.source == ChannelSource::Files && channel.raytrace_file.empty())
        throw ConfigError("channel.raytrace_file: required for files source");
}

std::string resolved_config_json(const LoadedConfig& lc) {
    const ExperimentConfig& cfg = lc.config;
    json doc;
    doc["experiment"] = cfg.experiment;
    doc["seed"] = cfg.seed;
    doc["out_dir"] = cfg.out_dir;
    doc["kernel_backend"] = cfg.kernel_backend;
    doc["array"] = {{"n_elev", cfg.array.n_elev},
                    {"n_az", cfg.array.n_az},
                    {"d_elev_wavelengths", cfg.array.d_elev},
                    {"d_az_wavelengths", cfg.array.d_az},
                    {"height_m", cfg.array.height_m}};
    doc["radio"] = {{"noise_power_dbm", cfg.radio.noise_power_dbm},
                    {"sinr_threshold_db", cfg.radio.sinr_threshold_db}};
    json sectors = json::array();
    for (const auto& s : cfg.sectors)
        sectors.push_back(json{{"x", s.position.x},
                               {"y", s.position.y},
                               {"z", s.position.z},
                               {"boresight_az_deg", s.boresight_az_deg}});
    doc["sectors"] = sectors;
    doc["ue"] = {{"count", cfg.n_ues}};
    json pools = json::array();
    for (const auto& pool : cfg.pools) pools.push_back(pool_to_json(pool));
    doc["beam_pools"] = pools;

    json mob;
    mob["type"] =
        cfg.mobility.type == MobilityType::Periodic ? "periodic" : "markov";
    mob["resample"] =
        cfg.mobility.resample_every_step ? "every_step" : "on_change";
    json scens = json::array();
    for (const auto& def : cfg.mobility.scenarios)
        scens.push_back(scenario_to_json(def));
    mob["scenarios"] = scens;
    if (cfg.mobility.type == MobilityType::Periodic) {
        mob["period_steps"] = cfg.mobility.periodic.period_steps;
        mob["cycle"] = cfg.mobility.periodic.cycle;
    } else {
        mob["transition"] = cfg.mobility.markov.transition;
        mob["initial"] = cfg.mobility.markov.initial;
    }
    doc["mobility"] = mob;

    json ch;
    ch["source"] =
        cfg.channel.source == ChannelSource::Synthetic ? "synthetic" : "files";
    ch["carrier_hz"] = cfg.channel.synth.carrier_freq_hz;
    ch["n_nlos_paths"] = cfg.channel.synth.n_nlos_paths;
    ch["nlos_excess_loss_db"] = cfg.channel.synth.nlos_excess_loss_db;
    ch["shadowing_sigma_db"] = cfg.channel.synth.shadowing_sigma_db;
    ch["los_blockage_prob"] = cfg.channel.synth.los_blockage_prob;
    if (!cfg.channel.raytrace_file.empty())
        ch["raytrace_file"] = cfg.channel.raytrace_file;
    if (!cfg.channel.locations_file.empty())
        ch["locations_file"] = cfg.channel.locations_file;
    doc["channel"] = ch;

    json agent;
    agent["gamma"] = cfg.agent.core.gamma;
    agent["learning_rate"] = cfg.agent.core.learning_rate;
    agent["batch_size"] = cfg.agent.core.batch_size;
    agent["replay_capacity"] = cfg.agent.core.replay_capacity;
    agent["target_sync_period"] = cfg.agent.core.target_sync_period;
    agent["double_dqn"] = cfg.agent.core.double_dqn;
    agent["shared_exploration_coin"] = cfg.agent.core.shared_exploration_coin;
    agent["epsilon"] = {{"max", cfg.agent.core.epsilon.eps_max},
                        {"min", cfg.agent.core.epsilon.eps_min},
                        {"decay", cfg.agent.core.epsilon.decay}};
    agent["adam"] = {{"beta1", cfg.agent.core.adam_beta1},
                     {"beta2", cfg.agent.core.adam_beta2},
                     {"eps", cfg.agent.core.adam_eps}};
    agent["architecture"] =
        cfg.agent.architecture == ArchChoice::Conv ? "conv" : "mlp";
    json conv = json::array();
    for (const auto& l : cfg.agent.conv_layers)
        conv.push_back(json{{"filters", l.filters},
                            {"kernel", {l.kernel_h, l.kernel_w}},
                            {"stride", {l.stride_h, l.stride_w}}});
    agent["conv_layers"] = conv;
    agent["mlp_hidden"] = cfg.agent.mlp_hidden;
    agent["frame_cols"] = cfg.agent.frame_cols;
    doc["agent"] = agent;

    doc["train"] = {{"episodes", cfg.train.episodes},
                    {"steps_per_episode", cfg.train.steps_per_episode},
                    {"metrics_window", cfg.train.metrics_window},
                    {"stop_on_convergence", cfg.train.stop_on_convergence}};

    json sources = json::object();
    for (const auto& [k, v] : lc.sources) sources[k] = v;
    doc["_sources"] = sources;
    return doc.dump(2) + "\n";
}

std::vector<LayerSpec> build_architecture(const AgentSection& agent,
                                          int n_actions) {
    std::vector<LayerSpec> specs;
    if (agent.architecture == ArchChoice::Conv) {
        for (const auto& l : agent.conv_layers) {
            LayerSpec spec;
            spec.kind = LayerKind::Conv2d;
            spec.units = l.filters;
            spec.kernel_h = l.kernel_h;
            spec.kernel_w = l.kernel_w;
            spec.stride_h = l.stride_h;
            spec.stride_w = l.stride_w;
            spec.activation = Activation::Relu;
            specs.push_back(spec);
        }
    } else {
        for (int units : agent.mlp_hidden) {
            LayerSpec spec;
            spec.kind = LayerKind::Dense;
            spec.units = units;
            spec.activation = Activation::Relu;
            specs.push_back(spec);
        }
    }
    LayerSpec out;
    out.kind = LayerKind::Dense;
    out.units = n_actions;
    out.activation = Activation::Linear;
    specs.push_back(out);
    return specs;
}

}  // namespace beamopt
