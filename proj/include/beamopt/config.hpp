#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "beamopt/array_beams.hpp"
#include "beamopt/channel.hpp"
#include "beamopt/coverage.hpp"
#include "beamopt/dqn.hpp"
#include "beamopt/mobility.hpp"
#include "beamopt/neural.hpp"

namespace beamopt {

enum class MobilityType { Periodic, Markov };
enum class ChannelSource { Synthetic, Files };
enum class ArchChoice { Conv, Mlp };

struct MobilityConfig {
    MobilityType type = MobilityType::Periodic;
    std::vector<ScenarioDef> scenarios;
    PeriodicSchedule periodic;
    MarkovSchedule markov;
    // false: fresh UE positions only when the scenario id changes
    bool resample_every_step = false;
};

struct ChannelConfig {
    ChannelSource source = ChannelSource::Synthetic;
    SynthChannelParams synth;
    std::string raytrace_file;
    std::string locations_file;  // optional companion of raytrace_file
};

struct ConvLayerConfig {
    int filters = 0;
    int kernel_h = 1, kernel_w = 1;
    int stride_h = 1, stride_w = 1;
};

struct AgentSection {
    AgentConfig core;
    ArchChoice architecture = ArchChoice::Conv;
    std::vector<ConvLayerConfig> conv_layers;  // filled with defaults on load
    std::vector<int> mlp_hidden = {128, 64};
    int frame_cols = 100;  // C
};

struct TrainConfig {
    long long episodes = 200;          // Z
    long long steps_per_episode = 250;  // T'
    int metrics_window = 200;
    bool stop_on_convergence = true;

    long long total_steps() const { return episodes * steps_per_episode; }
};

struct ExperimentConfig {
    std::string experiment = "run";
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string kernel_backend = "auto";  // auto|scalar|avx2|neon
    ArrayConfig array;
    RadioConstants radio;
    std::vector<SectorGeometry> sectors;
    int n_ues = 100;  // K
    std::vector<std::vector<PoolEntry>> pools;  // one list per sector
    MobilityConfig mobility;
    ChannelConfig channel;
    AgentSection agent;
    TrainConfig train;

    int n_sectors() const { return static_cast<int>(sectors.size()); }
    int n_beams() const {
        return pools.empty() ? 0 : static_cast<int>(pools[0].size());
    }
    // Cross-field consistency; throws ConfigError.
    void validate() const;
};

// Where each resolved value came from: "config", "cli", or one of the two
// default provenances the resolved dump must distinguish: values carried
// over from the baseline system parameters ("default:baseline") and values
// this implementation picked where the baseline leaves a gap
// ("default:chosen").
using SourceMap = std::vector<std::pair<std::string, std::string>>;

struct LoadedConfig {
    ExperimentConfig config;
    SourceMap sources;
};

LoadedConfig parse_config(const std::string& json_text);
LoadedConfig load_config(const std::string& path);

void override_seed(LoadedConfig& lc, std::uint64_t seed);
void override_out_dir(LoadedConfig& lc, const std::string& out_dir);
void override_episodes(LoadedConfig& lc, long long episodes);

// Fully materialized config (every default filled in) plus a _sources block;
// parse_config accepts its own output.
std::string resolved_config_json(const LoadedConfig& lc);

// Layer stack for one sector's Q-network given the configured architecture.
std::vector<LayerSpec> build_architecture(const AgentSection& agent,
                                          int n_actions);

}  // namespace beamopt
