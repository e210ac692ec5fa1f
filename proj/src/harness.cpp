#include "beamopt/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "beamopt/errors.hpp"
#include "beamopt/kernels.hpp"
#include "beamopt/metrics.hpp"
#include "textio.hpp"

namespace beamopt {

namespace fs = std::filesystem;

namespace {

constexpr std::uint32_t kCheckpointMagic = 0x4b434251;  // "QBCK"
constexpr std::uint32_t kCheckpointVersion = 1;
constexpr std::uint32_t kEnvMagic = 0x56454251;  // "QBEV"
constexpr std::uint32_t kEnvVersion = 1;

constexpr const char* kTraceHeader =
    "step,scenario_id,epsilon,actions,reward,oracle_reward,oracle_actions";

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw ParseError("checkpoint: truncated stream");
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put<std::uint64_t>(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    auto n = get<std::uint64_t>(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in) throw ParseError("checkpoint: truncated string");
    return s;
}

void put_tensor(std::ostream& out, const StateTensor& t) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.frames));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rows));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.cols));
    out.write(reinterpret_cast<const char*>(t.v.data()),
              static_cast<std::streamsize>(t.v.size()));
}

StateTensor get_tensor(std::istream& in) {
    StateTensor t;
    t.frames = static_cast<int>(get<std::uint32_t>(in));
    t.rows = static_cast<int>(get<std::uint32_t>(in));
    t.cols = static_cast<int>(get<std::uint32_t>(in));
    const size_t n = static_cast<size_t>(t.frames) * t.rows * t.cols;
    t.v.resize(n);
    in.read(reinterpret_cast<char*>(t.v.data()),
            static_cast<std::streamsize>(n));
    if (!in) throw ParseError("checkpoint: truncated tensor");
    return t;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

std::string metrics_header(int n_sectors) {
    std::string h = "window_start,asd,asd_maxdev";
    for (int m = 0; m < n_sectors; ++m)
        h += ",am_sector_" + std::to_string(m);
    return h;
}

// Accumulates the per-step trace into disjoint windows aligned to global
// step multiples of the window length, emitting one metrics row per
// completed window. A run resumed mid-window starts at the next boundary.
class WindowWriter {
public:
    WindowWriter(std::ostream& out, int window, long long start_step)
        : out_(out), w_(window) {
        next_start_ = ((start_step + w_ - 1) / w_) * w_;
    }

    void push(long long step, int reward, int oracle_reward,
              const std::vector<int>& actions,
              const std::vector<int>& oracle_actions) {
        if (step < next_start_) return;
        win_.agent_rewards.push_back(reward);
        win_.oracle_rewards.push_back(oracle_reward);
        win_.agent_actions.push_back(actions);
        win_.oracle_actions.push_back(oracle_actions);
        if (win_.size() == static_cast<size_t>(w_)) flush();
    }

    bool has_last() const { return has_last_; }
    long long last_start() const { return last_start_; }
    double last_asd() const { return last_asd_; }
    double last_am_joint() const { return last_am_joint_; }

private:
    void flush() {
        std::vector<double> sq;
        sq.reserve(win_.size());
        for (size_t i = 0; i < win_.size(); ++i) {
            const double d = static_cast<double>(win_.agent_rewards[i]) -
                             static_cast<double>(win_.oracle_rewards[i]);
            sq.push_back(d * d);
        }
        const double a = asd(win_);
        const ErrorBand band = error_band(sq);
        const std::vector<double> ams = am_per_sector(win_);
        out_ << next_start_ << ',' << textio::fmt_double(a) << ','
             << textio::fmt_double(band.max_abs_dev);
        for (double am : ams) out_ << ',' << textio::fmt_double(am);
        out_ << '\n';

        has_last_ = true;
        last_start_ = next_start_;
        last_asd_ = a;
        last_am_joint_ = am_joint(win_);
        win_ = TraceWindow{};
        next_start_ += w_;
    }

    std::ostream& out_;
    int w_;
    long long next_start_ = 0;
    TraceWindow win_;
    bool has_last_ = false;
    long long last_start_ = 0;
    double last_asd_ = 0.0;
    double last_am_joint_ = 0.0;
};

void write_trace_row(std::ostream& out, long long step,
                     const std::string& scenario_id, double epsilon,
                     const std::vector<int>& actions, int reward,
                     const OracleResult& oracle) {
    out << step << ',' << scenario_id << ','
        << textio::fmt_double(epsilon) << ',' << join_actions(actions) << ','
        << reward << ',' << oracle.best_reward << ','
        << join_actions(oracle.best_assignment.indices) << '\n';
}

struct PendingTransition {
    StateTensor state;
    std::vector<int> actions;
    int reward = 0;
};

void write_checkpoint(const fs::path& path, const DqnAgent& agent,
                      const Environment& env,
                      const std::deque<ConnectionState>& history,
                      const std::optional<PendingTransition>& pending,
                      const BeamAssignment& prev, long long next_step) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint " + path.string());
    put<std::uint32_t>(out, kCheckpointMagic);
    put<std::uint32_t>(out, kCheckpointVersion);
    agent.save_state(out);
    env.save_state(out);
    put<std::int64_t>(out, next_step);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(prev.indices.size()));
    for (int a : prev.indices) put<std::int32_t>(out, a);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(history.size()));
    for (const auto& conn : history) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(conn.bits.size()));
        out.write(reinterpret_cast<const char*>(conn.bits.data()),
                  static_cast<std::streamsize>(conn.bits.size()));
    }
    put<std::uint8_t>(out, pending.has_value() ? 1 : 0);
    if (pending.has_value()) {
        put_tensor(out, pending->state);
        put<std::uint32_t>(out,
                           static_cast<std::uint32_t>(pending->actions.size()));
        for (int a : pending->actions) put<std::int32_t>(out, a);
        put<std::int32_t>(out, pending->reward);
    }
    if (!out) throw IoError("checkpoint write failed " + path.string());
}

void read_checkpoint_header(std::istream& in, const std::string& path) {
    if (get<std::uint32_t>(in) != kCheckpointMagic)
        throw ParseError("not a checkpoint file: " + path);
    if (get<std::uint32_t>(in) != kCheckpointVersion)
        throw ParseError("unsupported checkpoint version: " + path);
}

long long load_checkpoint(const std::string& path, DqnAgent& agent,
                          Environment& env,
                          std::deque<ConnectionState>& history,
                          std::optional<PendingTransition>& pending,
                          BeamAssignment& prev) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + path);
    read_checkpoint_header(in, path);
    agent.load_state(in);
    env.load_state(in);
    const long long next_step = get<std::int64_t>(in);
    const auto n_prev = get<std::uint32_t>(in);
    prev.indices.assign(n_prev, 0);
    for (auto& a : prev.indices) a = get<std::int32_t>(in);
    history.clear();
    const auto n_hist = get<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < n_hist; ++i) {
        ConnectionState conn;
        conn.bits.resize(get<std::uint32_t>(in));
        in.read(reinterpret_cast<char*>(conn.bits.data()),
                static_cast<std::streamsize>(conn.bits.size()));
        if (!in) throw ParseError("checkpoint: truncated history");
        history.push_back(std::move(conn));
    }
    pending.reset();
    if (get<std::uint8_t>(in) != 0) {
        PendingTransition p;
        p.state = get_tensor(in);
        p.actions.assign(get<std::uint32_t>(in), 0);
        for (auto& a : p.actions) a = get<std::int32_t>(in);
        p.reward = get<std::int32_t>(in);
        pending = std::move(p);
    }
    return next_step;
}

void write_summary(const fs::path& path, const RunSummary& summary,
                   long long budget_steps) {
    nlohmann::json doc;
    doc["converged"] = summary.converged;
    doc["steps_run"] = summary.steps_run;
    doc["final_step"] = summary.final_step;
    doc["budget_steps"] = budget_steps;
    if (summary.has_final_window) {
        doc["final_window"] = {{"start", summary.final_window_start},
                               {"asd", summary.final_asd},
                               {"am_joint", summary.final_am_joint}};
    } else {
        doc["final_window"] = nullptr;
    }
    write_text_file(path, doc.dump(2) + "\n");
}

Shape3 state_shape(const ExperimentConfig& cfg) {
    const int rows =
        (cfg.n_ues + cfg.agent.frame_cols - 1) / cfg.agent.frame_cols;
    return Shape3{kStateFrames, rows, cfg.agent.frame_cols};
}

DqnAgent make_agent(const ExperimentConfig& cfg) {
    const int j = cfg.n_beams();
    return DqnAgent(state_shape(cfg), build_architecture(cfg.agent, j),
                    cfg.n_sectors(), j, cfg.agent.core, cfg.seed);
}

}  // namespace

std::string join_actions(const std::vector<int>& actions) {
    std::string out;
    for (size_t i = 0; i < actions.size(); ++i) {
        if (i > 0) out += '|';
        out += std::to_string(actions[i]);
    }
    return out;
}

std::vector<int> split_actions(const std::string& text) {
    std::vector<int> out;
    size_t start = 0;
    while (true) {
        const size_t pos = text.find('|', start);
        const std::string part = pos == std::string::npos
                                     ? text.substr(start)
                                     : text.substr(start, pos - start);
        out.push_back(
            static_cast<int>(textio::parse_int(part, 0, "action index")));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<TraceRow> load_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("trace: empty file");
    if (line == std::string(kTraceHeader) + "\r") line.pop_back();
    if (line != kTraceHeader)
        throw ParseError("trace: unexpected header '" + line + "'");
    std::vector<TraceRow> rows;
    std::vector<std::string> fields;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        textio::split_csv(line, fields);
        if (fields.size() != 7)
            throw ParseError("trace line " + std::to_string(line_no) +
                             ": expected 7 columns");
        TraceRow row;
        row.step = textio::parse_int(fields[0], line_no, "step");
        row.scenario_id = fields[1];
        row.epsilon = textio::parse_double(fields[2], line_no, "epsilon");
        row.actions = split_actions(fields[3]);
        row.reward =
            static_cast<int>(textio::parse_int(fields[4], line_no, "reward"));
        row.oracle_reward = static_cast<int>(
            textio::parse_int(fields[5], line_no, "oracle reward"));
        row.oracle_actions = split_actions(fields[6]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void apply_kernel_backend(const std::string& name) {
    if (name == "auto") {
        kernels::reset_backend();
    } else if (name == "scalar") {
        kernels::force_backend(kernels::Backend::Scalar);
    } else if (name == "avx2") {
        kernels::force_backend(kernels::Backend::Avx2);
    } else if (name == "neon") {
        kernels::force_backend(kernels::Backend::Neon);
    } else {
        throw ConfigError("unknown kernel backend " + name);
    }
}

Environment::Environment(const ExperimentConfig& cfg)
    : cfg_(cfg),
      pos_rng_(derive_seed(cfg.seed, 0)),
      chan_rng_(derive_seed(cfg.seed, 1)),
      markov_rng_(derive_seed(cfg.seed, 2)) {
    cfg_.validate();
    pools_.reserve(cfg_.pools.size());
    for (const auto& entries : cfg_.pools)
        pools_.push_back(build_pool(cfg_.array, entries));
    if (cfg_.channel.source == ChannelSource::Files) {
        std::ifstream in(cfg_.channel.raytrace_file);
        if (!in)
            throw ConfigError("cannot open raytrace file " +
                              cfg_.channel.raytrace_file);
        dataset_ = load_raytrace(in, n_sectors(), cfg_.n_ues);
        if (!cfg_.channel.locations_file.empty()) {
            std::ifstream loc(cfg_.channel.locations_file);
            if (!loc)
                throw ConfigError("cannot open locations file " +
                                  cfg_.channel.locations_file);
            apply_locations(loc, dataset_);
        }
    }
}

const ScenarioDef& Environment::scenario_def(const std::string& id) const {
    for (const auto& def : cfg_.mobility.scenarios)
        if (def.id == id) return def;
    throw ConfigError("schedule references unknown scenario " + id);
}

void Environment::refresh_population(long long t, const std::string& id) {
    const ScenarioDef& def = scenario_def(id);
    snap_.timestamp = t;
    snap_.scenario_id = id;
    snap_.ue_positions = sample_positions(def, cfg_.n_ues, pos_rng_);
    snap_.links = synth_links(cfg_.sectors, snap_.ue_positions,
                              cfg_.channel.synth, chan_rng_);
    table_ = build_power_table(snap_, cfg_.array, pools_);
    have_oracle_ = false;
}

void Environment::begin_step(long long t) {
    if (t < 0) throw IndexError("begin_step: negative step");
    if (cfg_.channel.source == ChannelSource::Files) {
        const long long idx = t % static_cast<long long>(dataset_.size());
        if (idx != dataset_index_) {
            snap_ = dataset_[static_cast<size_t>(idx)];
            scenario_ = snap_.scenario_id;
            table_ = build_power_table(snap_, cfg_.array, pools_);
            have_oracle_ = false;
            dataset_index_ = idx;
        }
        last_step_ = t;
        return;
    }
    std::string id;
    if (cfg_.mobility.type == MobilityType::Periodic) {
        id = scenario_at(cfg_.mobility.periodic, t);
    } else if (last_step_ < 0) {
        id = cfg_.mobility.markov.initial;
    } else {
        id = advance(cfg_.mobility.markov, scenario_, markov_rng_);
    }
    const bool fresh = snap_.ue_positions.empty();
    if (fresh || id != scenario_ || cfg_.mobility.resample_every_step)
        refresh_population(t, id);
    scenario_ = id;
    last_step_ = t;
}

const OracleResult& Environment::oracle() {
    if (!have_oracle_) {
        oracle_ = exhaustive_best_with_table(table_, cfg_.radio);
        have_oracle_ = true;
    }
    return oracle_;
}

CoverageReport Environment::evaluate(const BeamAssignment& assignment) const {
    return evaluate_with_table(table_, assignment, cfg_.radio);
}

void Environment::save_state(std::ostream& out) const {
    put<std::uint32_t>(out, kEnvMagic);
    put<std::uint32_t>(out, kEnvVersion);
    put<std::int64_t>(out, last_step_);
    put_string(out, scenario_);
    put_string(out, pos_rng_.save_state());
    put_string(out, chan_rng_.save_state());
    put_string(out, markov_rng_.save_state());
    put<std::int64_t>(out, dataset_index_);
    put<std::int64_t>(out, snap_.timestamp);
    put_string(out, snap_.scenario_id);
    put<std::uint32_t>(out,
                       static_cast<std::uint32_t>(snap_.ue_positions.size()));
    for (const auto& p : snap_.ue_positions) {
        put<double>(out, p.x);
        put<double>(out, p.y);
        put<double>(out, p.z);
    }
    put<std::uint32_t>(out, static_cast<std::uint32_t>(snap_.links.size()));
    for (const auto& link : snap_.links) {
        put<std::int32_t>(out, link.sector_id);
        put<std::int32_t>(out, link.ue_id);
        put<std::uint32_t>(out,
                           static_cast<std::uint32_t>(link.paths.size()));
        for (const auto& path : link.paths) {
            put<double>(out, path.aod_az_deg);
            put<double>(out, path.aod_elev_deg);
            put<double>(out, path.pathloss_db);
            put<double>(out, path.phase_deg);
        }
    }
}

void Environment::load_state(std::istream& in) {
    if (get<std::uint32_t>(in) != kEnvMagic)
        throw ParseError("checkpoint: bad environment block");
    if (get<std::uint32_t>(in) != kEnvVersion)
        throw ParseError("checkpoint: unsupported environment version");
    last_step_ = get<std::int64_t>(in);
    scenario_ = get_string(in);
    pos_rng_.load_state(get_string(in));
    chan_rng_.load_state(get_string(in));
    markov_rng_.load_state(get_string(in));
    dataset_index_ = get<std::int64_t>(in);
    snap_.timestamp = get<std::int64_t>(in);
    snap_.scenario_id = get_string(in);
    snap_.ue_positions.assign(get<std::uint32_t>(in), Vec3{});
    for (auto& p : snap_.ue_positions) {
        p.x = get<double>(in);
        p.y = get<double>(in);
        p.z = get<double>(in);
    }
    snap_.links.assign(get<std::uint32_t>(in), LinkPaths{});
    for (auto& link : snap_.links) {
        link.sector_id = get<std::int32_t>(in);
        link.ue_id = get<std::int32_t>(in);
        link.paths.assign(get<std::uint32_t>(in), PathRecord{});
        for (auto& path : link.paths) {
            path.aod_az_deg = get<double>(in);
            path.aod_elev_deg = get<double>(in);
            path.pathloss_db = get<double>(in);
            path.phase_deg = get<double>(in);
        }
    }
    have_oracle_ = false;
    if (!snap_.links.empty())
        table_ = build_power_table(snap_, cfg_.array, pools_);
}

RunSummary run_training(const LoadedConfig& lc,
                        const std::string& resume_checkpoint) {
    const ExperimentConfig& cfg = lc.config;
    apply_kernel_backend(cfg.kernel_backend);
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);
    write_text_file(out_dir / "resolved_config.json",
                    resolved_config_json(lc));

    Environment env(cfg);
    DqnAgent agent = make_agent(cfg);

    std::deque<ConnectionState> history;
    std::optional<PendingTransition> pending;
    BeamAssignment prev{std::vector<int>(cfg.n_sectors(), 0)};
    long long start_step = 0;
    if (!resume_checkpoint.empty())
        start_step = load_checkpoint(resume_checkpoint, agent, env, history,
                                     pending, prev);

    const long long total = cfg.train.total_steps();
    std::ofstream trace(out_dir / "trace.csv");
    if (!trace) throw IoError("cannot write trace.csv");
    trace << kTraceHeader << '\n';
    std::ofstream met(out_dir / "metrics.csv");
    if (!met) throw IoError("cannot write metrics.csv");
    met << metrics_header(cfg.n_sectors()) << '\n';
    WindowWriter windows(met, cfg.train.metrics_window, start_step);

    long long next_step = start_step;
    while (next_step < total) {
        const long long t = next_step;
        env.begin_step(t);
        CoverageReport obs = env.evaluate(prev);
        history.push_back(std::move(obs.connection));
        while (static_cast<int>(history.size()) > kStateFrames)
            history.pop_front();
        StateTensor s = encode_state(history, cfg.agent.frame_cols);
        if (pending.has_value())
            agent.observe(pending->state, pending->actions, pending->reward,
                          s, false);
        const double eps = agent.current_epsilon();
        std::vector<int> actions = agent.act(s);
        const CoverageReport rep = env.evaluate(BeamAssignment{actions});
        const OracleResult& orc = env.oracle();
        write_trace_row(trace, t, env.scenario_id(), eps, actions,
                        rep.connected_count, orc);
        windows.push(t, rep.connected_count, orc.best_reward, actions,
                     orc.best_assignment.indices);
        pending = PendingTransition{std::move(s), actions,
                                    rep.connected_count};
        prev.indices = std::move(actions);
        ++next_step;
        if (cfg.train.stop_on_convergence && windows.has_last() &&
            windows.last_am_joint() == 0.0)
            break;
    }

    write_checkpoint(out_dir / "checkpoint.bin", agent, env, history,
                     pending, prev, next_step);

    RunSummary summary;
    summary.steps_run = next_step - start_step;
    summary.final_step = next_step;
    summary.has_final_window = windows.has_last();
    summary.final_window_start = windows.last_start();
    summary.final_asd = windows.last_asd();
    summary.final_am_joint = windows.last_am_joint();
    summary.converged = windows.has_last() && windows.last_am_joint() == 0.0;
    write_summary(out_dir / "summary.json", summary, total);
    return summary;
}

RunSummary run_evaluation(const LoadedConfig& lc,
                          const std::string& checkpoint_path) {
    const ExperimentConfig& cfg = lc.config;
    apply_kernel_backend(cfg.kernel_backend);
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);
    write_text_file(out_dir / "resolved_config.json",
                    resolved_config_json(lc));

    Environment env(cfg);
    DqnAgent agent = make_agent(cfg);
    {
        std::ifstream in(checkpoint_path, std::ios::binary);
        if (!in) throw IoError("cannot open checkpoint " + checkpoint_path);
        read_checkpoint_header(in, checkpoint_path);
        agent.load_state(in);  // the rest of the file is training state
    }

    const long long total = cfg.train.total_steps();
    std::ofstream trace(out_dir / "trace.csv");
    if (!trace) throw IoError("cannot write trace.csv");
    trace << kTraceHeader << '\n';
    std::ofstream met(out_dir / "metrics.csv");
    if (!met) throw IoError("cannot write metrics.csv");
    met << metrics_header(cfg.n_sectors()) << '\n';
    WindowWriter windows(met, cfg.train.metrics_window, 0);

    std::deque<ConnectionState> history;
    BeamAssignment prev{std::vector<int>(cfg.n_sectors(), 0)};
    for (long long t = 0; t < total; ++t) {
        env.begin_step(t);
        CoverageReport obs = env.evaluate(prev);
        history.push_back(std::move(obs.connection));
        while (static_cast<int>(history.size()) > kStateFrames)
            history.pop_front();
        const StateTensor s = encode_state(history, cfg.agent.frame_cols);
        std::vector<int> actions = agent.greedy(s);
        const CoverageReport rep = env.evaluate(BeamAssignment{actions});
        const OracleResult& orc = env.oracle();
        write_trace_row(trace, t, env.scenario_id(), 0.0, actions,
                        rep.connected_count, orc);
        windows.push(t, rep.connected_count, orc.best_reward, actions,
                     orc.best_assignment.indices);
        prev.indices = std::move(actions);
    }

    RunSummary summary;
    summary.steps_run = total;
    summary.final_step = total;
    summary.has_final_window = windows.has_last();
    summary.final_window_start = windows.last_start();
    summary.final_asd = windows.last_asd();
    summary.final_am_joint = windows.last_am_joint();
    summary.converged = windows.has_last() && windows.last_am_joint() == 0.0;
    write_summary(out_dir / "summary.json", summary, total);
    return summary;
}

void generate_dataset(const LoadedConfig& lc, const std::string& out_dir) {
    const ExperimentConfig& cfg = lc.config;
    if (cfg.channel.source != ChannelSource::Synthetic)
        throw ConfigError(
            "gen-dataset needs synthetic channel parameters, not a file "
            "source");
    apply_kernel_backend(cfg.kernel_backend);
    Environment env(cfg);
    const long long total = cfg.train.total_steps();
    std::vector<ScenarioSnapshot> snaps;
    snaps.reserve(static_cast<size_t>(total));
    for (long long t = 0; t < total; ++t) {
        env.begin_step(t);
        ScenarioSnapshot s = env.snapshot();
        s.timestamp = t;  // one snapshot per step, even while held
        snaps.push_back(std::move(s));
    }
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    std::ofstream rt(dir / "raytrace.csv");
    if (!rt) throw IoError("cannot write raytrace.csv");
    write_raytrace(rt, snaps);
    std::ofstream loc(dir / "locations.csv");
    if (!loc) throw IoError("cannot write locations.csv");
    write_locations(loc, snaps);
}

void write_oracle_trace(const LoadedConfig& lc, const std::string& out_dir) {
    const ExperimentConfig& cfg = lc.config;
    apply_kernel_backend(cfg.kernel_backend);
    Environment env(cfg);
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "oracle.csv");
    if (!out) throw IoError("cannot write oracle.csv");
    out << "step,scenario_id,best_assignment,best_reward\n";
    const long long total = cfg.train.total_steps();
    for (long long t = 0; t < total; ++t) {
        env.begin_step(t);
        const OracleResult& orc = env.oracle();
        out << t << ',' << env.scenario_id() << ','
            << join_actions(orc.best_assignment.indices) << ','
            << orc.best_reward << '\n';
    }
}

void recompute_metrics(const LoadedConfig& lc, const std::string& trace_path,
                       const std::string& out_dir) {
    std::ifstream in(trace_path);
    if (!in) throw IoError("cannot open trace " + trace_path);
    const std::vector<TraceRow> rows = load_trace(in);
    const int n_sectors = rows.empty() ? lc.config.n_sectors()
                                       : static_cast<int>(rows[0].actions.size());
    fs::create_directories(out_dir);
    std::ofstream met(fs::path(out_dir) / "metrics.csv");
    if (!met) throw IoError("cannot write metrics.csv");
    met << metrics_header(n_sectors) << '\n';
    const long long start = rows.empty() ? 0 : rows.front().step;
    WindowWriter windows(met, lc.config.train.metrics_window, start);
    for (const auto& row : rows)
        windows.push(row.step, row.reward, row.oracle_reward, row.actions,
                     row.oracle_actions);
}

}  // namespace beamopt
