#pragma once

#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beamopt/config.hpp"
#include "beamopt/dqn.hpp"
#include "beamopt/oracle.hpp"

namespace beamopt {

// Joint actions in trace files: indices joined by '|', e.g. "2|0".
std::string join_actions(const std::vector<int>& actions);
std::vector<int> split_actions(const std::string& text);

// One row of a training/evaluation trace file. Columns:
//   step,scenario_id,epsilon,actions,reward,oracle_reward,oracle_actions
struct TraceRow {
    long long step = 0;
    std::string scenario_id;
    double epsilon = 0.0;
    std::vector<int> actions;
    int reward = 0;
    int oracle_reward = 0;
    std::vector<int> oracle_actions;
};

std::vector<TraceRow> load_trace(std::istream& in);

// The world a run steps through: the scenario schedule, the UE population
// (held while the scenario persists, resampled when it changes), the power
// table for the current population and the cached oracle optimum.
class Environment {
public:
    explicit Environment(const ExperimentConfig& cfg);

    // Advance the schedule to step t. Call with consecutive t; a state load
    // repositions the counter.
    void begin_step(long long t);

    const std::string& scenario_id() const { return scenario_; }
    const ScenarioSnapshot& snapshot() const { return snap_; }
    const PowerTable& table() const { return table_; }
    // Exhaustive optimum for the current population, cached until the
    // population changes.
    const OracleResult& oracle();

    CoverageReport evaluate(const BeamAssignment& assignment) const;

    int n_sectors() const { return static_cast<int>(pools_.size()); }
    int n_beams() const {
        return pools_.empty() ? 0 : pools_[0].size();
    }
    const std::vector<BeamPool>& pools() const { return pools_; }
    const ArrayConfig& array() const { return cfg_.array; }

    void save_state(std::ostream& out) const;
    void load_state(std::istream& in);

private:
    void refresh_population(long long t, const std::string& id);
    const ScenarioDef& scenario_def(const std::string& id) const;

    ExperimentConfig cfg_;
    std::vector<BeamPool> pools_;
    SeededRng pos_rng_;
    SeededRng chan_rng_;
    SeededRng markov_rng_;
    long long last_step_ = -1;
    std::string scenario_;
    ScenarioSnapshot snap_;
    PowerTable table_;
    bool have_oracle_ = false;
    OracleResult oracle_;
    std::vector<ScenarioSnapshot> dataset_;  // files source, in file order
    long long dataset_index_ = -1;
};

struct RunSummary {
    bool converged = false;
    long long steps_run = 0;    // executed by this process
    long long final_step = 0;   // global step count after the run
    bool has_final_window = false;
    long long final_window_start = 0;
    double final_asd = 0.0;
    double final_am_joint = 0.0;
};

// The offline training driver. Writes resolved_config.json, trace.csv,
// metrics.csv, checkpoint.bin and summary.json into config.out_dir. Stops
// early once the newest full metrics window has strict joint action
// mismatch 0 (when stop_on_convergence is set). resume_checkpoint continues
// a previous run bit-exactly toward the configured step budget.
RunSummary run_training(const LoadedConfig& lc,
                        const std::string& resume_checkpoint = "");

// Greedy rollout of a trained checkpoint: no exploration, no learning.
// Writes trace.csv, metrics.csv and summary.json.
RunSummary run_evaluation(const LoadedConfig& lc,
                          const std::string& checkpoint_path);

// Runs the schedule without an agent and writes raytrace.csv plus
// locations.csv (one snapshot per step, timestamps 0..steps-1).
void generate_dataset(const LoadedConfig& lc, const std::string& out_dir);

// Runs the schedule without an agent and writes oracle.csv
// (step,scenario_id,best_assignment,best_reward).
void write_oracle_trace(const LoadedConfig& lc, const std::string& out_dir);

// Recomputes the windowed metrics file from an existing trace file.
void recompute_metrics(const LoadedConfig& lc, const std::string& trace_path,
                       const std::string& out_dir);

// Applies config.kernel_backend ("auto" restores runtime detection).
void apply_kernel_backend(const std::string& name);

}  // namespace beamopt
