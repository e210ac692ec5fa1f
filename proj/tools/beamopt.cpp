#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "beamopt/config.hpp"
#include "beamopt/errors.hpp"
#include "beamopt/harness.hpp"

namespace {

// Fatal errors leave a record next to whatever partial artifacts exist.
void record_error(const std::string& out_dir, const std::string& message) {
    if (out_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return;
    std::ofstream out(std::filesystem::path(out_dir) / "error.txt");
    out << message << '\n';
}

int dispatch(CLI::App* cmd, const std::string& name,
             const std::string& config_path, std::uint64_t seed,
             const std::string& out_dir, long long episodes,
             const std::string& resume_path,
             const std::string& checkpoint_path,
             const std::string& trace_path, std::string& effective_out) {
    beamopt::LoadedConfig lc = beamopt::load_config(config_path);
    if (cmd->count("--seed") > 0) beamopt::override_seed(lc, seed);
    if (cmd->count("--out") > 0) beamopt::override_out_dir(lc, out_dir);
    if (cmd->count("--episodes") > 0)
        beamopt::override_episodes(lc, episodes);
    effective_out = lc.config.out_dir;

    if (name == "train") {
        const beamopt::RunSummary s = beamopt::run_training(lc, resume_path);
        if (s.converged) {
            std::printf("converged at step %lld (window %lld: asd=%g, joint am=%g)\n",
                        s.final_step, s.final_window_start, s.final_asd,
                        s.final_am_joint);
        } else if (s.has_final_window) {
            std::printf(
                "budget exhausted at step %lld without convergence "
                "(window %lld: asd=%g, joint am=%g)\n",
                s.final_step, s.final_window_start, s.final_asd,
                s.final_am_joint);
        } else {
            std::printf("stopped at step %lld before completing a window\n",
                        s.final_step);
        }
        if (lc.config.train.total_steps() == 0) return 0;
        return s.converged ? 0 : 3;
    }
    if (name == "eval") {
        const beamopt::RunSummary s =
            beamopt::run_evaluation(lc, checkpoint_path);
        if (s.has_final_window) {
            std::printf("evaluated %lld steps (window %lld: asd=%g, joint am=%g)\n",
                        s.steps_run, s.final_window_start, s.final_asd,
                        s.final_am_joint);
        } else {
            std::printf("evaluated %lld steps (no full window)\n",
                        s.steps_run);
        }
        return 0;
    }
    if (name == "gen-dataset") {
        beamopt::generate_dataset(lc, lc.config.out_dir);
        std::printf("wrote raytrace.csv and locations.csv (%lld snapshots) to %s\n",
                    lc.config.train.total_steps(), lc.config.out_dir.c_str());
        return 0;
    }
    if (name == "oracle") {
        beamopt::write_oracle_trace(lc, lc.config.out_dir);
        std::printf("wrote oracle.csv (%lld steps) to %s\n",
                    lc.config.train.total_steps(), lc.config.out_dir.c_str());
        return 0;
    }
    // metrics
    beamopt::recompute_metrics(lc, trace_path, lc.config.out_dir);
    std::printf("wrote metrics.csv to %s\n", lc.config.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"broadcast beam optimizer: simulate, train, evaluate"};
    app.require_subcommand(1);

    std::string config_path, out_dir, resume_path, checkpoint_path,
        trace_path;
    std::uint64_t seed = 0;
    long long episodes = 0;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")
            ->required();
        cmd->add_option("--seed", seed, "override the master seed");
        cmd->add_option("--out", out_dir, "override the output directory");
        cmd->add_option("--episodes", episodes,
                        "override the episode count");
    };

    CLI::App* gen = app.add_subcommand(
        "gen-dataset", "synthesize a ray-trace dataset for the schedule");
    add_common(gen);
    CLI::App* train =
        app.add_subcommand("train", "run offline training to convergence");
    add_common(train);
    train->add_option("--resume", resume_path,
                      "continue from a training checkpoint");
    CLI::App* eval_cmd = app.add_subcommand(
        "eval", "greedy rollout of a trained checkpoint");
    add_common(eval_cmd);
    eval_cmd
        ->add_option("--checkpoint", checkpoint_path,
                     "checkpoint to evaluate")
        ->required();
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "dump the exhaustive-search optimum per step");
    add_common(oracle_cmd);
    CLI::App* metrics_cmd = app.add_subcommand(
        "metrics", "recompute windowed metrics from a trace file");
    add_common(metrics_cmd);
    metrics_cmd->add_option("--trace", trace_path, "trace file to window")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    CLI::App* cmd = app.get_subcommands().front();
    std::string effective_out = out_dir;
    try {
        return dispatch(cmd, cmd->get_name(), config_path, seed, out_dir,
                        episodes, resume_path, checkpoint_path, trace_path,
                        effective_out);
    } catch (const beamopt::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        record_error(effective_out, std::string("config error: ") + e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        record_error(effective_out, e.what());
        return 2;
    }
}
