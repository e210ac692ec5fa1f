#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "beamopt/coverage.hpp"
#include "beamopt/neural.hpp"
#include "beamopt/rng.hpp"

namespace beamopt {

struct Experience {
    StateTensor state;
    int action = 0;  // one sector's beam index
    int reward = 0;  // shared connected-count
    StateTensor next_state;
    bool terminal = false;
};

// Bounded FIFO ring. sample() draws uniformly with replacement.
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity);

    void store(Experience e);
    std::vector<const Experience*> sample(size_t batch, SeededRng& rng) const;

    size_t size() const { return size_; }
    size_t capacity() const { return capacity_; }
    // insertion order: 0 = oldest surviving entry
    const Experience& at(size_t i) const;

private:
    size_t capacity_;
    size_t next_ = 0;  // ring position of the next write
    size_t size_ = 0;
    std::vector<Experience> ring_;
};

struct EpsilonSchedule {
    double eps_max = 1.0;
    double eps_min = 1e-6;
    double decay = 5e-4;  // per-step exponential rate
};

// max(eps_min, eps_max * exp(-decay * t))
double epsilon_at(const EpsilonSchedule& schedule, long long t);

// argmax of forward(net, state); ties to the lowest index.
int greedy_action(const QNetworkParams& net, const StateTensor& state);

// With probability epsilon uniform over the net's outputs, else greedy.
// Always consumes the coin draw first, then (only when exploring) one
// index draw.
int select_action(const QNetworkParams& net, const StateTensor& state,
                  double epsilon, SeededRng& rng);

// Bellman target from the stored transition: terminal keeps y = r; otherwise
// the bootstrap term evaluates the next state, by default double-DQN style
// (argmax under the evaluation net, value from the target net); plain DQN
// maxes the target net directly.
double td_target(const QNetworkParams& eval_net,
                 const QNetworkParams& target_net, const Experience& exp,
                 double gamma, bool double_dqn = true);

struct AgentConfig {
    double gamma = 0.0001;
    double learning_rate = 0.001;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    EpsilonSchedule epsilon;
    int batch_size = 32;
    size_t replay_capacity = 10000;
    long long target_sync_period = 100;
    bool double_dqn = true;
    // multi-sector: one exploration coin gating all sectors per step (the
    // default) vs an independent coin per sector
    bool shared_exploration_coin = true;
};

// M independent Q-learners sharing the state, the reward, the epsilon
// schedule and the step counter: M networks with J outputs each (action
// space J*M, not J^M). M = 1 degenerates to the single-sector algorithm.
class DqnAgent {
public:
    DqnAgent(const Shape3& input_shape, const std::vector<LayerSpec>& arch,
             int n_sectors, int n_actions, const AgentConfig& config,
             std::uint64_t seed);

    // Epsilon-greedy joint action at the current step (does not advance the
    // step counter; observe() does).
    std::vector<int> act(const StateTensor& state);

    // Pure exploitation, no rng, no learning (evaluation rollouts).
    std::vector<int> greedy(const StateTensor& state) const;

    // Store the shared transition in every sector's buffer (each with its
    // own action), run one gradient step per warm buffer, advance the step
    // counter, and sync targets every target_sync_period steps.
    void observe(const StateTensor& state, const std::vector<int>& actions,
                 int reward, const StateTensor& next_state, bool terminal);

    long long global_step() const { return step_; }
    double current_epsilon() const;
    int n_sectors() const { return static_cast<int>(learners_.size()); }
    int n_actions() const { return n_actions_; }
    const QNetworkParams& eval_net(int m) const { return learners_[m].eval; }
    const QNetworkParams& target_net(int m) const { return learners_[m].target; }
    const ReplayBuffer& buffer(int m) const { return learners_[m].buffer; }
    const AgentConfig& config() const { return cfg_; }

    // Everything needed to resume bit-exactly: networks, optimizer states,
    // buffers, rng states, step counter.
    void save_state(std::ostream& out) const;
    void load_state(std::istream& in);

private:
    struct Learner {
        QNetworkParams eval;
        QNetworkParams target;
        AdamState adam;
        ReplayBuffer buffer;
        SeededRng sample_rng;
    };

    void train_learner(Learner& learner);

    AgentConfig cfg_;
    int n_actions_;
    std::vector<Learner> learners_;
    SeededRng explore_rng_;
    long long step_ = 0;
};

}  // namespace beamopt
