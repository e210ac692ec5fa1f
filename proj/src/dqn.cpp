#include "beamopt/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "beamopt/errors.hpp"

namespace beamopt {

namespace {

constexpr std::uint32_t kAgentMagic = 0x47414251;  // "QBAG"
constexpr std::uint32_t kAgentVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw ParseError("agent state: truncated stream");
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
    if (!in) throw ParseError("agent state: truncated string");
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
    if (!in) throw ParseError("agent state: truncated tensor");
    return t;
}

}  // namespace

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("replay capacity must be positive");
    ring_.reserve(capacity);
}

void ReplayBuffer::store(Experience e) {
    if (size_ < capacity_) {
        ring_.push_back(std::move(e));
        ++size_;
    } else {
        ring_[next_] = std::move(e);
    }
    next_ = (next_ + 1) % capacity_;
}

const Experience& ReplayBuffer::at(size_t i) const {
    if (i >= size_) throw IndexError("replay index out of range");
    if (size_ < capacity_) return ring_[i];
    return ring_[(next_ + i) % capacity_];
}

std::vector<const Experience*> ReplayBuffer::sample(size_t batch,
                                                    SeededRng& rng) const {
    if (batch == 0 || batch > size_)
        throw InsufficientSamples("replay holds " + std::to_string(size_) +
                                  " experiences, need " +
                                  std::to_string(batch));
    std::vector<const Experience*> out;
    out.reserve(batch);
    for (size_t i = 0; i < batch; ++i) {
        const auto idx = static_cast<size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(size_) - 1));
        out.push_back(&ring_[size_ < capacity_ ? idx
                                               : (next_ + idx) % capacity_]);
    }
    return out;
}

double epsilon_at(const EpsilonSchedule& schedule, long long t) {
    if (t < 0) throw IndexError("epsilon_at: negative step");
    const double v =
        schedule.eps_max * std::exp(-schedule.decay * static_cast<double>(t));
    return std::max(schedule.eps_min, v);
}

int greedy_action(const QNetworkParams& net, const StateTensor& state) {
    const std::vector<double> q = forward(net, state);
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a)
        if (q[a] > q[best]) best = a;
    return best;
}

int select_action(const QNetworkParams& net, const StateTensor& state,
                  double epsilon, SeededRng& rng) {
    const double coin = rng.uniform_double();
    if (coin < epsilon)
        return static_cast<int>(rng.uniform_int(0, net.n_outputs - 1));
    return greedy_action(net, state);
}

double td_target(const QNetworkParams& eval_net,
                 const QNetworkParams& target_net, const Experience& exp,
                 double gamma, bool double_dqn) {
    if (!same_architecture(eval_net, target_net))
        throw ArchitectureMismatch(
            "td_target: evaluation and target networks differ");
    const double r = static_cast<double>(exp.reward);
    if (exp.terminal) return r;
    const std::vector<double> qt = forward(target_net, exp.next_state);
    if (double_dqn) {
        const std::vector<double> qe = forward(eval_net, exp.next_state);
        int best = 0;
        for (int a = 1; a < static_cast<int>(qe.size()); ++a)
            if (qe[a] > qe[best]) best = a;
        return r + gamma * qt[best];
    }
    return r + gamma * *std::max_element(qt.begin(), qt.end());
}

DqnAgent::DqnAgent(const Shape3& input_shape,
                   const std::vector<LayerSpec>& arch, int n_sectors,
                   int n_actions, const AgentConfig& config,
                   std::uint64_t seed)
    : cfg_(config),
      n_actions_(n_actions),
      explore_rng_(derive_seed(seed, 3000)) {
    if (n_sectors < 1) throw ConfigError("agent needs at least one sector");
    if (n_actions < 1) throw ConfigError("agent needs at least one action");
    if (cfg_.batch_size < 1) throw ConfigError("batch size must be positive");
    if (cfg_.target_sync_period < 1)
        throw ConfigError("target sync period must be positive");
    learners_.reserve(static_cast<size_t>(n_sectors));
    for (int m = 0; m < n_sectors; ++m) {
        Learner learner{build_network(input_shape, arch, n_actions),
                        QNetworkParams{}, AdamState{},
                        ReplayBuffer(cfg_.replay_capacity),
                        SeededRng(derive_seed(
                            seed, 2000 + static_cast<std::uint64_t>(m)))};
        SeededRng init_rng(
            derive_seed(seed, 1000 + static_cast<std::uint64_t>(m)));
        init_weights(learner.eval, init_rng);
        learner.target = learner.eval;  // targets start as a copy
        learner.adam = make_adam(learner.eval, cfg_.learning_rate,
                                 cfg_.adam_beta1, cfg_.adam_beta2,
                                 cfg_.adam_eps);
        learners_.push_back(std::move(learner));
    }
}

double DqnAgent::current_epsilon() const {
    return epsilon_at(cfg_.epsilon, step_);
}

std::vector<int> DqnAgent::act(const StateTensor& state) {
    const double eps = current_epsilon();
    std::vector<int> actions(learners_.size(), 0);
    if (cfg_.shared_exploration_coin) {
        const bool explore = explore_rng_.uniform_double() < eps;
        for (size_t m = 0; m < learners_.size(); ++m)
            actions[m] = explore
                             ? static_cast<int>(
                                   explore_rng_.uniform_int(0, n_actions_ - 1))
                             : greedy_action(learners_[m].eval, state);
    } else {
        for (size_t m = 0; m < learners_.size(); ++m) {
            const bool explore = explore_rng_.uniform_double() < eps;
            actions[m] = explore
                             ? static_cast<int>(
                                   explore_rng_.uniform_int(0, n_actions_ - 1))
                             : greedy_action(learners_[m].eval, state);
        }
    }
    return actions;
}

std::vector<int> DqnAgent::greedy(const StateTensor& state) const {
    std::vector<int> actions(learners_.size(), 0);
    for (size_t m = 0; m < learners_.size(); ++m)
        actions[m] = greedy_action(learners_[m].eval, state);
    return actions;
}

void DqnAgent::train_learner(Learner& learner) {
    if (learner.buffer.size() < static_cast<size_t>(cfg_.batch_size)) return;
    const auto batch = learner.buffer.sample(
        static_cast<size_t>(cfg_.batch_size), learner.sample_rng);
    Gradients grads = make_gradients(learner.eval);
    ForwardCache cache;
    std::vector<double> input;
    for (const Experience* exp : batch) {
        const double y = td_target(learner.eval, learner.target, *exp,
                                   cfg_.gamma, cfg_.double_dqn);
        input.assign(exp->state.v.begin(), exp->state.v.end());
        if (input.size() !=
            static_cast<size_t>(learner.eval.input_shape.size()))
            throw ShapeMismatch("experience state does not fit the network");
        forward_raw(learner.eval, input, cache);
        backward(learner.eval, cache, exp->action, y, grads);
    }
    scale_gradients(grads, 1.0 / static_cast<double>(cfg_.batch_size));
    adam_step(learner.adam, learner.eval, grads);
}

void DqnAgent::observe(const StateTensor& state,
                       const std::vector<int>& actions, int reward,
                       const StateTensor& next_state, bool terminal) {
    if (actions.size() != learners_.size())
        throw DimensionMismatch("observe: one action per sector required");
    for (size_t m = 0; m < learners_.size(); ++m) {
        Experience e;
        e.state = state;
        e.action = actions[m];
        e.reward = reward;
        e.next_state = next_state;
        e.terminal = terminal;
        learners_[m].buffer.store(std::move(e));
    }
    for (auto& learner : learners_) train_learner(learner);
    ++step_;
    if (step_ % cfg_.target_sync_period == 0)
        for (auto& learner : learners_)
            copy_weights(learner.eval, learner.target);
}

void DqnAgent::save_state(std::ostream& out) const {
    put<std::uint32_t>(out, kAgentMagic);
    put<std::uint32_t>(out, kAgentVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(learners_.size()));
    put<std::int64_t>(out, step_);
    put_string(out, explore_rng_.save_state());
    for (const auto& learner : learners_) {
        save_network(out, learner.eval);
        save_network(out, learner.target);
        save_adam(out, learner.adam);
        put_string(out, learner.sample_rng.save_state());
        put<std::uint64_t>(out, learner.buffer.capacity());
        put<std::uint64_t>(out, learner.buffer.size());
        for (size_t i = 0; i < learner.buffer.size(); ++i) {
            const Experience& e = learner.buffer.at(i);
            put_tensor(out, e.state);
            put<std::int32_t>(out, e.action);
            put<std::int32_t>(out, e.reward);
            put_tensor(out, e.next_state);
            put<std::uint8_t>(out, e.terminal ? 1 : 0);
        }
    }
    if (!out) throw IoError("agent state: write failed");
}

void DqnAgent::load_state(std::istream& in) {
    if (get<std::uint32_t>(in) != kAgentMagic)
        throw ParseError("agent state: bad magic");
    if (get<std::uint32_t>(in) != kAgentVersion)
        throw ParseError("agent state: unsupported version");
    const auto m = get<std::uint32_t>(in);
    if (m != learners_.size())
        throw ArchitectureMismatch("agent state: sector count mismatch");
    step_ = get<std::int64_t>(in);
    explore_rng_.load_state(get_string(in));
    for (auto& learner : learners_) {
        QNetworkParams eval = load_network(in);
        QNetworkParams target = load_network(in);
        if (!same_architecture(eval, learner.eval))
            throw ArchitectureMismatch(
                "agent state: network architecture mismatch");
        learner.eval = std::move(eval);
        learner.target = std::move(target);
        learner.adam = load_adam(in, learner.eval);
        learner.sample_rng.load_state(get_string(in));
        const auto capacity = get<std::uint64_t>(in);
        if (capacity != learner.buffer.capacity())
            throw ParseError("agent state: replay capacity mismatch");
        const auto count = get<std::uint64_t>(in);
        if (count > capacity)
            throw ParseError("agent state: replay overflow");
        ReplayBuffer buffer(capacity);
        for (std::uint64_t i = 0; i < count; ++i) {
            Experience e;
            e.state = get_tensor(in);
            e.action = get<std::int32_t>(in);
            e.reward = get<std::int32_t>(in);
            e.next_state = get_tensor(in);
            e.terminal = get<std::uint8_t>(in) != 0;
            buffer.store(std::move(e));
        }
        learner.buffer = std::move(buffer);
    }
}

}  // namespace beamopt
