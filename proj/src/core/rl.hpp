#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace crossforge {

struct AgentConfig {
    double gamma = 0.9;
    double epsilon_start = 1.0;
    double epsilon_end = 0.1;
    size_t epsilon_decay_steps = 200; // linear decay over the first N global steps
    size_t batch_size = 20;
    double learning_rate = 0.01; // Adam
    size_t memory_capacity = 40;
    size_t target_sync_every = 10; // training steps between target syncs
    uint64_t seed = 0;
};

double epsilon_at(const AgentConfig& cfg, size_t global_step);

// Scoring network for a variable action set: the Q input is the state vector
// concatenated with one candidate's action representation, and the output is
// that candidate's scalar Q value. Selection is an argmax over candidates, so
// the action space may grow without changing the network.
//
// Single hidden layer, 100 ReLU units, with a target parameter copy that only
// sync_target() may touch.
struct QNetwork {
    enum class Init { Xavier, Zero };

    QNetwork(size_t input_dim, uint64_t seed, Init init = Init::Xavier);

    size_t input_dim = 0;
    size_t hidden = 100;

    std::vector<double> w1; // hidden x input_dim, row-major
    std::vector<double> b1; // hidden
    std::vector<double> w2; // hidden
    double b2 = 0.0;

    std::vector<double> tw1;
    std::vector<double> tb1;
    std::vector<double> tw2;
    double tb2 = 0.0;

    double forward(std::span<const double> x) const;
    double forward_target(std::span<const double> x) const;
    void sync_target();
};

double q_value(const QNetwork& net, std::span<const double> state,
               std::span<const double> action_rep);

struct Transition {
    std::vector<double> state;
    std::vector<double> action; // action representation fed to the Q input
    double reward = 0.0;
    std::vector<double> next_state;
    std::vector<std::vector<double>> next_actions; // candidate set after the step
};

class ReplayMemory {
public:
    explicit ReplayMemory(size_t capacity) : capacity_(capacity) {}

    void push(Transition t) {
        buffer_.push_back(std::move(t));
        if (buffer_.size() > capacity_) buffer_.pop_front(); // oldest first
    }
    size_t size() const { return buffer_.size(); }
    size_t capacity() const { return capacity_; }
    const Transition& at(size_t i) const { return buffer_[i]; }

private:
    size_t capacity_;
    std::deque<Transition> buffer_;
};

// Epsilon-greedy over the candidate list: uniform with probability epsilon,
// otherwise argmax of q_value (ties resolve to the lowest index).
size_t select_action(const QNetwork& net, std::span<const double> state,
                     const std::vector<std::vector<double>>& candidates,
                     double epsilon, Rng& rng);

struct QGradients {
    std::vector<double> w1, b1, w2;
    double b2 = 0.0;
};

struct QBatch {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
};

// Mean squared TD-error over the batch, and its gradient w.r.t. the online
// parameters. Exposed for the finite-difference tests.
double batch_loss(const QNetwork& net, const QBatch& batch);
double batch_loss_gradients(const QNetwork& net, const QBatch& batch, QGradients& out);

struct Adam {
    explicit Adam(const QNetwork& net, double lr);

    double lr;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int64_t t = 0;

    QGradients m, v;

    void step(QNetwork& net, const QGradients& grads);
};

// One training step: sample batch_size transitions uniformly without
// replacement, build targets r + gamma * max_a' Q_target(s', a') (plain r when
// the stored candidate set is empty), and apply one Adam step. Returns the
// batch loss, or nothing when the memory is smaller than the batch.
std::optional<double> train_step(QNetwork& net, Adam& opt, const ReplayMemory& memory,
                                 const AgentConfig& cfg, Rng& rng);

// Versioned JSON checkpoint: named arrays of base64 little-endian f64.
void save_checkpoint(const QNetwork& net, const std::string& path);
QNetwork load_checkpoint(const std::string& path);

// One agent: network, optimizer, memory and its private RNG; train() applies
// the target-sync cadence.
struct Agent {
    QNetwork net;
    Adam opt;
    ReplayMemory memory;
    AgentConfig cfg;
    Rng rng;
    size_t train_steps_done = 0;

    Agent(size_t input_dim, const AgentConfig& config)
        : net(input_dim, config.seed),
          opt(net, config.learning_rate),
          memory(config.memory_capacity),
          cfg(config),
          rng(config.seed) {}

    size_t select(std::span<const double> state,
                  const std::vector<std::vector<double>>& candidates, double epsilon) {
        return select_action(net, state, candidates, epsilon, rng);
    }

    std::optional<double> train() {
        auto loss = train_step(net, opt, memory, cfg, rng);
        if (loss) {
            ++train_steps_done;
            if (train_steps_done % cfg.target_sync_every == 0) net.sync_target();
        }
        return loss;
    }
};

} // namespace crossforge
