#include "core/rl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "core/error.hpp"
#include "core/json_util.hpp"

namespace crossforge {

double epsilon_at(const AgentConfig& cfg, size_t global_step) {
    if (cfg.epsilon_decay_steps == 0 || global_step >= cfg.epsilon_decay_steps)
        return cfg.epsilon_end;
    double frac = static_cast<double>(global_step) /
                  static_cast<double>(cfg.epsilon_decay_steps);
    return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

QNetwork::QNetwork(size_t in_dim, uint64_t seed, Init init) : input_dim(in_dim) {
    w1.assign(hidden * input_dim, 0.0);
    b1.assign(hidden, 0.0);
    w2.assign(hidden, 0.0);
    if (init == Init::Xavier) {
        Rng rng(seed);
        const double lim1 = std::sqrt(6.0 / static_cast<double>(input_dim + hidden));
        for (double& w : w1) w = rng.uniform_range(-lim1, lim1);
        const double lim2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
        for (double& w : w2) w = rng.uniform_range(-lim2, lim2);
    }
    sync_target(); // target starts equal to the online parameters
}

namespace {

double forward_impl(size_t hidden, size_t input_dim, const std::vector<double>& w1,
                    const std::vector<double>& b1, const std::vector<double>& w2,
                    double b2, std::span<const double> x) {
    double out = b2;
    for (size_t h = 0; h < hidden; ++h) {
        double z = b1[h];
        const double* row = &w1[h * input_dim];
        for (size_t i = 0; i < input_dim; ++i) z += row[i] * x[i];
        if (z > 0.0) out += w2[h] * z;
    }
    return out;
}

} // namespace

double QNetwork::forward(std::span<const double> x) const {
    if (x.size() != input_dim) throw data_error("q network input dimension mismatch");
    return forward_impl(hidden, input_dim, w1, b1, w2, b2, x);
}

double QNetwork::forward_target(std::span<const double> x) const {
    if (x.size() != input_dim) throw data_error("q network input dimension mismatch");
    return forward_impl(hidden, input_dim, tw1, tb1, tw2, tb2, x);
}

void QNetwork::sync_target() {
    tw1 = w1;
    tb1 = b1;
    tw2 = w2;
    tb2 = b2;
}

double q_value(const QNetwork& net, std::span<const double> state,
               std::span<const double> action_rep) {
    if (state.size() + action_rep.size() != net.input_dim)
        throw data_error("q_value: state+action dimension mismatch");
    std::vector<double> x;
    x.reserve(net.input_dim);
    x.insert(x.end(), state.begin(), state.end());
    x.insert(x.end(), action_rep.begin(), action_rep.end());
    return net.forward(x);
}

size_t select_action(const QNetwork& net, std::span<const double> state,
                     const std::vector<std::vector<double>>& candidates,
                     double epsilon, Rng& rng) {
    if (candidates.empty()) throw data_error("select_action: no candidates");
    const double u = rng.uniform_real();
    if (u < epsilon) return rng.uniform_index(candidates.size());

    size_t best = 0;
    double best_q = q_value(net, state, candidates[0]);
    for (size_t i = 1; i < candidates.size(); ++i) {
        double q = q_value(net, state, candidates[i]);
        if (q > best_q) {
            best_q = q;
            best = i;
        }
    }
    return best;
}

double batch_loss(const QNetwork& net, const QBatch& batch) {
    const double b = static_cast<double>(batch.inputs.size());
    double loss = 0.0;
    for (size_t i = 0; i < batch.inputs.size(); ++i) {
        double diff = net.forward(batch.inputs[i]) - batch.targets[i];
        loss += diff * diff;
    }
    return loss / b;
}

double batch_loss_gradients(const QNetwork& net, const QBatch& batch, QGradients& out) {
    const size_t hidden = net.hidden;
    const size_t in_dim = net.input_dim;
    out.w1.assign(hidden * in_dim, 0.0);
    out.b1.assign(hidden, 0.0);
    out.w2.assign(hidden, 0.0);
    out.b2 = 0.0;

    const double b = static_cast<double>(batch.inputs.size());
    double loss = 0.0;
    std::vector<double> z(hidden);
    for (size_t i = 0; i < batch.inputs.size(); ++i) {
        const auto& x = batch.inputs[i];
        if (x.size() != in_dim) throw data_error("batch input dimension mismatch");
        double q = net.b2;
        for (size_t h = 0; h < hidden; ++h) {
            double zh = net.b1[h];
            const double* row = &net.w1[h * in_dim];
            for (size_t j = 0; j < in_dim; ++j) zh += row[j] * x[j];
            z[h] = zh;
            if (zh > 0.0) q += net.w2[h] * zh;
        }
        const double diff = q - batch.targets[i];
        loss += diff * diff;
        const double dq = 2.0 * diff / b;
        out.b2 += dq;
        for (size_t h = 0; h < hidden; ++h) {
            if (z[h] <= 0.0) continue;
            out.w2[h] += dq * z[h];
            const double dz = dq * net.w2[h];
            out.b1[h] += dz;
            double* grow = &out.w1[h * in_dim];
            for (size_t j = 0; j < in_dim; ++j) grow[j] += dz * x[j];
        }
    }
    return loss / b;
}

Adam::Adam(const QNetwork& net, double learning_rate) : lr(learning_rate) {
    m.w1.assign(net.w1.size(), 0.0);
    m.b1.assign(net.b1.size(), 0.0);
    m.w2.assign(net.w2.size(), 0.0);
    v = m;
}

namespace {

void adam_update(std::span<double> theta, std::span<const double> g,
                 std::span<double> m, std::span<double> v, double lr, double beta1,
                 double beta2, double eps, double bc1, double bc2) {
    for (size_t i = 0; i < theta.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        theta[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

} // namespace

void Adam::step(QNetwork& net, const QGradients& grads) {
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    adam_update(net.w1, grads.w1, m.w1, v.w1, lr, beta1, beta2, eps, bc1, bc2);
    adam_update(net.b1, grads.b1, m.b1, v.b1, lr, beta1, beta2, eps, bc1, bc2);
    adam_update(net.w2, grads.w2, m.w2, v.w2, lr, beta1, beta2, eps, bc1, bc2);
    std::span<double> tb2(&net.b2, 1);
    std::span<const double> gb2(&grads.b2, 1);
    std::span<double> mb2(&m.b2, 1), vb2(&v.b2, 1);
    adam_update(tb2, gb2, mb2, vb2, lr, beta1, beta2, eps, bc1, bc2);
}

std::optional<double> train_step(QNetwork& net, Adam& opt, const ReplayMemory& memory,
                                 const AgentConfig& cfg, Rng& rng) {
    if (memory.size() < cfg.batch_size) return std::nullopt;

    const auto picks = rng.sample_without_replacement(memory.size(), cfg.batch_size);
    QBatch batch;
    batch.inputs.reserve(picks.size());
    batch.targets.reserve(picks.size());
    std::vector<double> x;
    for (size_t idx : picks) {
        const Transition& t = memory.at(idx);
        double best_next = 0.0;
        bool any = false;
        for (const auto& a : t.next_actions) {
            x.clear();
            x.insert(x.end(), t.next_state.begin(), t.next_state.end());
            x.insert(x.end(), a.begin(), a.end());
            double q = net.forward_target(x);
            if (!any || q > best_next) {
                best_next = q;
                any = true;
            }
        }
        batch.targets.push_back(t.reward + (any ? cfg.gamma * best_next : 0.0));
        x.clear();
        x.insert(x.end(), t.state.begin(), t.state.end());
        x.insert(x.end(), t.action.begin(), t.action.end());
        batch.inputs.push_back(x);
    }

    QGradients grads;
    const double loss = batch_loss_gradients(net, batch, grads);
    opt.step(net, grads);
    return loss;
}

namespace {

nlohmann::json array_entry(const std::string& name, std::span<const double> data) {
    return {{"name", name}, {"data", base64_encode_f64(data)}};
}

std::vector<double> read_array(const nlohmann::json& arrays, const std::string& name) {
    for (const auto& a : arrays)
        if (a.at("name").get<std::string>() == name)
            return base64_decode_f64(a.at("data").get<std::string>());
    throw data_error("checkpoint missing array: " + name);
}

} // namespace

void save_checkpoint(const QNetwork& net, const std::string& path) {
    nlohmann::json j;
    j["version"] = 1;
    j["input_dim"] = net.input_dim;
    j["hidden"] = net.hidden;
    j["arrays"] = nlohmann::json::array({
        array_entry("w1", net.w1),
        array_entry("b1", net.b1),
        array_entry("w2", net.w2),
        array_entry("b2", std::span<const double>(&net.b2, 1)),
        array_entry("target_w1", net.tw1),
        array_entry("target_b1", net.tb1),
        array_entry("target_w2", net.tw2),
        array_entry("target_b2", std::span<const double>(&net.tb2, 1)),
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write checkpoint: " + path);
    out << j.dump(2) << "\n";
}

QNetwork load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open checkpoint: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("bad checkpoint json: " + std::string(e.what()));
    }
    if (j.value("version", 0) != 1) throw data_error("unsupported checkpoint version");

    QNetwork net(j.at("input_dim").get<size_t>(), 0, QNetwork::Init::Zero);
    const auto& arrays = j.at("arrays");
    auto expect = [&](std::vector<double> v, size_t n, const char* what) {
        if (v.size() != n) throw data_error(std::string("checkpoint shape mismatch: ") + what);
        return v;
    };
    net.w1 = expect(read_array(arrays, "w1"), net.hidden * net.input_dim, "w1");
    net.b1 = expect(read_array(arrays, "b1"), net.hidden, "b1");
    net.w2 = expect(read_array(arrays, "w2"), net.hidden, "w2");
    net.b2 = expect(read_array(arrays, "b2"), 1, "b2")[0];
    net.tw1 = expect(read_array(arrays, "target_w1"), net.hidden * net.input_dim, "target_w1");
    net.tb1 = expect(read_array(arrays, "target_b1"), net.hidden, "target_b1");
    net.tw2 = expect(read_array(arrays, "target_w2"), net.hidden, "target_w2");
    net.tb2 = expect(read_array(arrays, "target_b2"), 1, "target_b2")[0];
    return net;
}

} // namespace crossforge
