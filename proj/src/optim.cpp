#include "ssae/optim.hpp"

#include "ssae/numerics.hpp"
#include "ssae/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ssae {

namespace {

template <typename Block>
void adam_update_block(Block& theta, const Block& g, Block& m, Block& v, double gamma,
                       double beta1, double beta2, double eps, double bc1, double bc2) {
    m = beta1 * m + (1.0 - beta1) * g;
    v = (beta2 * v.array() + (1.0 - beta2) * g.array().square()).matrix();
    theta.array() -= gamma * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

}  // namespace

AdamState AdamState::zeros_like(const ModelParams& p) {
    AdamState st;
    st.m = Gradients::zeros_like(p);
    st.v = Gradients::zeros_like(p);
    return st;
}

Index SparsityMask::nonzero_rows() const {
    Index count = 0;
    for (Index i = 0; i < m0.rows(); ++i)
        if (m0.row(i).sum() > 0.0) ++count;
    return count;
}

void adam_step(AdamState& state, ModelParams& params, const Gradients& grads, double gamma) {
    require(gamma > 0.0, "adam_step: gamma must be > 0");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

    adam_update_block(params.w1, grads.w1, state.m.w1, state.v.w1, gamma, state.beta1, state.beta2, state.eps, bc1, bc2);
    adam_update_block(params.w2, grads.w2, state.m.w2, state.v.w2, gamma, state.beta1, state.beta2, state.eps, bc1, bc2);
    adam_update_block(params.w3, grads.w3, state.m.w3, state.v.w3, gamma, state.beta1, state.beta2, state.eps, bc1, bc2);
    adam_update_block(params.w4, grads.w4, state.m.w4, state.v.w4, gamma, state.beta1, state.beta2, state.eps, bc1, bc2);
    adam_update_block(params.b1, grads.b1, state.m.b1, state.v.b1, gamma, state.beta1, state.beta2, state.eps, bc1, bc2);
    adam_update_block(params.b2, grads.b2, state.m.b2, state.v.b2, gamma, state.beta1, state.beta2, state.eps, bc1, bc2);
    adam_update_block(params.b3, grads.b3, state.m.b3, state.v.b3, gamma, state.beta1, state.beta2, state.eps, bc1, bc2);
    adam_update_block(params.b4, grads.b4, state.m.b4, state.v.b4, gamma, state.beta1, state.beta2, state.eps, bc1, bc2);
}

SparsityMask compute_mask(const Matrix& w1_projected) {
    SparsityMask mask;
    mask.m0 = (w1_projected.array() != 0.0).cast<double>().matrix();
    return mask;
}

double scheduled_lr(const TrainConfig& cfg, int epoch) {
    if (cfg.scheduler == Scheduler::kConstant) return cfg.gamma;
    const int drops = cfg.step_every > 0 ? epoch / cfg.step_every : 0;
    return cfg.gamma * std::pow(cfg.step_factor, static_cast<double>(drops));
}

void train_one_descent(ModelParams& params, const Matrix& x, const Labels& y,
                       const TrainConfig& cfg, Rng& rng, const SparsityMask* mask,
                       Objective objective) {
    const int n = static_cast<int>(x.rows());
    if (n == 0) throw ConfigError("train_one_descent: labeled set is empty");
    if (cfg.batch < 1 || cfg.batch > n)
        throw ConfigError("train_one_descent: batch size " + std::to_string(cfg.batch) +
                          " outside 1.." + std::to_string(n));
    require(static_cast<Index>(y.size()) == x.rows(), "train_one_descent: label count mismatch");

    if (mask != nullptr) params.w1 = params.w1.cwiseProduct(mask->m0);

    AdamState state = AdamState::zeros_like(params);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = scheduled_lr(cfg, epoch);
        const std::vector<int> order = rng.permutation(n);
        for (int start = 0; start < n; start += cfg.batch) {
            const int stop = std::min(start + cfg.batch, n);
            const std::vector<int> idx(order.begin() + start, order.begin() + stop);
            const Matrix xb = row_slice(x, idx);
            const Labels yb = subset(y, idx);

            TotalLoss tl = objective == Objective::kAutoencoder
                               ? total_loss(params, xb, yb, cfg.lambda)
                               : fcnn_loss(params, xb, yb);
            if (mask != nullptr) tl.grads.w1 = tl.grads.w1.cwiseProduct(mask->m0);
            adam_step(state, params, tl.grads, lr);
            if (mask != nullptr) params.w1 = params.w1.cwiseProduct(mask->m0);
        }
        if (cfg.project_every_epoch && mask == nullptr)
            params.w1 = project_l11(params.w1, cfg.eta);
    }
}

DoubleDescentResult double_descent(const TrainConfig& cfg, const Matrix& x_labeled,
                                   const Labels& y_labeled, int k) {
    Rng rng(cfg.seed);
    DoubleDescentResult result;
    result.params = init_params(x_labeled.cols(), cfg.hidden, k, rng);
    result.w_init = result.params;

    train_one_descent(result.params, x_labeled, y_labeled, cfg, rng);

    result.params.w1 = project_l11(result.params.w1, cfg.eta);
    result.mask = compute_mask(result.params.w1);

    result.params = result.w_init;
    result.params.w1 = result.w_init.w1.cwiseProduct(result.mask.m0);
    result.rewound = result.params;

    train_one_descent(result.params, x_labeled, y_labeled, cfg, rng, &result.mask);
    return result;
}

}  // namespace ssae
