#pragma once

#include "ssae/network.hpp"
#include "ssae/rng.hpp"
#include "ssae/types.hpp"

#include <cstdint>
#include <limits>

namespace ssae {

enum class Scheduler { kConstant, kStep };

struct TrainConfig {
    double lambda = 1.0;  // weight of the reconstruction loss
    double eta = std::numeric_limits<double>::infinity();  // l1,1 budget for w1
    double gamma = 1e-3;  // learning rate
    int epochs = 30;      // N, per descent
    int batch = 8;
    int hidden = 100;
    std::uint64_t seed = 0;
    Scheduler scheduler = Scheduler::kConstant;
    double step_factor = 0.1;
    int step_every = 20;
    bool project_every_epoch = false;
};

struct AdamState {
    Gradients m, v;
    long t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState zeros_like(const ModelParams& p);
};

/// Binary d×h matrix freezing the zeros of the projected first layer.
struct SparsityMask {
    Matrix m0;

    double density() const { return m0.size() == 0 ? 0.0 : m0.sum() / static_cast<double>(m0.size()); }
    Index nonzero_rows() const;
};

/// One Adam update: m ← β₁m+(1−β₁)g, v ← β₂v+(1−β₂)g², bias-corrected,
/// θ ← θ − γ·m̂/(√v̂+ε). Applied to every parameter block.
void adam_step(AdamState& state, ModelParams& params, const Gradients& grads, double gamma);

SparsityMask compute_mask(const Matrix& w1_projected);

double scheduled_lr(const TrainConfig& cfg, int epoch);

enum class Objective { kAutoencoder, kEncoderOnly };

/// N epochs of mini-batch Adam. Batch order comes from rng each epoch.
/// With a mask, w1 is masked on entry and both the w1 gradient and w1
/// itself are masked at every step, so pruned entries stay exactly zero.
void train_one_descent(ModelParams& params, const Matrix& x, const Labels& y,
                       const TrainConfig& cfg, Rng& rng,
                       const SparsityMask* mask = nullptr,
                       Objective objective = Objective::kAutoencoder);

struct DoubleDescentResult {
    ModelParams params;   // after the second descent
    SparsityMask mask;    // indicator of the projected w1's nonzeros
    ModelParams w_init;   // initialization, retained verbatim
    ModelParams rewound;  // parameters at the start of the second descent
};

/// Full double-descent procedure: train, project w1 with the l1,1 budget,
/// build the mask, rewind every block to its initial value (w1 masked),
/// retrain with masked gradients and a fresh Adam state.
DoubleDescentResult double_descent(const TrainConfig& cfg, const Matrix& x_labeled,
                                   const Labels& y_labeled, int k);

}  // namespace ssae
