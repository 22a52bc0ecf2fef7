#pragma once

#include "ssae/rng.hpp"
#include "ssae/types.hpp"

namespace ssae {

/// Weights of the symmetric autoencoder
///   x (n×d) → w1,b1 → ReLU → w2,b2 → z (n×k) → w3,b3 → ReLU → w4,b4 → x_hat,
/// with a row-wise softmax head on z. k equals the number of classes.
struct ModelParams {
    Matrix w1, w2, w3, w4;  // d×h, h×k, k×h, h×d
    Vector b1, b2, b3, b4;  // h, k, h, d

    Index d() const { return w1.rows(); }
    Index h() const { return w1.cols(); }
    Index k() const { return w2.cols(); }
};

/// All intermediate activations of one forward evaluation.
struct ForwardPass {
    Matrix h1_pre, h1;  // n×h, h1 = max(h1_pre, 0)
    Matrix z;           // n×k latent
    Matrix h2_pre, h2;  // n×h
    Matrix x_hat;       // n×d reconstruction
    Matrix scores;      // n×k, rows sum to 1
};

struct Gradients {
    Matrix w1, w2, w3, w4;
    Vector b1, b2, b3, b4;

    static Gradients zeros_like(const ModelParams& p);
};

struct LossGrad {
    double loss = 0.0;
    Matrix grad;
};

struct TotalLoss {
    double phi = 0.0;
    Gradients grads;
};

struct Prediction {
    Labels labels;
    Matrix scores;
};

/// Weights ~ uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) per layer, biases zero.
ModelParams init_params(Index d, Index h, Index k, Rng& rng);

/// Row-wise softmax with max-subtraction.
Matrix softmax_rows(const Matrix& z);

ForwardPass forward(const ModelParams& p, const Matrix& x);

/// Mean negative log softmax of the true class; grad is w.r.t. z.
LossGrad cross_entropy_loss(const Matrix& z, const Labels& y);

/// Huber loss with delta = 1, averaged over all elements; grad w.r.t. x_hat.
LossGrad smooth_l1_loss(const Matrix& x_hat, const Matrix& x);

/// phi = cross-entropy + lambda * reconstruction, with full backpropagation.
TotalLoss total_loss(const ModelParams& p, const Matrix& x, const Labels& y, double lambda);

/// Argmax of the softmax scores; ties break toward the lowest class index.
/// Only the encoder path is evaluated.
Prediction predict(const ModelParams& p, const Matrix& x);

/// Encoder-only latent codes (the FCNN baseline's output layer).
Matrix fcnn_forward(const ModelParams& p, const Matrix& x);

/// FCNN criterion: cross-entropy only; decoder gradient blocks are zero.
TotalLoss fcnn_loss(const ModelParams& p, const Matrix& x, const Labels& y);

}  // namespace ssae
