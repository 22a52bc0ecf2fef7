#include "ssae/network.hpp"

#include <cmath>
#include <string>

namespace ssae {

namespace {

Matrix uniform_matrix(Rng& rng, Index rows, Index cols, double bound) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
    return m;
}

Matrix relu(const Matrix& pre) { return pre.cwiseMax(0.0); }

// Subgradient convention: exactly-zero pre-activations pass nothing through.
Matrix relu_backward(const Matrix& pre, const Matrix& upstream) {
    return ((pre.array() > 0.0).cast<double>() * upstream.array()).matrix();
}

Vector col_sums(const Matrix& m) { return m.colwise().sum().transpose(); }

void check_labels(const Labels& y, Index n, Index k) {
    require(static_cast<Index>(y.size()) == n, "labels: length must equal sample count");
    for (int label : y)
        require(label >= 0 && label < k,
                "labels: class id " + std::to_string(label) + " outside 0.." + std::to_string(k - 1));
}

}  // namespace

Gradients Gradients::zeros_like(const ModelParams& p) {
    Gradients g;
    g.w1 = Matrix::Zero(p.w1.rows(), p.w1.cols());
    g.w2 = Matrix::Zero(p.w2.rows(), p.w2.cols());
    g.w3 = Matrix::Zero(p.w3.rows(), p.w3.cols());
    g.w4 = Matrix::Zero(p.w4.rows(), p.w4.cols());
    g.b1 = Vector::Zero(p.b1.size());
    g.b2 = Vector::Zero(p.b2.size());
    g.b3 = Vector::Zero(p.b3.size());
    g.b4 = Vector::Zero(p.b4.size());
    return g;
}

ModelParams init_params(Index d, Index h, Index k, Rng& rng) {
    require(d >= 1 && h >= 1 && k >= 1, "init_params: dimensions must be >= 1");
    ModelParams p;
    p.w1 = uniform_matrix(rng, d, h, 1.0 / std::sqrt(static_cast<double>(d)));
    p.w2 = uniform_matrix(rng, h, k, 1.0 / std::sqrt(static_cast<double>(h)));
    p.w3 = uniform_matrix(rng, k, h, 1.0 / std::sqrt(static_cast<double>(k)));
    p.w4 = uniform_matrix(rng, h, d, 1.0 / std::sqrt(static_cast<double>(h)));
    p.b1 = Vector::Zero(h);
    p.b2 = Vector::Zero(k);
    p.b3 = Vector::Zero(h);
    p.b4 = Vector::Zero(d);
    return p;
}

Matrix softmax_rows(const Matrix& z) {
    Matrix out(z.rows(), z.cols());
    for (Index i = 0; i < z.rows(); ++i) {
        const double m = z.row(i).maxCoeff();
        Eigen::RowVectorXd e = (z.row(i).array() - m).exp();
        out.row(i) = e / e.sum();
    }
    return out;
}

ForwardPass forward(const ModelParams& p, const Matrix& x) {
    require(x.cols() == p.d(), "forward: input width " + std::to_string(x.cols()) +
                                   " does not match d=" + std::to_string(p.d()));
    ForwardPass fp;
    fp.h1_pre = (x * p.w1).rowwise() + p.b1.transpose();
    fp.h1 = relu(fp.h1_pre);
    fp.z = (fp.h1 * p.w2).rowwise() + p.b2.transpose();
    fp.h2_pre = (fp.z * p.w3).rowwise() + p.b3.transpose();
    fp.h2 = relu(fp.h2_pre);
    fp.x_hat = (fp.h2 * p.w4).rowwise() + p.b4.transpose();
    fp.scores = softmax_rows(fp.z);
    return fp;
}

LossGrad cross_entropy_loss(const Matrix& z, const Labels& y) {
    const Index n = z.rows();
    const Index k = z.cols();
    check_labels(y, n, k);

    LossGrad out;
    out.grad = softmax_rows(z);
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double m = z.row(i).maxCoeff();
        const double lse = m + std::log((z.row(i).array() - m).exp().sum());
        total += lse - z(i, y[static_cast<size_t>(i)]);
        out.grad(i, y[static_cast<size_t>(i)]) -= 1.0;
    }
    out.loss = total / static_cast<double>(n);
    out.grad /= static_cast<double>(n);
    return out;
}

LossGrad smooth_l1_loss(const Matrix& x_hat, const Matrix& x) {
    require(x_hat.rows() == x.rows() && x_hat.cols() == x.cols(),
            "smooth_l1_loss: shape mismatch");
    constexpr double delta = 1.0;
    const double count = static_cast<double>(x_hat.size());

    const Eigen::ArrayXXd e = (x_hat - x).array();
    const Eigen::ArrayXXd abs_e = e.abs();
    const Eigen::ArrayXXd quadratic = 0.5 * e * e;
    const Eigen::ArrayXXd linear = delta * (abs_e - 0.5 * delta);

    LossGrad out;
    out.loss = (abs_e < delta).select(quadratic, linear).sum() / count;
    out.grad = (e.max(-delta).min(delta) / count).matrix();
    return out;
}

TotalLoss total_loss(const ModelParams& p, const Matrix& x, const Labels& y, double lambda) {
    require(lambda >= 0.0, "total_loss: lambda must be >= 0");
    const ForwardPass fp = forward(p, x);
    const LossGrad ce = cross_entropy_loss(fp.z, y);

    TotalLoss out;
    out.phi = ce.loss;
    Matrix dz = ce.grad;

    out.grads = Gradients::zeros_like(p);
    if (lambda > 0.0) {
        const LossGrad rec = smooth_l1_loss(fp.x_hat, x);
        out.phi += lambda * rec.loss;

        const Matrix d_xhat = lambda * rec.grad;
        out.grads.w4 = fp.h2.transpose() * d_xhat;
        out.grads.b4 = col_sums(d_xhat);
        const Matrix d_h2pre = relu_backward(fp.h2_pre, d_xhat * p.w4.transpose());
        out.grads.w3 = fp.z.transpose() * d_h2pre;
        out.grads.b3 = col_sums(d_h2pre);
        dz += d_h2pre * p.w3.transpose();  // latent also feeds the decoder
    }

    out.grads.w2 = fp.h1.transpose() * dz;
    out.grads.b2 = col_sums(dz);
    const Matrix d_h1pre = relu_backward(fp.h1_pre, dz * p.w2.transpose());
    out.grads.w1 = x.transpose() * d_h1pre;
    out.grads.b1 = col_sums(d_h1pre);
    return out;
}

Prediction predict(const ModelParams& p, const Matrix& x) {
    Prediction pred;
    pred.scores = softmax_rows(fcnn_forward(p, x));
    pred.labels.resize(static_cast<size_t>(pred.scores.rows()));
    for (Index i = 0; i < pred.scores.rows(); ++i) {
        int best = 0;
        for (Index j = 1; j < pred.scores.cols(); ++j)
            if (pred.scores(i, j) > pred.scores(i, best)) best = static_cast<int>(j);
        pred.labels[static_cast<size_t>(i)] = best;
    }
    return pred;
}

Matrix fcnn_forward(const ModelParams& p, const Matrix& x) {
    require(x.cols() == p.d(), "fcnn_forward: input width does not match d");
    const Matrix h1 = relu((x * p.w1).rowwise() + p.b1.transpose());
    return (h1 * p.w2).rowwise() + p.b2.transpose();
}

TotalLoss fcnn_loss(const ModelParams& p, const Matrix& x, const Labels& y) {
    const Matrix h1_pre = (x * p.w1).rowwise() + p.b1.transpose();
    const Matrix h1 = relu(h1_pre);
    const Matrix z = (h1 * p.w2).rowwise() + p.b2.transpose();
    const LossGrad ce = cross_entropy_loss(z, y);

    TotalLoss out;
    out.phi = ce.loss;
    out.grads = Gradients::zeros_like(p);
    out.grads.w2 = h1.transpose() * ce.grad;
    out.grads.b2 = col_sums(ce.grad);
    const Matrix d_h1pre = relu_backward(h1_pre, ce.grad * p.w2.transpose());
    out.grads.w1 = x.transpose() * d_h1pre;
    out.grads.b1 = col_sums(d_h1pre);
    return out;
}

}  // namespace ssae
