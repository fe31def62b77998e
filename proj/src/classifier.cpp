#include "pqmt/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace pqmt {

namespace {

void check_dataset(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                   int classes) {
    if (features.rows() == 0) throw std::invalid_argument("classifier: empty dataset");
    if (static_cast<int>(labels.size()) != features.rows())
        throw std::invalid_argument("classifier: features/labels misaligned");
    for (int y : labels)
        if (y < 0 || y >= classes)
            throw std::invalid_argument("classifier: label out of range");
}

}  // namespace

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
    Eigen::VectorXd exps = shifted.array().exp();
    return exps / exps.sum();
}

Eigen::MatrixXd predict_proba(const LinearModel& model, const Eigen::MatrixXd& features) {
    Eigen::MatrixXd logits = features * model.weights.transpose();
    logits.rowwise() += model.bias.transpose();
    Eigen::MatrixXd probs(logits.rows(), logits.cols());
    for (int i = 0; i < logits.rows(); ++i)
        probs.row(i) = softmax(logits.row(i).transpose()).transpose();
    return probs;
}

double cross_entropy(const LinearModel& model, const Eigen::MatrixXd& features,
                     const std::vector<int>& labels) {
    check_dataset(features, labels, static_cast<int>(model.weights.rows()));
    Eigen::MatrixXd probs = predict_proba(model, features);
    double loss = 0.0;
    for (int i = 0; i < probs.rows(); ++i)
        loss -= std::log(std::max(probs(i, labels[i]), 1e-300));
    return loss / static_cast<double>(probs.rows());
}

double accuracy(const LinearModel& model, const Eigen::MatrixXd& features,
                const std::vector<int>& labels) {
    check_dataset(features, labels, static_cast<int>(model.weights.rows()));
    Eigen::MatrixXd probs = predict_proba(model, features);
    int hits = 0;
    for (int i = 0; i < probs.rows(); ++i) {
        int best = 0;  // ties break toward the lowest class index
        for (int c = 1; c < probs.cols(); ++c)
            if (probs(i, c) > probs(i, best)) best = c;
        if (best == labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(probs.rows());
}

double confidence(const LinearModel& model, const Eigen::MatrixXd& features) {
    if (features.rows() == 0) throw std::invalid_argument("confidence: empty dataset");
    Eigen::MatrixXd probs = predict_proba(model, features);
    double sum = 0.0;
    for (int i = 0; i < probs.rows(); ++i) sum += probs.row(i).maxCoeff();
    return sum / static_cast<double>(probs.rows());
}

void cross_entropy_gradient(const LinearModel& model, const Eigen::MatrixXd& features,
                            const std::vector<int>& labels,
                            Eigen::MatrixXd& grad_weights, Eigen::VectorXd& grad_bias) {
    const int samples = static_cast<int>(features.rows());
    Eigen::MatrixXd residual = predict_proba(model, features);  // P - onehot
    for (int i = 0; i < samples; ++i) residual(i, labels[i]) -= 1.0;
    residual /= static_cast<double>(samples);
    grad_weights = residual.transpose() * features;
    grad_bias = residual.colwise().sum().transpose();
}

TrainResult train(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                  int classes, const TrainConfig& config,
                  const Eigen::MatrixXd* eval_features,
                  const std::vector<int>* eval_labels) {
    if (classes < 2) throw std::invalid_argument("train: need at least 2 classes");
    if (config.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (!(config.learning_rate >= 0.0))
        throw std::invalid_argument("train: learning rate must be >= 0");
    if (config.batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
    check_dataset(features, labels, classes);

    const int samples = static_cast<int>(features.rows());
    const int dim = static_cast<int>(features.cols());
    const Eigen::MatrixXd& eval_x = eval_features ? *eval_features : features;
    const std::vector<int>& eval_y = eval_labels ? *eval_labels : labels;

    TrainResult result;
    result.model.weights = Eigen::MatrixXd::Zero(classes, dim);
    result.model.bias = Eigen::VectorXd::Zero(classes);

    Eigen::MatrixXd m_w = Eigen::MatrixXd::Zero(classes, dim);
    Eigen::MatrixXd v_w = Eigen::MatrixXd::Zero(classes, dim);
    Eigen::VectorXd m_b = Eigen::VectorXd::Zero(classes);
    Eigen::VectorXd v_b = Eigen::VectorXd::Zero(classes);
    long step = 0;

    std::mt19937_64 rng(config.seed);
    std::vector<int> order(samples);
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (int start = 0; start < samples; start += config.batch_size) {
            const int count = std::min(config.batch_size, samples - start);
            Eigen::MatrixXd batch_x(count, dim);
            std::vector<int> batch_y(count);
            for (int k = 0; k < count; ++k) {
                batch_x.row(k) = features.row(order[start + k]);
                batch_y[k] = labels[order[start + k]];
            }
            Eigen::MatrixXd grad_w;
            Eigen::VectorXd grad_b;
            cross_entropy_gradient(result.model, batch_x, batch_y, grad_w, grad_b);

            ++step;
            const double bc1 = 1.0 - std::pow(config.beta1, step);
            const double bc2 = 1.0 - std::pow(config.beta2, step);
            m_w = config.beta1 * m_w + (1.0 - config.beta1) * grad_w;
            v_w = config.beta2 * v_w.array().matrix() +
                  (1.0 - config.beta2) * grad_w.array().square().matrix();
            m_b = config.beta1 * m_b + (1.0 - config.beta1) * grad_b;
            v_b = config.beta2 * v_b.array().matrix() +
                  (1.0 - config.beta2) * grad_b.array().square().matrix();
            result.model.weights.array() -=
                config.learning_rate * (m_w.array() / bc1) /
                ((v_w.array() / bc2).sqrt() + config.eps);
            result.model.bias.array() -=
                config.learning_rate * (m_b.array() / bc1) /
                ((v_b.array() / bc2).sqrt() + config.eps);
        }
        EpochMetrics metrics;
        metrics.epoch = epoch;
        metrics.loss = cross_entropy(result.model, features, labels);
        metrics.accuracy = accuracy(result.model, eval_x, eval_y);
        metrics.confidence = confidence(result.model, eval_x);
        result.history.push_back(metrics);
    }
    return result;
}

}  // namespace pqmt
