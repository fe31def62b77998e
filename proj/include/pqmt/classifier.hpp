#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace pqmt {

/// Single linear layer followed by softmax.
struct LinearModel {
    Eigen::MatrixXd weights;  ///< classes x features
    Eigen::VectorXd bias;     ///< classes
};

struct TrainConfig {
    int epochs = 100;
    double learning_rate = 0.05;
    int batch_size = 256;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 0;
};

struct EpochMetrics {
    int epoch = 0;
    double loss = 0.0;       ///< training cross-entropy after the epoch
    double accuracy = 0.0;   ///< on the evaluation set
    double confidence = 0.0; ///< on the evaluation set
};

struct TrainResult {
    LinearModel model;
    std::vector<EpochMetrics> history;
};

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

/// Class probabilities per sample (rows) for a row-per-sample feature matrix.
Eigen::MatrixXd predict_proba(const LinearModel& model, const Eigen::MatrixXd& features);

double cross_entropy(const LinearModel& model, const Eigen::MatrixXd& features,
                     const std::vector<int>& labels);
double accuracy(const LinearModel& model, const Eigen::MatrixXd& features,
                const std::vector<int>& labels);
/// Mean of the maximum softmax probability over the dataset.
double confidence(const LinearModel& model, const Eigen::MatrixXd& features);

/// Adam on mean cross-entropy over seeded shuffled mini-batches. Weights and
/// bias start at zero. Per-epoch accuracy/confidence are computed on the
/// evaluation set (the training set when none is given).
TrainResult train(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                  int classes, const TrainConfig& config,
                  const Eigen::MatrixXd* eval_features = nullptr,
                  const std::vector<int>* eval_labels = nullptr);

/// Analytic gradient of mean cross-entropy at the given model (for checks).
void cross_entropy_gradient(const LinearModel& model, const Eigen::MatrixXd& features,
                            const std::vector<int>& labels,
                            Eigen::MatrixXd& grad_weights, Eigen::VectorXd& grad_bias);

}  // namespace pqmt
