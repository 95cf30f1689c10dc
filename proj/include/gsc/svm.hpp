#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace gsc {

/// Rows are samples, labels are -1/+1.
struct Dataset {
    Eigen::MatrixXd x;
    Eigen::VectorXi y;
};

/// Linear SVM trained with the Pegasos stochastic subgradient method on the
/// hinge loss with an unregularized bias. Per-dimension standardization is
/// learned on the training set and stored with the model; constant features
/// get scale 0 and contribute nothing.
struct SvmModel {
    Eigen::VectorXd w;
    double bias = 0.0;
    Eigen::VectorXd feat_mean;
    Eigen::VectorXd feat_scale;
    double lambda = 0.0;
    int epochs = 0;
    std::uint64_t seed = 0;

    Eigen::VectorXd standardize(const Eigen::VectorXd& x) const;
};

/// Minimizes (lambda/2)||w||^2 + (1/M) sum max(0, 1 - y (w.x + b)) with step
/// 1/(lambda t), projection onto the ball of radius 1/sqrt(lambda), and
/// tail-half iterate averaging. Deterministic for a fixed seed.
SvmModel train_svm(const Dataset& data, double lambda, int epochs, std::uint64_t seed);

/// sign(w . standardize(x) + b); ties resolve to +1.
int predict(const SvmModel& model, const Eigen::VectorXd& x);

/// Batch form: one label per row of `features`.
Eigen::VectorXi predict(const SvmModel& model, const Eigen::MatrixXd& features);

/// Fraction of exact matches between two equal-length label vectors.
double accuracy(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth);

/// Fraction of correct predictions of the model on the dataset.
double accuracy(const SvmModel& model, const Dataset& data);

/// Primal objective of the model on the given data (standardized features).
double primal_objective(const SvmModel& model, const Dataset& data);

/// CSV round trip: `lambda,epochs,seed,bias,w_1..w_d` followed by a `mean`
/// row and a `scale` row, 17 significant digits (bit-exact reload).
void save_model_csv(const SvmModel& model, const std::string& path);
SvmModel load_model_csv(const std::string& path);

} // namespace gsc
