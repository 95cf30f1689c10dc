#include "gsc/svm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "gsc/errors.hpp"

namespace gsc {

namespace {

void validate(const Dataset& data) {
    const Eigen::Index m = data.x.rows();
    if (m == 0) throw EmptyDatasetError("dataset has no samples");
    if (data.y.size() != m) throw LengthMismatchError("label count does not match sample count");
    bool pos = false, neg = false;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (data.y(i) != 1 && data.y(i) != -1) {
            throw DataError("labels must be -1 or +1");
        }
        (data.y(i) == 1 ? pos : neg) = true;
    }
    if (!pos || !neg) throw SingleClassDatasetError("training data contains a single class");
    if (!data.x.allFinite()) throw DataError("features contain NaN or infinity");
}

} // namespace

Eigen::VectorXd SvmModel::standardize(const Eigen::VectorXd& x) const {
    return (x - feat_mean).cwiseProduct(feat_scale);
}

SvmModel train_svm(const Dataset& data, double lambda, int epochs, std::uint64_t seed) {
    validate(data);
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    const int m = static_cast<int>(data.x.rows());
    const int d = static_cast<int>(data.x.cols());

    SvmModel model;
    model.lambda = lambda;
    model.epochs = epochs;
    model.seed = seed;
    model.feat_mean = data.x.colwise().mean();
    model.feat_scale.resize(d);
    for (int c = 0; c < d; ++c) {
        const double var = (data.x.col(c).array() - model.feat_mean(c)).square().mean();
        model.feat_scale(c) = var > 1e-12 ? 1.0 / std::sqrt(var) : 0.0;
    }
    Eigen::MatrixXd xs = (data.x.rowwise() - model.feat_mean.transpose()) *
                         model.feat_scale.asDiagonal();

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, m - 1);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    double b = 0.0;
    Eigen::VectorXd w_avg = Eigen::VectorXd::Zero(d);
    double b_avg = 0.0;
    std::int64_t n_avg = 0;
    const std::int64_t total = static_cast<std::int64_t>(epochs) * m;
    const double radius = 1.0 / std::sqrt(lambda);

    for (std::int64_t t = 1; t <= total; ++t) {
        const int i = pick(rng);
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const double margin = data.y(i) * (w.dot(xs.row(i)) + b);
        w *= (1.0 - eta * lambda);
        if (margin < 1.0) {
            w += (eta * data.y(i)) * xs.row(i).transpose();
            b += eta * data.y(i);
        }
        const double norm = w.norm();
        if (norm > radius) w *= radius / norm;
        if (2 * t > total) {  // tail-half averaging
            w_avg += w;
            b_avg += b;
            ++n_avg;
        }
    }
    model.w = w_avg / static_cast<double>(n_avg);
    model.bias = b_avg / static_cast<double>(n_avg);
    return model;
}

int predict(const SvmModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.w.size()) throw DimensionMismatchError("feature length mismatch");
    return model.w.dot(model.standardize(x)) + model.bias >= 0.0 ? 1 : -1;
}

Eigen::VectorXi predict(const SvmModel& model, const Eigen::MatrixXd& features) {
    Eigen::VectorXi out(features.rows());
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        out(i) = predict(model, Eigen::VectorXd(features.row(i)));
    }
    return out;
}

double accuracy(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth) {
    if (predicted.size() == 0) throw EmptyDatasetError("no labels to compare");
    if (predicted.size() != truth.size()) throw LengthMismatchError("label vectors differ in length");
    int correct = 0;
    for (Eigen::Index i = 0; i < predicted.size(); ++i) {
        if (predicted(i) == truth(i)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

double accuracy(const SvmModel& model, const Dataset& data) {
    if (data.x.rows() == 0) throw EmptyDatasetError("dataset has no samples");
    if (data.y.size() != data.x.rows()) {
        throw LengthMismatchError("label count does not match sample count");
    }
    return accuracy(predict(model, data.x), data.y);
}

double primal_objective(const SvmModel& model, const Dataset& data) {
    validate(data);
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
        const Eigen::VectorXd xs = model.standardize(data.x.row(i));
        hinge += std::max(0.0, 1.0 - data.y(i) * (model.w.dot(xs) + model.bias));
    }
    hinge /= static_cast<double>(data.x.rows());
    return 0.5 * model.lambda * model.w.squaredNorm() + hinge;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void save_model_csv(const SvmModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << fmt17(model.lambda) << "," << model.epochs << "," << model.seed << ","
        << fmt17(model.bias);
    for (Eigen::Index i = 0; i < model.w.size(); ++i) out << "," << fmt17(model.w(i));
    out << "\nmean";
    for (Eigen::Index i = 0; i < model.feat_mean.size(); ++i) {
        out << "," << fmt17(model.feat_mean(i));
    }
    out << "\nscale";
    for (Eigen::Index i = 0; i < model.feat_scale.size(); ++i) {
        out << "," << fmt17(model.feat_scale(i));
    }
    out << "\n";
}

SvmModel load_model_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    auto split = [](const std::string& line) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        return fields;
    };
    std::string line;
    if (!std::getline(in, line)) throw FileFormatError("model file is empty: " + path);
    std::vector<std::string> head = split(line);
    if (head.size() < 4) throw FileFormatError("model header needs lambda,epochs,seed,bias");
    SvmModel model;
    model.lambda = std::stod(head[0]);
    model.epochs = std::stoi(head[1]);
    model.seed = std::stoull(head[2]);
    model.bias = std::stod(head[3]);
    const int d = static_cast<int>(head.size()) - 4;
    model.w.resize(d);
    for (int i = 0; i < d; ++i) model.w(i) = std::stod(head[4 + i]);

    auto read_row = [&](const char* name, Eigen::VectorXd& dst) {
        if (!std::getline(in, line)) throw FileFormatError(std::string("missing ") + name + " row");
        std::vector<std::string> fields = split(line);
        if (fields.empty() || fields[0] != name || static_cast<int>(fields.size()) != d + 1) {
            throw FileFormatError(std::string("malformed ") + name + " row");
        }
        dst.resize(d);
        for (int i = 0; i < d; ++i) dst(i) = std::stod(fields[1 + i]);
    };
    read_row("mean", model.feat_mean);
    read_row("scale", model.feat_scale);
    return model;
}

} // namespace gsc
