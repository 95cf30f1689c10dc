#include <doctest.h>

#include <random>

#include "gsc/errors.hpp"
#include "gsc/svm.hpp"
#include "helpers.hpp"

using namespace gsc;

namespace {

/// Two Gaussian blobs at (+-separation, 0), labels +-1.
Dataset blobs(int per_class, double separation, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Dataset d;
    d.x.resize(2 * per_class, 2);
    d.y.resize(2 * per_class);
    for (int i = 0; i < 2 * per_class; ++i) {
        int label = i % 2 == 0 ? 1 : -1;
        d.x(i, 0) = label * separation + gauss(rng);
        d.x(i, 1) = gauss(rng);
        d.y(i) = label;
    }
    return d;
}

} // namespace

TEST_CASE("two separable points are classified perfectly") {
    Dataset d;
    d.x.resize(2, 1);
    d.x << -1.0, 1.0;
    d.y.resize(2);
    d.y << -1, 1;
    SvmModel m = train_svm(d, 0.01, 200, 1);
    CHECK(accuracy(m, d) == doctest::Approx(1.0));
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(1, -3.0);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(1, 3.0);
    CHECK(predict(m, lo) == -1);
    CHECK(predict(m, hi) == 1);
}

TEST_CASE("flipping every label flips every prediction") {
    Dataset d = blobs(40, 1.5, 3);
    Dataset flipped = d;
    flipped.y = -d.y;
    SvmModel m = train_svm(d, 0.01, 60, 5);
    SvmModel mf = train_svm(flipped, 0.01, 60, 5);
    for (int i = 0; i < d.x.rows(); ++i) {
        Eigen::VectorXd x = d.x.row(i).transpose();
        CHECK(predict(m, x) == -predict(mf, x));
    }
}

TEST_CASE("gaussian blobs at +-2 are separated with >= 95% test accuracy") {
    Dataset train = blobs(100, 2.0, 1);
    Dataset test = blobs(100, 2.0, 2);
    SvmModel m = train_svm(train, 0.001, 100, 1);
    CHECK(accuracy(m, test) >= 0.95);
}

TEST_CASE("training is deterministic in data, parameters, and seed") {
    Dataset d = blobs(50, 1.0, 11);
    SvmModel a = train_svm(d, 0.005, 40, 123);
    SvmModel b = train_svm(d, 0.005, 40, 123);
    CHECK((a.w - b.w).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.bias == b.bias);
    SvmModel c = train_svm(d, 0.005, 40, 124);
    CHECK((a.w - c.w).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("longer training does not raise the averaged primal objective") {
    Dataset d = blobs(100, 2.0, 7);
    SvmModel short_run = train_svm(d, 0.01, 20, 2);
    SvmModel long_run = train_svm(d, 0.01, 200, 2);
    CHECK(primal_objective(long_run, d) <= primal_objective(short_run, d) + 1e-9);
}

TEST_CASE("feature scaling is absorbed by standardization") {
    Dataset train = blobs(60, 1.5, 21);
    Dataset test = blobs(60, 1.5, 22);
    Dataset train_scaled = train;
    Dataset test_scaled = test;
    train_scaled.x.col(1) *= 10.0;
    test_scaled.x.col(1) *= 10.0;

    SvmModel m = train_svm(train, 0.01, 50, 9);
    SvmModel ms = train_svm(train_scaled, 0.01, 50, 9);
    Eigen::VectorXi p = predict(m, test.x);
    Eigen::VectorXi ps = predict(ms, test_scaled.x);
    CHECK((p - ps).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("degenerate training inputs are rejected") {
    Dataset empty;
    empty.x.resize(0, 2);
    empty.y.resize(0);
    CHECK_THROWS_AS(train_svm(empty, 0.01, 10, 1), EmptyDatasetError);

    Dataset single = blobs(10, 1.0, 1);
    single.y.setConstant(1);
    CHECK_THROWS_AS(train_svm(single, 0.01, 10, 1), SingleClassDatasetError);

    Dataset bad = blobs(10, 1.0, 1);
    bad.y.resize(3);
    CHECK_THROWS_AS(train_svm(bad, 0.01, 10, 1), LengthMismatchError);

    Dataset odd = blobs(10, 1.0, 1);
    odd.y(0) = 2;  // labels must be -1/+1
    CHECK_THROWS_AS(train_svm(odd, 0.01, 10, 1), DataError);

    Dataset fine = blobs(10, 1.0, 1);
    CHECK_THROWS_AS(train_svm(fine, 0.0, 10, 1), ConfigError);
    CHECK_THROWS_AS(train_svm(fine, 0.01, 0, 1), ConfigError);
}

TEST_CASE("decision-boundary ties resolve to +1") {
    SvmModel m;
    m.w = Eigen::VectorXd::Zero(2);
    m.bias = 0.0;
    m.feat_mean = Eigen::VectorXd::Zero(2);
    m.feat_scale = Eigen::VectorXd::Ones(2);
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
    CHECK(predict(m, origin) == 1);
}

TEST_CASE("batch prediction equals per-row prediction") {
    Dataset d = blobs(30, 1.0, 31);
    SvmModel m = train_svm(d, 0.01, 30, 4);
    Eigen::VectorXi batch = predict(m, d.x);
    REQUIRE(batch.size() == d.x.rows());
    for (int i = 0; i < d.x.rows(); ++i) {
        CHECK(batch(i) == predict(m, Eigen::VectorXd(d.x.row(i).transpose())));
    }
    const Eigen::VectorXd wrong_len = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(predict(m, wrong_len), DimensionMismatchError);
}

TEST_CASE("label-vector accuracy") {
    Eigen::VectorXi a(4), b(4);
    a << 1, -1, 1, -1;
    b << 1, -1, 1, -1;
    CHECK(accuracy(a, b) == doctest::Approx(1.0));
    CHECK(accuracy(a, Eigen::VectorXi(-b)) == doctest::Approx(0.0));
    Eigen::VectorXi c = b;
    c(3) = 1;
    CHECK(accuracy(a, c) == doctest::Approx(0.75));
    CHECK_THROWS_AS(accuracy(a, Eigen::VectorXi::Ones(3)), LengthMismatchError);
    CHECK_THROWS_AS(accuracy(Eigen::VectorXi(), Eigen::VectorXi()), EmptyDatasetError);
}

TEST_CASE("model CSV round trip is bit-exact") {
    testutil::TempDir tmp;
    Dataset d = blobs(40, 1.2, 41);
    SvmModel m = train_svm(d, 0.02, 35, 77);
    std::string path = tmp.file("model.csv");
    save_model_csv(m, path);
    SvmModel back = load_model_csv(path);

    CHECK(back.lambda == m.lambda);
    CHECK(back.epochs == m.epochs);
    CHECK(back.seed == m.seed);
    CHECK(back.bias == m.bias);
    CHECK((back.w - m.w).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.feat_mean - m.feat_mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.feat_scale - m.feat_scale).cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXi before = predict(m, d.x);
    Eigen::VectorXi after = predict(back, d.x);
    CHECK((before - after).cwiseAbs().maxCoeff() == 0);

    testutil::spit(path, "not,a,model\n");
    CHECK_THROWS_AS(load_model_csv(path), FileFormatError);
    CHECK_THROWS_AS(load_model_csv(tmp.file("nope.csv")), DataError);
}
