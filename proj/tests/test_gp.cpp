#include <doctest.h>

#include <cmath>
#include <random>

#include "ipp/errors.hpp"
#include "ipp/gp.hpp"
#include "oracles.hpp"

using namespace ipp;

namespace {

std::vector<Vec2> random_points(int n, double side, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, side);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {uni(rng), uni(rng)};
    return pts;
}

}  // namespace

TEST_CASE("kernel closed forms and symmetry") {
    GpHyperparams h;
    h.sigma_f = 1.0;
    h.length_scales = {1.0, 1.0};
    CHECK(kernel({3, 4}, {3, 4}, h) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel({0, 0}, {1, 1}, h) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    std::mt19937_64 rng(5);
    h.sigma_f = 2.5;
    h.length_scales = {3.0, 0.7};
    for (int i = 0; i < 20; ++i) {
        const auto pts = random_points(2, 10.0, rng);
        CHECK(kernel(pts[0], pts[1], h) == kernel(pts[1], pts[0], h));
    }
}

TEST_CASE("gram structure") {
    GpHyperparams h;
    h.sigma_f = 2.0;
    SUBCASE("single point") {
        const auto K = gram({{1, 2}}, h, false);
        CHECK(K(0, 0) == doctest::Approx(4.0));
    }
    SUBCASE("widely separated points decay off-diagonal") {
        const auto K = gram({{0, 0}, {100, 100}}, h, false);  // 100 length scales away
        CHECK(std::abs(K(0, 1)) < 1e-12 * h.sigma_f * h.sigma_f);
    }
    SUBCASE("cholesky succeeds on 50 seeded points with jitter") {
        std::mt19937_64 rng(17);
        h.length_scales = {5.0, 5.0};
        const auto pts = random_points(50, 100.0, rng);
        const auto K = gram(pts, h, false);
        CHECK_NOTHROW(cholesky_with_jitter(K, h.sigma_f * h.sigma_f));
    }
    SUBCASE("noisy gram is strictly positive definite") {
        std::mt19937_64 rng(18);
        h.sigma_n = 0.5;
        h.length_scales = {50.0, 50.0};
        const auto pts = random_points(30, 10.0, rng);  // heavily overlapping
        const auto K = gram(pts, h, true);
        const auto llt = cholesky_with_jitter(K, h.sigma_f * h.sigma_f);
        CHECK(llt.matrixLLT().diagonal().minCoeff() > 0.0);
    }
}

TEST_CASE("entropy closed forms") {
    Eigen::MatrixXd one(1, 1);
    one << 1.0;
    CHECK(entropy(one) == doctest::Approx(0.5 * std::log(2.0 * M_PI * M_E)).epsilon(1e-12));

    one(0, 0) = 1.0 / (2.0 * M_PI * M_E);
    CHECK(entropy(one) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("entropy of block-diagonal matrices adds over blocks") {
    std::mt19937_64 rng(23);
    const auto A = oracle::random_pd(4, rng);
    const auto B = oracle::random_pd(3, rng);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(7, 7);
    K.topLeftCorner(4, 4) = A;
    K.bottomRightCorner(3, 3) = B;
    CHECK(entropy(K) == doctest::Approx(entropy(A) + entropy(B)).epsilon(1e-9));
}

TEST_CASE("mutual information closed forms and identities") {
    SUBCASE("independent blocks give zero") {
        Eigen::MatrixXd K = Eigen::MatrixXd::Identity(5, 5);
        CHECK(mutual_information(K, {0, 1}, {2, 3, 4}) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("bivariate correlation 0.8") {
        Eigen::MatrixXd K(2, 2);
        K << 1.0, 0.8, 0.8, 1.0;
        CHECK(mutual_information(K, {0}, {1}) ==
              doctest::Approx(-0.5 * std::log(1.0 - 0.64)).epsilon(1e-9));
    }
    SUBCASE("symmetry and chain-rule identity on random PD matrices") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 20; ++trial) {
            const int n1 = 2 + static_cast<int>(rng() % 4);
            const int n2 = 2 + static_cast<int>(rng() % 4);
            const auto K = oracle::random_pd(n1 + n2, rng);
            std::vector<int> b1(n1), b2(n2);
            for (int i = 0; i < n1; ++i) b1[i] = i;
            for (int i = 0; i < n2; ++i) b2[i] = n1 + i;
            const double mi12 = mutual_information(K, b1, b2);
            const double mi21 = mutual_information(K, b2, b1);
            CHECK(mi12 == doctest::Approx(mi21).epsilon(1e-9));
            CHECK(mi12 >= -1e-9);

            Eigen::MatrixXd K1(n1, n1), K2(n2, n2);
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n1; ++j) K1(i, j) = K(i, j);
            for (int i = 0; i < n2; ++i)
                for (int j = 0; j < n2; ++j) K2(i, j) = K(n1 + i, n1 + j);
            const double identity = entropy(K1) + entropy(K2) - entropy(K);
            CHECK(mi12 == doctest::Approx(identity).epsilon(1e-9));
        }
    }
}

TEST_CASE("predict") {
    GpHyperparams h;
    h.sigma_f = 2.0;
    h.sigma_n = 1e-6;
    h.length_scales = {3.0, 3.0};

    SUBCASE("empty training set returns the prior") {
        GpModel model;
        model.prior_mean = -40.0;
        model.hyper = h;
        const auto post = predict(model, {{0, 0}, {1, 1}});
        CHECK(post.mean(0) == doctest::Approx(-40.0));
        CHECK(post.mean(1) == doctest::Approx(-40.0));
        CHECK(post.cov(0, 0) == doctest::Approx(h.sigma_f * h.sigma_f));
    }
    SUBCASE("near-noiseless interpolation at a training point") {
        GpModel model;
        model.hyper = h;
        model.train_x = {{2, 2}};
        model.train_y = {5.0};
        const auto post = predict(model, {{2, 2}});
        CHECK(std::abs(post.mean(0) - 5.0) < 1e-3);
        CHECK(post.cov(0, 0) < 1e-3 * h.sigma_f * h.sigma_f);
    }
    SUBCASE("matches the dense-inverse oracle") {
        std::mt19937_64 rng(47);
        GpModel model;
        model.hyper = h;
        model.hyper.sigma_n = 0.3;
        model.train_x = {{0, 0}, {1, 3}, {4, 2}, {2.5, 2.5}, {3, 0.5}};
        model.train_y = {1.0, -2.0, 0.5, 3.0, -1.5};
        const std::vector<Vec2> query{{0.5, 0.5}, {2, 2}, {3.5, 1}};
        const auto post = predict(model, query);
        const auto ref = oracle::dense_predict(model, query);
        for (int i = 0; i < 3; ++i) {
            CHECK(post.mean(i) == doctest::Approx(ref.mean(i)).epsilon(1e-8));
            for (int j = 0; j < 3; ++j)
                CHECK(post.cov(i, j) == doctest::Approx(ref.cov(i, j)).epsilon(1e-8));
        }
    }
    SUBCASE("posterior variance never exceeds the prior variance") {
        std::mt19937_64 rng(53);
        GpModel model;
        model.hyper = h;
        model.hyper.sigma_n = 0.2;
        model.train_x = random_points(12, 10.0, rng);
        for (size_t i = 0; i < model.train_x.size(); ++i)
            model.train_y.push_back(std::sin(model.train_x[i].x));
        const auto query = random_points(8, 10.0, rng);
        const auto post = predict(model, query);
        for (int i = 0; i < 8; ++i)
            CHECK(post.cov(i, i) <= h.sigma_f * h.sigma_f + 1e-9);
    }
    SUBCASE("invariant to training point order") {
        GpModel model;
        model.hyper = h;
        model.hyper.sigma_n = 0.1;
        model.train_x = {{0, 0}, {1, 1}, {2, 0}, {0, 2}};
        model.train_y = {1.0, 2.0, 3.0, 4.0};
        GpModel shuffled = model;
        std::swap(shuffled.train_x[0], shuffled.train_x[3]);
        std::swap(shuffled.train_y[0], shuffled.train_y[3]);
        std::swap(shuffled.train_x[1], shuffled.train_x[2]);
        std::swap(shuffled.train_y[1], shuffled.train_y[2]);
        const std::vector<Vec2> query{{0.7, 0.3}, {1.5, 1.5}};
        const auto a = predict(model, query);
        const auto b = predict(shuffled, query);
        for (int i = 0; i < 2; ++i) CHECK(a.mean(i) == doctest::Approx(b.mean(i)).epsilon(1e-9));
    }
}

TEST_CASE("log marginal likelihood") {
    SUBCASE("single point at the mean") {
        GpModel model;
        model.hyper.sigma_f = 1.0;
        model.hyper.sigma_n = 0.0;
        model.train_x = {{0, 0}};
        model.train_y = {7.0};  // mean_const equals y, residual zero
        CHECK(log_marginal_likelihood(model) ==
              doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
    }
    SUBCASE("matches the dense oracle on a seeded 10-point set") {
        std::mt19937_64 rng(61);
        GpModel model;
        model.hyper.sigma_f = 2.0;
        model.hyper.sigma_n = 0.4;
        model.hyper.length_scales = {2.0, 5.0};
        model.train_x = random_points(10, 8.0, rng);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < 10; ++i) model.train_y.push_back(gauss(rng));
        CHECK(log_marginal_likelihood(model) ==
              doctest::Approx(oracle::dense_lml(model)).epsilon(1e-8));
    }
    SUBCASE("duplicate points stay finite with noise") {
        GpModel model;
        model.hyper.sigma_n = 0.5;
        model.train_x = {{1, 1}, {1, 1}};
        model.train_y = {2.0, 2.1};
        CHECK(std::isfinite(log_marginal_likelihood(model)));
    }
}

TEST_CASE("fit_hyperparams") {
    // data generated from known hyperparameters
    GpHyperparams truth;
    truth.sigma_f = 2.0;
    truth.sigma_n = 0.1;
    truth.length_scales = {500.0, 500.0};

    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> uni(0.0, 2000.0);
    std::vector<Vec2> pts(40);
    for (auto& p : pts) p = {uni(rng), uni(rng)};

    // sample from the prior via cholesky of the gram matrix
    const Eigen::MatrixXd K = gram(pts, truth, true);
    const auto llt = cholesky_with_jitter(K, truth.sigma_f * truth.sigma_f);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd z(40);
    for (int i = 0; i < 40; ++i) z(i) = gauss(rng);
    const Eigen::VectorXd y = Eigen::MatrixXd(llt.matrixL()) * z;

    GpModel model;
    model.hyper = truth;
    model.train_x = pts;
    for (int i = 0; i < 40; ++i) model.train_y.push_back(y(i));

    GpHyperparams init;
    init.sigma_f = 1.0;
    init.sigma_n = 0.1;
    init.length_scales = {100.0, 100.0};

    const GpHyperparams fitted = fit_hyperparams(model, init);

    SUBCASE("recovers the length scale within a factor of two") {
        CHECK(fitted.length_scales.x > 250.0);
        CHECK(fitted.length_scales.x < 1000.0);
        CHECK(fitted.length_scales.y > 250.0);
        CHECK(fitted.length_scales.y < 1000.0);
    }
    SUBCASE("never worsens the marginal likelihood and keeps sigma_n frozen") {
        GpModel with_init = model;
        with_init.hyper = init;
        GpModel with_fit = model;
        with_fit.hyper = fitted;
        CHECK(log_marginal_likelihood(with_fit) >= log_marginal_likelihood(with_init));
        CHECK(fitted.sigma_n == init.sigma_n);
    }
    SUBCASE("log-space parameterization keeps scales positive") {
        CHECK(fitted.sigma_f > 0.0);
        CHECK(fitted.length_scales.x > 0.0);
        CHECK(fitted.length_scales.y > 0.0);
    }
}
