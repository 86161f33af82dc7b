#include "ipp/gp.hpp"

#include <cmath>
#include <numeric>

#include "ipp/errors.hpp"
#include "ipp/nelder_mead.hpp"

namespace ipp {

void GpHyperparams::validate() const {
    if (sigma_f <= 0.0) throw ConfigError("sigma_f must be positive");
    if (sigma_n < 0.0) throw ConfigError("sigma_n must be nonnegative");
    if (length_scales.x <= 0.0 || length_scales.y <= 0.0)
        throw ConfigError("length scales must be positive");
}

double GpModel::mean_const() const {
    if (train_y.empty()) return prior_mean;
    return std::accumulate(train_y.begin(), train_y.end(), 0.0) /
           static_cast<double>(train_y.size());
}

double kernel(const Vec2& p, const Vec2& q, const GpHyperparams& h) {
    const double dx = (p.x - q.x) / h.length_scales.x;
    const double dy = (p.y - q.y) / h.length_scales.y;
    return h.sigma_f * h.sigma_f * std::exp(-0.5 * (dx * dx + dy * dy));
}

Eigen::MatrixXd gram(const std::vector<Vec2>& points, const GpHyperparams& h, bool add_noise) {
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = kernel(points[i], points[j], h);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    if (add_noise) K.diagonal().array() += h.sigma_n * h.sigma_n;
    return K;
}

Eigen::LLT<Eigen::MatrixXd> cholesky_with_jitter(const Eigen::MatrixXd& K, double scale) {
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() == Eigen::Success) return llt;
    for (double jitter = 1e-10 * scale; jitter <= 1e-6 * scale * (1.0 + 1e-12); jitter *= 10.0) {
        Eigen::MatrixXd Kj = K;
        Kj.diagonal().array() += jitter;
        llt.compute(Kj);
        if (llt.info() == Eigen::Success) return llt;
    }
    throw NumericError("covariance matrix is not positive definite after jitter escalation");
}

double log_det_pd(const Eigen::MatrixXd& K) {
    const double scale = K.rows() > 0 ? K.diagonal().mean() : 1.0;
    const auto llt = cholesky_with_jitter(K, std::max(scale, 1e-300));
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double entropy(const Eigen::MatrixXd& K) {
    const double n = static_cast<double>(K.rows());
    return 0.5 * (n * std::log(2.0 * M_PI * M_E) + log_det_pd(K));
}

namespace {

Eigen::MatrixXd extract_block(const Eigen::MatrixXd& K, const std::vector<int>& idx) {
    Eigen::MatrixXd B(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) B(i, j) = K(idx[i], idx[j]);
    return B;
}

}  // namespace

double mutual_information(const Eigen::MatrixXd& K_joint, const std::vector<int>& block1,
                          const std::vector<int>& block2) {
    if (static_cast<Eigen::Index>(block1.size() + block2.size()) != K_joint.rows())
        throw ConfigError("block index sets must partition the joint covariance");
    if (block1.empty() || block2.empty()) return 0.0;
    const double ld1 = log_det_pd(extract_block(K_joint, block1));
    const double ld2 = log_det_pd(extract_block(K_joint, block2));
    const double ld = log_det_pd(K_joint);
    return 0.5 * (ld1 + ld2 - ld);
}

Posterior predict(const GpModel& model, const std::vector<Vec2>& query) {
    model.hyper.validate();
    const Eigen::Index nq = static_cast<Eigen::Index>(query.size());
    Posterior post;
    post.cov = gram(query, model.hyper, false);
    post.mean = Eigen::VectorXd::Constant(nq, model.mean_const());
    if (model.train_x.empty()) return post;
    if (model.train_x.size() != model.train_y.size())
        throw ConfigError("training inputs and targets differ in length");

    const Eigen::Index nt = static_cast<Eigen::Index>(model.train_x.size());
    const Eigen::MatrixXd Kii = gram(model.train_x, model.hyper, true);
    Eigen::MatrixXd Koi(nq, nt);
    for (Eigen::Index i = 0; i < nq; ++i)
        for (Eigen::Index j = 0; j < nt; ++j)
            Koi(i, j) = kernel(query[i], model.train_x[j], model.hyper);

    const double m = model.mean_const();
    Eigen::VectorXd r(nt);
    for (Eigen::Index j = 0; j < nt; ++j) r(j) = model.train_y[j] - m;

    const auto llt = cholesky_with_jitter(Kii, model.hyper.sigma_f * model.hyper.sigma_f);
    post.mean = Eigen::VectorXd::Constant(nq, m) + Koi * llt.solve(r);
    post.cov -= Koi * llt.solve(Koi.transpose());

    // Numerical round-off can push near-zero variances slightly negative.
    for (Eigen::Index i = 0; i < nq; ++i)
        if (post.cov(i, i) < 0.0 && post.cov(i, i) > -1e-9) post.cov(i, i) = 0.0;
    return post;
}

double log_marginal_likelihood(const GpModel& model) {
    if (model.train_x.empty()) throw ConfigError("log marginal likelihood needs training data");
    model.hyper.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(model.train_x.size());
    const Eigen::MatrixXd K = gram(model.train_x, model.hyper, true);
    const double m = model.mean_const();
    Eigen::VectorXd r(n);
    for (Eigen::Index j = 0; j < n; ++j) r(j) = model.train_y[j] - m;
    const auto llt = cholesky_with_jitter(K, model.hyper.sigma_f * model.hyper.sigma_f);
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * r.dot(llt.solve(r)) - 0.5 * logdet -
           0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

GpHyperparams fit_hyperparams(const GpModel& model, const GpHyperparams& init,
                              const FitOptions& opts) {
    if (model.train_x.size() < 2) throw ConfigError("hyperparameter fit needs >= 2 points");
    init.validate();

    auto objective = [&](const std::vector<double>& logp) {
        GpModel candidate = model;
        candidate.hyper.sigma_f = std::exp(logp[0]);
        candidate.hyper.length_scales = {std::exp(logp[1]), std::exp(logp[2])};
        candidate.hyper.sigma_n = init.sigma_n;  // frozen
        try {
            return -log_marginal_likelihood(candidate);
        } catch (const NumericError&) {
            return 1e12;
        }
    };

    NelderMeadOptions nm;
    nm.max_iter = opts.max_iter;
    nm.diameter_tol = opts.diameter_tol;
    const auto result = nelder_mead(
        objective,
        {std::log(init.sigma_f), std::log(init.length_scales.x), std::log(init.length_scales.y)},
        nm);

    GpModel with_init = model;
    with_init.hyper = init;
    const double lml_init = log_marginal_likelihood(with_init);
    if (-result.fx <= lml_init) return init;

    GpHyperparams fitted = init;
    fitted.sigma_f = std::exp(result.x[0]);
    fitted.length_scales = {std::exp(result.x[1]), std::exp(result.x[2])};
    return fitted;
}

}  // namespace ipp
