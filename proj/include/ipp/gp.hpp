#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

// Squared-exponential hyperparameters with one length scale per input axis.
struct GpHyperparams {
    double sigma_f = 1.0;                    // signal std
    double sigma_n = 0.0;                    // observation noise std
    Vec2 length_scales{1.0, 1.0};            // per-axis, meters

    void validate() const;  // throws ConfigError on non-positive values
};

struct GpModel {
    double prior_mean = 0.0;  // used while the train set is empty
    GpHyperparams hyper;
    std::vector<Vec2> train_x;
    std::vector<double> train_y;

    // Constant mean: empirical mean of train_y, or prior_mean with no data.
    double mean_const() const;
};

struct Posterior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

// Non-isotropic squared-exponential covariance.
double kernel(const Vec2& p, const Vec2& q, const GpHyperparams& h);

// Dense covariance matrix over points; add_noise puts sigma_n^2 on the diagonal.
Eigen::MatrixXd gram(const std::vector<Vec2>& points, const GpHyperparams& h, bool add_noise);

// Cholesky with escalating diagonal jitter (1e-10..1e-6 of `scale`).
// Throws NumericError if the matrix never factorizes.
Eigen::LLT<Eigen::MatrixXd> cholesky_with_jitter(const Eigen::MatrixXd& K, double scale);

// Log-determinant via the jittered Cholesky factor.
double log_det_pd(const Eigen::MatrixXd& K);

// Differential entropy of a Gaussian with covariance K, in nats.
double entropy(const Eigen::MatrixXd& K);

// Mutual information between the two index blocks of a joint covariance, nats.
double mutual_information(const Eigen::MatrixXd& K_joint, const std::vector<int>& block1,
                          const std::vector<int>& block2);

Posterior predict(const GpModel& model, const std::vector<Vec2>& query);

double log_marginal_likelihood(const GpModel& model);

struct FitOptions {
    int max_iter = 200;
    double diameter_tol = 1e-6;
};

// Simplex search over (log sigma_f, log l_x, log l_y); sigma_n stays frozen.
// Never returns a fit with lower marginal likelihood than `init`.
GpHyperparams fit_hyperparams(const GpModel& model, const GpHyperparams& init,
                              const FitOptions& opts = {});

}  // namespace ipp
