#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace rtpoll {

// Empirical CDF over a fixed sample. eval(x) is the fraction of samples <= x,
// so it is right-continuous and nondecreasing.
class Ecdf {
public:
    Ecdf() = default;
    explicit Ecdf(std::vector<double> samples);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

private:
    std::vector<double> values_; // sorted ascending
};

double mean_of(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs); // unbiased, n-1

// Inverse standard normal CDF (Acklam's rational approximation, ~1e-9).
double inv_normal_cdf(double p);

// Symmetric normal-approximation CI around the mean of the batch values.
// Throws std::invalid_argument with fewer than 2 batches.
std::pair<double, double> batch_ci(const std::vector<double>& batch_values, double level);

// sup_x |ECDF(x) - F(x)| checking both one-sided jumps at every sample point.
// Throws std::invalid_argument on an empty ECDF.
double ks_distance(const Ecdf& e, const std::function<double(double)>& model_cdf);

// Covariance matrix of per-batch mean vectors (dim x dim, row-major),
// divided by the batch count: the covariance of the grand mean estimate.
std::vector<double> batch_mean_covariance(const std::vector<std::vector<double>>& batch_vectors);

// sqrt(grad^T cov grad): delta-method standard error for a smooth function
// of the mean vector whose gradient at the estimate is `grad`.
double delta_se(const std::vector<double>& grad, const std::vector<double>& cov);

// Time-averaged first moments, second moments, and cross moment of a pair.
struct MomentSet {
    double m1 = 0.0;
    double m2 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double x = 0.0;

    std::vector<double> as_vector() const { return {m1, m2, q1, q2, x}; }
};

// Correlation implied by the moment set. Degenerate variances give 0.
double moments_correlation(const MomentSet& m);

// Gradient of moments_correlation with respect to (m1, m2, q1, q2, x),
// for delta-method error bars. Zero vector when degenerate.
std::vector<double> correlation_gradient(const MomentSet& m);

} // namespace rtpoll
