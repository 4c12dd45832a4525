#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rtpoll/ht.hpp"
#include "rtpoll/rng.hpp"
#include "rtpoll/stats.hpp"

namespace rtpoll {

// Law of one alternating-renewal cycle: the pair (T1, T2) of consecutive
// visit durations. Declared moments are cross-checked against the sampler
// by Monte Carlo when built through make_switch_law.
struct SwitchLaw {
    double mean1 = 1.0;
    double mean2 = 1.0;
    double var1 = 0.0;
    double var2 = 0.0;
    double cov = 0.0;
    std::function<std::pair<double, double>(Rng&)> sampler;

    double c1() const { return 1.0 / mean1; }
    double c2() const { return 1.0 / mean2; }
    double p1() const { return mean1 / (mean1 + mean2); }
};

// Checks moment consistency (Cauchy-Schwarz, positivity) and validates the
// sampler's first and second moments against the declared ones at 4 sigma.
SwitchLaw make_switch_law(double mean1, double mean2, double var1, double var2,
                          double cov, std::function<std::pair<double, double>(Rng&)> sampler);

// Independent Exp(c1), Exp(c2) visit durations.
SwitchLaw exponential_switch_law(double c1, double c2);

// Bivariate drift + compound Poisson input: J_j(t) = drift_j t + sum of jumps.
// lambda_j and Sigma are the declared mean rates and the Levy covariance
// matrix per unit time.
struct SubordinatorSpec {
    double drift1 = 0.0;
    double drift2 = 0.0;
    double jump_rate = 0.0;
    std::function<std::pair<double, double>(Rng&)> jump_sampler;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double sigma11 = 0.0;
    double sigma12 = 0.0;
    double sigma22 = 0.0;
};

// Validates lambda_j = drift_j + jump_rate * E[jump_j] by Monte Carlo (4 sigma),
// rejects negative jumps, and requires Sigma to be positive semidefinite.
SubordinatorSpec make_subordinator_spec(double drift1, double drift2, double jump_rate,
                                        std::function<std::pair<double, double>(Rng&)> jump_sampler,
                                        double lambda1, double lambda2,
                                        double sigma11, double sigma12, double sigma22);

// Dimensionless reflected-diffusion drifts.
struct HTDrifts {
    double theta1_hat = 1.0;
    double theta2_hat = 1.0;

    void validate() const;
    double sigma_sum() const { return theta1_hat + theta2_hat; }
    double theta(int j) const { return j == 1 ? theta1_hat : theta2_hat; }
};

// Diffusion constant of the centered switching indicator integral:
// c1 c2 (c1^2 var1 - 2 c1 c2 cov + c2^2 var2) / (c1 + c2)^3.
double switching_bm_variance(const SwitchLaw& sw);

// theta_hat_j = p_j theta_j / (lambda_j sigma), p2 = 1 - p1.
HTDrifts hat_drifts(std::pair<double, double> theta, std::pair<double, double> lambdas,
                    double p1, double sigma);

// theta1 s1 + theta2 s2 + (1/2)(s1 - s2)^2
Cpx levy_ht_kernel(const HTDrifts& d, Cpx s1, Cpx s2);

// s2-roots of the kernel given s1; the first root vanishes at s1 = 0, the
// second sits at -2 theta2 there. Past the branch point the pair traces
// levy_parabola(d, 1).
std::pair<Cpx, Cpx> levy_kernel_roots(const HTDrifts& d, Cpx s1);

// The s2-roots coincide at s1 = theta2^2 / (2 (theta1 + theta2)).
double levy_branch_point(const HTDrifts& d);

// v^2 = 2 sigma (u - (theta_j^2 - sigma^2)/(2 sigma)), sigma = theta1 + theta2.
ParabolaGeometry levy_parabola(const HTDrifts& d, int j);

// Left edge of the analyticity strip of f_hat(j): -theta_j (2 theta_{3-j} + theta_j) / (2 sigma).
double levy_strip_edge(const HTDrifts& d, int j);

// Conformal map of the j-th parabola interior onto the unit disk.
Cpx levy_conformal(const HTDrifts& d, int j, Cpx z);

// Boundary function of the stationary problem; f_hat(j, 0) = theta_j and
// f_hat decays along the positive reals.
Cpx f_hat(const HTDrifts& d, int j, Cpx s);

// Joint stationary LST (s1 f_hat1(s2) + s2 f_hat2(s1)) / kernel, with
// removable points filled by analytic limits or a diagonal shift.
Cpx levy_joint_lst(const HTDrifts& d, Cpx s1, Cpx s2);

// Pole families of the f_hat(j) denominator, enumerated for |n| <= n_range,
// together with the strip edge they must stay left of.
struct LevyPoleFamilies {
    std::vector<double> family1;
    std::vector<double> family2;
    double strip_edge = 0.0;
};

LevyPoleFamilies levy_pole_families(const HTDrifts& d, int j, int n_range);

// Evaluates |f_hat(j, s)| along theta_j in {1e-1, 1e-2, 1e-3, 1e-4} with the
// other drift held fixed; the magnitude must vanish monotonically at the
// small end and scale linearly in theta_j.
struct VanishingLimitRecord {
    std::vector<double> theta_values;
    std::vector<double> magnitudes;
    std::vector<double> ratios; // magnitude / theta_j
    bool monotone_tail = false;
};

VanishingLimitRecord f_hat_vanishing_limit(double theta_other, int j, Cpx s);

// Euler simulation of the coupled reflected diffusions driven by one Wiener
// stream with opposite signs.
struct RbmConfig {
    double dt = 0.0; // 0 picks 1e-3 / max(theta_j^2, 1)
    double horizon = 0.0;
    double warmup = -1.0; // negative picks horizon / 20
    std::uint64_t seed = 1;
    int batches = 50;
    std::vector<std::pair<double, double>> lst_grid;
};

struct RbmResult {
    MomentSet moments;
    double correlation = 0.0;
    std::array<double, 5> moment_se{};
    double correlation_se = 0.0;
    std::vector<double> lst_values;
    std::vector<double> lst_se;
    double dt_used = 0.0;
    double time_averaged = 0.0;
};

RbmResult rbm_simulate(const HTDrifts& d, const RbmConfig& cfg);

// Finite-n polling system with subordinator input and renewal switching;
// reports time-averaged moments of n^{-1/2} V(n t).
struct PrelimitConfig {
    double n = 100.0;
    double horizon_scaled = 0.0;  // raw horizon = n * horizon_scaled
    double warmup_scaled = -1.0;  // negative picks horizon_scaled / 20
    std::pair<double, double> mu_n{0.0, 0.0};
    std::uint64_t seed = 1;
    int batches = 50;
};

struct PrelimitResult {
    MomentSet moments;
    double correlation = 0.0;
    std::array<double, 5> moment_se{};
    double correlation_se = 0.0;
    double time_averaged_raw = 0.0;
};

PrelimitResult prelimit_simulate(const SubordinatorSpec& sub, const SwitchLaw& sw,
                                 const PrelimitConfig& cfg);

} // namespace rtpoll
