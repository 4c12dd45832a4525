#pragma once

#include <utility>

namespace rtpoll {

// Two-queue fluid polling model with exponential visit times and no
// switch-over. Queue j fills at rate lambda_j, drains at rate mu_j while
// served, and the server leaves queue j at rate c_j.
struct AsymmetricParams {
    double lambda1, lambda2; // input rates, >= 0
    double mu1, mu2;         // service rates, > 0
    double c1, c2;           // switch-out rates, > 0

    // Throws std::invalid_argument on non-finite or out-of-range fields.
    void validate() const;

    double rho1() const { return lambda1 / mu1; }
    double rho2() const { return lambda2 / mu2; }
    bool is_stable() const;

    AsymmetricParams swapped() const {
        return {lambda2, lambda1, mu2, mu1, c2, c1};
    }
};

struct SymmetricParams {
    double lambda; // input rate, >= 0
    double mu;     // service rate, > 0
    double c;      // switch-out rate, > 0

    void validate() const;
    double rho() const { return lambda / mu; }
    bool is_stable() const { return rho() < 0.5; }

    AsymmetricParams to_asymmetric() const {
        return {lambda, lambda, mu, mu, c, c};
    }
};

struct WorkloadState {
    double v1 = 0.0;
    double v2 = 0.0;
    int serving = 1; // queue index in {1, 2}
    double clock = 0.0;
};

// m_j = c_{3-j}/(c1+c2) - rho_j; stable iff both margins are strictly positive.
std::pair<double, double> stability_margins(const AsymmetricParams& p);

// Workloads after one full cycle (t1 at queue 1, then t2 at queue 2),
// starting from (v1, v2) with the server at queue 1.
std::pair<double, double> switch_epoch_update(double v1, double v2, double t1, double t2,
                                              const AsymmetricParams& p);

} // namespace rtpoll
