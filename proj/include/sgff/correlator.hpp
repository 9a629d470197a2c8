#pragma once
// truncated space-like two-point series and the Z_N(kappa) integrals
#include <cstdint>
#include <vector>

#include "sgff/bootstrap_ff.hpp"

namespace sgff {

enum class Method { automatic, quadrature, monte_carlo };
Method parse_method(const std::string& s);
std::string method_name(Method m);

struct Estimate {
    cplx value{0.0, 0.0};
    double error = 0.0;  // quadrature: refinement difference; MC: standard error
    Method used = Method::automatic;
    long samples = 0;
};

struct CorrelatorConfig {
    OperatorModel model1, model2;
    double r = 1.0;  // space-like separation, enters as m r
    int n_max = 3;
    Method method = Method::automatic;
    long mc_samples = 200000;
    std::uint64_t seed = 1;
    int workers = 1;
    int quad_points = 0;  // per dimension; 0 picks a default
    double theta = 0.0;   // rapidity of the separation vector
    int x_sign = 1;

    void validate() const;
};

// integral over R^n of prod_{a<b} e^{w(beta_ab)} K1(beta) K2(rev beta) prod e^{-c cosh beta_a}
Estimate weighted_k_integral(int n, double c, const OperatorModel& m1, const OperatorModel& m2,
                             const PotentialFamily& pf, Method method, long samples,
                             std::uint64_t seed, int workers, int quad_points = 0);

Estimate two_point_term(int n, const CorrelatorConfig& cfg, const PotentialFamily& pf);

struct SeriesRow {
    int n;
    cplx term;
    double term_err;
    cplx partial_sum;
    double partial_err;
};
std::vector<SeriesRow> two_point_partial_sum(const CorrelatorConfig& cfg, const PotentialFamily& pf);

// e^{eta(x)}, reported apart from the series
cplx spin_prefactor(double s1, double s2, double theta, int x_sign);

Estimate z_n_estimate(int N, double kappa, const OperatorModel& m1, const OperatorModel& m2,
                      const PotentialFamily& pf, Method method, long samples, std::uint64_t seed,
                      int workers = 1, int quad_points = 0);

double decay_envelope(int N, const ModelParams& p);

// K_n == c for every n >= 1 (F0 = 1)
OperatorModel constant_k_model(cplx c);

}  // namespace sgff
