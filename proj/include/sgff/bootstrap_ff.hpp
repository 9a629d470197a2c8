#pragma once
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sgff/minimal_ff.hpp"

namespace sgff {

inline constexpr int kMaxParticles = 8;  // 2^n cost gate

// p_n(beta | l) family plus the bookkeeping the growth bound needs
struct OperatorModel {
    std::string name;
    double spin = 0.0;
    double C1 = 1.0, C2 = 0.0;  // |p_n| <= C1^n prod exp(C2 |beta_a|^k)
    int k = 0;
    cplx F0 = 1.0;
    int max_n = kMaxParticles;
    bool convergence_only = false;  // satisfies the growth bound only

    std::function<cplx(int n, std::span<const cplx> beta, std::span<const int> l)> p_eval;
    // when set, replaces the whole transform (unit-K runs)
    std::function<cplx(std::span<const cplx> beta)> k_override;
};

OperatorModel identity_model();
// p_0 = p_1 = 1 (so K_1 = 0) and p_n = (-1)^{|l|} for n >= 2
OperatorModel toy_bounded_model();
OperatorModel unit_k_model();  // K_n == 1 for every n

// sum over l in {0,1}^n; counter (if given) is bumped once per p evaluation
cplx k_transform(const OperatorModel& model, std::span<const cplx> beta, const ModelParams& p,
                 long* counter = nullptr);

struct FormFactorValue {
    int n = 0;
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
};

// prod_{a<b} F(beta_ab) K_n(beta)
FormFactorValue form_factor(const OperatorModel& model, std::span<const cplx> beta,
                            const PotentialFamily& pf);

cplx two_particle_general(cplx beta1, cplx beta2, std::span<const cplx> zeros, cplx N_O,
                          double s_O, const PotentialFamily& pf);

struct AxiomCheck {
    std::string axiom;
    double max_violation = 0.0;
    std::string location;
    int grid_size = 0;
};

struct SamplingPlan {
    int points = 20;
    std::uint64_t seed = 1;
    double spread = 1.5;       // rapidities ~ uniform(-spread, spread)
    double radius = 1e-2;      // residue circle; the second radius is half
    int circle_points = 32;
};

struct AxiomReport {
    int n = 0;
    std::vector<AxiomCheck> checks;
    double max_violation() const;
    std::string to_text() const;  // key = value lines
};

AxiomReport validate_axioms(const OperatorModel& model, int n, const SamplingPlan& plan,
                            const PotentialFamily& pf);

// right-hand side of the kinematic residue relation at beta_1 = beta_2 + i pi
cplx residue_rhs(const OperatorModel& model, std::span<const cplx> beta, const PotentialFamily& pf);
// residue of K_n in beta_1 around beta_2 + i pi by two-radius contour averaging
cplx residue_contour(const OperatorModel& model, std::span<const cplx> beta,
                     const PotentialFamily& pf, double radius, int npts);

}  // namespace sgff
