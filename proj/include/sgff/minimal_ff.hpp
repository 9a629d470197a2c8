#pragma once
#include <memory>
#include <mutex>
#include <vector>

#include "sgff/scattering.hpp"

namespace sgff {

// ln F(beta). Valid directly on the closed strip 0 <= Im beta <= 2 pi; outside
// it the function is continued with F(b) = S(b) F(-b) and F(b) = F(2 i pi - b).
cplx log_minimal_F(cplx beta, const ModelParams& p);
cplx minimal_F(cplx beta, const ModelParams& p, const QuadratureSpec& spec = {});

// ln((sinh^2 l + sin^2 a)/(sinh^2 l + sin^2 e)); e = 0 means the sinh^2 l denominator
double v_alpha_eta(double lambda, double alpha, double eta);

// w, v, w_tot and w^(+-) for one coupling, with a memoised table of the
// regular part w(l) - 2 ln|l| used by the inner loops of N-fold integrals.
class PotentialFamily {
public:
    explicit PotentialFamily(const ModelParams& p, QuadratureSpec spec = {});

    const ModelParams& params() const { return p_; }
    const QuadratureSpec& spec() const { return spec_; }

    cplx F(cplx beta) const { return minimal_F(beta, p_, spec_); }
    double F_ipi() const { return F_ipi_; }

    // direct (uncached) evaluations
    double w_direct(double lambda) const;
    double w_reg_direct(double lambda) const;  // w - 2 ln|l|, finite at 0

    // cached
    double w_reg(double lambda) const;
    double w(double lambda) const;
    double w_tot(double lambda) const;  // finite at 0
    double w_plus(double lambda) const;
    double w_minus(double lambda) const;

    // each kernel is coef*ln|l| + smooth(l); these return the smooth pieces
    double w_plus_smooth(double lambda) const;   // coef 1
    double w_minus_smooth(double lambda) const;  // coef 1
    double w_smooth(double lambda) const { return w_reg(lambda); }  // coef 2
    double w_tot_smooth(double lambda) const { return w_tot(lambda); }  // coef 0

    double table_max() const { return kTableMax; }
    // for the sanity command: perturb the cached table
    void inject_fault(double offset);

private:
    void build_table() const;

    ModelParams p_;
    QuadratureSpec spec_;
    double F_ipi_;
    double s2_;  // sin^2(2 pi b)
    static constexpr double kTableMax = 40.0;
    static constexpr double kTableStep = 1.0 / 256;
    mutable std::once_flag once_;
    mutable std::vector<double> table_;
    double fault_ = 0.0;
};

// V_N and the tau_N = ln N rescaled kernels
struct ScaledPotentials {
    const PotentialFamily* pf;
    double N;
    double kappa;
    double tau;

    ScaledPotentials(const PotentialFamily& f, double N_, double kappa_ = 1.0);
    double V(double x) const;
    double w(double x) const { return pf->w(tau * x); }
    double w_tot(double x) const { return pf->w_tot(tau * x); }
    double w_plus(double x) const { return pf->w_plus(tau * x); }
    double w_minus(double x) const { return pf->w_minus(tau * x); }
};

}  // namespace sgff
