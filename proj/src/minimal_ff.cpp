#include "sgff/minimal_ff.hpp"

#include <cmath>

namespace sgff {

namespace {

constexpr int kSeriesN = 10;   // product factors taken out of the integral
constexpr double kRemCut = 3.0;  // remainder kernel ~ e^{-2(N+1)x}, dead by x=3

// ln F without the single factor that vanishes at beta = 0; that factor is
// returned separately as its log argument (= -i beta/pi)
cplx log_F_regular(cplx beta, double b) {
    const double bh = 0.5 - b;
    const cplx z = (kI * kPi - beta) / kPi;
    const cplx iz = kI * z;
    cplx tot = 0;
    for (int k = 1; k <= kSeriesN; ++k) {
        for (int e1 = -1; e1 <= 1; e1 += 2)
            for (int e2 = -1; e2 <= 1; e2 += 2)
                for (int e3 = -1; e3 <= 1; e3 += 2) {
                    double pk = 2 * k - (e1 * b + e2 * bh + e3 * 0.5);
                    double c = double(k * e1 * e2 * e3);
                    tot += c * std::log(pk - iz);
                    if (!(k == 1 && e1 == 1 && e2 == 1 && e3 == 1)) tot += c * std::log(pk + iz);
                }
    }
    // remainder integral, smooth and fast-decaying: fixed Gauss-Legendre
    int n = 400 + 100 * int(std::abs(beta.real()) / 25.0);
    const auto& gl = gauss_legendre(n);
    cplx acc = 0;
    for (int j = 0; j < n; ++j) {
        double x = 0.5 * kRemCut * (gl.first[j] + 1), wt = 0.5 * kRemCut * gl.second[j];
        double sx = std::sinh(x);
        double rn = std::exp(-2.0 * kSeriesN * x) * (kSeriesN + 1 - kSeriesN * std::exp(-2 * x)) /
                    (sx * sx);
        double ker = std::sinh(x * b) * std::sinh(x * bh) * std::sinh(0.5 * x) * rn / x;
        acc += wt * ker * std::cos(x * z);
    }
    return tot - 4.0 * acc;
}

cplx log_F_strip(cplx beta, double b) {
    return log_F_regular(beta, b) + std::log(-kI * beta / kPi);
}

// sinh(l)/l in log form, even, stable for large l
double log_sinhc(double l) {
    l = std::abs(l);
    if (l < 1e-4) return l * l / 6;
    if (l < 20) return std::log(std::sinh(l) / l);
    return l - std::log(2.0) - std::log(l) + std::log1p(-std::exp(-2 * l));
}

// ln(sinh^2 l + s2) - 2 ln|sinh l / l|: the regular part of v_{2 pi b, 0}
double v_smooth(double l, double s2) {
    l = std::abs(l);
    double a;
    if (l <= 1) {
        double sh = std::sinh(l);
        a = std::log(sh * sh + s2);
    } else {
        double sh = std::sinh(l);
        a = 2 * (l - std::log(2.0) + std::log1p(-std::exp(-2 * l))) + std::log1p(s2 / (sh * sh));
    }
    return a - 2 * log_sinhc(l);
}

}  // namespace

cplx log_minimal_F(cplx beta, const ModelParams& p) {
    const double y = beta.imag();
    const double slack = 1e-13;
    if (y < -slack) return std::log(s_matrix(beta, p)) + log_minimal_F(-beta, p);
    if (y > 2 * kPi + slack) return log_minimal_F(2.0 * kI * kPi - beta, p);
    if (beta == cplx(0.0)) throw NumericsError("ln F diverges at beta = 0");
    return log_F_strip(beta, p.b);
}

cplx minimal_F(cplx beta, const ModelParams& p, const QuadratureSpec&) {
    if (beta == cplx(0.0)) return 0.0;
    return std::exp(log_minimal_F(beta, p));
}

double v_alpha_eta(double lambda, double alpha, double eta) {
    if (eta < 0) throw NumericsError("v_alpha_eta: eta must be >= 0");
    double sa = std::sin(alpha), se = std::sin(eta);
    sa *= sa;
    se *= se;
    if (sa == se) return 0.0;
    double sh = std::sinh(lambda);
    double sh2 = sh * sh;
    if (sh2 == 0) {
        if (se == 0) throw NumericsError("v_alpha_eta: lambda = 0 with eta = 0");
        return std::log(sa / se);
    }
    return std::log1p(sa / sh2) - std::log1p(se / sh2);
}

PotentialFamily::PotentialFamily(const ModelParams& p, QuadratureSpec spec)
    : p_(p), spec_(spec) {
    spec_.validate();
    F_ipi_ = std::exp(log_F_strip(kI * kPi, p_.b)).real();
    double s = std::sin(2 * kPi * p_.b);
    s2_ = s * s;
}

double PotentialFamily::w_direct(double lambda) const {
    if (lambda == 0) throw NumericsError("w: lambda = 0 is a log singularity");
    return 2 * log_F_strip(cplx(lambda, 0), p_.b).real();
}

double PotentialFamily::w_reg_direct(double lambda) const {
    // ln|-i l/pi| = ln|l| - ln pi
    return 2 * log_F_regular(cplx(lambda, 0), p_.b).real() - 2 * std::log(kPi);
}

void PotentialFamily::build_table() const {
    std::call_once(once_, [this] {
        int J = int(kTableMax / kTableStep) + 3;
        std::vector<double> t(J + 1);
        for (int j = 0; j <= J; ++j) t[j] = w_reg_direct(j * kTableStep);
        table_ = std::move(t);
    });
}

void PotentialFamily::inject_fault(double offset) { fault_ = offset; }

double PotentialFamily::w_reg(double lambda) const {
    double l = std::abs(lambda);
    if (l >= kTableMax) return w_reg_direct(l);
    build_table();
    double u = l / kTableStep;
    int j = int(u);
    double t = u - j;
    auto at = [&](int i) { return table_[std::abs(i)]; };  // even extension
    double f0 = at(j - 1), f1 = at(j), f2 = at(j + 1), f3 = at(j + 2);
    // cubic Lagrange through nodes -1,0,1,2
    double v = -t * (t - 1) * (t - 2) / 6 * f0 + (t + 1) * (t - 1) * (t - 2) / 2 * f1 -
               (t + 1) * t * (t - 2) / 2 * f2 + (t + 1) * t * (t - 1) / 6 * f3;
    return v + fault_;
}

double PotentialFamily::w(double lambda) const {
    if (lambda == 0) throw NumericsError("w: lambda = 0 is a log singularity");
    return w_reg(lambda) + 2 * std::log(std::abs(lambda));
}

double PotentialFamily::w_tot(double lambda) const {
    return w_reg(lambda) + v_smooth(lambda, s2_);
}

double PotentialFamily::w_plus_smooth(double lambda) const {
    return w_reg(lambda) + 0.5 * v_smooth(lambda, s2_);
}

double PotentialFamily::w_minus_smooth(double lambda) const {
    return -0.5 * v_smooth(lambda, s2_);
}

double PotentialFamily::w_plus(double lambda) const {
    if (lambda == 0) throw NumericsError("w_plus: lambda = 0 is a log singularity");
    if (std::abs(lambda) <= 1) return std::log(std::abs(lambda)) + w_plus_smooth(lambda);
    return w(lambda) + 0.5 * v_alpha_eta(lambda, 2 * kPi * p_.b, 0.0);
}

double PotentialFamily::w_minus(double lambda) const {
    if (lambda == 0) throw NumericsError("w_minus: lambda = 0 is a log singularity");
    if (std::abs(lambda) <= 1) return std::log(std::abs(lambda)) + w_minus_smooth(lambda);
    return -0.5 * v_alpha_eta(lambda, 2 * kPi * p_.b, 0.0);
}

ScaledPotentials::ScaledPotentials(const PotentialFamily& f, double N_, double kappa_)
    : pf(&f), N(N_), kappa(kappa_) {
    if (!(N_ >= 2)) throw NumericsError("scaled potentials need N >= 2");
    tau = std::log(N_);
}

double ScaledPotentials::V(double x) const { return kappa * std::cosh(tau * x); }

}  // namespace sgff
