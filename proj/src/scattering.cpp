#include "sgff/scattering.hpp"

#include <cmath>
#include <vector>

namespace sgff {

ModelParams ModelParams::from_coupling(double g, double m) {
    if (!(g > 0) || !(m > 0)) throw NumericsError("coupling and mass must be > 0");
    ModelParams p;
    p.g = g;
    p.m = m;
    p.b = g * g / (2 * (8 * kPi + g * g));
    p.b_hat = 0.5 - p.b;
    return p;
}

ModelParams ModelParams::from_b(double b, double m) {
    if (!(b > 0 && b < 0.5)) throw NumericsError("b must lie in (0, 1/2)");
    if (!(m > 0)) throw NumericsError("mass must be > 0");
    ModelParams p;
    p.b = b;
    p.b_hat = 0.5 - b;
    p.m = m;
    p.g = std::sqrt(16 * kPi * b / (1 - 2 * b));
    return p;
}

ModelParams ModelParams::dual() const {
    ModelParams d = from_b(b_hat, m);
    return d;
}

double ModelParams::sin2pib() const { return std::sin(2 * kPi * b); }

namespace {
// distance of Im(beta) to a + 2 pi Z
double per_dist(double y, double a) {
    double d = std::remainder(y - a, 2 * kPi);
    return std::abs(d);
}
}  // namespace

cplx s_matrix(cplx beta, const ModelParams& p) {
    if (std::abs(beta.real()) < 1e-10) {
        double y = beta.imag();
        if (per_dist(y, -2 * kPi * p.b) < 1e-10 || per_dist(y, kPi * (1 + 2 * p.b)) < 1e-10)
            throw NumericsError("s_matrix: argument within 1e-10 of a pole");
    }
    cplx u = 0.5 * beta - kI * (kPi * p.b), v = 0.5 * beta + kI * (kPi * p.b);
    return std::sinh(u) * std::cosh(v) / (std::cosh(u) * std::sinh(v));
}

cplx s_matrix_integral(cplx beta, const ModelParams& p, const QuadratureSpec& spec) {
    if (std::abs(beta.imag()) >= kPi / 2)
        throw NumericsError("s_matrix_integral: |Im beta| must be < pi/2");
    if (beta == cplx(0.0)) return 1.0;  // integrand vanishes identically

    // large-x expansion of the kernel:
    //   2(1-e^{-2bx})(1-e^{-2b^x})/(x(1+e^{-x})) = (2/x) sum s_j e^{-c_j x}
    // terms below cutC are subtracted and done in closed form. A last term
    // makes sum s_j = 0 so the subtracted part is regular at x = 0.
    const double cutC = 4.0;
    std::vector<std::pair<double, double>> terms;  // (c, s)
    for (int k = 0; k < int(cutC) + 1; ++k) {
        double sg = (k % 2) ? -1.0 : 1.0;
        const double cs[4] = {double(k), 2 * p.b + k, 2 * p.b_hat + k, 1.0 + k};
        const double ss[4] = {sg, -sg, -sg, sg};
        for (int j = 0; j < 4; ++j)
            if (cs[j] < cutC) terms.emplace_back(cs[j], ss[j]);
    }
    double ssum = 0;
    for (auto& t : terms) ssum += t.second;
    terms.emplace_back(cutC, -ssum);

    cplx a = -kI * beta / kPi;  // x beta/(i pi) = a x
    auto kern = [&](double x) {
        if (x < 1) {
            // expm1 keeps the 1/x regular
            double ks = 2 * std::expm1(-2 * p.b * x) * std::expm1(-2 * p.b_hat * x) /
                        (x * (1 + std::exp(-x)));
            double sub = 0;
            for (auto& t : terms) sub += t.second * std::expm1(-t.first * x);
            return ks - 2 * sub / x;
        }
        // away from 0 sum the unsubtracted tail directly, no cancellation
        double rem = ssum * std::exp(-cutC * x);
        int kmax = int(cutC) + 2 + int(45 / x);
        for (int k = 0; k <= kmax; ++k) {
            double sg = (k % 2) ? -1.0 : 1.0;
            const double cs[4] = {double(k), 2 * p.b + k, 2 * p.b_hat + k, 1.0 + k};
            const double ss[4] = {sg, -sg, -sg, sg};
            for (int j = 0; j < 4; ++j)
                if (cs[j] >= cutC) rem += ss[j] * std::exp(-cs[j] * x);
        }
        return 2 * rem / x;
    };
    auto f = [&](double x) -> cplx {
        if (x == 0) return 0.0;
        return kern(x) * std::sinh(a * x);
    };
    auto r = integrate_1d(f, 0.0, INFINITY, spec);
    if (!r.converged) throw NumericsError("s_matrix_integral: quadrature did not converge");

    // closed-form pieces; the sign(Re beta) parts cancel because sum s_j = 0
    cplx lsum = 0;
    for (auto& t : terms)
        if (t.first > 0) lsum += t.second * std::atan(kPi * t.first / beta);
    return std::exp(r.value + 2.0 * kI * lsum);
}

}  // namespace sgff
