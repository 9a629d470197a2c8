#include "sgff/bootstrap_ff.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace sgff {

OperatorModel identity_model() {
    OperatorModel m;
    m.name = "identity";
    m.F0 = 1.0;
    m.p_eval = [](int n, std::span<const cplx>, std::span<const int>) -> cplx {
        return n == 0 ? 1.0 : 0.0;
    };
    return m;
}

OperatorModel toy_bounded_model() {
    OperatorModel m;
    m.name = "toy-bounded";
    m.convergence_only = true;
    m.C1 = 1.0;
    m.p_eval = [](int n, std::span<const cplx>, std::span<const int> l) -> cplx {
        if (n <= 1) return 1.0;
        int s = 0;
        for (int x : l) s += x;
        return (s % 2) ? -1.0 : 1.0;
    };
    return m;
}

OperatorModel unit_k_model() {
    OperatorModel m;
    m.name = "unit-k";
    m.convergence_only = true;
    m.k_override = [](std::span<const cplx>) -> cplx { return 1.0; };
    m.p_eval = [](int, std::span<const cplx>, std::span<const int>) -> cplx { return 1.0; };
    return m;
}

cplx k_transform(const OperatorModel& model, std::span<const cplx> beta, const ModelParams& p,
                 long* counter) {
    const int n = int(beta.size());
    if (n == 0) return model.F0;
    if (n > kMaxParticles || n > model.max_n)
        throw NumericsError("k_transform: n = " + std::to_string(n) + " beyond the model range");
    if (model.k_override) return model.k_override(beta);

    const double s = std::sin(2 * kPi * p.b);
    // t[a][b] = i sin(2 pi b)/sinh(beta_ab)
    cplx t[kMaxParticles][kMaxParticles];
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            cplx sh = std::sinh(beta[a] - beta[b]);
            if (std::abs(sh) < 1e-12) throw NumericsError("k_transform: rapidities on a pole");
            t[a][b] = kI * s / sh;
        }
    int l[kMaxParticles];
    cplx tot = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        for (int a = 0; a < n; ++a) l[a] = (mask >> a) & 1;
        cplx term = (std::popcount(mask) % 2) ? -1.0 : 1.0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (l[a] != l[b]) term *= 1.0 - double(l[a] - l[b]) * t[a][b];
        term *= model.p_eval(n, beta, std::span<const int>(l, n));
        if (counter) ++*counter;
        tot += term;
    }
    return tot;
}

FormFactorValue form_factor(const OperatorModel& model, std::span<const cplx> beta,
                            const PotentialFamily& pf) {
    FormFactorValue out;
    out.n = int(beta.size());
    cplx pre = 1.0;
    for (size_t a = 0; a < beta.size(); ++a)
        for (size_t b = a + 1; b < beta.size(); ++b) pre *= pf.F(beta[a] - beta[b]);
    out.value = pre * k_transform(model, beta, pf.params());
    out.error_estimate = 1e-13 * std::abs(out.value);
    return out;
}

cplx two_particle_general(cplx beta1, cplx beta2, std::span<const cplx> zeros, cplx N_O,
                          double s_O, const PotentialFamily& pf) {
    cplx b12 = beta1 - beta2;
    cplx v = N_O * std::exp(0.5 * s_O * (beta1 + beta2)) * pf.F(b12);
    for (cplx k : zeros) v *= std::sinh(0.5 * (b12 - k)) * std::sinh(0.5 * (b12 + k));
    return v;
}

cplx residue_rhs(const OperatorModel& model, std::span<const cplx> beta, const PotentialFamily& pf) {
    const int n = int(beta.size());
    const ModelParams& p = pf.params();
    cplx sprod = 1.0, fprod = 1.0;
    for (int a = 2; a < n; ++a) {
        cplx d = beta[1] - beta[a];
        sprod *= s_matrix(d, p);
        fprod *= pf.F(d + kI * kPi) * pf.F(d);
    }
    std::vector<cplx> rest(beta.begin() + 2, beta.end());
    return kI / pf.F_ipi() * (1.0 - sprod) / fprod * k_transform(model, rest, p);
}

cplx residue_contour(const OperatorModel& model, std::span<const cplx> beta,
                     const PotentialFamily& pf, double radius, int npts) {
    std::vector<cplx> b(beta.begin(), beta.end());
    auto avg = [&](double r) {
        cplx acc = 0;
        for (int j = 0; j < npts; ++j) {
            cplx d = std::polar(r, 2 * kPi * (j + 0.5) / npts);
            b[0] = beta[1] + kI * kPi + d;
            acc += k_transform(model, b, pf.params()) * d;
        }
        return acc / double(npts);
    };
    cplx r1 = avg(radius), r2 = avg(0.5 * radius);
    return (4.0 * r2 - r1) / 3.0;
}

double AxiomReport::max_violation() const {
    double m = 0;
    for (auto& c : checks) m = std::max(m, c.max_violation);
    return m;
}

std::string AxiomReport::to_text() const {
    std::ostringstream os;
    os.precision(6);
    os << "n = " << n << "\n";
    for (auto& c : checks) {
        os << c.axiom << ".max_violation = " << c.max_violation << "\n";
        os << c.axiom << ".location = " << c.location << "\n";
        os << c.axiom << ".grid_size = " << c.grid_size << "\n";
    }
    return os.str();
}

namespace {
std::string where(std::span<const cplx> b) {
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (size_t i = 0; i < b.size(); ++i) os << (i ? ", " : "") << b[i].real();
    os << ")";
    return os.str();
}

void bump(AxiomCheck& c, double v, std::span<const cplx> at) {
    ++c.grid_size;
    if (v >= c.max_violation) {
        c.max_violation = v;
        c.location = where(at);
    }
}
}  // namespace

AxiomReport validate_axioms(const OperatorModel& model, int n, const SamplingPlan& plan,
                            const PotentialFamily& pf) {
    if (n > kMaxParticles || n > model.max_n)
        throw NumericsError("validate_axioms: n beyond the model range");
    AxiomReport rep;
    rep.n = n;
    AxiomCheck ex{"i_exchange"}, per{"ii_periodicity"}, res{"iii_residue"}, boost{"iv_boost"};
    RandomStream rs(plan.seed, 0);
    const ModelParams& p = pf.params();
    auto scale = [](cplx a, cplx b) { return std::max({1.0, std::abs(a), std::abs(b)}); };
    for (int pt = 0; pt < plan.points; ++pt) {
        std::vector<cplx> b(n);
        for (auto& x : b) x = plan.spread * (2 * rs.next_uniform() - 1);
        if (n == 0) break;
        cplx F = form_factor(model, b, pf).value;
        // i) exchange of each neighbouring pair
        for (int a = 0; a + 1 < n; ++a) {
            auto sw = b;
            std::swap(sw[a], sw[a + 1]);
            cplx rhs = s_matrix(b[a] - b[a + 1], p) * form_factor(model, sw, pf).value;
            bump(ex, std::abs(F - rhs) / scale(F, rhs), b);
        }
        // ii) F_n(b1 + 2 i pi, b2..bn) = F_n(b2..bn, b1), and 2 i pi periodicity of K_n
        if (n >= 2) {
            auto sh = b;
            sh[0] += 2.0 * kI * kPi;
            std::vector<cplx> cyc(b.begin() + 1, b.end());
            cyc.push_back(b[0]);
            cplx lhs = form_factor(model, sh, pf).value, rhs = form_factor(model, cyc, pf).value;
            bump(per, std::abs(lhs - rhs) / scale(lhs, rhs), b);
            cplx k0 = k_transform(model, b, p), k1 = k_transform(model, sh, p);
            bump(per, std::abs(k0 - k1) / scale(k0, k1), b);
        }
        // iii) kinematic residue at beta_1 = beta_2 + i pi
        if (n >= 2) {
            cplx lhs = residue_contour(model, b, pf, plan.radius, plan.circle_points);
            cplx rhs = residue_rhs(model, b, pf);
            bump(res, std::abs(lhs - rhs) / scale(lhs, rhs), b);
        }
        // iv) boost covariance
        {
            double th = 2 * rs.next_uniform() - 1;
            auto bb = b;
            for (auto& x : bb) x += th;
            cplx k0 = k_transform(model, b, p), k1 = k_transform(model, bb, p);
            cplx rhs = std::exp(th * model.spin) * k0;
            bump(boost, std::abs(k1 - rhs) / scale(k1, rhs), b);
        }
    }
    rep.checks = {ex, per, res, boost};
    return rep;
}

}  // namespace sgff
