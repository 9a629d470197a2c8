#include "sgff/equilibrium.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

namespace sgff {

// ---------------------------------------------------------------- measures

DiscreteMeasure DiscreteMeasure::point(double x, double mass, double cell) {
    DiscreteMeasure m;
    m.grid = {x};
    m.weights = {mass};
    m.total_mass = mass;
    m.cell = cell;
    return m;
}

DiscreteMeasure DiscreteMeasure::uniform_grid(double L, int M) {
    if (!(L > 0) || M < 2) throw NumericsError("uniform grid needs L > 0 and M >= 2");
    DiscreteMeasure m;
    m.cell = 2 * L / M;
    m.grid.resize(M);
    for (int i = 0; i < M; ++i) m.grid[i] = -L + (i + 0.5) * m.cell;
    m.weights.assign(M, 0.0);
    m.total_mass = 0;
    return m;
}

double DiscreteMeasure::mass() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

void DiscreteMeasure::validate(bool probability) const {
    if (grid.size() != weights.size() || grid.empty())
        throw NumericsError("measure: grid and weights must be non-empty and of equal length");
    if (!(cell > 0)) throw NumericsError("measure: cell width must be > 0");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw NumericsError("measure: grid must be strictly increasing");
    if (std::abs(mass() - total_mass) > 1e-12 * std::max(1.0, std::abs(total_mass)))
        throw NumericsError("measure: mass mismatch, weights sum to " + std::to_string(mass()) +
                            " but declared " + std::to_string(total_mass));
    if (probability) {
        if (std::abs(total_mass - 1) > 1e-12) throw NumericsError("measure: not a probability measure");
        for (double w : weights)
            if (w < 0) throw NumericsError("measure: negative weight in a probability measure");
    }
}

DiscreteMeasure combine(const DiscreteMeasure& nu, double t, const DiscreteMeasure& mu, double s) {
    if (std::abs(nu.cell - mu.cell) > 1e-14 * nu.cell)
        throw NumericsError("combine: cell widths differ");
    std::map<double, double> acc;
    for (size_t i = 0; i < nu.grid.size(); ++i) acc[nu.grid[i]] += t * nu.weights[i];
    for (size_t i = 0; i < mu.grid.size(); ++i) acc[mu.grid[i]] += s * mu.weights[i];
    DiscreteMeasure r;
    r.cell = nu.cell;
    for (auto& [x, w] : acc) {
        r.grid.push_back(x);
        r.weights.push_back(w);
    }
    r.total_mass = t * nu.total_mass + s * mu.total_mass;
    return r;
}

// ---------------------------------------------------------------- kernels

namespace {

constexpr int kGL = 10;

// antiderivatives for the log part: G'' = ln|t|, H' = ln|t|
double G2(double t) {
    double a = std::abs(t);
    return a == 0 ? 0.0 : a * a * std::log(a) / 2 - 0.75 * a * a;
}
double H1(double t) {
    double a = std::abs(t);
    double v = a == 0 ? 0.0 : a * std::log(a) - a;
    return t < 0 ? -v : v;
}

}  // namespace

CellKernel::CellKernel(const PotentialFamily& pf, double tau, double h) : pf_(&pf), tau_(tau), h_(h) {
    if (!(tau > 0) || !(h > 0)) throw NumericsError("cell kernel needs tau > 0 and h > 0");
}

double CellKernel::coef(KernelKind k) const {
    switch (k) {
    case KernelKind::w: return 2;
    case KernelKind::w_tot: return 0;
    default: return 1;
    }
}

double CellKernel::smooth(KernelKind k, double u) const {
    double l = tau_ * u;
    switch (k) {
    case KernelKind::w: return pf_->w_reg(l);
    case KernelKind::w_tot: return pf_->w_tot(l);
    case KernelKind::w_plus: return pf_->w_plus_smooth(l);
    default: return pf_->w_minus_smooth(l);
    }
}

double CellKernel::pair(KernelKind k, double d) const {
    const auto& gl = gauss_legendre(kGL);
    const double h = h_, c = coef(k);
    const bool exact_log = std::abs(d) < 2.5 * h;
    double acc = 0;
    // tent (h - |u - d|) on [d-h, d] and [d, d+h]
    for (int side = 0; side < 2; ++side) {
        double lo = side == 0 ? d - h : d;
        for (int j = 0; j < kGL; ++j) {
            double u = lo + 0.5 * h * (gl.first[j] + 1);
            double wt = 0.5 * h * gl.second[j] * (h - std::abs(u - d));
            double f = smooth(k, u);
            if (!exact_log && c != 0) f += c * (std::log(tau_) + std::log(std::abs(u)));
            acc += wt * f;
        }
    }
    acc /= h * h;
    if (exact_log && c != 0)
        acc += c * (std::log(tau_) + (G2(d + h) - 2 * G2(d) + G2(d - h)) / (h * h));
    return acc;
}

double CellKernel::cell(KernelKind k, double d) const {
    const auto& gl = gauss_legendre(kGL);
    const double h = h_, c = coef(k);
    const bool exact_log = std::abs(d) < 2 * h;
    double acc = 0;
    for (int side = 0; side < 2; ++side) {
        double lo = side == 0 ? d - h / 2 : d;
        for (int j = 0; j < kGL; ++j) {
            double u = lo + 0.25 * h * (gl.first[j] + 1);
            double f = smooth(k, u);
            if (!exact_log && c != 0) f += c * (std::log(tau_) + std::log(std::abs(u)));
            acc += 0.25 * h * gl.second[j] * f;
        }
    }
    acc /= h;
    if (exact_log && c != 0) acc += c * (std::log(tau_) + (H1(d + h / 2) - H1(d - h / 2)) / h);
    return acc;
}

namespace {

// uniform with spacing == cell: offsets between two such grids are integer
// multiples of h when the origins are aligned
bool on_lattice(const DiscreteMeasure& m) {
    for (size_t i = 1; i < m.grid.size(); ++i)
        if (std::abs(m.grid[i] - m.grid[i - 1] - m.cell) > 1e-9 * m.cell) return false;
    return true;
}

}  // namespace

double kernel_form(const CellKernel& ck, KernelKind k, const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const double h = ck.h();
    if (std::abs(a.cell - h) > 1e-12 * h || std::abs(b.cell - h) > 1e-12 * h)
        throw NumericsError("kernel form: measure cell differs from the kernel cell");
    const size_t na = a.grid.size(), nb = b.grid.size();
    double shift = (a.grid[0] - b.grid[0]) / h;
    long ishift = std::lround(shift);
    if (on_lattice(a) && on_lattice(b) && std::abs(shift - double(ishift)) < 1e-9) {
        long kmax = long(na + nb) + std::abs(ishift);
        std::vector<double> c(kmax + 1, NAN);
        auto coeff = [&](long q) {
            q = std::abs(q);
            if (std::isnan(c[q])) c[q] = ck.pair(k, q * h);
            return c[q];
        };
        double acc = 0;
        for (size_t i = 0; i < na; ++i) {
            if (a.weights[i] == 0) continue;
            double row = 0;
            for (size_t j = 0; j < nb; ++j)
                if (b.weights[j] != 0) row += b.weights[j] * coeff(long(i) - long(j) + ishift);
            acc += a.weights[i] * row;
        }
        return acc;
    }
    double acc = 0;
    for (size_t i = 0; i < na; ++i) {
        if (a.weights[i] == 0) continue;
        double row = 0;
        for (size_t j = 0; j < nb; ++j)
            if (b.weights[j] != 0) row += b.weights[j] * ck.pair(k, a.grid[i] - b.grid[j]);
        acc += a.weights[i] * row;
    }
    return acc;
}

namespace {

// (kappa/N) times the cell average of cosh(tau x)
double cell_potential(double x, double h, double tau, double N, double kappa) {
    double s = tau * h / 2;
    double f = s < 1e-8 ? 1.0 : std::sinh(s) / s;
    return kappa / N * std::cosh(tau * x) * f;
}

void check_N(double N) {
    if (!(N >= 2)) throw NumericsError("energy functionals need N >= 2");
}

}  // namespace

double potential_term(const DiscreteMeasure& m, double N, double kappa) {
    check_N(N);
    double tau = std::log(N), acc = 0;
    for (size_t i = 0; i < m.grid.size(); ++i)
        acc += m.weights[i] * cell_potential(m.grid[i], m.cell, tau, N, kappa);
    return acc;
}

double energy_Nt(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double t, double N, double kappa,
                 const PotentialFamily& pf) {
    check_N(N);
    if (!(t >= 0 && t <= 1)) throw NumericsError("energy: t must lie in [0,1]");
    mu.validate(true);
    nu.validate(true);
    CellKernel ck(pf, std::log(N), mu.cell);
    double e = t * potential_term(nu, N, kappa) + (1 - t) * potential_term(mu, N, kappa);
    if (t != 0) e -= t * t / 2 * kernel_form(ck, KernelKind::w, nu, nu);
    if (t != 1) e -= (1 - t) * (1 - t) / 2 * kernel_form(ck, KernelKind::w, mu, mu);
    if (t != 0 && t != 1) e -= t * (1 - t) * kernel_form(ck, KernelKind::w_tot, mu, nu);
    return e;
}

double energy_plus(const DiscreteMeasure& sigma, double N, double kappa, const PotentialFamily& pf) {
    check_N(N);
    sigma.validate(false);
    CellKernel ck(pf, std::log(N), sigma.cell);
    return potential_term(sigma, N, kappa) - 0.5 * kernel_form(ck, KernelKind::w_plus, sigma, sigma);
}

double energy_minus(const DiscreteMeasure& sigma, double N, const PotentialFamily& pf) {
    check_N(N);
    sigma.validate(false);
    CellKernel ck(pf, std::log(N), sigma.cell);
    return -0.5 * kernel_form(ck, KernelKind::w_minus, sigma, sigma);
}

std::pair<double, double> decompose_and_energies(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                                 double t, double N, double kappa,
                                                 const PotentialFamily& pf) {
    check_N(N);
    if (!(t >= 0 && t <= 1)) throw NumericsError("energy: t must lie in [0,1]");
    mu.validate(true);
    nu.validate(true);
    DiscreteMeasure sp = combine(nu, t, mu, 1 - t);
    DiscreteMeasure sm = combine(nu, t, mu, -(1 - t));
    return {energy_plus(sp, N, kappa, pf), energy_minus(sm, N, pf)};
}

// ---------------------------------------------------------------- Fourier side

double fourier_weight(double lambda, const ModelParams& p) {
    double l = std::abs(lambda);
    if (l < 1e-6) return 2 * kPi * p.b * p.b_hat * (1 + kPi * kPi * l * l * (p.b * p.b + p.b_hat * p.b_hat - 0.25) / 6);
    if (l < 20) return std::sinh(kPi * p.b * l) * std::sinh(kPi * p.b_hat * l) / (l * std::sinh(kPi * l / 2));
    // (coth(pi l/2) - cosh(pi (b - b^) l)/sinh(pi l/2)) / (2 l), overflow free
    double e = std::exp(-kPi * l);
    double dd = kPi * std::abs(p.b - p.b_hat);
    double ratio = (std::exp((dd - kPi / 2) * l) + std::exp((-dd - kPi / 2) * l)) / (1 - e);
    return ((1 + e) / (1 - e) - ratio) / (2 * l);
}

double e_minus_fourier(const DiscreteMeasure& sigma, double N, const PotentialFamily& pf,
                       const QuadratureSpec& spec) {
    check_N(N);
    sigma.validate(false);
    if (!on_lattice(sigma))
        throw NumericsError("e_minus_fourier: needs a uniform grid with spacing equal to the cell width");
    const double tau = std::log(N), h = sigma.cell;
    const double P = 2 * kPi / (tau * h);  // period of the lattice sum in lambda
    const auto& p = pf.params();
    const int n_alias = 64;
    // sum over the aliases lambda + nP of weight * sinc^2; the weight tail is 1/(2 lambda)
    auto alias_sum = [&](double l) {
        double s2 = std::sin(tau * l * h / 2);
        s2 *= s2;
        double acc = 0;
        for (int n = 0; n <= n_alias; ++n) {
            double ln = l + n * P;
            double z = tau * ln * h / 2;
            double sinc2 = z < 1e-8 ? 1.0 : s2 / (z * z);
            acc += fourier_weight(ln, p) * sinc2;
        }
        double tail0 = l + (n_alias + 0.5) * P;
        acc += s2 * 4 / (tau * tau * h * h) / (4 * P * tail0 * tail0);
        return acc;
    };
    const double x0 = sigma.grid[0];
    auto integrand = [&](double l) -> cplx {
        double k = tau * l;
        double re = 0, im = 0;
        for (size_t j = 0; j < sigma.grid.size(); ++j) {
            double ph = k * (sigma.grid[j] - x0);
            re += sigma.weights[j] * std::cos(ph);
            im += sigma.weights[j] * std::sin(ph);
        }
        return (re * re + im * im) * alias_sum(l);
    };
    QuadratureSpec s = spec;
    s.target_abs_tol = std::min(s.target_abs_tol, 1e-15);
    s.max_refinements = std::max(s.max_refinements, 20000);
    // split at the oscillation scale so the adaptive rule sees every lobe
    double span = sigma.grid.back() - sigma.grid.front() + h;
    int pieces = std::clamp(int(P * tau * span / (2 * kPi)), 1, 4000);
    double acc = 0;
    for (int i = 0; i < pieces; ++i)
        acc += integrate_or_throw(integrand, P * i / pieces, P * (i + 1) / pieces, s).real();
    return acc;
}

double effective_potential(const DiscreteMeasure& phi, double xi, double N, double kappa,
                           const PotentialFamily& pf) {
    check_N(N);
    double tau = std::log(N);
    double v = kappa / N * std::cosh(tau * xi);
    CellKernel ck(pf, tau, phi.cell);
    double acc = 0;
    for (size_t i = 0; i < phi.grid.size(); ++i)
        if (phi.weights[i] != 0) acc += phi.weights[i] * ck.cell(KernelKind::w_plus, xi - phi.grid[i]);
    return v - acc;
}

// ---------------------------------------------------------------- solver

bool Certificate::ok(double mass_tol, double neg_tol) const {
    return mass_residual <= mass_tol && negativity_residual <= neg_tol && exterior_margin > 0 &&
           stationarity <= 1e-8 && symmetry_cells <= 2 && std::abs(edge_exponent - 0.5) <= 0.1;
}

std::vector<std::pair<std::string, double>> Certificate::rows() const {
    return {{"mass_residual", mass_residual},
            {"negativity_residual", negativity_residual},
            {"stationarity", stationarity},
            {"exterior_margin", exterior_margin},
            {"endpoint_symmetry_cells", symmetry_cells},
            {"edge_exponent", edge_exponent},
            {"euler_lagrange_slope", euler_lagrange_slope}};
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

EquilibriumSolution solve_on_grid(double N, double kappa, const PotentialFamily& pf, double L, int M,
                                  double b_pred, const GridSpec& gs) {
    const double tau = std::log(N);
    DiscreteMeasure m = DiscreteMeasure::uniform_grid(L, M);
    const double h = m.cell;
    CellKernel ck(pf, tau, h);
    std::vector<double> c(M);
    for (int k = 0; k < M; ++k) c[k] = ck.pair(KernelKind::w_plus, k * h);
    Eigen::MatrixXd A(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) A(i, j) = -c[std::abs(i - j)];
    Eigen::VectorXd a(M);
    for (int i = 0; i < M; ++i) a(i) = cell_potential(m.grid[i], h, tau, N, kappa);

    std::vector<char> S(M, 0);
    if (gs.init_seed == 0) {
        for (int i = 0; i < M; ++i) S[i] = std::abs(m.grid[i]) < 0.9 * b_pred;
    } else {
        RandomStream rs(gs.init_seed, 0);
        double lo = -b_pred * (0.3 + 0.9 * rs.next_uniform());
        double hi = b_pred * (0.3 + 0.9 * rs.next_uniform());
        for (int i = 0; i < M; ++i) S[i] = m.grid[i] > lo && m.grid[i] < hi && rs.next_uniform() < 0.7;
    }

    Eigen::VectorXd sig = Eigen::VectorXd::Zero(M), g(M);
    double lam = 0;
    int it = 0;
    const double tol = 1e-14 * (1 + a.cwiseAbs().maxCoeff() + std::abs(c[0]));
    for (; it < gs.max_iterations; ++it) {
        std::vector<int> idx;
        for (int i = 0; i < M; ++i)
            if (S[i]) idx.push_back(i);
        const int n = int(idx.size());
        if (n == 0) throw NumericsError("equilibrium: active set became empty");
        Eigen::MatrixXd As(n, n);
        Eigen::VectorXd as(n);
        for (int r = 0; r < n; ++r) {
            as(r) = a(idx[r]);
            for (int q = 0; q < n; ++q) As(r, q) = A(idx[r], idx[q]);
        }
        // A_SS s - lam 1 = -a_S, 1.s = 1 via the Schur complement on 1
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(n), x1, y1;
        Eigen::LLT<Eigen::MatrixXd> llt(As);
        if (llt.info() == Eigen::Success) {
            x1 = llt.solve(ones);
            y1 = llt.solve(-as);
        } else {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(As);
            x1 = ldlt.solve(ones);
            y1 = ldlt.solve(-as);
        }
        lam = (1 - y1.sum()) / x1.sum();
        Eigen::VectorXd ss = y1 + lam * x1;
        sig.setZero();
        for (int r = 0; r < n; ++r) sig(idx[r]) = ss(r);
        g = a + A * sig;
        bool neg = false, viol = false;
        for (int i = 0; i < M; ++i) {
            if (S[i] && sig(i) < 0) neg = true;
            if (!S[i] && g(i) < lam - tol) viol = true;
        }
        if (!neg && !viol) break;
        for (int i = 0; i < M; ++i) {
            if (S[i] && sig(i) < 0) S[i] = 0;
            else if (!S[i] && g(i) < lam - tol) S[i] = 1;
        }
    }
    if (it >= gs.max_iterations) throw NumericsError("equilibrium: active-set iteration did not converge");

    EquilibriumSolution sol;
    sol.tau = tau;
    sol.nodes = M;
    sol.iterations = it + 1;
    m.weights.assign(sig.data(), sig.data() + M);
    m.total_mass = 1.0;
    sol.multiplier = lam;
    sol.energy = a.dot(sig) + 0.5 * sig.dot(A * sig);
    sol.eval_grid = m.grid;
    sol.effective_potential.assign(g.data(), g.data() + M);

    int lo = -1, hi = -1;
    for (int i = 0; i < M; ++i)
        if (sig(i) > 0) {
            if (lo < 0) lo = i;
            hi = i;
        }
    if (lo < 0) throw NumericsError("equilibrium: empty support");
    sol.a_N = m.grid[lo] - h / 2;
    sol.b_N = m.grid[hi] + h / 2;

    Certificate& cert = sol.certificate;
    cert.mass_residual = std::abs(sig.sum() - 1);
    cert.negativity_residual = std::max(0.0, -sig.minCoeff());
    cert.stationarity = 0;
    cert.exterior_margin = INFINITY;
    for (int i = 0; i < M; ++i) {
        if (sig(i) > 0) cert.stationarity = std::max(cert.stationarity, std::abs(g(i) - lam));
        else cert.exterior_margin = std::min(cert.exterior_margin, g(i) - lam);
    }
    if (lo == 0 || hi == M - 1) cert.exterior_margin = std::min(cert.exterior_margin, 0.0);  // support hit the box
    cert.symmetry_cells = std::abs(sol.a_N + sol.b_N) / h;
    // square-root edge: log-log fit over cells 3 .. n/15 from each end
    int n_sup = hi - lo + 1;
    int k1 = std::max(12, n_sup / 15);
    std::vector<double> lx, ly, rx, ry;
    for (int k = 3; k <= k1 && k < n_sup / 2; ++k) {
        int j = hi - k;
        if (sig(j) > 0) {
            rx.push_back(std::log(sol.b_N - m.grid[j]));
            ry.push_back(std::log(sig(j) / h));
        }
        j = lo + k;
        if (sig(j) > 0) {
            lx.push_back(std::log(m.grid[j] - sol.a_N));
            ly.push_back(std::log(sig(j) / h));
        }
    }
    if (rx.size() < 3 || lx.size() < 3) throw NumericsError("equilibrium: support too narrow for the edge fit");
    cert.edge_exponent = 0.5 * (fit_slope(rx, ry) + fit_slope(lx, ly));
    double slope = 0;
    for (int i = lo + 5; i + 1 <= hi - 5; ++i) slope = std::max(slope, std::abs(g(i + 1) - g(i)) / h);
    cert.euler_lagrange_slope = slope;
    sol.measure = std::move(m);
    return sol;
}

}  // namespace

EquilibriumSolution minimize_energy_plus(double N, double kappa, const PotentialFamily& pf, const GridSpec& gs) {
    if (!(N >= kMinEquilibriumN))
        throw NumericsError("equilibrium solver needs N >= " + std::to_string(int(kMinEquilibriumN)));
    if (!(kappa > 0)) throw NumericsError("equilibrium solver needs kappa > 0");
    if (gs.nodes < 100 || !(gs.extent > 1)) throw NumericsError("grid needs >= 100 nodes and extent > 1");
    const double tau = std::log(N);
    const double b_pred = solve_endpoints(N, kappa, pf.params()).bbar / tau;
    const double L = gs.extent * b_pred;
    if (!gs.refine) return solve_on_grid(N, kappa, pf, L, gs.nodes, b_pred, gs);
    double prev = solve_on_grid(N, kappa, pf, L, gs.nodes / 2, b_pred, gs).energy;
    int M = gs.nodes;
    for (;;) {
        EquilibriumSolution s = solve_on_grid(N, kappa, pf, L, M, b_pred, gs);
        s.energy_change = std::abs(s.energy - prev);
        if (s.energy_change < gs.energy_tol || 2 * M > gs.max_nodes) return s;
        prev = s.energy;
        M *= 2;
    }
}

// ---------------------------------------------------------------- closed formulas

namespace {

// the Gamma-product function with its triple pole removed; equals 1 at 0
cplx q_function(cplx l, const ModelParams& p) {
    const double b = p.b, bh = p.b_hat;
    cplx pre = 2.0 * kI * std::exp(kI * l * (2 * b * std::log(b) + 2 * bh * std::log(bh) + std::log(2.0))) /
               (l * l * l * b * bh);
    cplx g = gamma_fn(0.5 + kI * l / 2.0) / gamma_fn(0.5 - kI * l / 2.0);
    cplx r = gamma_fn(1.0 - kI * b * l) * gamma_fn(1.0 - kI * bh * l) * gamma_fn(1.0 - kI * l / 2.0) /
             (gamma_fn(kI * b * l) * gamma_fn(kI * bh * l) * gamma_fn(kI * l / 2.0));
    return pre * g * g * r;
}

// c_l of f scaled to the (-i)^l normalisation; compared between r and r/2
std::array<cplx, 4> contour_coeffs(const std::function<cplx(cplx)>& f, double& radius) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        auto c1 = taylor_coeffs_via_contour(f, 0.0, radius, 3).coeffs;
        auto c2 = taylor_coeffs_via_contour(f, 0.0, radius / 2, 3).coeffs;
        double scale = 0, diff = 0;
        for (int k = 0; k < 4; ++k) {
            scale = std::max(scale, std::abs(c1[k]));
            diff = std::max(diff, std::abs(c1[k] - c2[k]));
        }
        if (diff <= 1e-8 * std::max(1.0, scale)) {
            std::array<cplx, 4> out;
            cplx ip = 1;
            for (int k = 0; k < 4; ++k) {
                out[k] = ip * c1[k];  // w_l = i^l c_l
                ip *= kI;
            }
            return out;
        }
        radius /= 2;
    }
    throw NumericsError("w_constants: contour coefficients unstable under radius halving");
}

}  // namespace

WConstants w_constants(double xbar, const ModelParams& p) {
    if (!(xbar > 0)) throw NumericsError("w_constants needs xbar > 0");
    WConstants out;
    double r = 0.1;
    auto full = contour_coeffs([&](cplx l) { return q_function(l, p) * std::exp(-kI * l * xbar); }, r);
    out.radius = r;
    double r0 = 0.1;
    auto base = contour_coeffs([&](cplx l) { return q_function(l, p); }, r0);
    for (int k = 0; k < 4; ++k) {
        out.w[k] = full[k].real();
        out.base[k] = base[k].real();
        out.max_imag = std::max({out.max_imag, std::abs(full[k].imag()) / std::max(1.0, std::abs(full[k])),
                                 std::abs(base[k].imag())});
    }
    return out;
}

double frak_t(double xbar, const ModelParams& p) {
    auto w = w_constants(xbar, p).w;
    if (w[2] == 0) throw NumericsError("frak_t: w_2 vanishes");
    return 6 / (xbar * xbar) * (2 + w[2] - w[1] - w[1] * w[3] / w[2]);
}

double vartheta(double kappa, const ModelParams& p) {
    if (!(kappa > 0)) throw NumericsError("vartheta needs kappa > 0");
    return 2 * kappa / (3 * std::pow(2 * kPi, 2.5)) * std::tgamma(p.b) * std::tgamma(p.b_hat) /
           (std::pow(p.b, p.b) * std::pow(p.b_hat, p.b_hat));
}

EndpointSolution solve_endpoints(double N, double kappa, const ModelParams& p) {
    if (!(N > 2)) throw NumericsError("solve_endpoints needs N > 2");
    const double th = vartheta(kappa, p);
    auto g = [&](double y) { return th * y * y * std::exp(y) * frak_t(2 * y, p) / N - 1; };
    const double hi_end = std::log(N) + 10;
    double lo = 1, glo = g(lo);
    if (glo >= 0) throw NumericsError("solve_endpoints: N too small, no root with bbar > 1");
    for (double y = 1.25; y <= hi_end; y += 0.25) {
        double gy = g(y);
        if (gy > 0) {
            EndpointSolution s;
            s.bbar = find_root_1d(g, lo, y, 1e-14);
            s.residual = g(s.bbar);
            double L = std::log(N);
            s.predicted = L - 2 * std::log(L) - std::log(th);
            return s;
        }
        lo = y;
    }
    throw NumericsError("solve_endpoints: no root in bracket");
}

AsymptoticMinimum asymptotic_minimum(double N, double kappa, const ModelParams& p) {
    AsymptoticMinimum a;
    a.bbar = solve_endpoints(N, kappa, p).bbar;
    const double bb = a.bbar, x = 2 * bb;
    auto w = w_constants(x, p).w;
    const double wt1 = w[1] / x, wt2 = 2 * w[2] / (x * x);
    const double t = 6 / (x * x) * (2 + w[2] - w[1] - w[1] * w[3] / w[2]);
    const double pi4 = std::pow(kPi, 4), bbh = p.b * p.b_hat;
    a.leading = 3 * pi4 * bbh * wt1 / (4 * bb * bb * bb * wt2 * t);
    a.second = 9 * pi4 * bbh / (8 * std::pow(bb, 4) * t * t) * (1 - 2 * wt1 / (bb * wt2));
    a.value = a.leading + a.second;
    double L = std::log(N);
    a.envelope_constant_ratio = a.value * 4 * L * L * L / (3 * kPi * kPi * bbh);
    return a;
}

}  // namespace sgff
