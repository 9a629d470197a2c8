#include "sgff/correlator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace sgff {

Method parse_method(const std::string& s) {
    if (s == "auto" || s == "automatic") return Method::automatic;
    if (s == "quadrature") return Method::quadrature;
    if (s == "monte-carlo" || s == "mc") return Method::monte_carlo;
    throw NumericsError("unknown integration method '" + s + "'");
}

std::string method_name(Method m) {
    switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte-carlo";
    default: return "automatic";
    }
}

void CorrelatorConfig::validate() const {
    if (!(r > 0)) throw NumericsError("correlator: r must be > 0");
    if (n_max < 0) throw NumericsError("correlator: n_max must be >= 0");
    if (method == Method::monte_carlo && mc_samples < 1000)
        throw NumericsError("correlator: monte-carlo needs at least 1000 samples");
    if (workers < 1) throw NumericsError("correlator: workers must be >= 1");
}

OperatorModel constant_k_model(cplx c) {
    OperatorModel m = unit_k_model();
    m.name = "constant-k";
    m.k_override = [c](std::span<const cplx>) { return c; };
    return m;
}

namespace {

constexpr long kChunk = 4096;

// integrand without the cosh weight; zero on coincident rapidities where
// e^{w} vanishes quadratically
cplx bare_integrand(std::span<const cplx> beta, const OperatorModel& m1, const OperatorModel& m2,
                    const PotentialFamily& pf) {
    const int n = int(beta.size());
    double wsum = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double d = (beta[a] - beta[b]).real();
            if (std::abs(d) < 1e-12) return 0.0;
            wsum += pf.w(d);
        }
    cplx k1 = k_transform(m1, beta, pf.params());
    if (k1 == cplx(0.0)) return 0.0;
    cplx rev[kMaxParticles];
    for (int a = 0; a < n; ++a) rev[a] = beta[n - 1 - a];
    cplx k2 = k_transform(m2, std::span<const cplx>(rev, n), pf.params());
    return std::exp(wsum) * k1 * k2;
}

Estimate quad_integral(int n, double c, const OperatorModel& m1, const OperatorModel& m2,
                       const PotentialFamily& pf, int q) {
    if (q <= 0) q = n <= 1 ? 96 : n == 2 ? 64 : 32;
    const double L = std::acosh(1 + 40.0 / c);
    auto run = [&](int qq) {
        const auto& gl = gauss_legendre(qq);
        long total = 1;
        for (int d = 0; d < n; ++d) total *= qq;
        cplx acc = 0;
        std::vector<int> idx(n, 0);
        cplx beta[kMaxParticles];
        for (long t = 0; t < total; ++t) {
            long r = t;
            double wt = 1;
            for (int d = 0; d < n; ++d) {
                int j = int(r % qq);
                r /= qq;
                double x = L * gl.first[j];
                beta[d] = x;
                wt *= L * gl.second[j] * std::exp(-c * std::cosh(x));
            }
            acc += wt * bare_integrand(std::span<const cplx>(beta, n), m1, m2, pf);
        }
        return acc;
    };
    Estimate e;
    e.used = Method::quadrature;
    e.value = run(q);
    cplx coarse = run(std::max(4, (3 * q) / 4));
    e.error = std::abs(e.value - coarse);
    long pts = 1;
    for (int d = 0; d < n; ++d) pts *= q;
    e.samples = pts;
    return e;
}

Estimate mc_integral(int n, double c, const OperatorModel& m1, const OperatorModel& m2,
                     const PotentialFamily& pf, long samples, std::uint64_t seed, int workers) {
    const long nchunks = (samples + kChunk - 1) / kChunk;
    struct Acc {
        cplx sum{0.0, 0.0};
        double sumsq = 0;
        long cnt = 0;
    };
    std::vector<Acc> acc(nchunks);
    const double norm = std::pow(2 * bessel_k0(c), n);
    pf.w(1.0);  // build the cached table before the workers start
    std::atomic<long> next{0};
    auto work = [&] {
        cplx beta[kMaxParticles];
        for (;;) {
            long ch = next.fetch_add(1);
            if (ch >= nchunks) break;
            RandomStream rs(seed, std::uint64_t(ch));
            long cnt = std::min(kChunk, samples - ch * kChunk);
            Acc a;
            for (long s = 0; s < cnt; ++s) {
                for (int d = 0; d < n; ++d) beta[d] = rs.next_cosh_weighted(c);
                cplx v = norm * bare_integrand(std::span<const cplx>(beta, n), m1, m2, pf);
                a.sum += v;
                a.sumsq += std::norm(v);
                ++a.cnt;
            }
            acc[ch] = a;
        }
    };
    int nw = std::max(1, std::min<int>(workers, int(nchunks)));
    std::vector<std::thread> th;
    for (int i = 1; i < nw; ++i) th.emplace_back(work);
    work();
    for (auto& t : th) t.join();
    // fixed-order reduction: independent of the worker count
    cplx sum = 0;
    double sumsq = 0;
    long cnt = 0;
    for (auto& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
        cnt += a.cnt;
    }
    Estimate e;
    e.used = Method::monte_carlo;
    e.samples = cnt;
    e.value = sum / double(cnt);
    double var = (sumsq / cnt - std::norm(e.value)) * cnt / std::max(1.0, double(cnt - 1));
    e.error = std::sqrt(std::max(0.0, var) / cnt);
    return e;
}

}  // namespace

Estimate weighted_k_integral(int n, double c, const OperatorModel& m1, const OperatorModel& m2,
                             const PotentialFamily& pf, Method method, long samples,
                             std::uint64_t seed, int workers, int quad_points) {
    if (n < 0) throw NumericsError("particle number must be >= 0");
    if (n > kMaxParticles) throw NumericsError("particle number beyond the 2^n cost gate");
    if (!(c > 0)) throw NumericsError("cosh weight must be > 0");
    if (n == 0) {
        Estimate e;
        e.value = m1.F0 * m2.F0;
        e.used = Method::quadrature;
        return e;
    }
    Method m = method;
    if (m == Method::automatic) m = n <= 3 ? Method::quadrature : Method::monte_carlo;
    if (m == Method::quadrature) return quad_integral(n, c, m1, m2, pf, quad_points);
    if (samples < 1000) throw NumericsError("monte-carlo needs at least 1000 samples");
    return mc_integral(n, c, m1, m2, pf, samples, seed, workers);
}

Estimate two_point_term(int n, const CorrelatorConfig& cfg, const PotentialFamily& pf) {
    cfg.validate();
    double mr = pf.params().m * cfg.r;
    Estimate e = weighted_k_integral(n, mr, cfg.model1, cfg.model2, pf, cfg.method, cfg.mc_samples,
                                     cfg.seed + std::uint64_t(n) * 1000003ULL, cfg.workers,
                                     cfg.quad_points);
    double f = 1;
    for (int j = 1; j <= n; ++j) f *= j * 2 * kPi;
    e.value /= f;
    e.error /= f;
    return e;
}

std::vector<SeriesRow> two_point_partial_sum(const CorrelatorConfig& cfg, const PotentialFamily& pf) {
    std::vector<SeriesRow> rows;
    cplx ps = 0;
    double pe2 = 0;
    for (int n = 0; n <= cfg.n_max; ++n) {
        Estimate e = two_point_term(n, cfg, pf);
        ps += e.value;
        pe2 += e.error * e.error;
        rows.push_back({n, e.value, e.error, ps, std::sqrt(pe2)});
    }
    return rows;
}

cplx spin_prefactor(double s1, double s2, double theta, int x_sign) {
    double sg = x_sign > 0 ? 1.0 : x_sign < 0 ? -1.0 : 0.0;
    cplx eta = kI * kPi * s2 + (kI * kPi / 2.0 + theta) * (s1 + s2) * sg;
    return std::exp(eta);
}

Estimate z_n_estimate(int N, double kappa, const OperatorModel& m1, const OperatorModel& m2,
                      const PotentialFamily& pf, Method method, long samples, std::uint64_t seed,
                      int workers, int quad_points) {
    if (N < 1) throw NumericsError("Z_N needs N >= 1");
    if (!(kappa > 0)) throw NumericsError("Z_N needs kappa > 0");
    return weighted_k_integral(N, 2 * kappa, m1, m2, pf, method, samples, seed, workers, quad_points);
}

double decay_envelope(int N, const ModelParams& p) {
    if (N < 3) throw NumericsError("envelope needs N >= 3");
    double L = std::log(double(N));
    return std::exp(-3 * kPi * kPi * p.b * p.b_hat * double(N) * N / (4 * L * L * L));
}

}  // namespace sgff
