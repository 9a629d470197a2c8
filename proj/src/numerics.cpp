#include "sgff/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>

#include <boost/math/tools/toms748_solve.hpp>

namespace sgff {

void QuadratureSpec::validate() const {
    if (!(truncation_radius > 0)) throw NumericsError("truncation_radius must be > 0");
    if (!(target_abs_tol > 0) || !(target_rel_tol > 0))
        throw NumericsError("quadrature tolerances must be > 0");
    if (max_refinements < 1) throw NumericsError("max_refinements must be >= 1");
}

// ---- gamma ---------------------------------------------------------------

namespace {
// Lanczos g=7, n=9
constexpr double kLg = 7.0;
constexpr std::array<double, 9> kLc = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_int(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx lgamma_right(cplx z) {  // Re z >= 0.5
    z -= 1.0;
    cplx x = kLc[0];
    for (int i = 1; i < 9; ++i) x += kLc[i] / (z + double(i));
    cplx t = z + kLg + 0.5;
    return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}
}  // namespace

cplx lgamma_fn(cplx z) {
    if (is_nonpositive_int(z)) throw NumericsError("gamma pole at non-positive integer");
    if (z.real() >= 0.5) return lgamma_right(z);
    // reflection; log of sin picks the principal branch, fine for our use
    return std::log(kPi) - std::log(std::sin(kPi * z)) - lgamma_right(1.0 - z);
}

cplx gamma_fn(cplx z) {
    if (is_nonpositive_int(z)) throw NumericsError("gamma pole at non-positive integer");
    if (z.real() >= 0.5) return std::exp(lgamma_right(z));
    return kPi / (std::sin(kPi * z) * std::exp(lgamma_right(1.0 - z)));
}

double bessel_k0(double x) { return std::cyl_bessel_k(0.0, x); }

// ---- Gauss-Kronrod ---------------------------------------------------------

namespace {
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b;
    cplx val;
    double err;
    bool operator<(const Piece& o) const { return err < o.err; }
};

Piece gk15(const std::function<cplx(double)>& f, double a, double b, int& evals) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx rk = fc * kWgk[7], rg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        cplx s = f(c - dx) + f(c + dx);
        rk += kWgk[j] * s;
        if (j % 2 == 1) rg += kWg[j / 2] * s;
    }
    evals += 15;
    return {a, b, rk * h, std::abs((rk - rg) * h)};
}

QuadResult adaptive(const std::function<cplx(double)>& f, double a, double b,
                    const QuadratureSpec& spec) {
    QuadResult out;
    std::priority_queue<Piece> heap;
    Piece p0 = gk15(f, a, b, out.evals);
    heap.push(p0);
    cplx total = p0.val;
    double err = p0.err;
    int splits = 0;
    std::vector<Piece> done;  // pieces too small to split
    while (true) {
        double tol = std::max(spec.target_abs_tol, spec.target_rel_tol * std::abs(total));
        if (err <= tol) {
            out.converged = true;
            break;
        }
        if (heap.empty() || splits >= spec.max_refinements) break;
        Piece w = heap.top();
        heap.pop();
        double m = 0.5 * (w.a + w.b);
        if (!(m > w.a && m < w.b) ||
            (w.b - w.a) < 64 * std::numeric_limits<double>::epsilon() *
                              std::max(std::abs(w.a), std::abs(w.b))) {
            done.push_back(w);
            continue;
        }
        Piece l = gk15(f, w.a, m, out.evals), r = gk15(f, m, w.b, out.evals);
        total += l.val + r.val - w.val;
        err += l.err + r.err - w.err;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    // re-add in a fixed order so the sum does not depend on heap drift
    cplx sum = 0;
    double e = 0;
    std::vector<Piece> all = done;
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    for (auto& p : all) {
        sum += p.val;
        e += p.err;
    }
    out.value = sum;
    out.error = e;
    if (!out.converged)
        out.converged = e <= std::max(spec.target_abs_tol, spec.target_rel_tol * std::abs(sum));
    return out;
}

// grow the cut until f is negligible over the last stretch
double cut_radius(const std::function<cplx(double)>& f, double a, double dir,
                  const QuadratureSpec& spec) {
    double R = spec.truncation_radius;
    double thr = spec.target_abs_tol / 10;
    for (int it = 0; it < 80; ++it) {
        double mx = 0;
        for (int j = 0; j <= 8; ++j) {
            double x = a + dir * R * (0.5 + j / 16.0);
            mx = std::max(mx, std::abs(f(x)));
        }
        if (mx < thr) return R;
        R *= 1.5;
    }
    throw NumericsError("integrand does not decay; cannot truncate");
}

QuadResult combine(QuadResult x, const QuadResult& y) {
    x.value += y.value;
    x.error += y.error;
    x.converged = x.converged && y.converged;
    x.evals += y.evals;
    return x;
}

QuadResult finite(const std::function<cplx(double)>& f, double a, double b,
                  const QuadratureSpec& spec, Endpoint sing) {
    switch (sing) {
    case Endpoint::none:
        return adaptive(f, a, b, spec);
    case Endpoint::left: {
        double L = b - a;
        return adaptive([&](double u) { return f(a + L * u * u) * (2 * L * u); }, 0, 1, spec);
    }
    case Endpoint::right: {
        double L = b - a;
        return adaptive([&](double u) { return f(b - L * u * u) * (2 * L * u); }, 0, 1, spec);
    }
    case Endpoint::both: {
        double m = 0.5 * (a + b);
        return combine(finite(f, a, m, spec, Endpoint::left),
                       finite(f, m, b, spec, Endpoint::right));
    }
    }
    return {};
}
}  // namespace

QuadResult integrate_1d(const std::function<cplx(double)>& f, double a, double b,
                        const QuadratureSpec& spec, Endpoint sing) {
    spec.validate();
    if (a == b) return {0.0, 0.0, true, 0};
    if (a > b) {
        auto r = integrate_1d(f, b, a, spec, sing == Endpoint::left    ? Endpoint::right
                                              : sing == Endpoint::right ? Endpoint::left
                                                                        : sing);
        r.value = -r.value;
        return r;
    }
    bool ia = std::isinf(a), ib = std::isinf(b);
    if (ia && ib) {
        double Rl = cut_radius(f, 0.0, -1, spec), Rr = cut_radius(f, 0.0, 1, spec);
        return combine(finite(f, -Rl, 0, spec, Endpoint::none), finite(f, 0, Rr, spec, Endpoint::none));
    }
    if (ib) {
        double R = cut_radius(f, a, 1, spec);
        return finite(f, a, a + R, spec, sing == Endpoint::left ? Endpoint::left : Endpoint::none);
    }
    if (ia) {
        double R = cut_radius(f, b, -1, spec);
        return finite(f, b - R, b, spec, sing == Endpoint::right ? Endpoint::right : Endpoint::none);
    }
    return finite(f, a, b, spec, sing);
}

cplx integrate_or_throw(const std::function<cplx(double)>& f, double a, double b,
                        const QuadratureSpec& spec, Endpoint sing) {
    auto r = integrate_1d(f, a, b, spec, sing);
    if (!r.converged)
        throw NumericsError("quadrature did not converge (err " + std::to_string(r.error) + ")");
    return r.value;
}

// ---- Gauss-Legendre --------------------------------------------------------

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1, p1 = 0;
            for (int j = 1; j <= n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j - 1) * z * p1 - (j - 1) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1, p1 = 0;
        for (int j = 1; j <= n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2 * j - 1) * z * p1 - (j - 1) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

// ---- contour Taylor --------------------------------------------------------

TaylorResult taylor_coeffs_via_contour(const std::function<cplx(cplx)>& f, cplx center,
                                       double radius, int order, int npts) {
    if (!(radius > 0)) throw NumericsError("contour radius must be > 0");
    if (order < 0 || 2 * (order + 4) > npts) throw NumericsError("order too large for npts");
    std::vector<cplx> fv(npts);
    for (int j = 0; j < npts; ++j) {
        fv[j] = f(center + radius * std::polar(1.0, 2 * kPi * j / npts));
        if (!std::isfinite(fv[j].real()) || !std::isfinite(fv[j].imag()))
            throw NumericsError("contour passes through a singularity (non-finite sample)");
    }
    // scaled DFT: d_k = c_k r^k
    auto dft = [&](int k) {
        cplx s = 0;
        for (int j = 0; j < npts; ++j) s += fv[j] * std::polar(1.0, -2 * kPi * double(j) * k / npts);
        return s / double(npts);
    };
    TaylorResult out;
    double mx = 0;
    for (int k = 0; k <= order; ++k) {
        cplx d = dft(k);
        mx = std::max(mx, std::abs(d));
        out.coeffs.push_back(d / std::pow(radius, k));
    }
    // tail at the Nyquist end and negative frequencies: both vanish for a
    // function holomorphic on the closed disk
    double tail = 0;
    for (int k = npts / 2 - 4; k <= npts / 2; ++k) tail = std::max(tail, std::abs(dft(k)));
    for (int k = 1; k <= 4; ++k) tail = std::max(tail, std::abs(dft(npts - k)));
    for (int k = order + 1; k < npts / 2 - 4; ++k) mx = std::max(mx, std::abs(dft(k)));
    out.tail_ratio = mx > 0 ? tail / mx : 0.0;
    if (!(out.tail_ratio <= 1e-9))
        throw NumericsError("contour radius too large: coefficient tail ratio " +
                            std::to_string(out.tail_ratio));
    return out;
}

// ---- roots -----------------------------------------------------------------

double find_root_1d(const std::function<double(double)>& g, double lo, double hi, double tol) {
    double glo = g(lo), ghi = g(hi);
    if (glo == 0) return lo;
    if (ghi == 0) return hi;
    if ((glo > 0) == (ghi > 0)) throw NumericsError("no sign change in bracket");
    std::uintmax_t maxit = 500;
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, stop, maxit);
    return 0.5 * (r.first + r.second);
}

// ---- random streams --------------------------------------------------------

namespace {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t RandomStream::bits(std::uint64_t counter) const {
    std::uint64_t k = mix64(seed_ + 0x9E3779B97F4A7C15ULL);
    k = mix64(k ^ (stream_ * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
    return mix64(k + counter * 0x9E3779B97F4A7C15ULL);
}

double RandomStream::uniform(std::uint64_t counter) const {
    return (double(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::next_normal() {
    double u1 = next_uniform(), u2 = next_uniform();
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * kPi * u2);
}

double RandomStream::next_cosh_weighted(double c) {
    if (!(c > 0)) throw NumericsError("cosh weight needs c > 0");
    // cosh x >= 1 + x^2/2, so a gaussian of variance 1/c dominates
    double sd = 1 / std::sqrt(c);
    for (;;) {
        double x = sd * next_normal();
        double acc = std::exp(-c * (std::cosh(x) - 1 - 0.5 * x * x));
        if (next_uniform() < acc) return x;
    }
}

}  // namespace sgff
