#pragma once
// shared numerical substrate: gamma, adaptive quadrature, contour taylor
// coefficients, bracketed roots, counter-based random streams

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgff {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
    double truncation_radius = 30.0;
    double target_abs_tol = 1e-13;
    double target_rel_tol = 1e-11;
    int max_refinements = 4000;

    void validate() const;
};

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    bool converged = false;
    int evals = 0;
};

// which endpoint carries an integrable log singularity (u = t^2 doubling)
enum class Endpoint { none, left, right, both };

// Euler gamma for complex argument; throws at non-positive integers
cplx gamma_fn(cplx z);
cplx lgamma_fn(cplx z);  // log gamma, branch continuous off the negative axis

// adaptive Gauss-Kronrod 7/15. a or b may be +-infinity.
// semi-infinite ends are cut where |f| stays below abs_tol/10.
QuadResult integrate_1d(const std::function<cplx(double)>& f, double a, double b,
                        const QuadratureSpec& spec, Endpoint sing = Endpoint::none);

// same but throws NumericsError on non-convergence
cplx integrate_or_throw(const std::function<cplx(double)>& f, double a, double b,
                        const QuadratureSpec& spec, Endpoint sing = Endpoint::none);

// Gauss-Legendre nodes/weights on [-1,1], cached per order
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

struct TaylorResult {
    std::vector<cplx> coeffs;
    double tail_ratio = 0.0;  // |c_{M/2} r^{M/2}| / max_k |c_k r^k|
};

// c_0..c_order of f around center from a discretised circle of given radius.
// throws if the aliasing diagnostic says the radius reaches a singularity
TaylorResult taylor_coeffs_via_contour(const std::function<cplx(cplx)>& f, cplx center,
                                       double radius, int order, int npts = 128);

// bracketed root; throws when g(lo), g(hi) have the same sign
double find_root_1d(const std::function<double(double)>& g, double lo, double hi,
                    double tol);

double bessel_k0(double x);

// stateless counter-based generator keyed by (seed, stream_id)
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t bits(std::uint64_t counter) const;
    double uniform(std::uint64_t counter) const;  // in (0,1)

    // sequential helpers, advance the internal counter
    double next_uniform() { return uniform(ctr_++); }
    double next_normal();
    // draw from density prop. to exp(-c cosh x), c > 0
    double next_cosh_weighted(double c);

    std::uint64_t counter() const { return ctr_; }

private:
    std::uint64_t seed_, stream_;
    std::uint64_t ctr_ = 0;
};

}  // namespace sgff
