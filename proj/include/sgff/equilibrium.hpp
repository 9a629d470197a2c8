#pragma once
// energy functionals, Fourier positivity, the direct equilibrium solver and
// the closed large-N formulas
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sgff/minimal_ff.hpp"

namespace sgff {

// cell-supported measure: weight i is spread uniformly over
// [grid_i - cell/2, grid_i + cell/2]
struct DiscreteMeasure {
    std::vector<double> grid;
    std::vector<double> weights;
    double total_mass = 1.0;
    double cell = 1e-3;

    static DiscreteMeasure point(double x, double mass = 1.0, double cell = 1e-3);
    static DiscreteMeasure uniform_grid(double L, int M);  // zero weights on [-L, L]
    double mass() const;
    void validate(bool probability) const;
};

// t nu + s mu on the union of both grids (cells must agree)
DiscreteMeasure combine(const DiscreteMeasure& nu, double t, const DiscreteMeasure& mu, double s);

enum class KernelKind { w, w_tot, w_plus, w_minus };

// cell-pair and cell averages of kernel(tau u); the log part of each kernel
// is integrated in closed form on cells that touch the singularity
class CellKernel {
public:
    CellKernel(const PotentialFamily& pf, double tau, double h);
    double pair(KernelKind k, double d) const;  // (1/h^2) int int over two cells at offset d
    double cell(KernelKind k, double d) const;  // (1/h) int over one cell at offset d
    double h() const { return h_; }

private:
    double coef(KernelKind k) const;
    double smooth(KernelKind k, double u) const;  // smooth part at lambda = tau u
    const PotentialFamily* pf_;
    double tau_, h_;
};

// double integral sum_ij a_i b_j pair(x_i - y_j)
double kernel_form(const CellKernel& ck, KernelKind k, const DiscreteMeasure& a,
                   const DiscreteMeasure& b);
double potential_term(const DiscreteMeasure& m, double N, double kappa);  // (1/N) int V_N

double energy_Nt(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double t, double N,
                 double kappa, const PotentialFamily& pf);
double energy_plus(const DiscreteMeasure& sigma, double N, double kappa, const PotentialFamily& pf);
double energy_minus(const DiscreteMeasure& sigma, double N, const PotentialFamily& pf);
std::pair<double, double> decompose_and_energies(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                                 double t, double N, double kappa,
                                                 const PotentialFamily& pf);

double fourier_weight(double lambda, const ModelParams& p);
// (1/2) int weight(l) |sigma^(tau l)|^2 dl with the exact transform of the cell density
double e_minus_fourier(const DiscreteMeasure& sigma, double N, const PotentialFamily& pf,
                       const QuadratureSpec& spec = {});

double effective_potential(const DiscreteMeasure& phi, double xi, double N, double kappa,
                           const PotentialFamily& pf);

// below this the predicted support is too coarse for the edge fit
inline constexpr double kMinEquilibriumN = 100;

struct GridSpec {
    int nodes = 2000;
    double extent = 1.2;       // half-width in units of the predicted endpoint
    bool refine = true;        // compare with the half grid, double on demand
    int max_nodes = 4000;
    double energy_tol = 1e-6;
    std::uint64_t init_seed = 0;  // 0: symmetric start, else random initial support
    int max_iterations = 400;
};

struct Certificate {
    double mass_residual = 0;
    double negativity_residual = 0;
    double stationarity = 0;        // max |V_eff - multiplier| on the support
    double exterior_margin = 0;     // min of V_eff - multiplier off the support
    double symmetry_cells = 0;      // |a_N + b_N| / h
    double edge_exponent = 0;
    double euler_lagrange_slope = 0;  // finite-difference V_eff' on the interior

    bool ok(double mass_tol = 1e-10, double neg_tol = 1e-12) const;
    std::vector<std::pair<std::string, double>> rows() const;
};

struct EquilibriumSolution {
    DiscreteMeasure measure;
    double a_N = 0, b_N = 0;
    double energy = 0;
    double multiplier = 0;
    std::vector<double> eval_grid, effective_potential;
    Certificate certificate;
    int iterations = 0;
    int nodes = 0;
    double energy_change = 0;  // against the half grid
    double tau = 0;
};

EquilibriumSolution minimize_energy_plus(double N, double kappa, const PotentialFamily& pf,
                                         const GridSpec& grid = {});

// closed large-N formulas
struct WConstants {
    std::array<double, 4> w{};
    std::array<double, 4> base{};  // x-bar independent part
    double max_imag = 0;
    double radius = 0;
};
WConstants w_constants(double xbar, const ModelParams& p);
double frak_t(double xbar, const ModelParams& p);
double vartheta(double kappa, const ModelParams& p);

struct EndpointSolution {
    double bbar = 0;
    double predicted = 0;  // ln N - 2 ln ln N - ln vartheta
    double residual = 0;
};
EndpointSolution solve_endpoints(double N, double kappa, const ModelParams& p);

struct AsymptoticMinimum {
    double value = 0;
    double leading = 0, second = 0;
    double bbar = 0;
    double envelope_constant_ratio = 0;  // against 3 pi^2 b b^ / (4 ln^3 N)
};
AsymptoticMinimum asymptotic_minimum(double N, double kappa, const ModelParams& p);

}  // namespace sgff
