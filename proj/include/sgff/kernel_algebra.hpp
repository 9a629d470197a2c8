#pragma once
// symbolic expansion of the multi-particle kernels and the reduction check
#include <string>
#include <utility>
#include <vector>

#include "sgff/bootstrap_ff.hpp"

namespace sgff {

inline constexpr int kMaxKernelSize = 8;  // n + m

struct Sym {
    char kind = 'a';  // 'a' for alpha, 'b' for beta
    int idx = 1;      // 1-based
    bool shifted = false;  // + i pi
    auto operator<=>(const Sym&) const = default;
    std::string str() const;
};

struct SFactor {  // S(x - y)
    Sym x, y;
    auto operator<=>(const SFactor&) const = default;
};

struct KernelTerm {
    int p = 0;
    std::vector<int> k_indices;  // contracted alphas, increasing
    std::vector<int> i_indices;  // their beta partners
    std::vector<SFactor> s_factors;
    std::vector<Sym> ff_args;
    std::vector<std::pair<int, int>> delta_pairs;  // (alpha, beta)

    std::string to_line() const;
};

std::vector<KernelTerm> expand_kernel(int n, int m);
std::vector<KernelTerm> reduce_via_axiom_v(int n, int m);

// substitute contracted alphas, undo i pi shifts by crossing, cancel
// unitarity pairs, sort
KernelTerm normalize(const KernelTerm& t);
std::vector<std::string> normal_forms(const std::vector<KernelTerm>& terms);  // sorted
bool same_term_multiset(const std::vector<KernelTerm>& a, const std::vector<KernelTerm>& b);

long expected_term_count(int n, int m);  // sum_p C(n,p) m!/(m-p)!
bool has_self_scattering(const KernelTerm& t);

struct PatternCoefficient {
    std::vector<std::pair<int, int>> delta_pairs;
    cplx coeff{0.0, 0.0};
};

// smooth coefficient of each delta pattern; delta factors are never evaluated
std::vector<PatternCoefficient> evaluate_kernel_smooth_part(const std::vector<KernelTerm>& terms,
                                                            const OperatorModel& model,
                                                            std::span<const cplx> alpha,
                                                            std::span<const cplx> beta,
                                                            const PotentialFamily& pf);

}  // namespace sgff
