#pragma once
#include "sgff/numerics.hpp"

namespace sgff {

struct ModelParams {
    double g = 0;     // coupling (0 when built from b directly)
    double m = 1;     // mass
    double b = 0.25;  // g^2 / (2(8 pi + g^2))
    double b_hat = 0.25;

    static ModelParams from_coupling(double g, double m = 1.0);
    static ModelParams from_b(double b, double m = 1.0);
    // the coupling with b and b_hat exchanged
    ModelParams dual() const;

    double sin2pib() const;
};

cplx s_matrix(cplx beta, const ModelParams& p);

// exp of the x-integral representation; only checked on |Im beta| < pi/2
cplx s_matrix_integral(cplx beta, const ModelParams& p, const QuadratureSpec& spec);

}  // namespace sgff
