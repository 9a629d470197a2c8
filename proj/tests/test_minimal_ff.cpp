#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "sgff/minimal_ff.hpp"

#include <cmath>

using namespace sgff;

namespace {
const ModelParams P25 = ModelParams::from_b(0.25);
const ModelParams P30 = ModelParams::from_b(0.3);
}  // namespace

TEST_CASE("F tends to 1 far along the strip") {
    CHECK(std::abs(minimal_F(cplx(40, kPi), P25) - 1.0) <= 1e-3);
    CHECK(std::abs(minimal_F(cplx(-40, kPi), P25) - 1.0) <= 1e-3);
}

TEST_CASE("F(i pi) is a positive real constant") {
    PotentialFamily pf(P25);
    cplx f = minimal_F(kI * kPi, P25);
    CHECK(std::abs(f.imag()) < 1e-14);
    CHECK(f.real() > 0);
    CHECK(std::abs(pf.F_ipi() - f.real()) < 1e-15);
    CHECK(std::abs(pf.F_ipi() - 0.789347820783475) < 1e-12);
}

TEST_CASE("boundary identities") {
    cplx fp = minimal_F(0.9, P30), fm = minimal_F(-0.9, P30);
    CHECK(std::abs(fp - s_matrix(0.9, P30) * fm) < 1e-8);
    RandomStream rs(4, 0);
    for (int k = 0; k < 50; ++k) {
        double b = -8 + 16 * rs.next_uniform();
        // lower boundary value at beta + 2 i pi equals the upper one at -beta
        CHECK(std::abs(minimal_F(cplx(b, 2 * kPi), P30) - minimal_F(-b, P30)) < 1e-8);
        CHECK(std::abs(minimal_F(b, P30) - s_matrix(b, P30) * minimal_F(-b, P30)) < 1e-8);
    }
}

TEST_CASE("boundary values from a limiting offset agree with the direct ones") {
    // Richardson on offsets 1e-6 and 2e-6 into the strip
    for (double b : {-2.3, 0.4, 1.7}) {
        cplx a1 = minimal_F(cplx(b, 1e-6), P30), a2 = minimal_F(cplx(b, 2e-6), P30);
        CHECK(std::abs(2.0 * a1 - a2 - minimal_F(b, P30)) < 1e-8);
        cplx c1 = minimal_F(cplx(b, 2 * kPi - 1e-6), P30), c2 = minimal_F(cplx(b, 2 * kPi - 2e-6), P30);
        CHECK(std::abs(2.0 * c1 - c2 - minimal_F(cplx(b, 2 * kPi), P30)) < 1e-8);
    }
}

TEST_CASE("analytic continuation below the strip") {
    cplx b(0.3, -1.0);
    CHECK(std::abs(minimal_F(b, P30) - s_matrix(b, P30) * minimal_F(-b, P30)) < 1e-10);
}

TEST_CASE("two-body potential examples") {
    PotentialFamily pf(P25);
    CHECK(std::abs(pf.w(30.0)) <= 1e-3);
    double r3 = pf.w(1e-3) - 2 * std::log(1e-3), r4 = pf.w(1e-4) - 2 * std::log(1e-4);
    CHECK(std::abs(r3 - r4) <= 1e-3);
    CHECK(std::abs(pf.w(0.77) - pf.w(-0.77)) < 1e-12);
    CHECK_THROWS_AS(pf.w(0.0), NumericsError);
    CHECK(std::abs(pf.w_reg(0.0) - 0.4730964) < 1e-6);
}

TEST_CASE("w is the log of a positive product") {
    PotentialFamily pf(P25);
    RandomStream rs(12, 0);
    for (int k = 0; k < 50; ++k) {
        double l = (rs.next_uniform() - 0.5) * 30;
        cplx prod = minimal_F(l, P25) * minimal_F(-l, P25);
        CHECK(std::abs(prod.imag()) < 1e-12 * std::abs(prod));
        CHECK(prod.real() > 0);
        CHECK(std::abs(std::log(prod.real()) - pf.w_direct(l)) < 1e-10);
    }
}

TEST_CASE("cached table agrees with direct evaluation") {
    PotentialFamily pf(P25);
    RandomStream rs(13, 0);
    for (int k = 0; k < 200; ++k) {
        double l = 40 * rs.next_uniform();
        CHECK(std::abs(pf.w_reg(l) - pf.w_reg_direct(l)) < 1e-8);
    }
    CHECK(std::abs(pf.w_reg(45.0) - pf.w_reg_direct(45.0)) < 1e-14);
}

TEST_CASE("v_alpha_eta") {
    for (double l : {0.1, 1.0, 7.0}) CHECK(v_alpha_eta(l, 0.7, 0.7) == 0.0);
    CHECK(std::abs(v_alpha_eta(20, 2 * kPi * 0.25, 0)) <= 1e-6);
    double c = std::cosh(0.5) / std::sinh(0.5);
    CHECK(std::abs(v_alpha_eta(0.5, kPi / 2, 0) - 2 * std::log(c)) < 1e-13);
    CHECK(std::abs(v_alpha_eta(0.5, kPi / 2, 0) - 1.5438736658) < 1e-9);
    CHECK_THROWS_AS(v_alpha_eta(0.0, 1.0, 0.0), NumericsError);
    CHECK(std::abs(v_alpha_eta(0.0, 1.0, 0.5) - std::log(std::pow(std::sin(1.0) / std::sin(0.5), 2))) < 1e-14);
}

TEST_CASE("kernel family identities") {
    PotentialFamily pf(P25);
    CHECK(std::abs(pf.w_plus(1.1) + pf.w_minus(1.1) - pf.w(1.1)) < 1e-10);
    for (double l : {0.05, 0.3, 1.1, 4.0, 15.0}) {
        CHECK(std::abs(pf.w_plus(l) - pf.w_minus(l) - pf.w_tot(l)) < 1e-10);
        CHECK(std::abs(pf.w_tot(l) - pf.w(l) - v_alpha_eta(l, 2 * kPi * 0.25, 0)) < 1e-10);
        CHECK(std::abs(pf.w_plus(l) - pf.w(l) - 0.5 * v_alpha_eta(l, 2 * kPi * 0.25, 0)) < 1e-10);
        CHECK(std::abs(pf.w_minus(l) + 0.5 * v_alpha_eta(l, 2 * kPi * 0.25, 0)) < 1e-10);
        CHECK(std::abs(pf.w_plus(l) - std::log(l) - pf.w_plus_smooth(l)) < 1e-10);
        CHECK(std::abs(pf.w_minus(l) - std::log(l) - pf.w_minus_smooth(l)) < 1e-10);
    }
    CHECK(std::abs(pf.w_tot(1e-3) - pf.w_tot(1e-4)) <= 1e-3);
    CHECK(std::abs(pf.w_tot(25.0)) <= 1e-3);
}

TEST_CASE("evenness of all kernels") {
    PotentialFamily pf(P30);
    for (double l : {0.01, 0.4, 2.2, 9.0}) {
        CHECK(std::abs(pf.w(l) - pf.w(-l)) < 1e-12);
        CHECK(std::abs(pf.w_tot(l) - pf.w_tot(-l)) < 1e-12);
        CHECK(std::abs(pf.w_plus(l) - pf.w_plus(-l)) < 1e-12);
        CHECK(std::abs(pf.w_minus(l) - pf.w_minus(-l)) < 1e-12);
        CHECK(std::abs(v_alpha_eta(l, 1.0, 0.3) - v_alpha_eta(-l, 1.0, 0.3)) < 1e-12);
    }
}

TEST_CASE("decay bound |F - 1| <= C / beta^2 on [10, 40]") {
    // C fitted on each window; a stable bound means later windows never need a larger C
    double prevC = INFINITY, C0 = 0;
    for (int w = 0; w < 3; ++w) {
        double C = 0;
        for (double b = 10 + 10 * w; b <= 20 + 10 * w; b += 0.5) {
            C = std::max(C, std::abs(minimal_F(cplx(b, kPi), P25) - 1.0) * b * b);
            C = std::max(C, std::abs(minimal_F(b, P25) - 1.0) * b * b);
        }
        if (w == 0) C0 = C;
        CHECK(C <= prevC);
        prevC = C;
    }
    CHECK(C0 < 1.0);
}

TEST_CASE("fault injection perturbs only the cached path") {
    PotentialFamily pf(P25);
    double clean = pf.w(1.3);
    pf.inject_fault(0.5);
    CHECK(std::abs(pf.w(1.3) - clean) > 0.1);
    CHECK(std::abs(pf.w_direct(1.3) - clean) < 1e-8);
}

TEST_CASE("scaled potentials") {
    PotentialFamily pf(P25);
    ScaledPotentials s8(pf, 8, 1.7);
    CHECK(s8.V(0) == doctest::Approx(1.7).epsilon(1e-15));
    ScaledPotentials s(pf, 100, 1.0);
    CHECK(std::abs(s.w(0.2) - pf.w(std::log(100.0) * 0.2)) < 1e-12);
    CHECK(std::abs(s.V(1.0) - 50.005) < 1e-10);
    CHECK_THROWS_AS(ScaledPotentials(pf, 1.5), NumericsError);
}
