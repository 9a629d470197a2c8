#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "sgff/kernel_algebra.hpp"
#include "sgff/model_file.hpp"

#include <set>

using namespace sgff;

TEST_CASE("small expansions") {
    auto t04 = expand_kernel(0, 4);
    REQUIRE(t04.size() == 1);
    CHECK(t04[0].p == 0);
    CHECK(t04[0].ff_args.size() == 4);
    for (int j = 0; j < 4; ++j) CHECK(t04[0].ff_args[j].str() == "b" + std::to_string(j + 1));
    CHECK(expand_kernel(1, 1).size() == 2);
    auto t22 = expand_kernel(2, 2);
    CHECK(t22.size() == 7);
    int byp[3] = {0, 0, 0};
    for (auto& t : t22) byp[t.p]++;
    CHECK(byp[0] == 1);
    CHECK(byp[1] == 4);
    CHECK(byp[2] == 2);
}

TEST_CASE("term structure invariants") {
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; n + m <= 6; ++m)
            for (auto& t : expand_kernel(n, m)) {
                CHECK(int(t.k_indices.size()) == t.p);
                CHECK(int(t.i_indices.size()) == t.p);
                CHECK(int(t.ff_args.size()) == n + m - 2 * t.p);
                CHECK(int(t.delta_pairs.size()) == t.p);
                for (int a = 1; a < t.p; ++a) CHECK(t.k_indices[a] > t.k_indices[a - 1]);
                std::set<int> is(t.i_indices.begin(), t.i_indices.end());
                CHECK(int(is.size()) == t.p);
            }
}

TEST_CASE("term counts for all n + m <= 6") {
    CHECK(expected_term_count(1, 1) == 2);
    CHECK(expected_term_count(2, 2) == 7);
    for (int n = 0; n <= 6; ++n)
        for (int m = 0; n + m <= 6; ++m) CHECK(long(expand_kernel(n, m).size()) == expected_term_count(n, m));
}

TEST_CASE("no self-scattering factors") {
    for (int n = 0; n <= 6; ++n)
        for (int m = 0; n + m <= 6; ++m)
            for (auto& t : expand_kernel(n, m)) {
                CHECK_FALSE(has_self_scattering(t));
                CHECK_FALSE(has_self_scattering(normalize(t)));
            }
}

TEST_CASE("reduction equals expansion") {
    auto r10 = reduce_via_axiom_v(1, 0);
    REQUIRE(r10.size() == 1);
    CHECK(r10[0].p == 0);
    CHECK(r10[0].ff_args.size() == 1);
    CHECK(r10[0].ff_args[0].str() == "a1+ipi");
    CHECK(same_term_multiset(reduce_via_axiom_v(1, 1), expand_kernel(1, 1)));
    CHECK(reduce_via_axiom_v(2, 2).size() == 7);
    CHECK(same_term_multiset(reduce_via_axiom_v(2, 2), expand_kernel(2, 2)));
    for (int n = 1; n <= 6; ++n)
        for (int m = 0; n + m <= 6; ++m) CHECK(same_term_multiset(reduce_via_axiom_v(n, m), expand_kernel(n, m)));
    CHECK_THROWS_AS(reduce_via_axiom_v(0, 2), NumericsError);
    CHECK_THROWS_AS(expand_kernel(5, 4), NumericsError);
}

TEST_CASE("dump format") {
    auto t = normalize(expand_kernel(1, 1)[1]);
    CHECK(t.to_line() == "1; k=[1]; i=[1]; S=[]; ff=[]");
    auto t0 = normalize(expand_kernel(1, 1)[0]);
    CHECK(t0.to_line() == "0; k=[]; i=[]; S=[]; ff=[a1+ipi,b1]");
}

TEST_CASE("smooth parts") {
    PotentialFamily pf(ModelParams::from_b(0.25));
    auto id = identity_model();
    cplx a2[] = {0.3, 0.8};
    auto c02 = evaluate_kernel_smooth_part(expand_kernel(0, 2), id, {}, a2, pf);
    REQUIRE(c02.size() == 1);
    CHECK(std::abs(c02[0].coeff) == 0.0);
    cplx a[] = {0.5}, b[] = {0.2};  // a = b would put the unpaired term on its kinematic pole
    auto c11 = evaluate_kernel_smooth_part(expand_kernel(1, 1), id, a, b, pf);
    REQUIRE(c11.size() == 2);
    for (auto& pc : c11)
        if (pc.delta_pairs.size() == 1) CHECK(std::abs(pc.coeff - 1.0) < 1e-15);
    auto two = load_model_file(SGFF_MODELS_DIR "/two_particle.json", pf);
    cplx x[] = {0.3}, y[] = {0.9};
    auto c = evaluate_kernel_smooth_part(expand_kernel(1, 1), two, x, y, pf);
    cplx args[] = {x[0] + kI * kPi, y[0]};
    for (auto& pc : c)
        if (pc.delta_pairs.empty()) CHECK(std::abs(pc.coeff - form_factor(two, args, pf).value) < 1e-8);
}
