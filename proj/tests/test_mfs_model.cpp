#include "mori/mfs_model.hpp"
#include "mori/sampling.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace mori;

namespace {

DelPezzoFibration twisted(int K, Int c)
{
    DelPezzoFibration m;
    m.K = K;
    m.twist = c;
    return m;
}

DelPezzoFibration free_dp(int K, Int d, Int relK3, Int eX)
{
    DelPezzoFibration m;
    m.K = K;
    m.d = d;
    m.relK3 = relK3;
    m.eX = eX;
    return m;
}

std::string violated(const auto& fn)
{
    try {
        fn();
    } catch (const ModelError& e) {
        return e.invariant();
    }
    return "";
}

} // namespace

TEST_SUITE("mfs_model") {

TEST_CASE("surface validation")
{
    CHECK(validate_surface(standard_surface("P2")) == 1);
    CHECK(validate_surface(standard_surface("P1xP1")) == 1);
    CHECK(validate_surface(standard_surface("blowup-8")) == 1);
    const auto k3 = standard_surface("K3");
    CHECK(k3.lattice.rank() == 22);
    CHECK(k3.lattice.signature() == -16);
    CHECK(validate_surface(k3) == 2);

    SurfaceData bad = standard_surface("P2");
    bad.eY = 2;
    CHECK(violated([&] { validate_surface(bad); }) == "Euler characteristic");
    bad = standard_surface("P2");
    bad.c1Y = {2};
    CHECK(violated([&] { validate_surface(bad); }) == "Wu relation");
    bad.c1Y = {1};
    CHECK(violated([&] { validate_surface(bad); }) == "Noether");
    // diag(1,-1) with c1 = (1,1): c1^2 + e = 4, not a multiple of 12
    CHECK(violated([&] { validate_surface({BilinearLattice::diagonal(1, 1), {1, 1}, 4}); }) == "Noether");
    // H + (-E8) with c1 = 0
    const SurfaceData he8{BilinearLattice::direct_sum(BilinearLattice::hyperbolic(), BilinearLattice::e8(true)),
                          IntVector(10, 0), 12};
    CHECK(validate_surface(he8) == 1);
    // diag(3,1) with c1 = (3,3,3;3): c1^2 = 18 = 3e, equality away from P2
    CHECK(violated([&] { validate_surface({BilinearLattice::diagonal(3, 1), {3, 3, 3, 3}, 6}); }) == "Miyaoka-Yau");
}

TEST_CASE("smooth conic bundles")
{
    SUBCASE("P2 x P1")
    {
        const auto r = invariants_smooth({standard_surface("P2"), {0}, 0});
        CHECK(r.e == 6);
        CHECK(r.b3 == 0);
        CHECK(r.b2 == 2);
        CHECK(r.chi == 1);
        CHECK(r.K3 == -54);
        CHECK(r.w2_type == W2Type::III0);
    }
    SUBCASE("odd c1E changes the w2 branch")
    {
        const auto r = invariants_smooth({standard_surface("P2"), {1}, 0});
        CHECK((r.w2_type == W2Type::I || r.w2_type == W2Type::III1));
        CHECK(r.w2_type == W2Type::I);
    }
    SUBCASE("K3 with tangent data")
    {
        const auto y = standard_surface("K3");
        const auto r = invariants_smooth({y, y.c1Y, y.eY});
        CHECK(r.e == 48);
        CHECK(r.chi == 2);
        // expanded directly from -K = 2 xi + c1(S) - c1(E)
        const Int cube = oracle::projective_bundle_anticanonical_cube(oracle::gram_of(y.lattice.gram()), y.c1Y,
                                                                        y.c1Y, y.eY);
        CHECK(cube == -192);
        CHECK(*r.K3 == -cube);
    }
    SUBCASE("K3 agrees with the projective-bundle expansion on random inputs")
    {
        Rng rng(67);
        for (int k = 0; k < 300; ++k) {
            const auto m = random_smooth_bundle(rng, 7);
            const auto r = invariants_smooth(m);
            const auto g = oracle::gram_of(m.surface.lattice.gram());
            CHECK(*r.K3 == -oracle::projective_bundle_anticanonical_cube(g, m.surface.c1Y, m.c1E, m.c2E));
            CHECK(r.e == 2 * m.surface.eY);
        }
    }
}

TEST_CASE("singular conic bundles")
{
    SUBCASE("the b3 = 40 Fano over P2")
    {
        const SingularConicBundle m{standard_surface("P2"), {-8}, -8};
        const auto r = invariants_singular(m);
        CHECK(r.b3 == 40);
        CHECK(r.e == -34);
        CHECK(r.chi == 1);
        CHECK(r.K3 == -6);
        CHECK(-*r.K3 == oracle::singular_anticanonical_cube({{1}}, {3}, {-8}, -8));
        CHECK(r.cf_divisibility == 8);
        CHECK(r.cf_type == VectorType::Characteristic);
        CHECK(r.cf_norm == 64);
        CHECK(r.w2_type == W2Type::III1);
    }
    SUBCASE("negative b3 is rejected")
    {
        CHECK(violated([] { invariants_singular({standard_surface("P2"), {-2}, 0}); }) == "b3");
    }
    SUBCASE("odd discriminant norm and empty discriminant are rejected")
    {
        CHECK(violated([] { invariants_singular({standard_surface("P2"), {3}, 0}); }) == "u^3 integrality");
        CHECK(violated([] { invariants_singular({standard_surface("P2"), {0}, 0}); }) == "nonempty discriminant");
    }
    SUBCASE("random inputs: cube, Euler relation, c2 round trip, w2 branch")
    {
        Rng rng(71);
        for (int k = 0; k < 300; ++k) {
            const auto m = random_singular_bundle(rng, 7);
            const auto r = invariants_singular(m);
            const auto g = oracle::gram_of(m.surface.lattice.gram());
            CHECK(-*r.K3 == oracle::singular_anticanonical_cube(g, m.surface.c1Y, m.c1rel, m.c2rel));
            CHECK(r.e + r.b3 == 2 * m.surface.eY);
            CHECK(recover_c2rel(r) == m.c2rel);
            CHECK((r.w2_type == W2Type::II || r.w2_type == W2Type::III1));
        }
    }
}

TEST_CASE("del Pezzo fibrations")
{
    SUBCASE("quadric bundle c = -1")
    {
        const auto r = invariants_delpezzo(twisted(8, -1));
        CHECK(r.b3 == 0);
        CHECK(r.relK3 == 8);
        CHECK(r.K3 == -40);
    }
    SUBCASE("quadric bundles follow b3 = -2c - 2, relK3 = -8c")
    {
        for (Int c = -1; c >= -8; --c) {
            const auto r = invariants_delpezzo(twisted(8, c));
            CHECK(r.b3 == -2 * c - 2);
            CHECK(r.relK3 == -8 * c);
            CHECK(*r.d * (*r.relK3 - *r.K3) == 6 * 8);
        }
    }
    SUBCASE("P2 x P1 over the line")
    {
        const auto r = invariants_delpezzo(twisted(9, 0));
        CHECK(r.K3 == -54);
        CHECK(r.relK3 == 0);
        CHECK(r.e == 6);
        CHECK(r.x3_mod3_zero == true);
        // (-K)^3 of a product: 3 (-K_P2)^2 (-K_P1) = 3 * 9 * 2
        CHECK(-*r.K3 == 3 * 9 * 2);
    }
    SUBCASE("the b3 = 40 Fano over the line")
    {
        const auto r = invariants_delpezzo(free_dp(2, 1, 6, -34));
        CHECK(r.K3 == -6);
        CHECK(r.b3 == 40);
        CHECK(r.b2 == 2);
    }
    SUBCASE("illegal inputs")
    {
        CHECK(violated([] { invariants_delpezzo(free_dp(7, 1, 0, 6)); }) == "K value set");
        CHECK(violated([] { invariants_delpezzo(free_dp(5, 2, 0, 6)); }) == "fiber divisibility");
        CHECK(violated([] { invariants_delpezzo(free_dp(6, 4, 0, 6)); }) == "fiber divisibility");
        CHECK(violated([] { invariants_delpezzo(twisted(8, 0)); }) == "quadric twist");
        CHECK(violated([] { invariants_delpezzo(free_dp(3, 1, 0, 7)); }) == "b3");
        CHECK(violated([] {
                  DelPezzoFibration m;
                  m.K = 4;
                  invariants_delpezzo(m);
              }) == "required fields");
    }
    SUBCASE("d (relK3 - K3) = 6K")
    {
        Rng rng(73);
        for (int k = 0; k < 300; ++k) {
            const auto r = invariants_delpezzo(random_delpezzo(rng));
            CHECK(*r.d * (*r.relK3 - *r.K3) == 6 * *r.K);
        }
    }
}

TEST_CASE("rank one Fano records")
{
    const auto r = invariants_fano({5, 4});
    CHECK(r.b2 == 1);
    CHECK(r.b3 == 0);
    CHECK(r.degree == 5);
    CHECK(violated([] { invariants_fano({5, 5}); }) == "b3");
    CHECK(violated([] { invariants_fano({0, 4}); }) == "degree");
    CHECK_THROWS_AS(wall_jupp_triple(FanoRankOne{5, 4}), ModelError);
}

TEST_CASE("records satisfy the Betti bookkeeping and HRR")
{
    Rng rng(79);
    for (int k = 0; k < 2000; ++k) {
        const auto m = random_model(rng, 7);
        const auto r = invariants(m);
        CHECK(r.e == 2 + 2 * r.b2 - r.b3);
        CHECK(r.b3 % 2 == 0);
        CHECK(r.b3 >= 0);
        CHECK_NOTHROW(validate_record(r));
        if (std::holds_alternative<FanoRankOne>(m))
            continue;
        // <c1^3> - <c1 p1> = 48 chi, assembled here from the triple
        const auto t = wall_jupp_triple(m);
        const auto c1 = first_chern_class(m);
        CHECK(t.cubic.cube(c1) - dot(c1, t.p1_pairing) == 48 * r.chi);
        CHECK(-t.cubic.cube(c1) == *r.K3);
        CHECK(reduce_mod2(c1) == t.w2);
    }
}

TEST_CASE("feasibility")
{
    InvariantRecord diamond;
    diamond.base_dim = 2;
    diamond.kind = FibrationKind::Smooth;
    diamond.chi = 2;
    diamond.b2 = 4;
    diamond.b3 = 0;
    diamond.e = 10;
    const auto f = hodge_feasibility(diamond);
    CHECK_FALSE(f.feasible);
    CHECK_FALSE(f.violations.empty());

    const auto p = hodge_feasibility(invariants_smooth({standard_surface("P2"), {0}, 0}));
    CHECK(p.feasible);
    CHECK(p.equality);

    const auto y = standard_surface("K3");
    const auto k = hodge_feasibility(invariants_smooth({y, y.c1Y, y.eY}));
    CHECK(k.feasible);
    CHECK(k.prime_branches_excluded);

    // equality away from b2 = 2 is not allowed
    InvariantRecord s = diamond;
    s.kind = FibrationKind::Singular;
    s.chi = 2;
    s.b2 = 5;
    s.b3 = 0;
    s.e = 12;
    CHECK_FALSE(hodge_feasibility(s).feasible);

    // the b3 = 40 Fano over P2 sits on the boundary too
    const auto x = hodge_feasibility(invariants_singular({standard_surface("P2"), {-8}, -8}));
    CHECK(x.feasible);
    CHECK(x.equality);
}

}
