#include "mori/classifier.hpp"
#include "mori/sampling.hpp"

#include <doctest.h>

using namespace mori;

namespace {

InvariantRecord twisted(int K, Int c)
{
    DelPezzoFibration m;
    m.K = K;
    m.twist = c;
    return invariants(m);
}

InvariantRecord free_dp(int K, Int d, Int relK3, Int eX)
{
    DelPezzoFibration m;
    m.K = K;
    m.d = d;
    m.relK3 = relK3;
    m.eX = eX;
    return invariants(m);
}

// P2 blown up in 10 points with the discriminant class (4;2,0,...) placed on exceptional curve `slot`
InvariantRecord exceptional_singular(std::size_t slot)
{
    const auto y = standard_surface("blowup-10");
    IntVector c1(11, 0);
    c1[0] = 4;
    c1[slot] = 2;
    return invariants(SingularConicBundle{y, c1, 0});
}

} // namespace

TEST_SUITE("classifier") {

TEST_CASE("rank one Fanos compare by degree and Euler number")
{
    CHECK(compare(invariants(FanoRankOne{5, 4}), invariants(FanoRankOne{5, 4})).outcome == Outcome::Diffeomorphic);
    CHECK(compare(invariants(FanoRankOne{5, 4}), invariants(FanoRankOne{4, 4})).outcome == Outcome::NotDiffeomorphic);
    CHECK(compare(invariants(FanoRankOne{5, 4}), invariants(FanoRankOne{5, 2})).outcome == Outcome::NotDiffeomorphic);
    const auto v = compare(invariants(FanoRankOne{5, 4}), twisted(9, 0));
    CHECK(v.outcome == Outcome::NotDiffeomorphic);
    CHECK(v.branch == Branch::Cross);
}

TEST_CASE("quadric bundles")
{
    const auto v = compare(twisted(8, -1), twisted(8, -2));
    CHECK(v.outcome == Outcome::NotDiffeomorphic);
    CHECK(v.branch == Branch::KCase);
    for (Int a = -5; a <= -1; ++a)
        for (Int b = -5; b <= -1; ++b)
            CHECK((compare(twisted(8, a), twisted(8, b)).outcome == Outcome::Diffeomorphic) == (a == b));
}

TEST_CASE("P2-bundles over the line compare by x^3 mod 3")
{
    CHECK(compare(twisted(9, 0), twisted(9, -1)).outcome == Outcome::NotDiffeomorphic);
    CHECK(compare(twisted(9, 1), twisted(9, -2)).outcome == Outcome::Diffeomorphic);
    CHECK(compare(twisted(9, 0), twisted(9, 3)).outcome == Outcome::Diffeomorphic);
    for (Int t = -6; t <= 6; ++t)
        for (Int s = -6; s <= 6; ++s) {
            const auto base = compare(twisted(9, t), twisted(9, s)).outcome;
            CHECK(compare(twisted(9, t + 3), twisted(9, s)).outcome == base);
            CHECK(compare(twisted(9, t), twisted(9, s - 3)).outcome == base);
        }
}

TEST_CASE("del Pezzo fibrations with K <= 6")
{
    CHECK(compare(free_dp(3, 1, 10, -10), free_dp(3, 1, 10, -10)).outcome == Outcome::Diffeomorphic);
    CHECK(compare(free_dp(3, 1, 10, -10), free_dp(3, 1, -10, -10)).outcome == Outcome::Diffeomorphic); // d = 1: sign
    CHECK(compare(free_dp(3, 1, 10, -10), free_dp(3, 1, 12, -10)).outcome == Outcome::NotDiffeomorphic);
    CHECK(compare(free_dp(3, 1, 10, -10), free_dp(3, 1, 10, -12)).outcome == Outcome::NotDiffeomorphic);
    CHECK(compare(free_dp(3, 1, 10, -10), free_dp(4, 1, 10, -10)).outcome == Outcome::NotDiffeomorphic);
    // d = 2, K = 6: relK3 <-> -relK3 - 12 (d-1) K/d = -relK3 - 36
    CHECK(compare(free_dp(6, 2, 10, -4), free_dp(6, 2, -46, -4)).outcome == Outcome::Diffeomorphic);
    CHECK(compare(free_dp(6, 2, 10, -4), free_dp(6, 2, -10, -4)).outcome == Outcome::NotDiffeomorphic);
    CHECK(compare(free_dp(6, 2, 10, -4), free_dp(6, 3, 10, -4)).outcome == Outcome::NotDiffeomorphic);
}

TEST_CASE("smooth conic bundles")
{
    const auto p1p1 = standard_surface("P1xP1");
    SUBCASE("(A)")
    {
        const auto a = invariants(SmoothConicBundle{p1p1, {0, 0}, 1});
        const auto b = invariants(SmoothConicBundle{p1p1, {2, 0}, 1});
        const auto v = compare(a, b);
        CHECK(v.outcome == Outcome::Diffeomorphic);
        CHECK(v.branch == Branch::A);
    }
    SUBCASE("(A')")
    {
        const auto a = invariants(SmoothConicBundle{p1p1, {0, 0}, 1});
        const auto b = invariants(SmoothConicBundle{p1p1, {0, 0}, -1});
        const auto v = compare(a, b);
        CHECK(v.outcome == Outcome::Diffeomorphic);
        CHECK(v.branch == Branch::APrime);
    }
    SUBCASE("(A') identities with e + b3 >= 12 chi are suppressed")
    {
        // hand-built records meeting both identities with e = 12 chi
        InvariantRecord a = invariants(SmoothConicBundle{standard_surface("P2"), {0}, 0});
        InvariantRecord b = a;
        a.chi = 1;
        b.chi = 2;
        a.e = b.e = 12;
        a.b2 = b.b2 = 5;
        a.K3 = -100;
        b.K3 = -44;
        CHECK(compare(a, b).outcome == Outcome::NotDiffeomorphic);
    }
    SUBCASE("different w2 types")
    {
        const auto a = invariants(SmoothConicBundle{standard_surface("P2"), {0}, 0});
        const auto b = invariants(SmoothConicBundle{standard_surface("P2"), {1}, 0});
        CHECK(compare(a, b).outcome == Outcome::NotDiffeomorphic);
    }
    SUBCASE("spin and non-spin bases of equal rank")
    {
        const auto a = invariants(SmoothConicBundle{p1p1, {0, 0}, 0});
        const auto b = invariants(SmoothConicBundle{standard_surface("blowup-1"), {0, 0}, 0});
        CHECK(compare(a, b).outcome == Outcome::NotDiffeomorphic); // w2 types differ
    }
}

TEST_CASE("smooth vs singular")
{
    const auto a = invariants(SmoothConicBundle{standard_surface("P2"), {0}, 0});
    const auto b = canonical_records().fano_x_dim2;
    CHECK(compare(a, b).outcome == Outcome::NotDiffeomorphic);
}

TEST_CASE("singular conic bundles")
{
    SUBCASE("(B) on the b3 = 40 Fano")
    {
        const auto& x = canonical_records().fano_x_dim2;
        const auto v = compare(x, x);
        CHECK(v.outcome == Outcome::Diffeomorphic);
        CHECK(v.branch == Branch::B);
    }
    SUBCASE("discriminant class data must agree")
    {
        const auto y = standard_surface("P1xP1");
        const auto a = invariants(SingularConicBundle{y, {2, 2}, 0});
        const auto b = invariants(SingularConicBundle{y, {4, 0}, 0});
        CHECK(compare(a, b).outcome == Outcome::NotDiffeomorphic);
    }
    SUBCASE("exceptional range")
    {
        const auto a = exceptional_singular(1), b = exceptional_singular(2);
        REQUIRE(a.chi == 1);
        REQUIRE(a.b2 == 12);
        const auto v = compare(a, b);
        CHECK(v.outcome == Outcome::UndeterminedFinite);
        CHECK(v.branch == Branch::B);
        bool noted = false;
        for (const auto& r : v.reasons)
            noted = noted || r.find("b2 <= 10") != std::string::npos;
        CHECK(noted);
    }
    SUBCASE("below the exceptional range the same data is decided")
    {
        const auto y = standard_surface("blowup-3");
        const auto a = invariants(SingularConicBundle{y, {4, 2, 0, 0}, 0});
        const auto b = invariants(SingularConicBundle{y, {4, 0, 2, 0}, 0});
        const auto v = compare(a, b);
        CHECK(v.outcome == Outcome::Diffeomorphic);
        CHECK(v.branch == Branch::B);
    }
}

TEST_CASE("cross-dimension rule")
{
    const auto& c = canonical_records();
    CHECK(c.fano_x_dim2.cf_divisibility == 8);
    CHECK(c.fano_x_dim1.b3 == 40);
    CHECK(c.fano_x_dim2.b3 == 40);
    CHECK(c.p2xp1_dim1.e == 6);
    CHECK(c.p2xp1_dim2.e == 6);
    CHECK(c.p2xp1_dim1.K3 == -54);
    CHECK(c.p2xp1_dim2.K3 == -54);

    auto v = compare(c.p2xp1_dim1, c.p2xp1_dim2);
    CHECK(v.outcome == Outcome::Diffeomorphic);
    CHECK(v.branch == Branch::Cross);
    v = compare(c.fano_x_dim2, c.fano_x_dim1);
    CHECK(v.outcome == Outcome::Diffeomorphic);
    CHECK(v.branch == Branch::Cross);
    CHECK(compare(c.p2xp1_dim1, c.fano_x_dim2).outcome == Outcome::NotDiffeomorphic);
    CHECK(compare(c.fano_x_dim1, c.p2xp1_dim2).outcome == Outcome::NotDiffeomorphic);
    // P2 x P1 over the line is any twist divisible by 3
    CHECK(compare(twisted(9, 6), c.p2xp1_dim2).outcome == Outcome::Diffeomorphic);
    CHECK(compare(twisted(9, 1), c.p2xp1_dim2).outcome == Outcome::NotDiffeomorphic);
}

TEST_CASE("properties on random records")
{
    Rng rng(83);
    std::vector<InvariantRecord> pool;
    for (int k = 0; k < 150; ++k)
        pool.push_back(invariants(random_model(rng, 6)));
    for (const auto& a : pool) {
        const auto self = compare(a, a);
        const bool exceptional = a.kind == FibrationKind::Singular && a.chi == 1 && a.b2 >= 10;
        CHECK(self.outcome == (exceptional ? Outcome::UndeterminedFinite : Outcome::Diffeomorphic));
        CHECK_FALSE(self.reasons.empty());
        for (const auto& b : pool) {
            const auto v = compare(a, b);
            CHECK(v.outcome == compare(b, a).outcome);
            CHECK_FALSE(v.reasons.empty());
            if (v.branch == Branch::APrime || v.branch == Branch::BPrime) {
                CHECK(a.b2 % 2 == 1);
                CHECK(a.e + a.b3 < 12 * a.chi);
            }
            if (a.base_dim == 1 && *a.K != 2 && *a.K != 9 && b.base_dim == 2)
                CHECK(v.outcome == Outcome::NotDiffeomorphic);
            if (v.outcome == Outcome::UndeterminedFinite)
                CHECK((a.kind == FibrationKind::Singular && (a.chi == 1 || b.chi == 1)));
        }
    }
}

TEST_CASE("invalid records are rejected")
{
    InvariantRecord r = twisted(8, -1);
    r.e = 99;
    CHECK_THROWS_AS(compare(r, r), ModelError);
}

TEST_CASE("census")
{
    SUBCASE("quadric bundles: twist is a complete invariant")
    {
        CensusBounds b;
        b.ranges["K"] = {8, 8};
        b.ranges["twist"] = {-5, -1};
        CHECK(census(CensusFamily::DelPezzo, b).size() == 5);
    }
    SUBCASE("P2-bundles: two classes")
    {
        CensusBounds b;
        b.ranges["K"] = {9, 9};
        b.ranges["twist"] = {-3, 3};
        const auto classes = census(CensusFamily::DelPezzo, b);
        REQUIRE(classes.size() == 2);
        CHECK(classes[0].count + classes[1].count == 7);
    }
    SUBCASE("rank one: degree separates")
    {
        CensusBounds b;
        b.ranges["degree"] = {1, 5};
        b.ranges["eX"] = {4, 4};
        CHECK(census(CensusFamily::Fano, b).size() == 5);
    }
    SUBCASE("missing bounds are refused")
    {
        CensusBounds b;
        b.ranges["K"] = {8, 8};
        CHECK_THROWS_AS(census(CensusFamily::DelPezzo, b), CensusError);
        CensusBounds c;
        c.ranges["c1E"] = {-1, 1};
        c.ranges["c2E"] = {0, 0};
        CHECK_THROWS_AS(census(CensusFamily::SmoothConic, c), CensusError); // no surfaces
    }
    SUBCASE("conic bundles over P2 and P1 x P1")
    {
        CensusBounds b;
        b.ranges["c1E"] = {-1, 1};
        b.ranges["c2E"] = {-2, 2};
        b.surfaces = {"P2", "P1xP1"};
        const auto classes = census(CensusFamily::SmoothConic, b);
        std::size_t total = 0;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            total += classes[i].count;
            for (std::size_t j = i + 1; j < classes.size(); ++j)
                CHECK(compare(classes[i].representative, classes[j].representative).outcome !=
                      Outcome::Diffeomorphic);
        }
        CHECK(total == 3 * 5 + 9 * 5);
    }
    SUBCASE("output is deterministic")
    {
        CensusBounds b;
        b.ranges["K"] = {1, 6};
        b.ranges["relK3"] = {-4, 4};
        b.ranges["eX"] = {-2, 6};
        const auto x = census(CensusFamily::DelPezzo, b), y = census(CensusFamily::DelPezzo, b);
        REQUIRE(x.size() == y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x[i].representative == y[i].representative);
            CHECK(x[i].count == y[i].count);
        }
    }
}

}
