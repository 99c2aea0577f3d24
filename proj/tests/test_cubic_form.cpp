#include "mori/classifier.hpp"
#include "mori/cubic_form.hpp"
#include "mori/mfs_model.hpp"
#include "mori/sampling.hpp"

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

IntVector random_vector(Rng& rng, std::size_t n, Int b)
{
    std::uniform_int_distribution<Int> e(-b, b);
    IntVector v(n);
    for (auto& x : v)
        x = e(rng);
    return v;
}

} // namespace

TEST_SUITE("cubic_form") {

TEST_CASE("P2 x P1 and P(O+O+O(-1)) cubic values")
{
    const auto prod = wall_jupp_triple(twisted(9, 0));
    const IntVector x{1, 0}, y{0, 1};
    CHECK(prod.cubic.evaluate(x, x, y) == 1);
    CHECK(prod.cubic.evaluate(x, x, x) == 0);
    CHECK(prod.cubic.evaluate(x, y, y) == 0);
    CHECK(prod.cubic.evaluate(y, y, y) == 0);
    const auto other = wall_jupp_triple(twisted(9, 1));
    CHECK(other.cubic.evaluate(x, x, x) == 1);
    CHECK(other.cubic.evaluate(x, x, y) == 1);
}

TEST_CASE("evaluation is symmetric and multilinear")
{
    Rng rng(41);
    for (int k = 0; k < 200; ++k) {
        auto m = random_model(rng, 5);
        while (std::holds_alternative<FanoRankOne>(m))
            m = random_model(rng, 5);
        const auto t = wall_jupp_triple(m);
        const std::size_t n = t.rank();
        const auto a = random_vector(rng, n, 4), a2 = random_vector(rng, n, 4), b = random_vector(rng, n, 4),
                   c = random_vector(rng, n, 4);
        CHECK(t.cubic.evaluate(add(a, a2), b, c) == t.cubic.evaluate(a, b, c) + t.cubic.evaluate(a2, b, c));
        CHECK(t.cubic.evaluate(a, b, c) == t.cubic.evaluate(b, a, c));
        CHECK(t.cubic.evaluate(a, b, c) == t.cubic.evaluate(c, b, a));
    }
    CubicForm f(2);
    CHECK_THROWS(f.evaluate(IntVector{1}, IntVector{1, 0}, IntVector{1, 0}));
}

TEST_CASE("pullback is evaluation on images")
{
    Rng rng(43);
    for (int k = 0; k < 50; ++k) {
        const auto t = wall_jupp_triple(random_smooth_bundle(rng, 3));
        const auto p = random_unimodular(rng, t.rank(), 5);
        const CubicForm pb = t.cubic.pullback(p);
        const auto a = random_vector(rng, t.rank(), 3), b = random_vector(rng, t.rank(), 3);
        CHECK(pb.evaluate(a, a, b) == t.cubic.evaluate(p * a, p * a, p * b));
    }
}

TEST_CASE("transport check")
{
    Rng rng(47);
    SUBCASE("identity")
    {
        for (int k = 0; k < 30; ++k) {
            const auto t = wall_jupp_triple(random_singular_bundle(rng, 4));
            CHECK(triple_transport_check(IntMatrix::identity(t.rank()), t, t));
        }
    }
    SUBCASE("negation flips an odd cubic")
    {
        const auto t = wall_jupp_triple(twisted(9, 1));
        CHECK_FALSE(triple_transport_check(-IntMatrix::identity(2), t, t));
    }
    SUBCASE("non-unimodular maps are rejected")
    {
        const auto t = wall_jupp_triple(twisted(9, 1));
        CHECK_THROWS(triple_transport_check(IntMatrix{{2, 0}, {0, 1}}, t, t));
    }
    SUBCASE("b3 must agree")
    {
        auto t = wall_jupp_triple(twisted(9, 1));
        auto t2 = t;
        t2.b3 = 2;
        CHECK_FALSE(triple_transport_check(IntMatrix::identity(2), t, t2));
    }
}

TEST_CASE("constructed isomorphism for matched smooth bundles")
{
    SUBCASE("same invariants, isometric bases")
    {
        Rng rng(53);
        std::size_t checked = 0;
        for (int k = 0; k < 60; ++k) {
            const auto a = random_smooth_bundle(rng, 4, false);
            auto b = a;
            // shifting c1E by 2w and c2E by c1E.w + w^2 keeps c1^2 - 4 c2
            const auto& L = a.surface.lattice;
            IntVector w(L.rank(), 0);
            w[k % w.size()] = 1;
            b.c1E = add(a.c1E, scale(2, w));
            b.c2E = a.c2E + L.pair(a.c1E, w) + L.norm(w);
            REQUIRE(invariants_smooth(a) == invariants_smooth(b));
            const auto phi = smooth_bundle_isomorphism(a, b);
            REQUIRE(phi.has_value());
            CHECK(triple_transport_check(*phi, wall_jupp_triple(a), wall_jupp_triple(b)));
            ++checked;
        }
        CHECK(checked == 60);
    }
    SUBCASE("anti-isometric branch over P1 x P1")
    {
        const SmoothConicBundle a{standard_surface("P1xP1"), {0, 0}, 1};
        const SmoothConicBundle b{standard_surface("P1xP1"), {0, 0}, -1};
        const auto v = compare(invariants_smooth(a), invariants_smooth(b));
        REQUIRE(v.outcome == Outcome::Diffeomorphic);
        REQUIRE(v.branch == Branch::APrime);
        const auto phi = smooth_bundle_isomorphism(a, b);
        REQUIRE(phi.has_value());
        CHECK(triple_transport_check(*phi, wall_jupp_triple(a), wall_jupp_triple(b)));
    }
}

TEST_CASE("bounded equivalence search")
{
    SUBCASE("equal triples give the identity first")
    {
        const auto t = wall_jupp_triple(twisted(8, -2));
        const auto r = equivalent_bounded(t, t, 2);
        REQUIRE(r.status == Equivalence::Found);
        CHECK(*r.phi == IntMatrix::identity(2));
    }
    SUBCASE("x^3 mod 3 separates P2 x P1 from P(O+O+O(-1))")
    {
        const auto r = equivalent_bounded(wall_jupp_triple(twisted(9, 0)), wall_jupp_triple(twisted(9, 1)), 3);
        CHECK(r.status == Equivalence::ProvablyDistinct);
        CHECK(r.witness.find("mod-3") != std::string::npos);
    }
    SUBCASE("quadric bundles c=-1 and c=-2 differ in b3")
    {
        const auto r = equivalent_bounded(wall_jupp_triple(twisted(8, -1)), wall_jupp_triple(twisted(8, -2)), 3);
        CHECK(r.status == Equivalence::ProvablyDistinct);
        CHECK(r.witness == "b3");
    }
    SUBCASE("twists 1 and -2 of the P2-bundle are equivalent")
    {
        const auto a = wall_jupp_triple(twisted(9, 1)), b = wall_jupp_triple(twisted(9, -2));
        const auto r = equivalent_bounded(a, b, 3);
        REQUIRE(r.status == Equivalence::Found);
        CHECK(triple_transport_check(*r.phi, a, b));
    }
    SUBCASE("tiny budget is inconclusive, not distinct")
    {
        const auto a = wall_jupp_triple(twisted(9, 1)), b = wall_jupp_triple(twisted(9, 4));
        const auto r = equivalent_bounded(a, b, 3, 1);
        CHECK(r.status != Equivalence::ProvablyDistinct);
    }
}

TEST_CASE("swapping arguments never turns a hit into a distinctness certificate")
{
    Rng rng(59);
    for (int k = 0; k < 40; ++k) {
        const auto a = wall_jupp_triple(random_smooth_bundle(rng, 2, false));
        const auto b = wall_jupp_triple(random_smooth_bundle(rng, 2, false));
        if (a.rank() != b.rank())
            continue;
        const auto ab = equivalent_bounded(a, b, 2), ba = equivalent_bounded(b, a, 2);
        if (ab.status == Equivalence::Found)
            CHECK(ba.status != Equivalence::ProvablyDistinct);
        if (ba.status == Equivalence::Found)
            CHECK(ab.status != Equivalence::ProvablyDistinct);
    }
}

TEST_CASE("fingerprints are invariant under basis change")
{
    Rng rng(61);
    for (int k = 0; k < 30; ++k) {
        const auto t = wall_jupp_triple(random_singular_bundle(rng, 3, false));
        const auto p = random_unimodular(rng, t.rank(), 6);
        WallJuppTriple moved;
        moved.cubic = t.cubic.pullback(p);
        moved.p1_pairing = p.transpose() * t.p1_pairing;
        moved.w2 = reduce_mod2(p.unimodular_inverse() * lift(t.w2));
        moved.b3 = t.b3;
        CHECK(triple_transport_check(p, moved, t));
        CHECK(fingerprint_mismatch(fingerprint(t), fingerprint(moved)).empty());
    }
}

}
