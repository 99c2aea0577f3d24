#include "mori/verify.hpp"

#include "mori/classifier.hpp"
#include "mori/sampling.hpp"

#include <map>
#include <numeric>
#include <sstream>

namespace mori {

std::optional<VerifySuite> parse_verify_suite(std::string_view s)
{
    if (s == "lattice")
        return VerifySuite::Lattice;
    if (s == "cubic")
        return VerifySuite::Cubic;
    if (s == "classifier")
        return VerifySuite::Classifier;
    if (s == "all")
        return VerifySuite::All;
    return std::nullopt;
}

namespace {

class Checks {
public:
    Checks(std::vector<CheckResult>& out, std::string suite) : out_(out), suite_(std::move(suite)) {}

    void add(std::string name, bool ok, std::string detail = {})
    {
        out_.push_back({suite_, std::move(name), ok, std::move(detail)});
    }

private:
    std::vector<CheckResult>& out_;
    std::string suite_;
};

DelPezzoFibration dp(int K, Int twist)
{
    DelPezzoFibration m;
    m.K = K;
    m.twist = twist;
    return m;
}

std::size_t count_ones(const Mod2Class& x, std::size_t from)
{
    std::size_t n = 0;
    for (std::size_t i = from; i < x.bits.size(); ++i)
        n += x.bits[i];
    return n;
}

void lattice_suite(std::vector<CheckResult>& out, Rng& rng)
{
    Checks c(out, "lattice");

    {
        std::size_t tried = 0, bad = 0;
        const Int norms[] = {-2, 2, -1, 1};
        for (int round = 0; round < 60; ++round) {
            const BilinearLattice L = random_surface(rng, 6).lattice;
            const auto roots = bounded_roots(L, 1, norms);
            for (std::size_t k = 0; k < 5 && !roots.empty(); ++k) {
                const auto& u = roots[std::uniform_int_distribution<std::size_t>(0, roots.size() - 1)(rng)];
                const IsometryMap s = reflection(L, u);
                ++tried;
                if (!is_isometry(L, s) || !(s.matrix * s.matrix == IntMatrix::identity(L.rank())))
                    ++bad;
            }
        }
        c.add("reflections are isometric involutions", bad == 0 && tried > 0,
              std::to_string(tried) + " reflections, " + std::to_string(bad) + " failures");
    }

    {
        const BilinearLattice L = BilinearLattice::diagonal(1, 3);
        bool ok = true;
        for (std::uint32_t bits = 1; bits < 16; ++bits) {
            Mod2Class x;
            for (int i = 0; i < 4; ++i)
                x.bits.push_back((bits >> i) & 1);
            const Int a = alpha_mod4(L, x);
            for (int k = 0; k < 10; ++k) {
                IntVector v = lift(x);
                for (auto& e : v)
                    e += 2 * std::uniform_int_distribution<Int>(-3, 3)(rng);
                ok = ok && mod_floor(L.norm(v), 4) == a;
            }
        }
        c.add("alpha mod 4 is lift independent", ok, "diag(1,3), 15 classes x 10 lifts");
    }

    {
        // explicit reflections that lower the number of odd negative coordinates
        const BilinearLattice L5 = BilinearLattice::diagonal(1, 5);
        const IntVector x1{1, 1, 0, 0, 0, 0}, u1{1, 0, 1, 1, 1, 0};
        const Mod2Class i1 = reduce_mod2(reflect(L5, u1, x1));
        c.add("mod-2 step (1;1,0,...) -> (0;1,1,1,1,0,...)", i1 == reduce_mod2(IntVector{0, 1, 1, 1, 1, 0}),
              i1.to_string());

        const IntVector x2{1, 1, 1, 1, 0, 0}, u2{1, 1, 1, 0, 1, 0};
        const Mod2Class i2 = reduce_mod2(reflect(L5, u2, x2));
        c.add("mod-2 step (1;l ones) -> (0;l-1 ones)", i2.bits[0] == 0 && count_ones(i2, 1) == 2, i2.to_string());

        const BilinearLattice L6 = BilinearLattice::diagonal(1, 6);
        const IntVector x3{0, 1, 1, 1, 1, 1, 0}, u3{2, 1, 1, 1, 1, 1, 1};
        const Mod2Class i3 = reduce_mod2(reflect(L6, u3, x3));
        c.add("mod-2 step (0;l ones) -> (0;l-4 ones)", i3.bits[0] == 0 && count_ones(i3, 1) == 1, i3.to_string());
    }

    {
        bool ok = true;
        std::ostringstream why;
        auto expect_found = [&](const BilinearLattice& L, IntVector v, IntVector w) {
            const auto r = wall_isometry(L, v, w);
            const bool hit = r.status == SearchStatus::Found && r.map && (*r.map)(v) == w && is_isometry(L, *r.map);
            if (!hit)
                why << L.label() << ' ' << vector_to_string(v) << "->" << vector_to_string(w) << ' '
                    << to_string(r.status) << "; ";
            ok = ok && hit;
        };
        expect_found(BilinearLattice::hyperbolic(), {1, 0}, {0, 1});
        expect_found(BilinearLattice::diagonal(1, 1), {1, 1}, {1, -1});
        expect_found(BilinearLattice::diagonal(1, 3), {2, 1, 1, 1}, {2, -1, 1, 1});
        expect_found(BilinearLattice::diagonal(1, 5), {3, 2, 0, 0, 0, 0}, {3, 0, 0, 2, 0, 0});
        c.add("wall isometry on sample pairs", ok, why.str());
    }

    {
        std::size_t tried = 0, found = 0, bad = 0;
        for (std::size_t q = 3; q <= 6; ++q) {
            const BilinearLattice L = BilinearLattice::diagonal(1, q);
            for (int k = 0; k < 6; ++k) {
                IntVector v(q + 1), w(q + 1);
                for (auto& e : v)
                    e = std::uniform_int_distribution<Int>(-2, 2)(rng);
                for (auto& e : w)
                    e = std::uniform_int_distribution<Int>(-2, 2)(rng);
                if (is_zero(v) || is_zero(w) || divisibility(v) != 1 || divisibility(w) != 1 ||
                    mod_floor(L.norm(v) - L.norm(w), 4) != 0 || vector_type(L, v) != vector_type(L, w))
                    continue;
                ++tried;
                const auto r = mod2_isometry(L, v, w);
                if (r.status != SearchStatus::Found)
                    continue;
                ++found;
                const IntVector d = add((*r.map)(v), scale(-1, w));
                if (!is_isometry(L, *r.map) || std::any_of(d.begin(), d.end(), [](Int x) { return x % 2 != 0; }))
                    ++bad;
            }
        }
        c.add("mod-2 isometries hit the target class", bad == 0 && found == tried,
              std::to_string(found) + "/" + std::to_string(tried) + " found, " + std::to_string(bad) + " wrong");
    }

    for (std::size_t q = 1; q <= 4; ++q) {
        const BilinearLattice L = BilinearLattice::diagonal(1, q);
        std::map<std::pair<Int, int>, std::vector<IntVector>> classes;
        IntVector v(q + 1, -3);
        for (;;) {
            if (!is_zero(v) && divisibility(v) == 1)
                classes[{L.norm(v), static_cast<int>(vector_type(L, v))}].push_back(v);
            std::size_t k = v.size();
            while (k > 0 && v[k - 1] == 3)
                v[--k] = -3;
            if (k == 0)
                break;
            ++v[k - 1];
        }
        bool ok = true;
        std::string why;
        OrbitOptions opts;
        opts.coord_bound = 3;
        opts.generator_bound = 1;
        opts.working_bound = 5;
        for (const auto& [key, members] : classes) {
            auto orbit = orbit_enumerate(L, members.front(), opts);
            if (orbit != members) {
                ok = false;
                why += "norm " + std::to_string(key.first) + ": orbit " + std::to_string(orbit.size()) + " of " +
                       std::to_string(members.size()) + "; ";
            }
        }
        c.add("orbits partition the box by (norm, type) on diag(1," + std::to_string(q) + ")", ok,
              ok ? std::to_string(classes.size()) + " classes" : why);
    }
}

void cubic_suite(std::vector<CheckResult>& out, Rng& rng)
{
    Checks c(out, "cubic");

    {
        bool ok = true;
        for (int k = 0; k < 50; ++k) {
            const auto m = random_smooth_bundle(rng, 3);
            const auto t = wall_jupp_triple(m);
            ok = ok && triple_transport_check(IntMatrix::identity(t.rank()), t, t);
        }
        c.add("identity transports every triple", ok);
    }

    {
        const auto t = wall_jupp_triple(dp(9, 1));
        c.add("negation breaks an odd cubic", !triple_transport_check(-IntMatrix::identity(2), t, t));
    }

    {
        bool ok = true;
        auto draw = [&](std::size_t n) {
            IntVector v(n);
            for (auto& e : v)
                e = std::uniform_int_distribution<Int>(-5, 5)(rng);
            return v;
        };
        for (int k = 0; k < 100; ++k) {
            const auto t = wall_jupp_triple(random_singular_bundle(rng, 4));
            const std::size_t n = t.rank();
            const IntVector a = draw(n), a2 = draw(n), b = draw(n), cc = draw(n);
            ok = ok && t.cubic.evaluate(add(a, a2), b, cc) == t.cubic.evaluate(a, b, cc) + t.cubic.evaluate(a2, b, cc);
            ok = ok && t.cubic.evaluate(a, b, cc) == t.cubic.evaluate(cc, a, b);
        }
        c.add("cubic evaluation is symmetric and multilinear", ok);
    }

    {
        const auto r = equivalent_bounded(wall_jupp_triple(dp(9, 0)), wall_jupp_triple(dp(9, 1)), 3);
        c.add("P2 x P1 and P(O+O+O(-1)) are provably distinct", r.status == Equivalence::ProvablyDistinct,
              r.witness);
        const auto q = equivalent_bounded(wall_jupp_triple(dp(8, -1)), wall_jupp_triple(dp(8, -2)), 3);
        c.add("quadric bundles c=-1, c=-2 are provably distinct", q.status == Equivalence::ProvablyDistinct,
              q.witness);
        const auto s = equivalent_bounded(wall_jupp_triple(dp(9, 1)), wall_jupp_triple(dp(9, -2)), 3);
        c.add("K=9 twists 1 and -2 have equivalent triples", s.status == Equivalence::Found);
    }

    {
        std::size_t pairs = 0, bad = 0;
        for (int k = 0; k < 40; ++k) {
            const auto a = random_smooth_bundle(rng, 3, false);
            // negating c1E keeps every invariant (E vs its dual)
            auto b = a;
            for (auto& e : b.c1E)
                e = -e;
            if (!(invariants_smooth(a) == invariants_smooth(b)))
                continue;
            ++pairs;
            const auto phi = smooth_bundle_isomorphism(a, b);
            if (!phi || !triple_transport_check(*phi, wall_jupp_triple(a), wall_jupp_triple(b)))
                ++bad;
        }
        c.add("constructed bundle isomorphisms transport triples", bad == 0 && pairs > 0,
              std::to_string(pairs) + " pairs, " + std::to_string(bad) + " failures");
    }
}

void classifier_suite(std::vector<CheckResult>& out, Rng& rng)
{
    Checks c(out, "classifier");

    {
        std::size_t bad = 0, models = 0;
        for (int k = 0; k < 2000; ++k) {
            const auto m = random_model(rng, 6);
            if (std::holds_alternative<FanoRankOne>(m))
                continue;
            ++models;
            if (hrr_defect(m) != 0)
                ++bad;
        }
        c.add("c1^3 - c1 p1 = 48 chi on random models", bad == 0,
              std::to_string(models) + " models, " + std::to_string(bad) + " failures");
    }

    std::vector<InvariantRecord> pool;
    for (int k = 0; k < 80; ++k)
        pool.push_back(invariants(random_model(rng, 6)));
    for (const auto& m : canonical_models())
        pool.push_back(invariants(m.description));

    {
        bool refl = true, sym = true;
        for (const auto& a : pool) {
            const auto v = compare(a, a);
            const bool exceptional = a.kind == FibrationKind::Singular && a.chi == 1 && a.b2 >= 10;
            refl = refl && (v.outcome == Outcome::Diffeomorphic || (exceptional && v.outcome == Outcome::UndeterminedFinite));
            for (const auto& b : pool)
                sym = sym && compare(a, b).outcome == compare(b, a).outcome;
        }
        c.add("compare is reflexive", refl);
        c.add("compare is symmetric", sym);
    }

    {
        const auto& r = canonical_records();
        c.add("P2 x P1 over P1 and over P2 agree", compare(r.p2xp1_dim1, r.p2xp1_dim2).outcome == Outcome::Diffeomorphic);
        c.add("the b3 = 40 Fano over P1 and over P2 agree",
              compare(r.fano_x_dim1, r.fano_x_dim2).outcome == Outcome::Diffeomorphic);
        c.add("P2 x P1 differs from the b3 = 40 Fano",
              compare(r.p2xp1_dim1, r.fano_x_dim2).outcome == Outcome::NotDiffeomorphic);
    }

    {
        bool ok = true;
        for (Int t = -6; t <= 6; ++t)
            for (Int s = -6; s <= 6; ++s) {
                const auto v = compare(invariants(dp(9, t)), invariants(dp(9, s)));
                const bool same = mod_floor(t, 3) == 0 ? mod_floor(s, 3) == 0 : mod_floor(s, 3) != 0;
                ok = ok && (v.outcome == Outcome::Diffeomorphic) == same;
            }
        c.add("K = 9 verdict depends only on twist mod 3 = 0", ok);
    }

    {
        bool ok = true;
        for (Int t = -5; t <= -1; ++t)
            for (Int s = -5; s <= -1; ++s)
                ok = ok && (compare(invariants(dp(8, t)), invariants(dp(8, s))).outcome == Outcome::Diffeomorphic) ==
                               (t == s);
        c.add("K = 8 twist is a complete invariant", ok);
    }

    {
        bool ok = true;
        for (const auto& a : pool) {
            if (a.base_dim != 1 || *a.K == 2 || *a.K == 9)
                continue;
            for (const auto& b : pool)
                if (b.base_dim == 2)
                    ok = ok && compare(a, b).outcome == Outcome::NotDiffeomorphic;
        }
        c.add("cross rule rejects K outside {2, 9}", ok);
    }

    {
        std::vector<SmoothConicBundle> models;
        for (const char* y : {"P2", "P1xP1"})
            for (Int a = -1; a <= 1; ++a)
                for (Int c2 = -1; c2 <= 1; ++c2) {
                    SurfaceData s = standard_surface(y);
                    IntVector c1(s.lattice.rank(), 0);
                    c1[0] = a;
                    models.push_back({s, c1, c2});
                }
        std::size_t pairs = 0, bad = 0;
        for (std::size_t i = 0; i < models.size(); ++i)
            for (std::size_t j = i; j < models.size(); ++j) {
                const auto ra = invariants_smooth(models[i]), rb = invariants_smooth(models[j]);
                if (ra.b2 != rb.b2)
                    continue;
                ++pairs;
                const auto v = compare(ra, rb);
                const auto o = equivalent_bounded(wall_jupp_triple(models[i]), wall_jupp_triple(models[j]), 2);
                if (v.outcome == Outcome::Diffeomorphic && o.status == Equivalence::ProvablyDistinct)
                    ++bad;
                if (v.outcome == Outcome::NotDiffeomorphic && o.status == Equivalence::Found)
                    ++bad;
            }
        c.add("verdicts agree with the bounded triple oracle", bad == 0,
              std::to_string(pairs) + " pairs, " + std::to_string(bad) + " contradictions");
    }
}

} // namespace

std::vector<CheckResult> run_verify(VerifySuite suite, std::uint64_t seed)
{
    std::vector<CheckResult> out;
    Rng rng(seed);
    if (suite == VerifySuite::Lattice || suite == VerifySuite::All)
        lattice_suite(out, rng);
    if (suite == VerifySuite::Cubic || suite == VerifySuite::All)
        cubic_suite(out, rng);
    if (suite == VerifySuite::Classifier || suite == VerifySuite::All)
        classifier_suite(out, rng);
    return out;
}

} // namespace mori
