#include "mori/mfs_model.hpp"

#include <charconv>

namespace mori {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Int exact_div(Int a, Int b, const char* what)
{
    if (b == 0 || a % b != 0)
        throw ModelError("integrality", std::string(what) + " is not an integer");
    return a / b;
}

void require_length(const SurfaceData& s, const IntVector& v, const char* name)
{
    if (v.size() != s.lattice.rank())
        throw ModelError(std::string(name) + " length",
                         std::string(name) + " has " + std::to_string(v.size()) + " entries, lattice rank is " +
                             std::to_string(s.lattice.rank()));
}

W2Type classify_w2(bool base_spin, bool total_spin, bool difference_zero)
{
    if (base_spin)
        return total_spin ? W2Type::Zero : W2Type::II;
    if (total_spin)
        return W2Type::I;
    return difference_zero ? W2Type::III0 : W2Type::III1;
}

struct DelPezzoData {
    Int x3 = 0;       // <x^3>
    Int x2y = 0;      // <x^2 y>
    IntVector c1;     // in the basis {x, y}
    IntVector p1;     // pairing on {x, y}
    Int b3 = 0;
    Int relK3 = 0;
    Int eX = 0;
};

DelPezzoData delpezzo_data(const DelPezzoFibration& m)
{
    const int K = m.K;
    if (K < 1 || K > 9 || K == 7)
        throw ModelError("K value set", "K must lie in {1,...,6,8,9}, got " + std::to_string(K));
    if (K == 6) {
        if (m.d != 1 && m.d != 2 && m.d != 3 && m.d != 6)
            throw ModelError("fiber divisibility", "d must be 1, 2, 3 or 6 when K = 6");
    } else if (m.d != 1) {
        throw ModelError("fiber divisibility", "d must be 1 unless K = 6");
    }

    DelPezzoData r;
    if (K <= 6) {
        if (m.twist)
            throw ModelError("twist", "twist is only meaningful for K = 8 or 9");
        if (!m.relK3 || !m.eX)
            throw ModelError("required fields", "relK3 and eX are required when K <= 6");
        r.relK3 = *m.relK3;
        r.eX = *m.eX;
        r.b3 = 6 - r.eX;
        r.x2y = K / m.d;
        r.x3 = checked_add(6 * K / m.d, -r.relK3);
        r.c1 = {1, 0};
        r.p1 = {r.x3 - 48, exact_div(3 * (K - 8), m.d, "3(K-8)/d")};
    } else {
        if (!m.twist)
            throw ModelError("required fields", "twist is required when K = 8 or 9");
        const Int c = *m.twist;
        if (K == 8) {
            if (c > -1)
                throw ModelError("quadric twist", "K = 8 needs twist <= -1, got " + std::to_string(c));
            r.x3 = checked_mul(-2, c);
            r.x2y = 2;
            r.c1 = {2, checked_add(c, 2)};
            r.p1 = {checked_mul(4, c), 0};
            r.b3 = checked_add(checked_mul(-2, c), -2);
            r.relK3 = checked_mul(-8, c);
        } else {
            r.x3 = c;
            r.x2y = 1;
            r.c1 = {3, checked_add(2, -c)};
            r.p1 = {c, 3};
            r.b3 = 0;
            r.relK3 = 0;
        }
        r.eX = 6 - r.b3;
        if (m.eX && *m.eX != r.eX)
            throw ModelError("Euler characteristic", "eX is determined by the twist (" + std::to_string(r.eX) + ")");
        if (m.relK3 && *m.relK3 != r.relK3)
            throw ModelError("relative K3", "relK3 is determined by the twist (" + std::to_string(r.relK3) + ")");
    }
    if (r.b3 < 0 || r.b3 % 2 != 0)
        throw ModelError("b3", "b3 = 6 - eX must be a nonnegative even integer, got " + std::to_string(r.b3));
    return r;
}

struct SingularData {
    Int chi = 0;
    Int norm = 0;       // <c1rel^2>
    Int c1_dot_c1Y = 0;
    Int u3 = 0;
    Int c1X3 = 0;
    Int b3 = 0;
    Int eX = 0;
    Int p = 0;          // <p, [Y]> with p1(X) = p + 3u^2
};

SingularData singular_data(const SingularConicBundle& m)
{
    const auto& s = m.surface;
    SingularData r;
    r.chi = validate_surface(s);
    require_length(s, m.c1rel, "c1rel");
    if (is_zero(m.c1rel))
        throw ModelError("nonempty discriminant", "c1rel must be nonzero");
    const BilinearLattice& L = s.lattice;
    r.norm = L.norm(m.c1rel);
    if (r.norm % 2 != 0)
        throw ModelError("u^3 integrality", "c1rel must have even norm, got " + std::to_string(r.norm));
    r.c1_dot_c1Y = L.pair(m.c1rel, s.c1Y);
    r.u3 = checked_add(r.norm / 2, m.c2rel);
    const Int c1Y2 = L.norm(s.c1Y);
    r.c1X3 = checked_add(checked_add(r.u3, checked_mul(3, r.c1_dot_c1Y)), checked_mul(6, c1Y2));
    // discriminant curve: b3 = [C]^2 - <c1(Y), [C]> with [C] = -c1rel
    r.b3 = checked_add(r.norm, r.c1_dot_c1Y);
    if (r.b3 < 0 || r.b3 % 2 != 0)
        throw ModelError("b3", "b3 = " + std::to_string(r.b3) + " must be a nonnegative even integer");
    r.eX = checked_add(checked_mul(2, s.eY), -r.b3);
    const Int twice_p = 168 * r.chi - 2 * r.c1X3 - 9 * r.eX - 3 * r.b3 - 6 * r.norm;
    r.p = exact_div(twice_p, 2, "the Pontrjagin base term");
    return r;
}

Int smooth_P(const SmoothConicBundle& m)
{
    const auto& L = m.surface.lattice;
    return L.norm(m.c1E) - 4 * m.c2E + L.norm(m.surface.c1Y) - 2 * m.surface.eY;
}

} // namespace

int base_dimension(const MfsDescription& m)
{
    return std::visit(overloaded{[](const FanoRankOne&) { return 0; }, [](const DelPezzoFibration&) { return 1; },
                                 [](const auto&) { return 2; }},
                      m);
}

const char* to_string(FibrationKind k)
{
    switch (k) {
    case FibrationKind::Smooth: return "smooth";
    case FibrationKind::Singular: return "singular";
    case FibrationKind::None: return "n/a";
    }
    return "?";
}

const char* to_string(W2Type t)
{
    switch (t) {
    case W2Type::Zero: return "0";
    case W2Type::I: return "I";
    case W2Type::II: return "II";
    case W2Type::III0: return "III0";
    case W2Type::III1: return "III1";
    }
    return "?";
}

std::optional<FibrationKind> parse_fibration_kind(std::string_view s)
{
    if (s == "smooth")
        return FibrationKind::Smooth;
    if (s == "singular")
        return FibrationKind::Singular;
    if (s == "n/a")
        return FibrationKind::None;
    return std::nullopt;
}

std::optional<W2Type> parse_w2_type(std::string_view s)
{
    for (auto t : {W2Type::Zero, W2Type::I, W2Type::II, W2Type::III0, W2Type::III1})
        if (s == to_string(t))
            return t;
    return std::nullopt;
}

Int validate_surface(const SurfaceData& s)
{
    const BilinearLattice& L = s.lattice;
    require_length(s, s.c1Y, "c1Y");
    if (s.eY != 2 + static_cast<Int>(L.rank()))
        throw ModelError("Euler characteristic", "eY must equal 2 + rank = " + std::to_string(2 + L.rank()));
    if (!is_characteristic_class(L, s.c1Y))
        throw ModelError("Wu relation", "c1Y is not characteristic");
    const Int c1sq = L.norm(s.c1Y);
    if (mod_floor(c1sq + s.eY, 12) != 0)
        throw ModelError("Noether", "c1Y^2 + eY = " + std::to_string(c1sq + s.eY) + " is not divisible by 12");
    const Int chi = (c1sq + s.eY) / 12;
    if (L.signature() != 4 * chi - s.eY)
        throw ModelError("signature", "signature " + std::to_string(L.signature()) + " differs from 4 chi - eY = " +
                                          std::to_string(4 * chi - s.eY));
    if (3 * s.eY < c1sq)
        throw ModelError("Miyaoka-Yau", "3 eY < c1Y^2");
    if (3 * s.eY == c1sq && !(L.rank() == 1 && L.gram()(0, 0) == 1 && c1sq == 9))
        throw ModelError("Miyaoka-Yau", "equality 3 eY = c1Y^2 only holds for the projective plane");
    return chi;
}

InvariantRecord invariants_smooth(const SmoothConicBundle& m)
{
    const auto& s = m.surface;
    const Int chi = validate_surface(s);
    require_length(s, m.c1E, "c1E");
    InvariantRecord r;
    r.base_dim = 2;
    r.kind = FibrationKind::Smooth;
    r.b2 = static_cast<Int>(s.lattice.rank()) + 1;
    r.b3 = 0;
    r.e = 2 * s.eY;
    r.chi = chi;
    r.K3 = -(48 * chi + 2 * smooth_P(m));
    const Mod2Class a = reduce_mod2(s.c1Y), b = reduce_mod2(m.c1E);
    r.w2_type = classify_w2(a.is_zero(), reduce_mod2(add(s.c1Y, m.c1E)).is_zero(), b.is_zero());
    return r;
}

InvariantRecord invariants_singular(const SingularConicBundle& m)
{
    const SingularData d = singular_data(m);
    const auto& L = m.surface.lattice;
    InvariantRecord r;
    r.base_dim = 2;
    r.kind = FibrationKind::Singular;
    r.b2 = static_cast<Int>(L.rank()) + 1;
    r.b3 = d.b3;
    r.e = d.eX;
    r.chi = d.chi;
    r.K3 = -d.c1X3;
    // c1(X) = u + c1(Y) has nonzero u-part, so X is never spin
    r.w2_type = L.parity() == Parity::Even ? W2Type::II : W2Type::III1;
    r.cf_divisibility = divisibility(m.c1rel);
    r.cf_norm = d.norm;
    r.cf_type = vector_type(L, m.c1rel);
    return r;
}

InvariantRecord invariants_delpezzo(const DelPezzoFibration& m)
{
    const DelPezzoData d = delpezzo_data(m);
    InvariantRecord r;
    r.base_dim = 1;
    r.kind = FibrationKind::None;
    r.b2 = 2;
    r.b3 = d.b3;
    r.e = d.eX;
    r.chi = 1;
    r.relK3 = d.relK3;
    r.K3 = d.relK3 - 6 * m.K / m.d;
    r.K = m.K;
    r.d = m.d;
    r.w2_type = reduce_mod2(d.c1).is_zero() ? W2Type::Zero : W2Type::II;
    if (m.K == 9)
        r.x3_mod3_zero = mod_floor(*m.twist, 3) == 0;
    return r;
}

InvariantRecord invariants_fano(const FanoRankOne& m)
{
    if (m.degree <= 0)
        throw ModelError("degree", "degree must be positive");
    const Int b3 = 4 - m.eX;
    if (b3 < 0 || b3 % 2 != 0)
        throw ModelError("b3", "b3 = 4 - eX must be a nonnegative even integer, got " + std::to_string(b3));
    InvariantRecord r;
    r.base_dim = 0;
    r.kind = FibrationKind::None;
    r.b2 = 1;
    r.b3 = b3;
    r.e = m.eX;
    r.chi = 1;
    r.degree = m.degree;
    return r;
}

InvariantRecord invariants(const MfsDescription& m)
{
    return std::visit(overloaded{[](const FanoRankOne& x) { return invariants_fano(x); },
                                 [](const DelPezzoFibration& x) { return invariants_delpezzo(x); },
                                 [](const SmoothConicBundle& x) { return invariants_smooth(x); },
                                 [](const SingularConicBundle& x) { return invariants_singular(x); }},
                      m);
}

void validate_record(const InvariantRecord& r)
{
    if (r.base_dim < 0 || r.base_dim > 2)
        throw ModelError("base_dim", "base dimension must be 0, 1 or 2");
    if (r.b3 < 0 || r.b3 % 2 != 0)
        throw ModelError("b3", "b3 must be a nonnegative even integer");
    if (r.e != 2 + 2 * r.b2 - r.b3)
        throw ModelError("Betti bookkeeping", "e must equal 2 + 2 b2 - b3");
    switch (r.base_dim) {
    case 0:
        if (!r.degree || r.b2 != 1)
            throw ModelError("required fields", "rank-one records need a degree and b2 = 1");
        break;
    case 1:
        if (!r.K || !r.d || !r.relK3 || !r.K3 || r.b2 != 2)
            throw ModelError("required fields", "del Pezzo records need K, d, relK3, K3 and b2 = 2");
        if (*r.K < 1 || *r.K > 9 || *r.K == 7)
            throw ModelError("K value set", "K must lie in {1,...,6,8,9}");
        if (*r.d * (*r.relK3 - *r.K3) != 6 * *r.K)
            throw ModelError("relative degree", "d (relK3 - K3) must equal 6K");
        if ((*r.K == 9) != r.x3_mod3_zero.has_value())
            throw ModelError("required fields", "x3_mod3 is present exactly when K = 9");
        break;
    case 2:
        if (!r.K3 || !r.w2_type || r.kind == FibrationKind::None)
            throw ModelError("required fields", "conic bundle records need K3, w2_type and kind");
        if (r.kind == FibrationKind::Singular && (!r.cf_divisibility || !r.cf_norm || !r.cf_type))
            throw ModelError("required fields", "singular records need the discriminant class data");
        if (r.kind == FibrationKind::Smooth && r.b3 != 0)
            throw ModelError("b3", "smooth conic bundles have b3 = 0");
        break;
    }
}

WallJuppTriple wall_jupp_triple(const MfsDescription& desc)
{
    return std::visit(
        overloaded{
            [](const FanoRankOne&) -> WallJuppTriple {
                throw ModelError("triple", "rank-one records carry no Pontrjagin or w2 data");
            },
            [](const DelPezzoFibration& m) {
                const DelPezzoData d = delpezzo_data(m);
                WallJuppTriple t;
                t.cubic = CubicForm(2);
                t.cubic.set(0, 0, 0, d.x3);
                t.cubic.set(0, 0, 1, d.x2y);
                t.p1_pairing = d.p1;
                t.w2 = reduce_mod2(d.c1);
                t.b3 = d.b3;
                return t;
            },
            [](const SmoothConicBundle& m) {
                validate_surface(m.surface);
                require_length(m.surface, m.c1E, "c1E");
                const auto& L = m.surface.lattice;
                const std::size_t r = L.rank();
                const IntVector gc = L.gram_times(m.c1E);
                WallJuppTriple t;
                t.cubic = CubicForm(r + 1);
                // <u . y_i . y_j> = -G_ij since u restricts to degree -1 on fibers
                t.cubic.set(0, 0, 0, m.c2E - L.norm(m.c1E));
                for (std::size_t i = 0; i < r; ++i) {
                    t.cubic.set(0, 0, i + 1, -gc[i]);
                    for (std::size_t j = i; j < r; ++j)
                        t.cubic.set(0, i + 1, j + 1, -L.gram()(i, j));
                }
                t.p1_pairing.assign(r + 1, 0);
                t.p1_pairing[0] = -smooth_P(m);
                t.w2 = reduce_mod2(first_chern_class(m));
                t.b3 = 0;
                return t;
            },
            [](const SingularConicBundle& m) {
                const SingularData d = singular_data(m);
                const auto& L = m.surface.lattice;
                const std::size_t r = L.rank();
                const IntVector gc = L.gram_times(m.c1rel);
                WallJuppTriple t;
                t.cubic = CubicForm(r + 1);
                t.cubic.set(0, 0, 0, d.u3);
                for (std::size_t i = 0; i < r; ++i) {
                    t.cubic.set(0, 0, i + 1, gc[i]);
                    for (std::size_t j = i; j < r; ++j)
                        t.cubic.set(0, i + 1, j + 1, 2 * L.gram()(i, j));
                }
                t.p1_pairing.assign(r + 1, 0);
                t.p1_pairing[0] = 2 * d.p + 3 * d.u3;
                for (std::size_t i = 0; i < r; ++i)
                    t.p1_pairing[i + 1] = 3 * gc[i];
                t.w2 = reduce_mod2(first_chern_class(m));
                t.b3 = d.b3;
                return t;
            }},
        desc);
}

IntVector first_chern_class(const MfsDescription& desc)
{
    return std::visit(overloaded{[](const FanoRankOne&) -> IntVector {
                                     throw ModelError("triple", "rank-one records carry no c1 data");
                                 },
                                 [](const DelPezzoFibration& m) { return delpezzo_data(m).c1; },
                                 [](const SmoothConicBundle& m) {
                                     IntVector c{-2};
                                     const IntVector rest = add(m.surface.c1Y, m.c1E);
                                     c.insert(c.end(), rest.begin(), rest.end());
                                     return c;
                                 },
                                 [](const SingularConicBundle& m) {
                                     IntVector c{1};
                                     c.insert(c.end(), m.surface.c1Y.begin(), m.surface.c1Y.end());
                                     return c;
                                 }},
                      desc);
}

Int holomorphic_euler(const MfsDescription& desc)
{
    return std::visit(overloaded{[](const SmoothConicBundle& m) { return validate_surface(m.surface); },
                                 [](const SingularConicBundle& m) { return validate_surface(m.surface); },
                                 [](const auto&) -> Int { return 1; }},
                      desc);
}

Int hrr_defect(const MfsDescription& m)
{
    const WallJuppTriple t = wall_jupp_triple(m);
    const IntVector c1 = first_chern_class(m);
    return t.cubic.cube(c1) - dot(c1, t.p1_pairing) - 48 * holomorphic_euler(m);
}

FeasibilityReport hodge_feasibility(const InvariantRecord& r)
{
    FeasibilityReport rep;
    if (r.b3 < 0 || r.b3 % 2 != 0) {
        rep.feasible = false;
        rep.violations.push_back("b3 must be a nonnegative even integer");
    }
    if (r.e != 2 + 2 * r.b2 - r.b3) {
        rep.feasible = false;
        rep.violations.push_back("e must equal 2 + 2 b2 - b3");
    }
    if (r.base_dim != 2)
        return rep;
    const Int lhs = r.e + r.b3;
    if (lhs < 6 * r.chi) {
        rep.feasible = false;
        rep.violations.push_back("e + b3 = " + std::to_string(lhs) + " < 6 chi = " + std::to_string(6 * r.chi));
    } else if (lhs == 6 * r.chi) {
        rep.equality = true;
        // e + b3 = 2 e(Y) and c1(Y)^2 <= 3 e(Y): equality forces Y = P2, with or without discriminant
        if (r.b2 != 2) {
            rep.feasible = false;
            rep.violations.push_back("e + b3 = 6 chi requires b2 = 2");
        }
    }
    rep.prime_branches_excluded = r.b2 % 2 == 0 || lhs >= 12 * r.chi;
    return rep;
}

Int recover_c2rel(const InvariantRecord& r)
{
    if (r.kind != FibrationKind::Singular || !r.K3 || !r.cf_norm)
        throw ModelError("required fields", "c2rel recovery needs a singular conic bundle record");
    // <c2> = <c1(X)^3> + 3 e - 72 chi + (5/2) [C]^2
    return -*r.K3 + 3 * r.e - 72 * r.chi + exact_div(5 * *r.cf_norm, 2, "5/2 [C]^2");
}

namespace {

// psi with psi^T G' psi = sign G, entries bounded; first hit in column-lex order.
std::optional<IntMatrix> find_lattice_map(const BilinearLattice& L, const BilinearLattice& Lp, int sign, Int bound)
{
    const std::size_t r = L.rank();
    if (Lp.rank() != r)
        return std::nullopt;
    if (sign == 1 && L.gram() == Lp.gram())
        return IntMatrix::identity(r);
    if (r > 4)
        return std::nullopt;
    std::vector<IntVector> box;
    IntVector c(r, -bound);
    for (;;) {
        box.push_back(c);
        std::size_t k = r;
        while (k > 0 && c[k - 1] == bound)
            c[--k] = -bound;
        if (k == 0)
            break;
        ++c[k - 1];
    }
    std::vector<const IntVector*> chosen(r);
    std::optional<IntMatrix> out;
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == r) {
            IntMatrix m(r, r);
            for (std::size_t k = 0; k < r; ++k)
                m.set_column(k, *chosen[k]);
            out = m;
            return;
        }
        for (const auto& v : box) {
            if (Lp.norm(v) != sign * L.gram()(j, j))
                continue;
            bool ok = true;
            for (std::size_t k = 0; k < j && ok; ++k)
                ok = Lp.pair(*chosen[k], v) == sign * L.gram()(k, j);
            if (!ok)
                continue;
            chosen[j] = &v;
            self(self, j + 1);
            if (out)
                return;
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace

std::optional<IntMatrix> smooth_bundle_isomorphism(const SmoothConicBundle& a, const SmoothConicBundle& b,
                                                   const SearchOptions& opts)
{
    const InvariantRecord ra = invariants_smooth(a), rb = invariants_smooth(b);
    if (ra.w2_type != rb.w2_type || ra.e != rb.e)
        return std::nullopt;
    int sign = 0;
    if (ra.chi == rb.chi && ra.K3 == rb.K3)
        sign = 1;
    else if (4 * (ra.chi + rb.chi) == ra.e && *ra.K3 + *rb.K3 == -12 * ra.e)
        sign = -1;
    else
        return std::nullopt;

    const BilinearLattice& L = a.surface.lattice;
    const BilinearLattice& Lp = b.surface.lattice;
    auto psi0 = find_lattice_map(L, Lp, sign, 2);
    if (!psi0)
        return std::nullopt;
    IntMatrix psi = *psi0;

    const Mod2Class have = reduce_mod2(psi * a.c1E), want = reduce_mod2(b.c1E);
    if (!(have == want)) {
        if (have.is_zero() || want.is_zero())
            return std::nullopt;
        auto g = mod2_isometry(Lp, lift(have), lift(want), opts);
        if (g.status != SearchStatus::Found)
            return std::nullopt;
        psi = g.map->matrix * psi;
    }

    // u -> sign u' + v with 2v = psi(c1E) - sign c1E', so that x = 2u - c1E maps to sign x'
    const std::size_t r = L.rank();
    const IntVector diff = add(psi * a.c1E, scale(-sign, b.c1E));
    IntMatrix phi(r + 1, r + 1);
    phi(0, 0) = sign;
    for (std::size_t i = 0; i < r; ++i) {
        phi(i + 1, 0) = diff[i] / 2;
        for (std::size_t j = 0; j < r; ++j)
            phi(i + 1, j + 1) = psi(i, j);
    }
    if (!triple_transport_check(phi, wall_jupp_triple(a), wall_jupp_triple(b)))
        return std::nullopt;
    return phi;
}

SurfaceData standard_surface(std::string_view name)
{
    if (name == "P2")
        return {BilinearLattice(IntMatrix{{1}}, "diag(1,0)"), {3}, 3};
    if (name == "P1xP1")
        return {BilinearLattice::hyperbolic(), {2, 2}, 4};
    if (name == "K3") {
        auto L = BilinearLattice::hyperbolic();
        L = BilinearLattice::direct_sum(L, BilinearLattice::hyperbolic());
        L = BilinearLattice::direct_sum(L, BilinearLattice::hyperbolic());
        L = BilinearLattice::direct_sum(L, BilinearLattice::e8(true));
        L = BilinearLattice::direct_sum(L, BilinearLattice::e8(true));
        return {L, IntVector(22, 0), 24};
    }
    if (name.rfind("blowup-", 0) == 0) {
        const auto digits = name.substr(7);
        std::size_t n = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || n == 0)
            throw ModelError("surface name", "bad blow-up count in '" + std::string(name) + "'");
        IntVector c1(n + 1, 1);
        c1[0] = 3;
        return {BilinearLattice::diagonal(1, n), c1, static_cast<Int>(3 + n)};
    }
    throw ModelError("surface name", "unknown surface '" + std::string(name) + "'");
}

} // namespace mori
