#include "mori/sampling.hpp"

namespace mori {

namespace {

Int uniform(Rng& rng, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

} // namespace

IntMatrix random_unimodular(Rng& rng, std::size_t n, int steps)
{
    IntMatrix p = IntMatrix::identity(n);
    if (n < 2)
        return uniform(rng, 0, 1) ? p : -p;
    for (int s = 0; s < steps; ++s) {
        const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<Int>(n) - 1));
        auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<Int>(n) - 2));
        if (j >= i)
            ++j;
        const Int k = uniform(rng, 0, 1) ? 1 : -1;
        // column i += k column j
        for (std::size_t r = 0; r < n; ++r)
            p(r, i) = checked_add(p(r, i), checked_mul(k, p(r, j)));
    }
    return p;
}

SurfaceData change_basis(const SurfaceData& s, const IntMatrix& p)
{
    const IntMatrix g = p.transpose() * s.lattice.gram() * p;
    const IntMatrix inv = p.unimodular_inverse();
    return {BilinearLattice(g), inv * s.c1Y, s.eY};
}

SurfaceData random_surface(Rng& rng, std::size_t max_rank, bool scramble)
{
    SurfaceData s = standard_surface("P2");
    for (;;) {
        const Int pick = uniform(rng, 0, 9);
        if (pick == 0) {
            s = standard_surface("P2");
        } else if (pick == 1 && max_rank >= 2) {
            s = standard_surface("P1xP1");
        } else if (pick == 2 && max_rank >= 10) {
            // H + (-E8), c1 = 0: chi = 1, sign = -8
            s = {BilinearLattice::direct_sum(BilinearLattice::hyperbolic(), BilinearLattice::e8(true)),
                 IntVector(10, 0), 12};
        } else if (pick == 3 && max_rank >= 4) {
            // diag(3, q) with chi = 2 and c1^2 = 19 - q
            const std::size_t q = static_cast<std::size_t>(uniform(rng, 1, static_cast<Int>(std::min<std::size_t>(max_rank, 8) - 3)));
            IntVector c(3 + q, 1);
            c[0] = 3;
            c[1] = 3;
            for (auto& x : c)
                if (uniform(rng, 0, 1))
                    x = -x;
            s = {BilinearLattice::diagonal(3, q), c, static_cast<Int>(5 + q)};
        } else if (pick >= 4 && max_rank >= 2) {
            const Int n = uniform(rng, 1, std::min<Int>(static_cast<Int>(max_rank) - 1, 9));
            s = standard_surface("blowup-" + std::to_string(n));
            // other characteristic classes of the same norm: flip signs of the exceptional part
            for (std::size_t i = 1; i < s.c1Y.size(); ++i)
                if (uniform(rng, 0, 1))
                    s.c1Y[i] = -s.c1Y[i];
        } else {
            continue;
        }
        if (s.lattice.rank() <= max_rank)
            break;
    }
    try {
        validate_surface(s);
    } catch (const ModelError&) {
        // the odd-coordinate choices above can break Miyaoka-Yau only in degenerate cases
        return standard_surface("P2");
    }
    if (scramble)
        s = change_basis(s, random_unimodular(rng, s.lattice.rank(), 2 * static_cast<int>(s.lattice.rank())));
    return s;
}

SmoothConicBundle random_smooth_bundle(Rng& rng, std::size_t max_rank, bool scramble)
{
    SmoothConicBundle m{random_surface(rng, max_rank, scramble), {}, uniform(rng, -6, 6)};
    for (std::size_t i = 0; i < m.surface.lattice.rank(); ++i)
        m.c1E.push_back(uniform(rng, -3, 3));
    return m;
}

SingularConicBundle random_singular_bundle(Rng& rng, std::size_t max_rank, bool scramble)
{
    for (;;) {
        SingularConicBundle m{random_surface(rng, max_rank, scramble), {}, uniform(rng, -12, 12)};
        for (std::size_t i = 0; i < m.surface.lattice.rank(); ++i)
            m.c1rel.push_back(uniform(rng, -6, 6));
        try {
            invariants_singular(m);
            return m;
        } catch (const ModelError&) {
        }
    }
}

DelPezzoFibration random_delpezzo(Rng& rng)
{
    static const int ks[] = {1, 2, 3, 4, 5, 6, 8, 9};
    DelPezzoFibration m;
    m.K = ks[uniform(rng, 0, 7)];
    if (m.K == 8) {
        m.twist = uniform(rng, -12, -1);
    } else if (m.K == 9) {
        m.twist = uniform(rng, -12, 12);
    } else {
        if (m.K == 6) {
            static const Int ds[] = {1, 2, 3, 6};
            m.d = ds[uniform(rng, 0, 3)];
        }
        m.relK3 = uniform(rng, -60, 60);
        m.eX = 6 - 2 * uniform(rng, 0, 30);
    }
    return m;
}

FanoRankOne random_fano(Rng& rng) { return {uniform(rng, 1, 64), 4 - 2 * uniform(rng, 0, 26)}; }

MfsDescription random_model(Rng& rng, std::size_t max_rank)
{
    switch (uniform(rng, 0, 3)) {
    case 0: return random_fano(rng);
    case 1: return random_delpezzo(rng);
    case 2: return random_smooth_bundle(rng, max_rank);
    default: return random_singular_bundle(rng, max_rank);
    }
}

} // namespace mori
