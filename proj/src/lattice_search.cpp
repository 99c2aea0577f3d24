#include "mori/lattice.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace mori {

namespace {

struct VectorHash {
    std::size_t operator()(const IntVector& v) const noexcept
    {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (Int x : v)
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

Int max_abs(std::span<const Int> v)
{
    Int m = 0;
    for (Int x : v)
        m = std::max(m, x < 0 ? -x : x);
    return m;
}

// One generator of the search group. Every generator is an involution.
struct Generator {
    enum class Kind { Reflect, Swap, Negate } kind = Kind::Reflect;
    IntVector root;
    IntVector groot; // G * root
    Int factor = 0;
    std::size_t i = 0, j = 0;

    IntVector apply(std::span<const Int> v) const
    {
        IntVector out(v.begin(), v.end());
        switch (kind) {
        case Kind::Reflect: {
            const Int c = checked_mul(factor, dot(v, groot));
            if (c != 0)
                for (std::size_t k = 0; k < out.size(); ++k)
                    out[k] = checked_add(out[k], checked_mul(c, root[k]));
            break;
        }
        case Kind::Swap:
            std::swap(out[i], out[j]);
            break;
        case Kind::Negate:
            for (auto& x : out)
                x = -x;
            break;
        }
        return out;
    }

    IntMatrix matrix(const BilinearLattice& L) const
    {
        const std::size_t n = L.rank();
        switch (kind) {
        case Kind::Reflect:
            return reflection(L, root).matrix;
        case Kind::Swap: {
            IntMatrix m = IntMatrix::identity(n);
            m(i, i) = m(j, j) = 0;
            m(i, j) = m(j, i) = 1;
            return m;
        }
        case Kind::Negate:
            return -IntMatrix::identity(n);
        }
        return {};
    }
};

Int factor_for_norm(Int n)
{
    switch (n) {
    case -2: return 1;
    case 2: return -1;
    case -1: return 2;
    default: return -2;
    }
}

bool swap_preserves(const BilinearLattice& L, std::size_t a, std::size_t b)
{
    const IntMatrix& g = L.gram();
    auto idx = [&](std::size_t k) { return k == a ? b : (k == b ? a : k); };
    for (std::size_t r = 0; r < L.rank(); ++r)
        for (std::size_t c = 0; c < L.rank(); ++c)
            if (g(idx(r), idx(c)) != g(r, c))
                return false;
    return true;
}

const Int kRootNorms[] = {-2, -1, 1, 2};

std::vector<Generator> make_generators(const BilinearLattice& L, Int bound, std::size_t support, bool with_swaps)
{
    std::vector<Generator> gens;
    for (auto& u : bounded_roots(L, bound, kRootNorms, support)) {
        Generator g;
        g.kind = Generator::Kind::Reflect;
        g.factor = factor_for_norm(L.norm(u));
        g.groot = L.gram_times(u);
        g.root = std::move(u);
        gens.push_back(std::move(g));
    }
    if (with_swaps) {
        for (std::size_t a = 0; a < L.rank(); ++a)
            for (std::size_t b = a + 1; b < L.rank(); ++b)
                if (swap_preserves(L, a, b)) {
                    Generator g;
                    g.kind = Generator::Kind::Swap;
                    g.i = a;
                    g.j = b;
                    gens.push_back(g);
                }
        Generator neg;
        neg.kind = Generator::Kind::Negate;
        gens.push_back(neg);
    }
    return gens;
}

std::size_t effective_support(const BilinearLattice& L, std::size_t requested)
{
    if (requested != 0)
        return requested;
    return L.rank() > 8 ? 4 : L.rank();
}

std::string check_pair(const BilinearLattice& L, std::span<const Int> v, std::span<const Int> w, bool mod4)
{
    if (v.size() != L.rank() || w.size() != L.rank())
        return "vector length does not match lattice rank";
    if (is_zero(v) || is_zero(w))
        return "zero vector";
    if (divisibility(v) != 1 || divisibility(w) != 1)
        return "vectors must be primitive";
    const Int nv = L.norm(v), nw = L.norm(w);
    if (mod4 ? mod_floor(nv - nw, 4) != 0 : nv != nw)
        return "norms differ (" + std::to_string(nv) + " vs " + std::to_string(nw) + ")";
    if (vector_type(L, v) != vector_type(L, w))
        return "types differ";
    return {};
}

using ParentMap = std::unordered_map<IntVector, std::pair<IntVector, int>, VectorHash>;

// Generators met walking from `node` back to the root of `tree`, in walk order.
std::vector<int> walk_to_root(const ParentMap& tree, IntVector node)
{
    std::vector<int> gens;
    for (;;) {
        const auto& [parent, gen] = tree.at(node);
        if (gen < 0)
            break;
        gens.push_back(gen);
        node = parent;
    }
    return gens;
}

} // namespace

std::vector<IntVector> bounded_roots(const BilinearLattice& L, Int bound, std::span<const Int> norms,
                                     std::size_t max_support)
{
    const std::size_t n = L.rank();
    if (max_support == 0 || max_support > n)
        max_support = n;
    std::vector<IntVector> out;
    IntVector u(n, 0);
    // depth-first over coordinates; `leading` tracks whether a nonzero entry was placed yet
    auto rec = [&](auto&& self, std::size_t pos, std::size_t used, bool leading) -> void {
        if (pos == n) {
            if (!leading)
                return;
            const Int nu = L.norm(u);
            if (std::find(norms.begin(), norms.end(), nu) != norms.end())
                out.push_back(u);
            return;
        }
        u[pos] = 0;
        self(self, pos + 1, used, leading);
        if (used == max_support)
            return;
        for (Int c = leading ? -bound : 1; c <= bound; ++c) {
            if (c == 0)
                continue;
            u[pos] = c;
            self(self, pos + 1, used + 1, true);
        }
        u[pos] = 0;
    };
    rec(rec, 0, 0, false);
    return out;
}

IsometrySearchResult wall_isometry(const BilinearLattice& L, std::span<const Int> v, std::span<const Int> w,
                                   const SearchOptions& opts)
{
    IsometrySearchResult res;
    res.in_transitivity_range = in_transitivity_range(L);
    if (auto why = check_pair(L, v, w, false); !why.empty()) {
        res.status = SearchStatus::HypothesisViolation;
        res.detail = why;
        return res;
    }

    const IntVector src(v.begin(), v.end()), dst(w.begin(), w.end());
    if (src == dst) {
        res.status = SearchStatus::Found;
        res.map = identity_map(L.rank());
        return res;
    }

    const auto gens = make_generators(L, opts.generator_bound, effective_support(L, opts.max_support), true);
    const Int cap = opts.working_bound > 0 ? opts.working_bound : 2 * std::max(max_abs(v), max_abs(w)) + 2;

    ParentMap fwd, bwd;
    fwd.emplace(src, std::make_pair(src, -1));
    bwd.emplace(dst, std::make_pair(dst, -1));
    std::vector<IntVector> ffront{src}, bfront{dst};
    std::optional<IntVector> meet;

    auto expand = [&](std::vector<IntVector>& front, ParentMap& mine, const ParentMap& other) {
        std::vector<IntVector> next;
        for (const auto& x : front) {
            for (std::size_t g = 0; g < gens.size(); ++g) {
                IntVector y = gens[g].apply(x);
                if (max_abs(y) > cap || mine.count(y))
                    continue;
                mine.emplace(y, std::make_pair(x, static_cast<int>(g)));
                ++res.nodes;
                if (other.count(y)) {
                    meet = y;
                    return;
                }
                next.push_back(std::move(y));
                if (res.nodes >= opts.node_budget)
                    return;
            }
        }
        front = std::move(next);
    };

    while (!meet && res.nodes < opts.node_budget && !ffront.empty() && !bfront.empty()) {
        if (ffront.size() <= bfront.size())
            expand(ffront, fwd, bwd);
        else
            expand(bfront, bwd, fwd);
    }

    if (!meet) {
        res.status = SearchStatus::BudgetExhausted;
        res.detail = res.nodes >= opts.node_budget ? "node budget exhausted" : "bounded orbit exhausted";
        if (!res.in_transitivity_range)
            res.detail += "; lattice outside the transitivity range";
        return res;
    }

    // v -> meet along forward gens, then meet -> w along backward gens (all involutions).
    auto forward_gens = walk_to_root(fwd, *meet);
    std::reverse(forward_gens.begin(), forward_gens.end());
    const auto backward_gens = walk_to_root(bwd, *meet);
    IntMatrix m = IntMatrix::identity(L.rank());
    for (int g : forward_gens)
        m = gens[g].matrix(L) * m;
    for (int g : backward_gens)
        m = gens[g].matrix(L) * m;

    IsometryMap f{m, 1};
    if (f(src) != dst || !is_isometry(L, f))
        throw std::logic_error("wall_isometry produced an invalid map");
    res.status = SearchStatus::Found;
    res.map = f;
    return res;
}

std::vector<Mod2Step> reduce_standard_class(const BilinearLattice& L, const Mod2Class& x)
{
    if (!L.is_standard_odd_indefinite() || L.rank() < 4)
        throw LatticeError("explicit mod-2 reduction needs diag(1,-q) with q >= 3");
    if (x.bits.size() != L.rank() || x.is_zero())
        throw LatticeError("bad class for mod-2 reduction");
    if (x == characteristic_mod2(L))
        throw LatticeError("characteristic class has no reduction");

    const std::size_t q = L.rank() - 1;
    std::vector<Mod2Step> steps;
    Mod2Class y = x;

    auto push_reflection = [&](Int head, const std::vector<std::size_t>& support) {
        IntVector u(L.rank(), 0);
        u[0] = head;
        for (auto k : support)
            u[k] = 1;
        Mod2Step s;
        s.map = reflection(L, u);
        s.image = reduce_mod2(s.map(lift(y)));
        s.root = std::move(u);
        y = s.image;
        steps.push_back(std::move(s));
    };

    for (;;) {
        std::vector<std::size_t> ones, zeros;
        for (std::size_t k = 1; k <= q; ++k)
            (y.bits[k] ? ones : zeros).push_back(k);
        const std::size_t l = ones.size();
        if (y.bits[0] == 1) {
            if (l == 0) {
                push_reflection(1, {zeros[0], zeros[1], zeros[2]});
            } else if (l == 1) {
                if (q < 4)
                    break;
                push_reflection(1, {zeros[0], zeros[1], zeros[2]});
            } else {
                // l < q here since y is not characteristic
                push_reflection(1, {ones[0], ones[1], zeros[0]});
            }
        } else {
            if (l <= 4)
                break;
            if (l < q)
                push_reflection(2, {ones[0], ones[1], ones[2], ones[3], ones[4], zeros[0]});
            else
                push_reflection(1, {ones[0], ones[1], ones[2]});
        }
    }

    // sort the negative-part ones to the front
    IntMatrix p(L.rank(), L.rank());
    p(0, 0) = 1;
    std::size_t slot = 1;
    bool trivial = true;
    for (int pass = 1; pass >= 0; --pass)
        for (std::size_t k = 1; k <= q; ++k)
            if (y.bits[k] == pass) {
                p(slot, k) = 1;
                trivial = trivial && slot == k;
                ++slot;
            }
    if (!trivial) {
        Mod2Step s;
        s.map = {p, 1};
        s.image = reduce_mod2(s.map(lift(y)));
        y = s.image;
        steps.push_back(std::move(s));
    }
    return steps;
}

namespace {

IsometryMap product(const BilinearLattice& L, const std::vector<Mod2Step>& steps)
{
    IsometryMap m = identity_map(L.rank());
    for (const auto& s : steps)
        m = compose(s.map, m);
    return m;
}

} // namespace

IsometrySearchResult mod2_isometry(const BilinearLattice& L, std::span<const Int> v, std::span<const Int> w,
                                   const SearchOptions& opts)
{
    IsometrySearchResult res;
    res.in_transitivity_range = in_transitivity_range(L);
    if (auto why = check_pair(L, v, w, true); !why.empty()) {
        res.status = SearchStatus::HypothesisViolation;
        res.detail = why;
        return res;
    }
    const Mod2Class x = reduce_mod2(v), xt = reduce_mod2(w);
    auto finish = [&](IsometryMap f) {
        const IntVector diff = add(f(v), scale(-1, w));
        if (!reduce_mod2(diff).is_zero() || !is_isometry(L, f))
            throw std::logic_error("mod2_isometry produced an invalid map");
        res.status = SearchStatus::Found;
        res.map = std::move(f);
        return res;
    };

    if (x == xt)
        return finish(identity_map(L.rank()));

    if (L.is_standard_odd_indefinite() && L.rank() >= 4) {
        const auto r = reduce_standard_class(L, x);
        const auto rt = reduce_standard_class(L, xt);
        const Mod2Class end = r.empty() ? x : r.back().image;
        const Mod2Class end_t = rt.empty() ? xt : rt.back().image;
        if (!(end == end_t))
            throw std::logic_error("explicit reduction reached different representatives");
        res.detail = "explicit reflection sequence";
        return finish(compose(inverse(L, product(L, rt)), product(L, r)));
    }

    // Generic fallback: breadth-first search on V (x) Z/2.
    if (L.rank() > 62)
        throw LatticeError("rank too large for the mod-2 search");
    const auto gens = make_generators(L, opts.generator_bound, effective_support(L, opts.max_support), true);
    std::vector<IntMatrix> mats;
    for (const auto& g : gens)
        mats.push_back(g.matrix(L));
    auto pack = [](const Mod2Class& c) {
        std::uint64_t k = 0;
        for (std::size_t i = 0; i < c.bits.size(); ++i)
            k |= static_cast<std::uint64_t>(c.bits[i]) << i;
        return k;
    };
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, int>> seen;
    std::unordered_map<std::uint64_t, Mod2Class> classes;
    const std::uint64_t start = pack(x), goal = pack(xt);
    seen.emplace(start, std::make_pair(start, -1));
    classes.emplace(start, x);
    std::deque<std::uint64_t> queue{start};
    bool found = false;
    while (!queue.empty() && !found && res.nodes < opts.node_budget) {
        const auto cur = queue.front();
        queue.pop_front();
        const IntVector lv = lift(classes.at(cur));
        for (std::size_t g = 0; g < mats.size(); ++g) {
            Mod2Class img = reduce_mod2(mats[g] * lv);
            const auto key = pack(img);
            if (seen.count(key))
                continue;
            seen.emplace(key, std::make_pair(cur, static_cast<int>(g)));
            classes.emplace(key, std::move(img));
            ++res.nodes;
            if (key == goal) {
                found = true;
                break;
            }
            queue.push_back(key);
        }
    }
    if (!found) {
        res.status = SearchStatus::BudgetExhausted;
        res.detail = queue.empty() ? "mod-2 orbit exhausted" : "node budget exhausted";
        return res;
    }
    std::vector<int> path;
    for (auto k = goal; seen.at(k).second >= 0; k = seen.at(k).first)
        path.push_back(seen.at(k).second);
    IntMatrix m = IntMatrix::identity(L.rank());
    for (auto it = path.rbegin(); it != path.rend(); ++it)
        m = mats[*it] * m;
    res.detail = "mod-2 breadth-first search";
    return finish({m, 1});
}

std::vector<IntVector> orbit_enumerate(const BilinearLattice& L, std::span<const Int> v, const OrbitOptions& opts)
{
    if (v.size() != L.rank())
        throw LatticeError("vector length does not match lattice rank");
    const Int box = opts.coord_bound;
    const Int gen_bound = opts.generator_bound > 0 ? opts.generator_bound : box;
    const Int cap = std::max(opts.working_bound > 0 ? opts.working_bound : box, box);
    if (max_abs(v) > box)
        throw LatticeError("start vector lies outside the coordinate box");

    const auto gens = make_generators(L, gen_bound, L.rank(), false);

    // dense visited bitmap over the working box
    const std::size_t side = static_cast<std::size_t>(2 * cap + 1);
    std::size_t cells = 1;
    for (std::size_t k = 0; k < L.rank(); ++k) {
        if (cells > (std::size_t{1} << 32) / side)
            throw BudgetExceeded("working box too large for orbit enumeration");
        cells *= side;
    }
    std::vector<bool> seen(cells, false);
    auto index = [&](const IntVector& x) {
        std::size_t k = 0;
        for (Int c : x)
            k = k * side + static_cast<std::size_t>(c + cap);
        return k;
    };

    std::vector<IntVector> out;
    std::deque<IntVector> queue;
    IntVector start(v.begin(), v.end());
    seen[index(start)] = true;
    queue.push_back(start);
    std::size_t visited = 1;
    while (!queue.empty()) {
        IntVector x = std::move(queue.front());
        queue.pop_front();
        for (const auto& g : gens) {
            IntVector y = g.apply(x);
            if (max_abs(y) > cap)
                continue;
            const auto k = index(y);
            if (seen[k])
                continue;
            seen[k] = true;
            if (++visited > opts.node_budget)
                throw BudgetExceeded("orbit enumeration exceeded its node budget");
            queue.push_back(std::move(y));
        }
        if (max_abs(x) <= box)
            out.push_back(std::move(x));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace mori
