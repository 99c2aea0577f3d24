#include "mori/cubic_form.hpp"

#include <numeric>
#include <sstream>

namespace mori {

CubicForm::CubicForm(std::size_t rank) : rank_(rank), t_(rank * rank * rank, 0) {}

void CubicForm::set(std::size_t i, std::size_t j, std::size_t k, Int value)
{
    const std::size_t idx[3] = {i, j, k};
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms)
        t_[(idx[p[0]] * rank_ + idx[p[1]]) * rank_ + idx[p[2]]] = value;
}

Int CubicForm::evaluate(std::span<const Int> a, std::span<const Int> b, std::span<const Int> c) const
{
    if (a.size() != rank_ || b.size() != rank_ || c.size() != rank_)
        throw std::invalid_argument("cubic form argument length mismatch");
    Int acc = 0;
    for (std::size_t i = 0; i < rank_; ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < rank_; ++j) {
            if (b[j] == 0)
                continue;
            const Int ab = checked_mul(a[i], b[j]);
            for (std::size_t k = 0; k < rank_; ++k)
                if (c[k] != 0)
                    acc = checked_add(acc, checked_mul(checked_mul(ab, c[k]), coeff(i, j, k)));
        }
    }
    return acc;
}

CubicForm CubicForm::pullback(const IntMatrix& p) const
{
    if (p.rows() != rank_)
        throw std::invalid_argument("pullback dimension mismatch");
    CubicForm out(p.cols());
    std::vector<IntVector> cols;
    for (std::size_t j = 0; j < p.cols(); ++j)
        cols.push_back(p.column(j));
    for (std::size_t i = 0; i < p.cols(); ++i)
        for (std::size_t j = i; j < p.cols(); ++j)
            for (std::size_t k = j; k < p.cols(); ++k)
                out.set(i, j, k, evaluate(cols[i], cols[j], cols[k]));
    return out;
}

Int CubicForm::content() const
{
    Int g = 0;
    for (Int x : t_)
        g = std::gcd(g, x);
    return g < 0 ? -g : g;
}

std::string CubicForm::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < rank_; ++i)
        for (std::size_t j = i; j < rank_; ++j)
            for (std::size_t k = j; k < rank_; ++k) {
                if (coeff(i, j, k) == 0)
                    continue;
                if (!first)
                    os << ' ';
                first = false;
                os << 'e' << i << 'e' << j << 'e' << k << '=' << coeff(i, j, k);
            }
    return first ? "0" : os.str();
}

void WallJuppTriple::validate() const
{
    if (p1_pairing.size() != rank() || w2.bits.size() != rank())
        throw std::invalid_argument("triple component lengths do not match the cubic form");
    if (b3 < 0 || b3 % 2 != 0)
        throw std::invalid_argument("b3 must be a nonnegative even integer");
}

bool triple_transport_check(const IntMatrix& phi, const WallJuppTriple& t, const WallJuppTriple& tp)
{
    const std::size_t r = t.rank();
    if (tp.rank() != r || phi.rows() != r || phi.cols() != r)
        throw std::invalid_argument("transport dimension mismatch");
    const Int det = phi.determinant();
    if (det != 1 && det != -1)
        throw std::invalid_argument("transport matrix is not unimodular");
    if (t.b3 != tp.b3)
        return false;
    if (!(tp.cubic.pullback(phi) == t.cubic))
        return false;
    for (std::size_t j = 0; j < r; ++j)
        if (dot(tp.p1_pairing, phi.column(j)) != t.p1_pairing[j])
            return false;
    return reduce_mod2(phi * lift(t.w2)) == tp.w2;
}

const char* to_string(Equivalence e)
{
    switch (e) {
    case Equivalence::Found: return "Found";
    case Equivalence::Inconclusive: return "Inconclusive";
    case Equivalence::ProvablyDistinct: return "ProvablyDistinct";
    }
    return "?";
}

namespace {

// Calls fn on every vector of (Z/m)^r, coordinates in [0, m).
template <class Fn>
void for_each_residue(std::size_t r, Int m, Fn&& fn)
{
    IntVector a(r, 0);
    for (;;) {
        fn(a);
        std::size_t k = 0;
        while (k < r && a[k] == m - 1)
            a[k++] = 0;
        if (k == r)
            return;
        ++a[k];
    }
}

} // namespace

TripleFingerprint fingerprint(const WallJuppTriple& t)
{
    TripleFingerprint f;
    f.rank = t.rank();
    f.b3 = t.b3;
    f.content = t.cubic.content();
    const IntVector w2 = lift(t.w2);
    if (f.rank <= 12)
        for_each_residue(f.rank, 2, [&](const IntVector& a) {
            ++f.mod2[{static_cast<int>(mod_floor(t.cubic.cube(a), 2)), static_cast<int>(mod_floor(dot(a, t.p1_pairing), 2)),
                      a == w2 ? 1 : 0}];
        });
    if (f.rank <= 8)
        for_each_residue(f.rank, 3, [&](const IntVector& a) {
            ++f.mod3[{static_cast<int>(mod_floor(t.cubic.cube(a), 3)), static_cast<int>(mod_floor(dot(a, t.p1_pairing), 3))}];
        });
    if (f.rank <= 6)
        for_each_residue(f.rank, 4, [&](const IntVector& a) {
            ++f.mod4[{static_cast<int>(mod_floor(t.cubic.cube(a), 4)), static_cast<int>(mod_floor(dot(a, t.p1_pairing), 4)),
                      reduce_mod2(a) == t.w2 ? 1 : 0}];
        });
    return f;
}

std::string fingerprint_mismatch(const TripleFingerprint& a, const TripleFingerprint& b)
{
    if (a.rank != b.rank)
        return "rank";
    if (a.b3 != b.b3)
        return "b3";
    if (a.content != b.content)
        return "cubic content";
    if (a.mod2 != b.mod2)
        return "mod-2 cubic/p1/w2 distribution";
    if (a.mod3 != b.mod3)
        return "mod-3 cubic/p1 distribution";
    if (a.mod4 != b.mod4)
        return "mod-4 cubic/p1/w2 distribution";
    return {};
}

EquivalenceResult equivalent_bounded(const WallJuppTriple& t, const WallJuppTriple& tp, Int entry_bound,
                                     std::size_t budget)
{
    t.validate();
    tp.validate();
    EquivalenceResult res;
    if (auto why = fingerprint_mismatch(fingerprint(t), fingerprint(tp)); !why.empty()) {
        res.status = Equivalence::ProvablyDistinct;
        res.witness = why;
        return res;
    }
    const std::size_t r = t.rank();

    // every vector of the box, lexicographic
    std::vector<IntVector> box;
    {
        IntVector c(r, -entry_bound);
        for (;;) {
            box.push_back(c);
            std::size_t k = r;
            while (k > 0 && c[k - 1] == entry_bound)
                c[--k] = -entry_bound;
            if (k == 0)
                break;
            ++c[k - 1];
        }
    }
    // admissible images of each basis vector: cube and p1 value must match
    std::vector<std::vector<const IntVector*>> cand(r);
    for (std::size_t j = 0; j < r; ++j) {
        IntVector e(r, 0);
        e[j] = 1;
        const Int want_cube = t.cubic.cube(e);
        for (const auto& c : box)
            if (dot(tp.p1_pairing, c) == t.p1_pairing[j] && tp.cubic.cube(c) == want_cube)
                cand[j].push_back(&c);
    }

    std::vector<const IntVector*> chosen(r, nullptr);
    IntMatrix phi(r, r);
    bool found = false, exhausted_budget = false;

    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == r) {
            for (std::size_t k = 0; k < r; ++k)
                phi.set_column(k, *chosen[k]);
            const Int det = phi.determinant();
            if ((det == 1 || det == -1) && reduce_mod2(phi * lift(t.w2)) == tp.w2)
                found = true;
            return;
        }
        for (const IntVector* c : cand[j]) {
            if (++res.nodes > budget) {
                exhausted_budget = true;
                return;
            }
            bool ok = true;
            for (std::size_t a = 0; a < j && ok; ++a) {
                if (tp.cubic.evaluate(*chosen[a], *c, *c) != t.cubic.coeff(a, j, j))
                    ok = false;
                for (std::size_t b = a; b < j && ok; ++b)
                    if (tp.cubic.evaluate(*chosen[a], *chosen[b], *c) != t.cubic.coeff(a, b, j))
                        ok = false;
            }
            if (!ok)
                continue;
            chosen[j] = c;
            self(self, j + 1);
            if (found || exhausted_budget)
                return;
        }
    };
    rec(rec, 0);

    if (found) {
        if (!triple_transport_check(phi, t, tp))
            throw std::logic_error("bounded search accepted a non-transporting matrix");
        res.status = Equivalence::Found;
        res.phi = phi;
        return res;
    }
    res.status = Equivalence::Inconclusive;
    res.witness = exhausted_budget ? "search budget exhausted"
                                   : "no isomorphism with entries bounded by " + std::to_string(entry_bound);
    return res;
}

} // namespace mori
