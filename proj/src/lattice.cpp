#include "mori/lattice.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>
#include <sstream>

namespace mori {

using BigRational = boost::multiprecision::cpp_rational;

const char* to_string(Parity p) { return p == Parity::Even ? "Even" : "Odd"; }
const char* to_string(VectorType t) { return t == VectorType::Characteristic ? "Characteristic" : "Ordinary"; }

int exact_signature(const IntMatrix& g)
{
    const std::size_t n = g.rows();
    std::vector<BigRational> a(n * n);
    auto at = [&](std::size_t i, std::size_t j) -> BigRational& { return a[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            at(i, j) = g(i, j);

    int sig = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && at(piv, piv) == 0)
            ++piv;
        if (piv == n) {
            // no nonzero diagonal; make one with a congruence e_i += e_j
            std::size_t pi = n, pj = n;
            for (std::size_t i = k; i < n && pi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (at(i, j) != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == n)
                throw LatticeError("degenerate form");
            for (std::size_t c = 0; c < n; ++c)
                at(pi, c) += at(pj, c);
            for (std::size_t r = 0; r < n; ++r)
                at(r, pi) += at(r, pj);
            piv = pi;
        }
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(at(piv, c), at(k, c));
            for (std::size_t r = 0; r < n; ++r)
                std::swap(at(r, piv), at(r, k));
        }
        const BigRational p = at(k, k);
        sig += p > 0 ? 1 : -1;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (at(i, k) == 0)
                continue;
            const BigRational f = at(i, k) / p;
            for (std::size_t j = k; j < n; ++j)
                at(i, j) -= f * at(k, j);
            for (std::size_t j = k; j < n; ++j)
                at(j, i) = at(i, j);
        }
    }
    return sig;
}

BilinearLattice::BilinearLattice(IntMatrix gram, std::string label)
    : gram_(std::move(gram)), label_(std::move(label))
{
    if (gram_.rows() == 0)
        throw LatticeError("lattice rank must be positive");
    if (!gram_.is_symmetric())
        throw LatticeError("Gram matrix is not symmetric");
    const Int det = gram_.determinant();
    if (det != 1 && det != -1)
        throw LatticeError("Gram matrix is not unimodular (det " + std::to_string(det) + ")");
    inverse_ = gram_.unimodular_inverse();
    parity_ = Parity::Even;
    for (std::size_t i = 0; i < rank(); ++i)
        if (gram_(i, i) % 2 != 0)
            parity_ = Parity::Odd;
    signature_ = exact_signature(gram_);
}

BilinearLattice BilinearLattice::diagonal(std::size_t p, std::size_t q)
{
    IntVector d(p, 1);
    d.insert(d.end(), q, -1);
    std::ostringstream label;
    label << "diag(" << p << "," << q << ")";
    return BilinearLattice(IntMatrix::diagonal(d), label.str());
}

BilinearLattice BilinearLattice::hyperbolic()
{
    return BilinearLattice(IntMatrix{{0, 1}, {1, 0}}, "H");
}

BilinearLattice BilinearLattice::e8(bool negative)
{
    // Cartan matrix: chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
    IntMatrix g(8, 8);
    const Int s = negative ? -1 : 1;
    for (std::size_t i = 0; i < 8; ++i)
        g(i, i) = 2 * s;
    auto link = [&](std::size_t i, std::size_t j) { g(i, j) = g(j, i) = -s; };
    for (std::size_t i = 0; i + 1 < 7; ++i)
        link(i, i + 1);
    link(4, 7);
    return BilinearLattice(g, negative ? "-E8" : "E8");
}

BilinearLattice BilinearLattice::direct_sum(const BilinearLattice& a, const BilinearLattice& b)
{
    const std::size_t n = a.rank() + b.rank();
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < a.rank(); ++i)
        for (std::size_t j = 0; j < a.rank(); ++j)
            g(i, j) = a.gram()(i, j);
    for (std::size_t i = 0; i < b.rank(); ++i)
        for (std::size_t j = 0; j < b.rank(); ++j)
            g(a.rank() + i, a.rank() + j) = b.gram()(i, j);
    std::string label;
    if (!a.label().empty() && !b.label().empty())
        label = a.label() + "+" + b.label();
    return BilinearLattice(g, label);
}

Int BilinearLattice::pair(std::span<const Int> a, std::span<const Int> b) const
{
    if (a.size() != rank() || b.size() != rank())
        throw LatticeError("vector length does not match lattice rank");
    const IntVector gb = gram_ * b;
    return dot(a, gb);
}

Int BilinearLattice::norm(std::span<const Int> v) const { return pair(v, v); }

bool BilinearLattice::is_standard_odd_indefinite() const
{
    if (gram_(0, 0) != 1)
        return false;
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t j = 0; j < rank(); ++j)
            if (gram_(i, j) != (i != j ? 0 : (i == 0 ? 1 : -1)))
                return false;
    return true;
}

Int divisibility(std::span<const Int> v)
{
    Int g = 0;
    for (Int x : v)
        g = std::gcd(g, x);
    if (g == 0)
        throw LatticeError("divisibility of the zero vector");
    return g < 0 ? -g : g;
}

IntVector primitive_part(std::span<const Int> v)
{
    const Int d = divisibility(v);
    IntVector p(v.begin(), v.end());
    for (auto& x : p)
        x /= d;
    return p;
}

bool is_characteristic_class(const BilinearLattice& L, std::span<const Int> v)
{
    if (v.size() != L.rank())
        throw LatticeError("vector length does not match lattice rank");
    const IntVector gv = L.gram_times(v);
    for (std::size_t i = 0; i < L.rank(); ++i)
        if (mod_floor(gv[i] - L.gram()(i, i), 2) != 0)
            return false;
    return true;
}

VectorType vector_type(const BilinearLattice& L, std::span<const Int> v)
{
    const IntVector p = primitive_part(v);
    return is_characteristic_class(L, p) ? VectorType::Characteristic : VectorType::Ordinary;
}

bool is_isometry(const BilinearLattice& L, const IsometryMap& f)
{
    if (f.matrix.rows() != L.rank() || f.matrix.cols() != L.rank())
        return false;
    if (f.sign != 1 && f.sign != -1)
        return false;
    const IntMatrix lhs = f.matrix.transpose() * L.gram() * f.matrix;
    const IntMatrix rhs = f.sign == 1 ? L.gram() : -L.gram();
    if (!(lhs == rhs))
        return false;
    const Int det = f.matrix.determinant();
    return det == 1 || det == -1;
}

IsometryMap compose(const IsometryMap& outer, const IsometryMap& inner)
{
    return {outer.matrix * inner.matrix, outer.sign * inner.sign};
}

IsometryMap inverse(const BilinearLattice& L, const IsometryMap& f)
{
    // M^T G M = s G  =>  M^{-1} = s G^{-1} M^T G
    IntMatrix m = L.inverse_gram() * f.matrix.transpose() * L.gram();
    if (f.sign == -1)
        m = -m;
    return {m, f.sign};
}

IsometryMap identity_map(std::size_t rank) { return {IntMatrix::identity(rank), 1}; }

namespace {

Int reflection_factor(Int n)
{
    switch (n) {
    case -2: return 1;
    case 2: return -1;
    case -1: return 2;
    case 1: return -2;
    default: throw LatticeError("reflection vector must have norm -2, +2, -1 or +1 (got " + std::to_string(n) + ")");
    }
}

} // namespace

IsometryMap reflection(const BilinearLattice& L, std::span<const Int> u)
{
    const Int c = reflection_factor(L.norm(u));
    const IntVector gu = L.gram_times(u);
    const std::size_t n = L.rank();
    IntMatrix m = IntMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = checked_add(m(i, j), checked_mul(c, checked_mul(u[i], gu[j])));
    return {m, 1};
}

IntVector reflect(const BilinearLattice& L, std::span<const Int> u, std::span<const Int> v)
{
    const Int c = reflection_factor(L.norm(u));
    const Int vu = L.pair(v, u);
    return add(v, scale(checked_mul(c, vu), u));
}

bool Mod2Class::is_zero() const
{
    for (auto b : bits)
        if (b)
            return false;
    return true;
}

std::string Mod2Class::to_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (i)
            s += i == 1 ? ";" : ",";
        s += bits[i] ? '1' : '0';
    }
    return s + ")";
}

Mod2Class reduce_mod2(std::span<const Int> v)
{
    Mod2Class x;
    x.bits.reserve(v.size());
    for (Int c : v)
        x.bits.push_back(static_cast<std::uint8_t>(mod_floor(c, 2)));
    return x;
}

IntVector lift(const Mod2Class& x) { return IntVector(x.bits.begin(), x.bits.end()); }

Int alpha_mod4(const BilinearLattice& L, const Mod2Class& x)
{
    if (x.bits.size() != L.rank())
        throw LatticeError("class length does not match lattice rank");
    if (x.is_zero())
        throw LatticeError("alpha is undefined on the zero class");
    return mod_floor(L.norm(lift(x)), 4);
}

Mod2Class characteristic_mod2(const BilinearLattice& L)
{
    // Solve G c == diag(G) mod 2; over Z/2, G is invertible with inverse G^{-1} mod 2.
    IntVector d(L.rank());
    for (std::size_t i = 0; i < L.rank(); ++i)
        d[i] = L.gram()(i, i);
    return reduce_mod2(L.inverse_gram() * d);
}

const char* to_string(SearchStatus s)
{
    switch (s) {
    case SearchStatus::Found: return "Found";
    case SearchStatus::BudgetExhausted: return "BudgetExhausted";
    case SearchStatus::HypothesisViolation: return "HypothesisViolation";
    }
    return "?";
}

bool in_transitivity_range(const BilinearLattice& L)
{
    const Int r = static_cast<Int>(L.rank());
    const Int s = L.signature();
    if (r - (s < 0 ? -s : s) >= 4)
        return true;
    // (1) + q(-1), recognized from rank, signature and parity
    return L.parity() == Parity::Odd && s == 2 - r && r - 1 <= 7;
}

} // namespace mori
