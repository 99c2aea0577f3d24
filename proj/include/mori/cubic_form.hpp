#pragma once

#include "mori/int_matrix.hpp"
#include "mori/lattice.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>

namespace mori {

/// Fully symmetric integer trilinear form, stored as the full rank^3 tensor.
class CubicForm {
public:
    CubicForm() = default;
    explicit CubicForm(std::size_t rank);

    std::size_t rank() const { return rank_; }
    Int coeff(std::size_t i, std::size_t j, std::size_t k) const { return t_[(i * rank_ + j) * rank_ + k]; }
    /// Sets mu(i,j,k) and all its permutations.
    void set(std::size_t i, std::size_t j, std::size_t k, Int value);

    Int evaluate(std::span<const Int> a, std::span<const Int> b, std::span<const Int> c) const;
    Int cube(std::span<const Int> a) const { return evaluate(a, a, a); }

    /// The form (a,b,c) -> mu(Pa, Pb, Pc).
    CubicForm pullback(const IntMatrix& p) const;
    /// gcd of all coefficients (0 for the zero form).
    Int content() const;

    friend bool operator==(const CubicForm&, const CubicForm&) = default;

    std::string to_string() const;

private:
    std::size_t rank_ = 0;
    std::vector<Int> t_;
};

/// Cubic form, first Pontrjagin pairing, w2 and b3 of a simply connected
/// 6-manifold with torsion-free homology.
struct WallJuppTriple {
    CubicForm cubic;
    IntVector p1_pairing;
    Mod2Class w2;
    Int b3 = 0;

    std::size_t rank() const { return cubic.rank(); }
    void validate() const;
};

/// phi maps H^2 of the first space to H^2 of the second (columns are images
/// of basis vectors). True iff phi carries T to T'.
bool triple_transport_check(const IntMatrix& phi, const WallJuppTriple& t, const WallJuppTriple& tp);

enum class Equivalence { Found, Inconclusive, ProvablyDistinct };
const char* to_string(Equivalence e);

struct EquivalenceResult {
    Equivalence status = Equivalence::Inconclusive;
    std::optional<IntMatrix> phi;
    std::string witness;
    std::size_t nodes = 0;
};

/// Invariants of a triple that any isomorphism preserves; a mismatch is a proof
/// of inequivalence.
struct TripleFingerprint {
    std::size_t rank = 0;
    Int b3 = 0;
    Int content = 0;
    // (cube mod 2, p1 mod 2, a == w2) -> count over (Z/2)^r
    std::map<std::tuple<int, int, int>, std::size_t> mod2;
    // (cube mod 3, p1 mod 3) -> count over (Z/3)^r
    std::map<std::tuple<int, int>, std::size_t> mod3;
    // (cube mod 4, p1 mod 4, a == w2 mod 2) -> count over (Z/4)^r; only for small rank
    std::map<std::tuple<int, int, int>, std::size_t> mod4;
};

TripleFingerprint fingerprint(const WallJuppTriple& t);
/// Empty when all invariants agree, otherwise the name of the first mismatch.
std::string fingerprint_mismatch(const TripleFingerprint& a, const TripleFingerprint& b);

/// Bounded search for an isomorphism of triples with entries in [-bound, bound].
/// The first hit in lexicographic column order is returned.
EquivalenceResult equivalent_bounded(const WallJuppTriple& t, const WallJuppTriple& tp, Int entry_bound,
                                     std::size_t budget = 50'000'000);

} // namespace mori
