#pragma once

#include "mori/int_matrix.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mori {

class LatticeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Parity { Even, Odd };
enum class VectorType { Characteristic, Ordinary };

const char* to_string(Parity p);
const char* to_string(VectorType t);

/// Unimodular symmetric bilinear form given by its Gram matrix.
class BilinearLattice {
public:
    explicit BilinearLattice(IntMatrix gram, std::string label = {});

    /// diag(+1 x p, -1 x q)
    static BilinearLattice diagonal(std::size_t p, std::size_t q);
    static BilinearLattice hyperbolic();
    static BilinearLattice e8(bool negative = true);
    static BilinearLattice direct_sum(const BilinearLattice& a, const BilinearLattice& b);

    std::size_t rank() const { return gram_.rows(); }
    const IntMatrix& gram() const { return gram_; }
    const std::string& label() const { return label_; }
    const IntMatrix& inverse_gram() const { return inverse_; }

    Int pair(std::span<const Int> a, std::span<const Int> b) const;
    Int norm(std::span<const Int> v) const;
    IntVector gram_times(std::span<const Int> v) const { return gram_ * v; }

    Parity parity() const { return parity_; }
    int signature() const { return signature_; }

    /// True when the Gram matrix is literally diag(1, -1, ..., -1).
    bool is_standard_odd_indefinite() const;

    friend bool operator==(const BilinearLattice& a, const BilinearLattice& b) { return a.gram_ == b.gram_; }

private:
    IntMatrix gram_;
    IntMatrix inverse_;
    std::string label_;
    Parity parity_ = Parity::Even;
    int signature_ = 0;
};

/// Signature of a nondegenerate symmetric matrix via exact rational elimination.
int exact_signature(const IntMatrix& symmetric);

Int divisibility(std::span<const Int> v);
IntVector primitive_part(std::span<const Int> v);
VectorType vector_type(const BilinearLattice& L, std::span<const Int> v);
/// v.b == b.b (mod 2) for every basis vector b, without dividing out the gcd.
bool is_characteristic_class(const BilinearLattice& L, std::span<const Int> v);

struct IsometryMap {
    IntMatrix matrix;
    int sign = 1;

    IntVector operator()(std::span<const Int> v) const { return matrix * v; }
};

bool is_isometry(const BilinearLattice& L, const IsometryMap& f);
IsometryMap compose(const IsometryMap& outer, const IsometryMap& inner);
IsometryMap inverse(const BilinearLattice& L, const IsometryMap& f);
IsometryMap identity_map(std::size_t rank);

/// Integral reflection in u. norm(u) = -2 gives v + (v.u)u, norm +2 gives
/// v - (v.u)u; norm +-1 reflections (v -+ 2(v.u)u) are accepted too.
IsometryMap reflection(const BilinearLattice& L, std::span<const Int> u);
IntVector reflect(const BilinearLattice& L, std::span<const Int> u, std::span<const Int> v);

struct Mod2Class {
    std::vector<std::uint8_t> bits;

    friend bool operator==(const Mod2Class&, const Mod2Class&) = default;
    bool is_zero() const;
    std::string to_string() const;
};

Mod2Class reduce_mod2(std::span<const Int> v);
IntVector lift(const Mod2Class& x);
Int alpha_mod4(const BilinearLattice& L, const Mod2Class& x);
/// The unique class c with c.y == y.y (mod 2) for all y.
Mod2Class characteristic_mod2(const BilinearLattice& L);

enum class SearchStatus { Found, BudgetExhausted, HypothesisViolation };
const char* to_string(SearchStatus s);

struct IsometrySearchResult {
    SearchStatus status = SearchStatus::BudgetExhausted;
    std::optional<IsometryMap> map;
    std::string detail;
    std::size_t nodes = 0;
    // Whether rank - |sign| >= 4 or the form is (1) + q(-1) with q <= 7.
    bool in_transitivity_range = false;
};

struct SearchOptions {
    Int generator_bound = 1;
    // Largest support of a reflection vector; 0 means unrestricted (capped at 4 for rank > 8).
    std::size_t max_support = 0;
    // Coordinate cap on intermediate vectors; 0 picks one from the inputs.
    Int working_bound = 0;
    std::size_t node_budget = 200000;
};

bool in_transitivity_range(const BilinearLattice& L);

IsometrySearchResult wall_isometry(const BilinearLattice& L, std::span<const Int> v, std::span<const Int> w,
                                   const SearchOptions& opts = {});

IsometrySearchResult mod2_isometry(const BilinearLattice& L, std::span<const Int> v, std::span<const Int> w,
                                   const SearchOptions& opts = {});

struct Mod2Step {
    IntVector root;        // reflection vector; empty for a coordinate permutation
    IsometryMap map;
    Mod2Class image;
};

/// Explicit reduction of an ordinary class on diag(1, -q), q >= 3, to a fixed
/// representative of its alpha value. Returns the steps in application order.
std::vector<Mod2Step> reduce_standard_class(const BilinearLattice& L, const Mod2Class& x);

struct OrbitOptions {
    Int coord_bound = 3;
    Int generator_bound = 0;   // 0: same as coord_bound
    Int working_bound = 0;     // 0: same as coord_bound
    std::size_t node_budget = 5'000'000;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closure of v under integral reflections with bounded roots, intersected with
/// the coordinate box. Sorted lexicographically.
std::vector<IntVector> orbit_enumerate(const BilinearLattice& L, std::span<const Int> v, const OrbitOptions& opts = {});

/// Primitive roots (norm in `norms`) with |u_i| <= bound and support <= max_support,
/// one per +-pair, the first nonzero coordinate positive.
std::vector<IntVector> bounded_roots(const BilinearLattice& L, Int bound, std::span<const Int> norms,
                                     std::size_t max_support = 0);

} // namespace mori
