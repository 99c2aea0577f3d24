#pragma once

#include "mori/cubic_form.hpp"
#include "mori/lattice.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mori {

/// Violated structural constraint; `invariant` names the rule.
class ModelError : public std::invalid_argument {
public:
    ModelError(std::string invariant, const std::string& message)
        : std::invalid_argument(invariant + ": " + message), invariant_(std::move(invariant))
    {
    }
    const std::string& invariant() const { return invariant_; }

private:
    std::string invariant_;
};

struct SurfaceData {
    BilinearLattice lattice;
    IntVector c1Y;
    Int eY = 0;
};

/// Projectivization of a rank-2 bundle E over a surface.
struct SmoothConicBundle {
    SurfaceData surface;
    IntVector c1E;
    Int c2E = 0;
};

/// Conic bundle with nonempty discriminant; u satisfies 2u^2 = c1rel u + c2rel.
struct SingularConicBundle {
    SurfaceData surface;
    IntVector c1rel;
    Int c2rel = 0;
};

struct DelPezzoFibration {
    int K = 0;
    Int d = 1;
    std::optional<Int> relK3;
    std::optional<Int> eX;
    std::optional<Int> twist;
};

struct FanoRankOne {
    Int degree = 0;
    Int eX = 0;
};

using MfsDescription = std::variant<FanoRankOne, DelPezzoFibration, SmoothConicBundle, SingularConicBundle>;

struct MfsModel {
    std::string name;
    MfsDescription description;
};

int base_dimension(const MfsDescription& m);

enum class FibrationKind { Smooth, Singular, None };
enum class W2Type { Zero, I, II, III0, III1 };

const char* to_string(FibrationKind k);
const char* to_string(W2Type t);
std::optional<FibrationKind> parse_fibration_kind(std::string_view s);
std::optional<W2Type> parse_w2_type(std::string_view s);

struct InvariantRecord {
    int base_dim = 0;
    FibrationKind kind = FibrationKind::None;
    Int b2 = 0;
    Int b3 = 0;
    Int e = 0;
    Int chi = 1;
    std::optional<Int> K3;
    std::optional<Int> relK3;
    std::optional<Int> K;
    std::optional<Int> d;
    std::optional<W2Type> w2_type;
    std::optional<Int> cf_divisibility;
    std::optional<Int> cf_norm;
    std::optional<VectorType> cf_type;
    std::optional<bool> x3_mod3_zero;
    std::optional<Int> degree;

    friend bool operator==(const InvariantRecord&, const InvariantRecord&) = default;
};

/// Checks the record's internal bookkeeping; throws ModelError.
void validate_record(const InvariantRecord& r);

/// Returns chi(O_Y); throws ModelError naming the violated invariant.
Int validate_surface(const SurfaceData& s);

InvariantRecord invariants_smooth(const SmoothConicBundle& m);
InvariantRecord invariants_singular(const SingularConicBundle& m);
InvariantRecord invariants_delpezzo(const DelPezzoFibration& m);
InvariantRecord invariants_fano(const FanoRankOne& m);
InvariantRecord invariants(const MfsDescription& m);

/// Cubic form, p1 pairing, w2 and b3 in the basis used by this library:
///   conic bundles: {u, y_1..y_r} with y_i pulled back from the base,
///   del Pezzo fibrations: {x, y} with y the (primitive) fiber class.
/// Not available for rank-one Fano spaces.
WallJuppTriple wall_jupp_triple(const MfsDescription& m);
/// c1(X) in the same basis.
IntVector first_chern_class(const MfsDescription& m);
Int holomorphic_euler(const MfsDescription& m);
/// <c1^3> - <c1 p1> - 48 chi; zero for every valid model.
Int hrr_defect(const MfsDescription& m);

struct FeasibilityReport {
    bool feasible = true;
    bool equality = false;
    // (A')/(B') cannot occur for this record
    bool prime_branches_excluded = false;
    std::vector<std::string> violations;
};

FeasibilityReport hodge_feasibility(const InvariantRecord& r);

/// <c2rel> recovered from a singular record's K3, e, chi and discriminant norm.
Int recover_c2rel(const InvariantRecord& r);

/// Explicit isomorphism of triples for two smooth conic bundles satisfying the
/// matching conditions (same lattice Gram for (A), anti-isometric for (A')).
/// Empty when no lattice map with the required mod-2 property was found.
std::optional<IntMatrix> smooth_bundle_isomorphism(const SmoothConicBundle& a, const SmoothConicBundle& b,
                                                   const SearchOptions& opts = {});

/// Named base surfaces: "P2", "P1xP1", "blowup-N" (P2 blown up in N points), "K3".
SurfaceData standard_surface(std::string_view name);

} // namespace mori
