#pragma once

#include "mori/mfs_model.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mori {

enum class Outcome { Diffeomorphic, NotDiffeomorphic, UndeterminedFinite };
enum class Branch { A, APrime, B, BPrime, KCase, Degree, Cross, None };

const char* to_string(Outcome o);
const char* to_string(Branch b);

struct Verdict {
    Outcome outcome = Outcome::NotDiffeomorphic;
    Branch branch = Branch::None;
    std::vector<std::string> reasons;
};

/// Oriented diffeomorphism decision for two records.
Verdict compare(const InvariantRecord& a, const InvariantRecord& b);

struct CanonicalRecords {
    InvariantRecord p2xp1_dim1;
    InvariantRecord p2xp1_dim2;
    InvariantRecord fano_x_dim1;
    InvariantRecord fano_x_dim2;
};

/// Models of the two spaces admitting Mori fiber structures over bases of
/// different dimension: P2 x P1 and the rank-two Fano threefold with b3 = 40.
std::vector<MfsModel> canonical_models();
const CanonicalRecords& canonical_records();

enum class CensusFamily { DelPezzo, SmoothConic, SingularConic, Fano };
std::optional<CensusFamily> parse_census_family(std::string_view s);
const char* to_string(CensusFamily f);

struct CensusBounds {
    std::map<std::string, std::pair<Int, Int>> ranges;
    std::vector<std::string> surfaces;
};

struct CensusClass {
    InvariantRecord representative;
    std::string example;   // input fields of the first member
    std::size_t count = 0;
};

class CensusError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bound names each family needs (beyond `surfaces` for conic bundles).
std::vector<std::string> census_required_bounds(CensusFamily f, const CensusBounds& b);

/// Enumerates every admissible, feasible record in the box and groups records
/// that compare Diffeomorphic. Refuses when a required bound is missing.
std::vector<CensusClass> census(CensusFamily family, const CensusBounds& bounds,
                                std::size_t max_models = 2'000'000);

} // namespace mori
