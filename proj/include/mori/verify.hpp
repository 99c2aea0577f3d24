#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mori {

enum class VerifySuite { Lattice, Cubic, Classifier, All };
std::optional<VerifySuite> parse_verify_suite(std::string_view s);

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Self-checks run by `mori-class verify`; deterministic for a given seed.
std::vector<CheckResult> run_verify(VerifySuite suite, std::uint64_t seed = 20240601);

} // namespace mori
