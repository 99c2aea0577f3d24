#include "mori/classifier.hpp"
#include "mori/mfs_format.hpp"
#include "mori/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <iostream>

using namespace mori;
using nlohmann::json;

namespace {

constexpr int kInputError = 3;

json record_json(const InvariantRecord& r)
{
    json j;
    j["base_dim"] = r.base_dim;
    j["kind"] = to_string(r.kind);
    j["b2"] = r.b2;
    j["b3"] = r.b3;
    j["e"] = r.e;
    j["chi"] = r.chi;
    auto opt = [&](const char* k, const std::optional<Int>& v) {
        if (v)
            j[k] = *v;
    };
    opt("K3", r.K3);
    opt("relK3", r.relK3);
    opt("K", r.K);
    opt("d", r.d);
    if (r.w2_type)
        j["w2_type"] = to_string(*r.w2_type);
    opt("cf_divisibility", r.cf_divisibility);
    opt("cf_norm", r.cf_norm);
    if (r.cf_type)
        j["cf_type"] = to_string(*r.cf_type);
    if (r.x3_mod3_zero)
        j["x3_mod3"] = *r.x3_mod3_zero ? "0" : "nonzero";
    opt("degree", r.degree);
    return j;
}

std::string feasibility_line(const InvariantRecord& r)
{
    const auto f = hodge_feasibility(r);
    std::string s = "# feasibility: ";
    s += f.feasible ? (f.equality ? "feasible (equality e + b3 = 6 chi)" : "feasible") : "infeasible";
    for (const auto& v : f.violations)
        s += "; " + v;
    if (r.base_dim == 2 && f.prime_branches_excluded)
        s += "; primed branches excluded";
    return s;
}

int cmd_invariants(const std::string& path)
{
    try {
        const MfsModel m = load_mfs(path);
        const InvariantRecord r = invariants(m.description);
        if (!m.name.empty())
            std::cout << "# " << m.name << '\n';
        std::cout << print_record(r) << feasibility_line(r) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
}

int cmd_compare(const std::string& a, const std::string& b, bool json_lines)
{
    InvariantRecord ra, rb;
    try {
        ra = invariants(load_mfs(a).description);
        rb = invariants(load_mfs(b).description);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    const Verdict v = compare(ra, rb);
    if (json_lines) {
        std::cout << json{{"record", "a"}, {"file", a}, {"invariants", record_json(ra)}}.dump() << '\n';
        std::cout << json{{"record", "b"}, {"file", b}, {"invariants", record_json(rb)}}.dump() << '\n';
        for (const auto& r : v.reasons)
            std::cout << json{{"reason", r}}.dump() << '\n';
    } else {
        for (const auto& r : v.reasons)
            std::cout << "reason: " << r << '\n';
    }
    std::cout << "verdict=" << to_string(v.outcome) << " branch=" << to_string(v.branch) << '\n';
    switch (v.outcome) {
    case Outcome::Diffeomorphic: return 0;
    case Outcome::NotDiffeomorphic: return 1;
    case Outcome::UndeterminedFinite: return 2;
    }
    return kInputError;
}

std::string record_summary(const InvariantRecord& r)
{
    std::string s = print_record(r);
    for (auto& ch : s)
        if (ch == '\n')
            ch = ' ';
    while (!s.empty() && s.back() == ' ')
        s.pop_back();
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Invariants and oriented diffeomorphism decisions for 3-dimensional Mori fiber spaces"};
    app.require_subcommand(1);

    std::string inv_file;
    auto* inv = app.add_subcommand("invariants", "print the invariant record of a description file");
    inv->add_option("FILE", inv_file)->required();

    std::string cmp_a, cmp_b;
    bool json_lines = false;
    auto* cmp = app.add_subcommand("compare", "decide oriented diffeomorphism of two description files");
    cmp->add_option("A", cmp_a)->required();
    cmp->add_option("B", cmp_b)->required();
    cmp->add_flag("--json-lines", json_lines, "emit records and reasons as JSON lines");

    std::string family;
    std::vector<std::string> surfaces;
    std::map<std::string, Int> lo, hi;
    auto* cen = app.add_subcommand("census", "enumerate a bounded box and group by diffeomorphism type");
    cen->add_option("--family", family, "dp1 | cb-smooth | cb-singular | fano")->required();
    cen->add_option("--surfaces", surfaces, "base surfaces for conic bundles (P2, P1xP1, blowup-N)")
        ->delimiter(',');
    for (const char* name : {"degree", "eX", "K", "d", "relK3", "twist", "c1E", "c2E", "c1rel", "c2rel"}) {
        cen->add_option(std::string("--min-") + name, lo[name]);
        cen->add_option(std::string("--max-") + name, hi[name]);
    }

    std::string suite = "all";
    auto* ver = app.add_subcommand("verify", "run built-in self checks");
    ver->add_option("--suite", suite, "lattice | cubic | classifier | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kInputError;
    }

    if (inv->parsed())
        return cmd_invariants(inv_file);
    if (cmp->parsed())
        return cmd_compare(cmp_a, cmp_b, json_lines);

    if (cen->parsed()) {
        const auto fam = parse_census_family(family);
        if (!fam) {
            std::cerr << "error: unknown family '" << family << "'\n";
            return kInputError;
        }
        CensusBounds bounds;
        bounds.surfaces = surfaces;
        for (const auto& [name, value] : lo) {
            const bool has_lo = cen->count("--min-" + name) > 0, has_hi = cen->count("--max-" + name) > 0;
            if (has_lo != has_hi) {
                std::cerr << "error: --min-" << name << " and --max-" << name << " must be given together\n";
                return kInputError;
            }
            if (has_lo)
                bounds.ranges[name] = {value, hi[name]};
        }
        std::vector<CensusClass> classes;
        try {
            classes = census(*fam, bounds);
        } catch (const std::exception& e) {
            std::cerr << "error: refusing census: " << e.what() << '\n';
            return kInputError;
        }
        std::size_t total = 0;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            total += classes[i].count;
            std::cout << "class " << i + 1 << " count=" << classes[i].count << " example: " << classes[i].example
                      << "\n  " << record_summary(classes[i].representative) << '\n';
        }
        std::cout << "family=" << to_string(*fam) << " classes=" << classes.size() << " records=" << total << '\n';
        return 0;
    }

    const auto s = parse_verify_suite(suite);
    if (!s) {
        std::cerr << "error: unknown suite '" << suite << "'\n";
        return kInputError;
    }
    std::size_t failed = 0;
    const auto results = run_verify(*s);
    for (const auto& r : results) {
        failed += !r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name;
        if (!r.detail.empty())
            std::cout << " (" << r.detail << ')';
        std::cout << '\n';
    }
    std::cout << "checks=" << results.size() << " failed=" << failed << '\n';
    return failed == 0 ? 0 : 1;
}
