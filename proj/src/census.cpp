#include "mori/classifier.hpp"

#include <sstream>

namespace mori {

std::optional<CensusFamily> parse_census_family(std::string_view s)
{
    if (s == "dp1")
        return CensusFamily::DelPezzo;
    if (s == "cb-smooth")
        return CensusFamily::SmoothConic;
    if (s == "cb-singular")
        return CensusFamily::SingularConic;
    if (s == "fano")
        return CensusFamily::Fano;
    return std::nullopt;
}

const char* to_string(CensusFamily f)
{
    switch (f) {
    case CensusFamily::DelPezzo: return "dp1";
    case CensusFamily::SmoothConic: return "cb-smooth";
    case CensusFamily::SingularConic: return "cb-singular";
    case CensusFamily::Fano: return "fano";
    }
    return "?";
}

namespace {

bool range_touches(const CensusBounds& b, const char* name, auto pred)
{
    const auto it = b.ranges.find(name);
    if (it == b.ranges.end())
        return false;
    for (Int v = it->second.first; v <= it->second.second; ++v)
        if (pred(v))
            return true;
    return false;
}

// Inclusive integer range; throws when missing or empty.
std::pair<Int, Int> range(const CensusBounds& b, const std::string& name)
{
    const auto it = b.ranges.find(name);
    if (it == b.ranges.end())
        throw CensusError("census needs --min-" + name + " and --max-" + name);
    if (it->second.first > it->second.second)
        throw CensusError("empty range for " + name);
    return it->second;
}

struct Enumerated {
    MfsDescription description;
    std::string example;
};

// Calls fn on every vector with coordinates in [lo, hi].
template <class Fn>
void for_each_box_vector(std::size_t n, Int lo, Int hi, Fn&& fn)
{
    IntVector v(n, lo);
    for (;;) {
        fn(v);
        std::size_t k = n;
        while (k > 0 && v[k - 1] == hi)
            v[--k] = lo;
        if (k == 0)
            return;
        ++v[k - 1];
    }
}

} // namespace

std::vector<std::string> census_required_bounds(CensusFamily f, const CensusBounds& b)
{
    switch (f) {
    case CensusFamily::Fano:
        return {"degree", "eX"};
    case CensusFamily::SmoothConic:
        return {"c1E", "c2E"};
    case CensusFamily::SingularConic:
        return {"c1rel", "c2rel"};
    case CensusFamily::DelPezzo: {
        std::vector<std::string> need{"K"};
        if (range_touches(b, "K", [](Int k) { return k == 8 || k == 9; }))
            need.push_back("twist");
        if (range_touches(b, "K", [](Int k) { return k >= 1 && k <= 6; })) {
            need.push_back("relK3");
            need.push_back("eX");
        }
        return need;
    }
    }
    return {};
}

std::vector<CensusClass> census(CensusFamily family, const CensusBounds& bounds, std::size_t max_models)
{
    for (const auto& name : census_required_bounds(family, bounds))
        range(bounds, name);
    const bool conic = family == CensusFamily::SmoothConic || family == CensusFamily::SingularConic;
    if (conic && bounds.surfaces.empty())
        throw CensusError("conic bundle census needs --surfaces");

    std::vector<Enumerated> models;
    auto push = [&](MfsDescription d, std::string example) {
        if (models.size() >= max_models)
            throw CensusError("census box holds more than " + std::to_string(max_models) + " inputs");
        models.push_back({std::move(d), std::move(example)});
    };

    switch (family) {
    case CensusFamily::Fano: {
        const auto [dlo, dhi] = range(bounds, "degree");
        const auto [elo, ehi] = range(bounds, "eX");
        for (Int deg = dlo; deg <= dhi; ++deg)
            for (Int e = elo; e <= ehi; ++e)
                push(FanoRankOne{deg, e}, "degree=" + std::to_string(deg) + " eX=" + std::to_string(e));
        break;
    }
    case CensusFamily::DelPezzo: {
        const auto [klo, khi] = range(bounds, "K");
        for (Int K = klo; K <= khi; ++K) {
            if (K < 1 || K > 9 || K == 7)
                continue;
            if (K >= 8) {
                const auto [tlo, thi] = range(bounds, "twist");
                for (Int t = tlo; t <= thi; ++t) {
                    DelPezzoFibration m;
                    m.K = static_cast<int>(K);
                    m.twist = t;
                    push(m, "K=" + std::to_string(K) + " twist=" + std::to_string(t));
                }
                continue;
            }
            std::vector<Int> ds{1};
            if (K == 6) {
                ds = {1, 2, 3, 6};
                if (auto it = bounds.ranges.find("d"); it != bounds.ranges.end())
                    std::erase_if(ds, [&](Int d) { return d < it->second.first || d > it->second.second; });
            }
            const auto [rlo, rhi] = range(bounds, "relK3");
            const auto [elo, ehi] = range(bounds, "eX");
            for (Int d : ds)
                for (Int rel = rlo; rel <= rhi; ++rel)
                    for (Int e = elo; e <= ehi; ++e) {
                        DelPezzoFibration m;
                        m.K = static_cast<int>(K);
                        m.d = d;
                        m.relK3 = rel;
                        m.eX = e;
                        push(m, "K=" + std::to_string(K) + " d=" + std::to_string(d) + " relK3=" +
                                    std::to_string(rel) + " eX=" + std::to_string(e));
                    }
        }
        break;
    }
    case CensusFamily::SmoothConic:
    case CensusFamily::SingularConic: {
        const bool smooth = family == CensusFamily::SmoothConic;
        const auto [vlo, vhi] = range(bounds, smooth ? "c1E" : "c1rel");
        const auto [clo, chi] = range(bounds, smooth ? "c2E" : "c2rel");
        for (const auto& name : bounds.surfaces) {
            const SurfaceData s = standard_surface(name);
            if (s.lattice.rank() > 6)
                throw CensusError("census over '" + name + "' would enumerate a rank " +
                                  std::to_string(s.lattice.rank()) + " box");
            for_each_box_vector(s.lattice.rank(), vlo, vhi, [&](const IntVector& v) {
                for (Int c2 = clo; c2 <= chi; ++c2) {
                    std::string ex = "Y=" + name + (smooth ? " c1E=" : " c1rel=") + vector_to_string(v) +
                                     (smooth ? " c2E=" : " c2rel=") + std::to_string(c2);
                    if (smooth)
                        push(SmoothConicBundle{s, v, c2}, std::move(ex));
                    else
                        push(SingularConicBundle{s, v, c2}, std::move(ex));
                }
            });
        }
        break;
    }
    }

    std::vector<CensusClass> classes;
    std::map<std::string, std::size_t> exact; // identical records skip the pairwise scan
    for (auto& m : models) {
        InvariantRecord r;
        try {
            r = invariants(m.description);
        } catch (const ModelError&) {
            continue;
        }
        if (!hodge_feasibility(r).feasible)
            continue;
        std::ostringstream key;
        key << r.base_dim << '|' << to_string(r.kind) << '|' << r.b2 << '|' << r.b3 << '|' << r.e << '|' << r.chi
            << '|' << r.K3.value_or(0) << '|' << r.relK3.value_or(0) << '|' << r.K.value_or(0) << '|'
            << r.d.value_or(0) << '|' << (r.w2_type ? to_string(*r.w2_type) : "-") << '|'
            << r.cf_divisibility.value_or(0) << '|' << r.cf_norm.value_or(0) << '|'
            << (r.cf_type ? to_string(*r.cf_type) : "-") << '|' << (r.x3_mod3_zero ? int(*r.x3_mod3_zero) : -1)
            << '|' << r.degree.value_or(0);
        // records in the exceptional range are not even merged with identical ones
        const bool mergeable = compare(r, r).outcome == Outcome::Diffeomorphic;
        if (auto it = exact.find(key.str()); mergeable && it != exact.end()) {
            ++classes[it->second].count;
            continue;
        }
        std::size_t hit = classes.size();
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (compare(classes[i].representative, r).outcome == Outcome::Diffeomorphic) {
                hit = i;
                break;
            }
        if (hit == classes.size())
            classes.push_back({r, m.example, 0});
        ++classes[hit].count;
        if (mergeable)
            exact.emplace(key.str(), hit);
    }
    return classes;
}

} // namespace mori
