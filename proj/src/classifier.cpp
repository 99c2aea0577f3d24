#include "mori/classifier.hpp"

#include <sstream>

namespace mori {

const char* to_string(Outcome o)
{
    switch (o) {
    case Outcome::Diffeomorphic: return "Diffeomorphic";
    case Outcome::NotDiffeomorphic: return "NotDiffeomorphic";
    case Outcome::UndeterminedFinite: return "UndeterminedFinite";
    }
    return "?";
}

const char* to_string(Branch b)
{
    switch (b) {
    case Branch::A: return "A";
    case Branch::APrime: return "A'";
    case Branch::B: return "B";
    case Branch::BPrime: return "B'";
    case Branch::KCase: return "K-case";
    case Branch::Degree: return "degree";
    case Branch::Cross: return "cross";
    case Branch::None: return "none";
    }
    return "?";
}

namespace {

template <class T>
std::string show(const std::optional<T>& v)
{
    if (!v)
        return "-";
    std::ostringstream os;
    if constexpr (std::is_same_v<T, W2Type> || std::is_same_v<T, VectorType>)
        os << to_string(*v);
    else if constexpr (std::is_same_v<T, bool>)
        os << (*v ? "0" : "nonzero");
    else
        os << *v;
    return os.str();
}

std::string show(Int v) { return std::to_string(v); }

// Appends "name: a vs b" and returns whether the values agree.
template <class T>
bool same(std::vector<std::string>& reasons, const char* name, const T& a, const T& b)
{
    const bool eq = a == b;
    reasons.push_back(std::string(name) + ": " + show(a) + (eq ? " == " : " != ") + show(b));
    return eq;
}

Verdict verdict(Outcome o, Branch b, std::vector<std::string> reasons)
{
    return {o, b, std::move(reasons)};
}

bool prime_excluded(const InvariantRecord& r)
{
    return r.b2 % 2 == 0 || r.e + r.b3 >= 12 * r.chi;
}

Verdict compare_rank_one(const InvariantRecord& a, const InvariantRecord& b)
{
    std::vector<std::string> why;
    const bool ok = same(why, "degree", a.degree, b.degree) & same(why, "e", a.e, b.e);
    return verdict(ok ? Outcome::Diffeomorphic : Outcome::NotDiffeomorphic, Branch::Degree, std::move(why));
}

Verdict compare_delpezzo(const InvariantRecord& a, const InvariantRecord& b)
{
    std::vector<std::string> why;
    if (!same(why, "K", a.K, b.K))
        return verdict(Outcome::NotDiffeomorphic, Branch::KCase, std::move(why));
    const Int K = *a.K;
    bool ok = false;
    if (K == 9) {
        ok = same(why, "x3_mod3", a.x3_mod3_zero, b.x3_mod3_zero);
    } else if (K == 8) {
        ok = same(why, "relK3", a.relK3, b.relK3);
    } else {
        ok = same(why, "d", a.d, b.d) & same(why, "e", a.e, b.e);
        if (ok) {
            const Int d = *a.d;
            const Int shift = 12 * (d - 1) * K / d;
            if (*a.relK3 == *b.relK3) {
                why.push_back("relK3: " + show(a.relK3) + " == " + show(b.relK3));
            } else if (*a.relK3 == -*b.relK3 - shift) {
                why.push_back("relK3: " + show(a.relK3) + " == -(" + show(b.relK3) + ") - " + std::to_string(shift));
            } else {
                why.push_back("relK3: " + show(a.relK3) + " matches neither " + show(b.relK3) + " nor -(" +
                              show(b.relK3) + ") - " + std::to_string(shift));
                ok = false;
            }
        }
    }
    return verdict(ok ? Outcome::Diffeomorphic : Outcome::NotDiffeomorphic, Branch::KCase, std::move(why));
}

Verdict compare_smooth(const InvariantRecord& a, const InvariantRecord& b)
{
    std::vector<std::string> why;
    if (!(same(why, "w2_type", a.w2_type, b.w2_type) & same(why, "e", a.e, b.e)))
        return verdict(Outcome::NotDiffeomorphic, Branch::None, std::move(why));
    if (a.chi == b.chi && a.K3 == b.K3) {
        same(why, "chi", a.chi, b.chi);
        same(why, "K3", a.K3, b.K3);
        return verdict(Outcome::Diffeomorphic, Branch::A, std::move(why));
    }
    why.push_back("A: chi " + show(a.chi) + "/" + show(b.chi) + ", K3 " + show(a.K3) + "/" + show(b.K3) +
                  " do not both agree");
    const bool excluded = prime_excluded(a) || prime_excluded(b);
    if (4 * (a.chi + b.chi) == a.e && *a.K3 + *b.K3 == -12 * a.e) {
        if (excluded) {
            why.push_back("A': identities hold but b2 is even or e + b3 >= 12 chi");
            return verdict(Outcome::NotDiffeomorphic, Branch::None, std::move(why));
        }
        why.push_back("A': chi + chi' = e/4 = " + std::to_string(a.e / 4) + ", K3 + K3' = -12e = " +
                      std::to_string(-12 * a.e));
        return verdict(Outcome::Diffeomorphic, Branch::APrime, std::move(why));
    }
    why.push_back("A': chi + chi' = " + std::to_string(a.chi + b.chi) + " vs e/4, K3 + K3' = " +
                  std::to_string(*a.K3 + *b.K3) + " vs " + std::to_string(-12 * a.e));
    return verdict(Outcome::NotDiffeomorphic, Branch::None, std::move(why));
}

Verdict compare_singular(const InvariantRecord& a, const InvariantRecord& b)
{
    std::vector<std::string> why;
    bool ok = same(why, "w2_type", a.w2_type, b.w2_type);
    ok = same(why, "e", a.e, b.e) & ok;
    ok = same(why, "b3", a.b3, b.b3) & ok;
    ok = same(why, "cf_divisibility", a.cf_divisibility, b.cf_divisibility) & ok;
    ok = same(why, "cf_type", a.cf_type, b.cf_type) & ok;
    if (!ok)
        return verdict(Outcome::NotDiffeomorphic, Branch::None, std::move(why));

    Branch fired = Branch::None;
    if (a.chi == b.chi && a.K3 == b.K3 && a.cf_norm == b.cf_norm) {
        same(why, "chi", a.chi, b.chi);
        same(why, "K3", a.K3, b.K3);
        same(why, "cf_norm", a.cf_norm, b.cf_norm);
        fired = Branch::B;
    } else {
        why.push_back("B: chi, K3 and cf_norm do not all agree");
        // chi + chi' = (e + b3)/4 and K3 + K3' = -12e - 18b3 for an anti-isometric base
        const bool ids = 4 * (a.chi + b.chi) == a.e + a.b3 && *a.K3 + *b.K3 == -12 * a.e - 18 * a.b3 &&
                         *a.cf_norm == -*b.cf_norm;
        if (ids && !(prime_excluded(a) || prime_excluded(b))) {
            why.push_back("B': chi + chi' = (e + b3)/4, K3 + K3' = -12e - 18b3, opposite cf_norm");
            fired = Branch::BPrime;
        } else if (ids) {
            why.push_back("B': identities hold but b2 is even or e + b3 >= 12 chi");
        } else {
            why.push_back("B': chi + chi' = " + std::to_string(a.chi + b.chi) + ", K3 + K3' = " +
                          std::to_string(*a.K3 + *b.K3) + ", cf_norm " + show(a.cf_norm) + "/" + show(b.cf_norm));
        }
    }
    if (fired == Branch::None)
        return verdict(Outcome::NotDiffeomorphic, Branch::None, std::move(why));
    if ((a.chi == 1 || b.chi == 1) && (a.b2 >= 10 || b.b2 >= 10)) {
        why.push_back("exceptional range: chi = 1 and b2 >= 10; the conditions leave finitely many types");
        why.push_back("note: the range bound is read as b2 >= 10 (a b2 <= 10 reading also appears in the literature)");
        return verdict(Outcome::UndeterminedFinite, fired, std::move(why));
    }
    return verdict(Outcome::Diffeomorphic, fired, std::move(why));
}

Verdict compare_same_dim(const InvariantRecord& a, const InvariantRecord& b)
{
    switch (a.base_dim) {
    case 0: return compare_rank_one(a, b);
    case 1: return compare_delpezzo(a, b);
    default:
        if (a.kind != b.kind)
            return verdict(Outcome::NotDiffeomorphic, Branch::None,
                           {std::string("kind: ") + to_string(a.kind) + " != " + to_string(b.kind) +
                            " (squares generate sublattices of different index)"});
        return a.kind == FibrationKind::Smooth ? compare_smooth(a, b) : compare_singular(a, b);
    }
}

} // namespace

Verdict compare(const InvariantRecord& a, const InvariantRecord& b)
{
    validate_record(a);
    validate_record(b);
    if (a.base_dim == b.base_dim) {
        Verdict v = compare_same_dim(a, b);
        if ((v.branch == Branch::APrime || v.branch == Branch::BPrime) && (prime_excluded(a) || prime_excluded(b)))
            throw std::logic_error("primed branch fired on an excluded record");
        return v;
    }
    std::vector<std::string> why;
    why.push_back("base_dim: " + std::to_string(a.base_dim) + " != " + std::to_string(b.base_dim));
    if (a.base_dim == 0 || b.base_dim == 0) {
        why.push_back("b2 = 1 on one side only");
        return verdict(Outcome::NotDiffeomorphic, Branch::Cross, std::move(why));
    }
    const InvariantRecord& one = a.base_dim == 1 ? a : b;
    const InvariantRecord& two = a.base_dim == 1 ? b : a;
    const CanonicalRecords& c = canonical_records();
    auto matches = [](const InvariantRecord& r, const InvariantRecord& ref) {
        return compare_same_dim(r, ref).outcome == Outcome::Diffeomorphic;
    };
    if (matches(one, c.p2xp1_dim1) && matches(two, c.p2xp1_dim2)) {
        why.push_back("both sides are diffeomorphic to P2 x P1");
        return verdict(Outcome::Diffeomorphic, Branch::Cross, std::move(why));
    }
    if (matches(one, c.fano_x_dim1) && matches(two, c.fano_x_dim2)) {
        why.push_back("both sides are diffeomorphic to the rank-two Fano threefold with b3 = 40");
        return verdict(Outcome::Diffeomorphic, Branch::Cross, std::move(why));
    }
    why.push_back("not both P2 x P1 and not both the b3 = 40 Fano threefold");
    return verdict(Outcome::NotDiffeomorphic, Branch::Cross, std::move(why));
}

std::vector<MfsModel> canonical_models()
{
    DelPezzoFibration p2xp1_1;
    p2xp1_1.K = 9;
    p2xp1_1.twist = 0;
    DelPezzoFibration x_1;
    x_1.K = 2;
    x_1.relK3 = 6;
    x_1.eX = -34;
    return {
        {"P2xP1 over P1", p2xp1_1},
        {"P2xP1 over P2", SmoothConicBundle{standard_surface("P2"), {0}, 0}},
        {"Fano b3=40 over P1", x_1},
        {"Fano b3=40 over P2", SingularConicBundle{standard_surface("P2"), {-8}, -8}},
    };
}

const CanonicalRecords& canonical_records()
{
    static const CanonicalRecords records = [] {
        const auto m = canonical_models();
        return CanonicalRecords{invariants(m[0].description), invariants(m[1].description),
                                invariants(m[2].description), invariants(m[3].description)};
    }();
    return records;
}

} // namespace mori
