#include "mori/classifier.hpp"
#include "mori/mfs_format.hpp"
#include "mori/sampling.hpp"

#include <doctest.h>

using namespace mori;

namespace {

ParseError parse_error(const std::string& text)
{
    try {
        parse_mfs(text, "t.mfs");
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error");
    return ParseError("", 0, 0, "");
}

} // namespace

TEST_SUITE("mfs_format") {

TEST_CASE("minimal rank-one file")
{
    const auto m = parse_mfs("[mfs]\nbase_dim = 0\ndegree = 5\ne = 4\n");
    REQUIRE(std::holds_alternative<FanoRankOne>(m.description));
    CHECK(std::get<FanoRankOne>(m.description).degree == 5);
    CHECK(std::get<FanoRankOne>(m.description).eX == 4);
}

TEST_CASE("singular conic bundle with comments and quoted name")
{
    const auto m = parse_mfs(R"(# the b3 = 40 Fano
[mfs]
name = "X # not a comment"
base_dim = 2   # over P2
kind = singular
gram = [[1]]
c1Y = [3]
eY = 3
c1rel = [-8]
c2rel = -8
)");
    CHECK(m.name == "X # not a comment");
    REQUIRE(std::holds_alternative<SingularConicBundle>(m.description));
    const auto r = invariants(m.description);
    CHECK(r.b3 == 40);
    CHECK(r.K3 == -6);
}

TEST_CASE("matrices may span lines")
{
    const auto m = parse_mfs(R"([mfs]
base_dim = 2
kind = smooth
gram = [
  [0, 1],   # hyperbolic plane
  [1, 0]
]
c1Y = [2,
       2]
eY = 4
c1E = [1, 0]
c2E = 0
)");
    const auto& s = std::get<SmoothConicBundle>(m.description);
    CHECK(s.surface.lattice.gram() == IntMatrix{{0, 1}, {1, 0}});
    CHECK(s.surface.c1Y == IntVector{2, 2});
}

TEST_CASE("errors carry file, line and column")
{
    SUBCASE("K = 7")
    {
        const auto e = parse_error("[mfs]\nbase_dim = 1\nK = 7\nrelK3 = 0\neX = 6\n");
        CHECK(e.line() == 3);
        CHECK(e.column() == 5);
        CHECK(std::string(e.what()).find("t.mfs:3:5: ") == 0);
        CHECK(std::string(e.what()).find("K value set") != std::string::npos);
    }
    SUBCASE("unknown key")
    {
        const auto e = parse_error("[mfs]\nbase_dim = 0\ndegree = 5\neX = 4\ncolour = 3\n");
        CHECK(e.line() == 5);
        CHECK(e.column() == 1);
    }
    SUBCASE("key from another family")
    {
        const auto e = parse_error("[mfs]\nbase_dim = 0\ndegree = 5\neX = 4\ntwist = 3\n");
        CHECK(e.line() == 5);
    }
    SUBCASE("duplicate key")
    {
        const auto e = parse_error("[mfs]\nbase_dim = 0\ndegree = 5\ndegree = 6\neX = 4\n");
        CHECK(e.line() == 4);
        CHECK(e.message().find("duplicate") != std::string::npos);
    }
    SUBCASE("e and eX together")
    {
        CHECK(parse_error("[mfs]\nbase_dim = 0\ndegree = 5\ne = 4\neX = 4\n").message().find("both") !=
              std::string::npos);
    }
    SUBCASE("missing key")
    {
        const auto e = parse_error("[mfs]\nbase_dim = 0\ndegree = 5\n");
        CHECK(e.message().find("eX") != std::string::npos);
    }
    SUBCASE("type error")
    {
        const auto e = parse_error("[mfs]\nbase_dim = 0\ndegree = [5]\neX = 4\n");
        CHECK(e.line() == 3);
        CHECK(e.column() == 10);
    }
    SUBCASE("integer overflow")
    {
        const auto e = parse_error("[mfs]\nbase_dim = 0\ndegree = 99999999999999999999\neX = 4\n");
        CHECK(e.message().find("64 bits") != std::string::npos);
    }
    SUBCASE("syntax")
    {
        CHECK(parse_error("[mfs]\nbase_dim 0\n").line() == 2);
        CHECK(parse_error("[mfs]\nbase_dim = 0 0\n").line() == 2);
        CHECK(parse_error("[mfs]\nbase_dim = 2\nkind = smooth\ngram = [[1]\n").message().find("unterminated") !=
              std::string::npos);
        CHECK(parse_error("base_dim = 0\n").line() == 1);
        CHECK(parse_error("[mfs]\nbase_dim = 0\ndegree = 5\neX = 4\n[mfs]\n").line() == 5);
        CHECK(parse_error("[other]\n").line() == 1);
        CHECK(parse_error("").message().find("no [mfs]") != std::string::npos);
    }
    SUBCASE("model errors point at the related key")
    {
        const auto e = parse_error("[mfs]\nbase_dim = 2\nkind = smooth\ngram = [[1]]\nc1Y = [2]\neY = 3\n"
                                   "c1E = [0]\nc2E = 0\n");
        CHECK(e.line() == 5);
        CHECK(e.message().find("Wu relation") != std::string::npos);
        const auto g = parse_error("[mfs]\nbase_dim = 2\nkind = smooth\ngram = [[2, 1], [1, 2]]\nc1Y = [0, 0]\n"
                                   "eY = 4\nc1E = [0, 0]\nc2E = 0\n");
        CHECK(g.line() == 4);
    }
}

TEST_CASE("print then parse is the identity")
{
    for (const auto& m : canonical_models()) {
        const auto back = parse_mfs(print_mfs(m));
        CHECK(back.name == m.name);
        CHECK(print_mfs(back) == print_mfs(m));
        CHECK(invariants(back.description) == invariants(m.description));
    }
    Rng rng(89);
    for (int k = 0; k < 200; ++k) {
        const MfsModel m{"random " + std::to_string(k), random_model(rng, 6)};
        const auto back = parse_mfs(print_mfs(m));
        CHECK(print_mfs(back) == print_mfs(m));
        CHECK(invariants(back.description) == invariants(m.description));
    }
}

TEST_CASE("record round trip")
{
    const auto& c = canonical_records();
    for (const auto* r : {&c.p2xp1_dim1, &c.p2xp1_dim2, &c.fano_x_dim1, &c.fano_x_dim2})
        CHECK(parse_record(print_record(*r)) == *r);
    Rng rng(97);
    for (int k = 0; k < 200; ++k) {
        const auto r = invariants(random_model(rng, 6));
        CHECK(parse_record(print_record(r)) == r);
    }
    CHECK(parse_record("[record]\n" + print_record(c.fano_x_dim2)) == c.fano_x_dim2);
    CHECK_THROWS_AS(parse_record("base_dim=1\n"), ParseError);
}

TEST_CASE("print_record shows the headline values")
{
    const auto s = print_record(canonical_records().fano_x_dim2);
    CHECK(s.find("b3=40\n") != std::string::npos);
    CHECK(s.find("K3=-6\n") != std::string::npos);
}

TEST_CASE("loading a missing file")
{
    CHECK_THROWS_AS(load_mfs("/nonexistent/file.mfs"), ParseError);
}

}
