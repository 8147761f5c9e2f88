#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kla/parser.hpp"

using namespace kla;
using kla_test::Rng;

namespace {
const char* abelian_src =
    "algebra ab\n"
    "generators x:1, y:1\n"
    "relations [x,y]\n";

const char* g4_src =
    "algebra g4\n"
    "generators x:1, y:1, z:1, w:1\n"
    "relations [x,y]-[z,w]\n";
} // namespace

TEST_CASE("parse a small abelian presentation") {
    auto p = parse_presentation<Rat>(abelian_src);
    CHECK(p.name == "ab");
    CHECK(p.field.is_rational());
    CHECK(p.gens.size() == 2);
    REQUIRE(p.relations.size() == 1);
    CHECK(p.relations[0].degree == 2);
}

TEST_CASE("parse the surface presentation") {
    auto p = parse_presentation<Rat>(g4_src);
    CHECK(p.gens.size() == 4);
    REQUIRE(p.relations.size() == 1);
    CHECK(p.relations[0].degree == 2);
    CHECK(p.relations[0].coords.size() == 2);
}

TEST_CASE("comments, blank lines and fields") {
    auto p = parse_presentation<Fp>(
        "# Heisenberg over F_101\n"
        "algebra h1\n"
        "field gf(101)\n"
        "\n"
        "generators a:1, b:1\n"
        "relations [a,[a,b]]; [b,[a,b]]  # minimal relations in degree 3\n");
    CHECK(p.field.characteristic() == 101);
    CHECK(p.relations.size() == 2);
    CHECK(peek_field("algebra z\nfield gf(7)\ngenerators t:1\nrelations \n").characteristic() == 7);
}

TEST_CASE("rational coefficients and nesting") {
    auto p = parse_presentation<Rat>(
        "algebra w\n"
        "generators x1:1, x2:2\n"
        "relations 6*[[x2,x1],x2] - [[[x2,x1],x1],x1]\n");
    REQUIRE(p.relations.size() == 1);
    CHECK(p.relations[0].degree == 5);
}

TEST_CASE("parser diagnostics") {
    // unknown generator
    CHECK_THROWS_AS(parse_presentation<Rat>("algebra a\ngenerators x:1\nrelations [x,q]\n"),
                    ParseError);
    // inhomogeneous relation reports both degrees
    try {
        parse_presentation<Rat>("algebra a\ngenerators x:1, y:1, z:1\nrelations [x,y]+z\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("2") != std::string::npos);
        CHECK(msg.find("1") != std::string::npos);
        CHECK(e.line == 3);
    }
    // characteristic 2
    CHECK_THROWS_AS(parse_presentation<Rat>("algebra a\nfield gf(2)\ngenerators x:1\nrelations \n"),
                    ParseError);
    // duplicate generator
    CHECK_THROWS_AS(parse_presentation<Rat>("algebra a\ngenerators x:1, x:1\nrelations \n"),
                    ParseError);
    // malformed nesting
    CHECK_THROWS_AS(parse_presentation<Rat>("algebra a\ngenerators x:1, y:1\nrelations [x,[y]\n"),
                    ParseError);
    // degree-1 relation
    CHECK_THROWS_AS(parse_presentation<Rat>("algebra a\ngenerators x:1, y:1\nrelations x+y\n"),
                    ParseError);
    // identically zero relation
    CHECK_THROWS_AS(parse_presentation<Rat>("algebra a\ngenerators x:1\nrelations [x,x]\n"),
                    ParseError);
}

TEST_CASE("graph parsing") {
    GraphSpec c4 = parse_graph("graph c4\nvertices a b c d\nedges a-b b-c c-d d-a\n");
    CHECK(c4.n() == 4);
    CHECK(c4.e() == 4);
    CHECK(c4.adjacent(0, 1));
    CHECK_FALSE(c4.adjacent(0, 2));

    GraphSpec p4 = parse_graph("graph p4\nvertices a b c d\nedges a-b b-c c-d\n");
    CHECK(p4.e() == 3);

    CHECK_THROWS_AS(parse_graph("graph g\nvertices a\nedges a-a\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("graph g\nvertices a b\nedges a-c\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("graph g\nvertices a b\nedges a-b a-b\n"), ParseError);
}

TEST_CASE("render round-trips") {
    for (const char* src : {abelian_src, g4_src}) {
        auto p = parse_presentation<Rat>(src);
        auto q = parse_presentation<Rat>(render(p));
        CHECK(q.name == p.name);
        CHECK(q.gens == p.gens);
        REQUIRE(q.relations.size() == p.relations.size());
        for (std::size_t i = 0; i < p.relations.size(); ++i) {
            CHECK(q.relations[i].degree == p.relations[i].degree);
            CHECK(q.relations[i].coords == p.relations[i].coords);
        }
    }
    GraphSpec g = parse_graph("graph g\nvertices a b c\nedges a-b\n");
    GraphSpec g2 = parse_graph(render(g));
    CHECK(g2.vertices == g.vertices);
    CHECK(g2.edges == g.edges);
}

TEST_CASE("fuzzed near-misses always produce a located diagnostic") {
    const std::string base =
        "algebra fuzz\n"
        "field gf(101)\n"
        "generators x:1, y:1, z:2\n"
        "relations [x,[x,y]]; 3*[z,x] - [z,y]\n";
    Rng rng(2024);
    const std::string garbage = "[],;:*/+-#()happy123 \n\tq";
    int parse_errors = 0;
    for (int iter = 0; iter < 50; ++iter) {
        std::string s = base;
        int mutations = static_cast<int>(rng.range(1, 3));
        for (int m = 0; m < mutations; ++m) {
            std::size_t pos = static_cast<std::size_t>(rng.below(static_cast<long>(s.size())));
            switch (rng.below(3)) {
            case 0: s.erase(pos, 1); break;
            case 1: s.insert(pos, 1, garbage[rng.below(static_cast<long>(garbage.size()))]); break;
            default: s[pos] = garbage[rng.below(static_cast<long>(garbage.size()))]; break;
            }
        }
        try {
            auto p = parse_presentation<Fp>(s);
            (void)p; // mutation may still be valid
        } catch (const ParseError& e) {
            ++parse_errors;
            CHECK(e.line >= 1);
            CHECK(e.col >= 1);
        }
        // anything else escaping would fail the test by Catch2's default
    }
    CHECK(parse_errors > 20); // most mutations should be caught as errors
}
