#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kla/hnn.hpp"
#include "kla/graph.hpp"
#include "kla/parser.hpp"

using namespace kla;

namespace {

Presentation<Rat> parse(const std::string& s) { return parse_presentation<Rat>(s); }

const char* g4_src = "algebra g4\ngenerators x:1, y:1, z:1, w:1\nrelations [x,y]-[z,w]\n";
const char* h2_src =
    "algebra h2\ngenerators x1:1, y1:1, x2:1, y2:1\n"
    "relations [x1,x2]; [y1,y2]; [x1,y2]; [x2,y1]; [x2,y2]-[x1,y1]\n";
const char* twogen_src =
    "algebra tg\ngenerators x:1, y:1, z:1, w:1\nrelations [x,y]-[z,w]; [x,w]; [x,z]\n";
const char* wplus_src =
    "algebra wplus\ngenerators x1:1, x2:2\n"
    "relations 6*[[x2,x1],x2] - [[[x2,x1],x1],x1]; "
    "9*[[[x2,x1],x1],[x2,x1]] - [[[[x2,x1],x1],x1],x2]\n";

SVec<Rat> unit_vec(int i) {
    SVec<Rat> v;
    sv_set(v, i, Rat(1));
    return v;
}

std::vector<int> dims1(const AlgebraTable<Rat>& t) {
    return std::vector<int>(t.t.dims.begin() + 1, t.t.dims.end());
}

} // namespace

TEST_CASE("zero derivations validate") {
    auto M = expand_tables(parse("algebra f2\ngenerators y:1, z:1\nrelations \n"), 5);
    DerivationSpec<Rat> d;
    d.degree = 1;
    d.domain = {unit_vec(0), unit_vec(1)};
    d.values = {{}, {}};
    CHECK(validate_derivation(M.t, d, 5).ok);
}

TEST_CASE("the free-algebra derivation of the two-generator example validates") {
    // M free on y, z, w; phi: y -> [z,w], z,w -> 0
    auto Mp = parse("algebra m\ngenerators y:1, z:1, w:1\nrelations \n");
    auto M = expand_tables(Mp, 6);
    DerivationSpec<Rat> d;
    d.degree = 1;
    d.domain = {unit_vec(0), unit_vec(1), unit_vec(2)};
    SVec<Rat> zw = M.project(2, [&] {
        LieElem<Rat> z{1, unit_vec(1)}, w{1, unit_vec(2)};
        return bracket(*Mp.free, Mp.field, z, w).coords;
    }());
    d.values = {zw, {}, {}};
    CHECK(validate_derivation(M.t, d, 6).ok);
}

TEST_CASE("a non-derivation on an abelian pair is caught at degree 2") {
    auto M = expand_tables(parse("algebra ab\ngenerators t1:1, x1:1\nrelations [t1,x1]\n"), 4);
    DerivationSpec<Rat> d;
    d.degree = 1;
    d.domain = {unit_vec(0), unit_vec(1)};
    // [phi(t1), x1] + [t1, phi(x1)] must vanish; choosing phi(t1) = [t1,x1]
    // fails because that bracket is zero in M while ... pick table values:
    // L_2 = 0 here, so instead use values in a bigger ambient: an abelian
    // pair inside the free algebra on three letters
    auto Mp = parse("algebra m\ngenerators t1:1, x1:1, c:1\nrelations [t1,x1]\n");
    auto T = expand_tables(Mp, 4);
    DerivationSpec<Rat> bad;
    bad.degree = 1;
    bad.domain = {unit_vec(0), unit_vec(1)};
    // phi(t1) = [t1,c], phi(x1) = 0: Leibniz on [t1,x1] = 0 forces
    // [[t1,c],x1] = 0, which is false in T
    SVec<Rat> t1c = T.project(2, [&] {
        LieElem<Rat> t1{1, unit_vec(0)}, c{1, unit_vec(2)};
        return bracket(*Mp.free, Mp.field, t1, c).coords;
    }());
    bad.values = {t1c, {}};
    auto res = validate_derivation(T.t, bad, 4);
    CHECK_FALSE(res.ok);
    CHECK(res.violation_degree == 2);
    (void)M;
}

TEST_CASE("hnn compose with the zero derivation is the direct sum") {
    auto m = parse("algebra m\ngenerators a:1, b:1\nrelations [a,b]\n");
    PresDerivation<Rat> d;
    d.degree = 1;
    d.domain = {unit_vec(0), unit_vec(1)};
    d.values = {LieElem<Rat>{2, {}}, LieElem<Rat>{2, {}}};
    auto composed = hnn_compose(m, d, "t", 4);
    GeneratorSet tg;
    tg.add("t", 1);
    auto expected = direct_sum(m, Presentation<Rat>("t", m.field, tg));
    auto t1 = expand_tables(composed, 5);
    auto t2 = expand_tables(expected, 5);
    CHECK(t1.t.dims == t2.t.dims);
}

TEST_CASE("hnn compose rebuilds a raag from a deleted vertex") {
    GraphSpec p3 = parse_graph("graph p3\nvertices a b c\nedges a-b b-c\n");
    GraphSpec without = p3.induced({0, 1}); // a - b
    auto base = raag_presentation<Rat>(without);
    PresDerivation<Rat> d;
    d.degree = 1;
    d.domain = {unit_vec(1)}; // neighbors of c: {b}
    d.values = {LieElem<Rat>{2, {}}};
    auto composed = hnn_compose(base, d, "c", 4);
    auto direct = raag_presentation<Rat>(p3);
    auto t1 = expand_tables(composed, 5);
    auto t2 = expand_tables(direct, 5);
    CHECK(t1.t.dims == t2.t.dims);
}

TEST_CASE("hnn compose of the free-algebra derivation matches the paper's example") {
    auto m = parse("algebra m\ngenerators y:1, z:1, w:1\nrelations \n");
    PresDerivation<Rat> d;
    d.degree = 1;
    d.domain = {unit_vec(0), unit_vec(1), unit_vec(2)};
    LieElem<Rat> zw;
    {
        LieElem<Rat> z{1, unit_vec(1)}, w{1, unit_vec(2)};
        zw = bracket(*m.free, m.field, z, w);
    }
    d.values = {zw, LieElem<Rat>{2, {}}, LieElem<Rat>{2, {}}};
    auto composed = hnn_compose(m, d, "t", 5);
    CHECK(composed.gens.size() == 4);
    CHECK(composed.relations.size() == 3);
    auto t1 = expand_tables(composed, 6);
    auto t2 = expand_tables(parse(twogen_src), 6);
    CHECK(t1.t.dims == t2.t.dims);
}

TEST_CASE("hnn decomposition of the surface algebra") {
    auto p = parse(g4_src);
    auto dec = hnn_decompose(p, 0); // x
    CHECK(dec.m.gens.names == std::vector<std::string>{"y", "z", "w"});
    CHECK(dec.m.relations.empty()); // free
    REQUIRE(dec.domain.size() == 1);
    CHECK(dec.domain[0] == unit_vec(0)); // A_1 = span{y}
    // phi(y) = [z,w] in F(y,z,w): pair (z,w) has coordinate index 2
    REQUIRE(dec.values.size() == 1);
    CHECK(dec.values[0].degree == 2);
    auto tr = expand_tables(dec.reconstruction, 6);
    auto tp = expand_tables(p, 6);
    CHECK(tr.t.dims == tp.t.dims);
}

TEST_CASE("hnn decomposition of a direct sum splits off the letter") {
    auto m = parse("algebra m\ngenerators a:1, b:1\nrelations [a,b]\n");
    GeneratorSet tg;
    tg.add("t", 1);
    auto p = direct_sum(m, Presentation<Rat>("t", m.field, tg));
    auto dec = hnn_decompose(p, 2); // x = t
    CHECK(dec.m.gens.size() == 2);
    REQUIRE(dec.domain.size() == 2); // A_1 = M_1
    for (auto& v : dec.values) CHECK(v.is_zero());
}

TEST_CASE("hnn decomposition of h2 at x2") {
    auto p = parse(h2_src);
    auto dec = hnn_decompose(p, 2); // x = x2 (index 2)
    CHECK(dec.m.gens.names == std::vector<std::string>{"x1", "y1", "y2"});
    REQUIRE(dec.domain.size() == 3); // A_1 = span{x1, y1, y2}
    // phi vanishes on x1, y1 and sends y2 to [x1,y1]
    std::map<int, LieElem<Rat>> by_pivot;
    for (std::size_t i = 0; i < dec.domain.size(); ++i)
        by_pivot[dec.domain[i].begin()->first] = dec.values[i];
    CHECK(by_pivot.at(0).is_zero());
    CHECK(by_pivot.at(1).is_zero());
    CHECK_FALSE(by_pivot.at(2).is_zero());
    auto tr = expand_tables(dec.reconstruction, 5);
    auto tp = expand_tables(p, 5);
    CHECK(tr.t.dims == tp.t.dims);
}

TEST_CASE("compose-decompose preserves hilbert series across the corpus") {
    for (const char* src : {g4_src, h2_src, twogen_src}) {
        auto p = parse(src);
        for (int x = 0; x < p.gens.size(); ++x) {
            auto dec = hnn_decompose(p, x);
            auto tr = expand_tables(dec.reconstruction, 5);
            auto tp = expand_tables(p, 5);
            CHECK(tr.t.dims == tp.t.dims);
        }
    }
}

TEST_CASE("betti recursion on the two-generator koszul example") {
    auto L = expand_tables(parse(twogen_src), 5);
    BettiTable bl = betti_table(L.t, 5);
    CHECK(bl.get(1, 1) == 4);
    CHECK(bl.get(2, 2) == 3);
    auto M = expand_tables(parse("algebra m\ngenerators y:1, z:1, w:1\nrelations \n"), 5);
    BettiTable bm = betti_table(M.t, 5);
    // A = M here
    auto rc = betti_recursion_check(bl, bm, bm, 4);
    CHECK(rc.ok);
    // direct sum with <t>: P_L = (1+t) P_M
    auto m = parse("algebra m\ngenerators a:1, b:1\nrelations \n");
    GeneratorSet tg;
    tg.add("t", 1);
    auto sum = direct_sum(m, Presentation<Rat>("t", m.field, tg));
    auto S = expand_tables(sum, 4);
    BettiTable bs = betti_table(S.t, 4);
    auto rc2 = betti_recursion_check(bs, betti_table(expand_tables(m, 4).t, 4),
                                     betti_table(expand_tables(m, 4).t, 4), 3);
    CHECK(rc2.ok);
    // free rank 2 over free rank 1 with empty A: b0(A) = 1 covers b1
    auto f2 = expand_tables(parse("algebra f2\ngenerators x:1, y:1\nrelations \n"), 4);
    auto f1 = expand_tables(parse("algebra f1\ngenerators x:1\nrelations \n"), 4);
    BettiTable empty;
    empty.N = 4;
    empty.entries[{0, 0}] = 1;
    auto rc3 = betti_recursion_check(betti_table(f2.t, 4), betti_table(f1.t, 4), empty, 3);
    CHECK(rc3.ok);
}

TEST_CASE("euler characteristic vanishes for cocyclic-decomposable tables") {
    // A = M decompositions: the two-generator example and the direct sum
    auto L = expand_tables(parse(twogen_src), 5);
    BettiTable bl = betti_table(L.t, 5);
    PolySeries p;
    for (int i = 0; i <= 5; ++i)
        if (bl.get(i, i)) p = p + PolySeries::monomial(i, Rat(bl.get(i, i)));
    CHECK(p.eval(rat(-1)) == 0);
}

TEST_CASE("standardize leaves standard presentations alone") {
    auto p = parse(g4_src);
    auto res = standardize(p);
    CHECK(res.presentation.gens == p.gens);
    CHECK(res.presentation.relations.size() == p.relations.size());
    check_certificate(res.certificate, 4);
    CHECK(res.certificate.dims_match);
}

TEST_CASE("standardize the witt presentation") {
    auto p = parse(wplus_src);
    auto res = standardize(p);
    CHECK(res.presentation.max_generator_degree() == 1);
    CHECK(res.presentation.gens.size() == 2);
    CHECK(res.presentation.relations.size() == 2);
    check_certificate(res.certificate, 8);
    CHECK(res.certificate.dims_match);
    for (int d = 0; d < 8; ++d) CHECK(res.certificate.image_dims[d] == 1);
    // the ambient extension is larger than the image: the stable letter
    // brackets freely against everything outside the derivation domain
    auto T = expand_tables(res.presentation, 8);
    CHECK(dims1(T) == std::vector<int>{2, 1, 2, 3, 5, 7, 13, 20});
}

TEST_CASE("standardize H2 rows are preserved above the eliminated degree") {
    auto p = parse(wplus_src);
    auto res = standardize(p);
    auto before = betti_table(expand_tables(p, 8).t, 8);
    auto after = betti_table(expand_tables(res.presentation, 8).t, 8);
    // one HNN step eliminating the degree-2 generator: H^{2,j} unchanged
    // for j >= 3
    for (int j = 3; j <= 8; ++j) CHECK(before.get(2, j) == after.get(2, j));
}

TEST_CASE("standardize a degree-3 generator in two steps") {
    auto p = parse("algebra s\ngenerators x:1, s:3\nrelations \n");
    auto res = standardize(p);
    CHECK(res.presentation.max_generator_degree() == 1);
    CHECK(res.presentation.gens.size() == 2);
    check_certificate(res.certificate, 6);
    CHECK(res.certificate.dims_match);
}

TEST_CASE("standardize pads purely high-degree presentations") {
    auto p = parse("algebra s\ngenerators s:2\nrelations \n");
    auto res = standardize(p);
    CHECK(res.padded);
    CHECK(res.presentation.max_generator_degree() == 1);
    check_certificate(res.certificate, 5);
    CHECK(res.certificate.dims_match);
}

TEST_CASE("quadratize keeps quadratic presentations") {
    auto p = parse(g4_src);
    auto res = quadratize(p, 5);
    CHECK(res.presentation.is_quadratic_shape());
    CHECK(res.presentation.gens.size() == 4);
    check_certificate(res.certificate, 5);
    CHECK(res.certificate.dims_match);
}

TEST_CASE("quadratize h1") {
    auto p = parse("algebra h1\ngenerators a:1, b:1\nrelations [a,[a,b]]; [b,[a,b]]\n");
    auto res = quadratize(p, 5);
    INFO("output generators: " << res.presentation.gens.size()
                               << ", relations: " << res.presentation.relations.size());
    CHECK(res.presentation.is_quadratic_shape());
    auto T = expand_tables(res.presentation, 5);
    BettiTable bt = betti_table(T.t, 5);
    CHECK(is_quadratic_up_to(bt, 5).pass);
    check_certificate(res.certificate, 5);
    CHECK(res.certificate.dims_match);
    CHECK(res.certificate.source_dims == std::vector<int>{2, 1, 0, 0, 0});
}

TEST_CASE("quadratize the standardized witt algebra inside the window") {
    auto w = parse(wplus_src);
    auto sw = standardize(w);
    auto res = quadratize(sw.presentation, 5);
    WARN("quadratize(SW) size: generators = " << res.presentation.gens.size()
         << ", relations = " << res.presentation.relations.size());
    CHECK(res.presentation.is_quadratic_shape());
    // dropped: the degree-7 relation lies outside the window
    REQUIRE(res.dropped_relation_degrees == std::vector<int>{7});
    // The full window check needs the output expanded to degree 5; the
    // gadget output is too wide for that to be exact desk-scale work, so
    // certify as deep as the cost guard allows and record the depth.
    int depth = 2;
    while (depth < 5 && expansion_cost(res.presentation, depth + 1) <= 60000) ++depth;
    WARN("witt certificate verified to degree " << depth);
    check_certificate(res.certificate, depth);
    CHECK(res.certificate.dims_match);
}
