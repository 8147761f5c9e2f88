#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kla/parser.hpp"
#include "kla/table.hpp"

using namespace kla;

namespace {

Presentation<Rat> parse(const std::string& s) { return parse_presentation<Rat>(s); }

const char* g4_src = "algebra g4\ngenerators x:1, y:1, z:1, w:1\nrelations [x,y]-[z,w]\n";
const char* h2_src =
    "algebra h2\ngenerators x1:1, y1:1, x2:1, y2:1\n"
    "relations [x1,x2]; [y1,y2]; [x1,y2]; [x2,y1]; [x2,y2]-[x1,y1]\n";
const char* wplus_src =
    "algebra wplus\ngenerators x1:1, x2:2\n"
    "relations 6*[[x2,x1],x2] - [[[x2,x1],x1],x1]; "
    "9*[[[x2,x1],x1],[x2,x1]] - [[[[x2,x1],x1],x1],x2]\n";

std::vector<int> dims_of(const AlgebraTable<Rat>& t) {
    std::vector<int> d(t.t.dims.begin() + 1, t.t.dims.end());
    return d;
}

/// Count PBW monomials of each total degree by explicit enumeration over a
/// basis listed with multiplicities (independent of the series product).
std::vector<long> pbw_counts(const std::vector<int>& dims, int N) {
    std::vector<long> counts(N + 1, 0);
    counts[0] = 1;
    // process basis elements one at a time: each may appear with any power
    for (int d = 1; d <= N; ++d)
        for (int rep = 0; rep < dims[d]; ++rep) {
            std::vector<long> next = counts;
            for (int power = 1; power * d <= N; ++power)
                for (int total = power * d; total <= N; ++total)
                    next[total] += counts[total - power * d];
            counts = std::move(next);
        }
    return counts;
}

} // namespace

TEST_CASE("abelian square collapses above degree 1") {
    auto t = expand_tables(parse("algebra ab\ngenerators x:1, y:1\nrelations [x,y]\n"), 4);
    CHECK(dims_of(t) == std::vector<int>{2, 0, 0, 0});
}

TEST_CASE("surface algebra dimensions from the PBW cross-check") {
    auto t = expand_tables(parse(g4_src), 3);
    CHECK(dims_of(t) == std::vector<int>{4, 5, 16});
    PolySeries hu = hilbert_series_U(t.t);
    PolySeries expect = PolySeries::polynomial({Rat(1), Rat(-4), Rat(1)}).inverse(3);
    CHECK(hu == expect);
}

TEST_CASE("heisenberg h2 is five dimensional") {
    auto t = expand_tables(parse(h2_src), 4);
    CHECK(dims_of(t) == std::vector<int>{4, 1, 0, 0});
    PolySeries hu = hilbert_series_U(t.t);
    CHECK(hu.coeff(1) == 4);
    CHECK(hu.coeff(2) == 11);
    CHECK(hu.coeff(3) == 24);
    CHECK(hu.coeff(4) == 46);
}

TEST_CASE("witt positive part has dimension one in each degree") {
    auto t = expand_tables(parse(wplus_src), 10);
    CHECK(dims_of(t) == std::vector<int>(10, 1));
}

TEST_CASE("hilbert series of U for small algebras") {
    auto ab = expand_tables(parse("algebra a\ngenerators x:1, y:1\nrelations [x,y]\n"), 3);
    PolySeries hu = hilbert_series_U(ab.t);
    CHECK(hu.coeff(0) == 1);
    CHECK(hu.coeff(1) == 2);
    CHECK(hu.coeff(2) == 3);
    CHECK(hu.coeff(3) == 4);

    auto fr = expand_tables(parse("algebra f2\ngenerators x:1, y:1\nrelations \n"), 3);
    PolySeries hf = hilbert_series_U(fr.t);
    CHECK(hf.coeff(0) == 1);
    CHECK(hf.coeff(1) == 2);
    CHECK(hf.coeff(2) == 4);
    CHECK(hf.coeff(3) == 8);
}

TEST_CASE("structure constants satisfy antisymmetry and jacobi exhaustively") {
    auto T = expand_tables(parse(g4_src), 5);
    const auto& t = T.t;
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; a + b <= 4; ++b)
            for (int i = 0; i < t.dim(a); ++i)
                for (int j = 0; j < t.dim(b); ++j) {
                    SVec<Rat> uv = t.bracket_basis(a, i, b, j);
                    SVec<Rat> vu = t.bracket_basis(b, j, a, i);
                    sv_axpy(uv, Rat(1), vu);
                    CHECK(uv.empty());
                }
    // Jacobi on all triples of total degree <= 5 with degrees (1,1,d)
    for (int c = 1; c <= 3; ++c)
        for (int i = 0; i < t.dim(1); ++i)
            for (int j = 0; j < t.dim(1); ++j)
                for (int k = 0; k < t.dim(c); ++k) {
                    SVec<Rat> ei, ej, ek;
                    sv_set(ei, i, Rat(1));
                    sv_set(ej, j, Rat(1));
                    sv_set(ek, k, Rat(1));
                    auto t1 = t.bracket_vec(2, t.bracket_vec(1, ei, 1, ej), c, ek);
                    auto t2 = t.bracket_vec(1 + c, t.bracket_vec(1, ej, c, ek), 1, ei);
                    auto t3 = t.bracket_vec(1 + c, t.bracket_vec(c, ek, 1, ei), 1, ej);
                    sv_axpy(t1, Rat(1), t2);
                    sv_axpy(t1, Rat(1), t3);
                    CHECK(t1.empty());
                }
}

TEST_CASE("ideal closure is idempotent") {
    auto T = expand_tables(parse(h2_src), 5);
    FreeLie& F = *T.pres.free;
    for (int d = 2; d <= T.N; ++d) {
        for (int g = 0; g < T.pres.gens.size(); ++g) {
            int w = T.pres.gens.degrees[g];
            if (d - w < 1) continue;
            SVec<Rat> letter;
            sv_set(letter, F.basis_index(w, Word(1, char(g))), Rat(1));
            for (const auto& row : T.ideal[d - w].rows()) {
                SVec<Rat> v = F.bracket_vec(T.field(), w, letter, d - w, row);
                CHECK(T.ideal[d].contains(std::move(v)));
            }
        }
    }
}

TEST_CASE("pbw monomial enumeration matches the series product") {
    for (const char* src : {g4_src, h2_src}) {
        auto T = expand_tables(parse(src), 4);
        PolySeries hu = hilbert_series_U(T.t);
        auto counts = pbw_counts(T.t.dims, 4);
        for (int d = 0; d <= 4; ++d) CHECK(hu.coeff(d) == counts[d]);
    }
}

TEST_CASE("subalgebra views") {
    SECTION("the full space reproduces the table") {
        auto T = expand_tables(parse(g4_src), 4);
        std::vector<SVec<Rat>> v;
        for (int i = 0; i < 4; ++i) {
            SVec<Rat> e;
            sv_set(e, i, Rat(1));
            v.push_back(e);
        }
        auto S = subalgebra_tables(T.t, v, 4);
        CHECK(S.t.dims == T.t.dims);
    }
    SECTION("h1 inside h2") {
        auto T = expand_tables(parse(h2_src), 4);
        std::vector<SVec<Rat>> v(2);
        sv_set(v[0], 0, Rat(1)); // x1
        sv_set(v[1], 1, Rat(1)); // y1
        auto S = subalgebra_tables(T.t, v, 4);
        CHECK(S.t.dims == std::vector<int>{0, 2, 1, 0, 0});
    }
    SECTION("free rank three inside the surface algebra") {
        auto T = expand_tables(parse(g4_src), 4);
        std::vector<SVec<Rat>> v(3);
        sv_set(v[0], 1, Rat(1)); // y
        sv_set(v[1], 2, Rat(1)); // z
        sv_set(v[2], 3, Rat(1)); // w
        auto S = subalgebra_tables(T.t, v, 4);
        CHECK(S.t.dims == std::vector<int>{0, 3, 3, 8, 18});
    }
    SECTION("dependent generating vectors are rejected") {
        auto T = expand_tables(parse(g4_src), 3);
        std::vector<SVec<Rat>> v(2);
        sv_set(v[0], 0, Rat(1));
        sv_set(v[1], 0, Rat(2));
        CHECK_THROWS_AS(subalgebra_tables(T.t, v, 3), UsageError);
    }
}

TEST_CASE("centers") {
    auto ab = expand_tables(parse("algebra ab\ngenerators x:1, y:1\nrelations [x,y]\n"), 4);
    auto zc = center(ab);
    CHECK(zc.dims[1] == 2);

    auto h2 = expand_tables(parse(h2_src), 5);
    auto zh = center(h2);
    CHECK(zh.dims[1] == 0);
    CHECK(zh.dims[2] == 1);
    CHECK(zh.dims[3] == 0);
    CHECK(zh.dims[4] == 0);

    auto g4 = expand_tables(parse(g4_src), 6);
    auto zg = center(g4);
    for (int d = 1; d <= 5; ++d) CHECK(zg.dims[d] == 0);
}

TEST_CASE("derived and upper central series") {
    auto ab = expand_tables(parse("algebra ab\ngenerators x:1, y:1\nrelations [x,y]\n"), 3);
    auto ds = derived_series(ab.t);
    REQUIRE(ds.size() >= 2);
    CHECK(ds[1] == std::vector<int>{0, 0, 0, 0});
    auto ucs = upper_central_series(ab);
    REQUIRE(!ucs.levels.empty());
    CHECK(ucs.levels[0][1] == 2); // Z_1 = L

    auto h2 = expand_tables(parse(h2_src), 4);
    auto dh = derived_series(h2.t);
    REQUIRE(dh.size() >= 2);
    CHECK(dh[1] == std::vector<int>{0, 0, 1, 0, 0});
    if (dh.size() >= 3) CHECK(dh[2] == std::vector<int>{0, 0, 0, 0, 0});
    auto uh = upper_central_series(h2);
    CHECK(uh.z_infinity == std::vector<int>{0, 4, 1, 0}); // nilpotent: Z_inf = L (cap N-1)

    auto fr = expand_tables(parse("algebra f2\ngenerators x:1, y:1\nrelations \n"), 4);
    auto df = derived_series(fr.t);
    REQUIRE(df.size() >= 2);
    CHECK(df[1] == std::vector<int>{0, 0, 1, 2, 3});
    auto uf = upper_central_series(fr);
    REQUIRE(!uf.levels.empty());
    for (int d = 1; d <= uf.degree_cap; ++d) CHECK(uf.levels.back()[d] == 0);
}

TEST_CASE("subalgebra closure dims for mixed-degree generators") {
    auto fr = expand_tables(parse("algebra f2\ngenerators x:1, y:1\nrelations \n"), 4);
    // x and [x,y] generate: dims 1,1,1,2 within degree 4?  verify against a
    // direct view computation of the same subalgebra
    SVec<Rat> x;
    sv_set(x, 0, Rat(1));
    SVec<Rat> xy;
    sv_set(xy, 0, Rat(1)); // only basis element in degree 2
    auto dims = subalgebra_closure_dims(fr.t, {{1, x}, {2, xy}});
    CHECK(dims[1] == 1);
    CHECK(dims[2] == 1);
    // [x,[x,y]] in degree 3, then degree 4 brackets
    CHECK(dims[3] >= 1);
}
