#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kla/matrix.hpp"

using namespace kla;
using kla_test::Rng;

TEST_CASE("identity matrix") {
    FieldSpec fs = FieldSpec::rationals();
    ExactMatrix<Rat> m(3, 3, fs);
    for (int i = 0; i < 3; ++i) m.set(i, i, Rat(1));
    auto rk = rank_kernel(m);
    CHECK(rk.rank == 3);
    CHECK(rk.kernel.empty());
}

TEST_CASE("zero matrix") {
    FieldSpec fs = FieldSpec::rationals();
    ExactMatrix<Rat> m(2, 5, fs);
    auto rk = rank_kernel(m);
    CHECK(rk.rank == 0);
    CHECK(rk.kernel.size() == 5);
}

TEST_CASE("rank-one matrix with hand-eliminated kernel") {
    FieldSpec fs = FieldSpec::rationals();
    ExactMatrix<Rat> m(2, 2, fs);
    m.set(0, 0, Rat(1));
    m.set(0, 1, Rat(2));
    m.set(1, 0, Rat(2));
    m.set(1, 1, Rat(4));
    auto rk = rank_kernel(m);
    REQUIRE(rk.rank == 1);
    REQUIRE(rk.kernel.size() == 1);
    SVec<Rat> expect;
    expect[0] = Rat(2);
    expect[1] = Rat(-1);
    CHECK(rk.kernel[0] == expect);
}

TEST_CASE("kernel vectors are exactly annihilated") {
    Rng rng(11);
    FieldSpec fs = FieldSpec::rationals();
    for (int iter = 0; iter < 30; ++iter) {
        int rows = static_cast<int>(rng.range(1, 6));
        int cols = static_cast<int>(rng.range(1, 6));
        ExactMatrix<Rat> m(rows, cols, fs);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                long v = rng.range(-3, 3);
                if (v) m.set(r, c, rat(v));
            }
        auto rk = rank_kernel(m);
        CHECK(rk.rank + static_cast<int>(rk.kernel.size()) == cols);
        for (const auto& v : rk.kernel)
            for (int r = 0; r < rows; ++r) {
                Rat acc(0);
                for (auto& [c, x] : v) {
                    auto it = m.a.find({r, c});
                    if (it != m.a.end()) acc += it->second * x;
                }
                CHECK(sgn(acc) == 0);
            }
    }
}

TEST_CASE("rank is invariant under row permutation over F_101") {
    Rng rng(3);
    FieldSpec fs = FieldSpec::prime(101);
    for (int iter = 0; iter < 50; ++iter) {
        int rows = static_cast<int>(rng.range(2, 7));
        int cols = static_cast<int>(rng.range(2, 7));
        std::vector<std::vector<Fp>> rowsv(rows, std::vector<Fp>(cols, Field<Fp>::zero(fs)));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                rowsv[r][c] = Field<Fp>::from_long(fs, rng.below(101));
        ExactMatrix<Fp> m(rows, cols, fs);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m.set(r, c, rowsv[r][c]);
        int rank1 = rank_kernel(m).rank;
        std::vector<int> perm(rows);
        for (int i = 0; i < rows; ++i) perm[i] = i;
        for (int i = rows - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(i + 1)]);
        ExactMatrix<Fp> mp(rows, cols, fs);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) mp.set(r, c, rowsv[perm[r]][c]);
        CHECK(rank_kernel(mp).rank == rank1);
        CHECK(rank1 == kla_test::dense_rank(fs, rowsv));
    }
}

TEST_CASE("span solver recovers coefficients") {
    FieldSpec fs = FieldSpec::rationals();
    SpanSolver<Rat> solver(fs, 3);
    SVec<Rat> a, b;
    a[0] = Rat(1); a[1] = Rat(1);
    b[1] = Rat(2); b[2] = Rat(1);
    solver.add(a);
    solver.add(b);
    SVec<Rat> target;
    target[0] = Rat(2); target[1] = Rat(5); target[2] = rat(3, 2);
    auto sol = solver.solve(target);
    REQUIRE(sol.has_value());
    SVec<Rat> rebuilt;
    for (auto& [idx, c] : *sol) sv_axpy(rebuilt, c, idx == 0 ? a : b);
    CHECK(rebuilt == target);
    SVec<Rat> outside;
    outside[0] = Rat(1);
    CHECK_FALSE(solver.solve(outside).has_value());
}
