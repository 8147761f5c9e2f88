#ifndef KLA_TEST_HELPERS_HPP
#define KLA_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "kla/lyndon.hpp"
#include "kla/matrix.hpp"
#include "kla/presentation.hpp"

namespace kla_test {

using namespace kla;

/// Deterministic bounded integers independent of std:: distribution details.
struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    long below(long n) { return static_cast<long>(g() % static_cast<std::uint64_t>(n)); }
    long range(long lo, long hi) { return lo + below(hi - lo + 1); } // inclusive
};

inline LieElem<Rat> random_elem(FreeLie& f, Rng& rng, int degree) {
    LieElem<Rat> e;
    e.degree = degree;
    int n = f.dim(degree);
    for (int i = 0; i < n; ++i) {
        long c = rng.range(-2, 2);
        if (c != 0) e.coords[i] = Rat(c);
    }
    return e;
}

/// Textbook dense Gaussian elimination rank, no sparsity tricks: an
/// independent check of the sparse echelon path.
template <kla::scalar K>
int dense_rank(const FieldSpec& fs, std::vector<std::vector<K>> m) {
    int rank = 0;
    int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    int cols = static_cast<int>(m[0].size());
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (!Field<K>::is_zero(m[r][c])) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        K inv = Field<K>::inv(m[rank][c]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || Field<K>::is_zero(m[r][c])) continue;
            K f = m[r][c] * inv;
            for (int cc = c; cc < cols; ++cc)
                m[r][cc] = m[r][cc] - f * m[rank][cc];
        }
        ++rank;
    }
    return rank;
}

/// All multisets of {1..maxdeg} of size 1..maxn, as degree vectors.
inline std::vector<std::vector<int>> degree_multisets(int maxn, int maxdeg) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start, int left) -> void {
        if (!cur.empty()) out.push_back(cur);
        if (left == 0) return;
        for (int d = start; d <= maxdeg; ++d) {
            cur.push_back(d);
            self(self, d, left - 1);
            cur.pop_back();
        }
    };
    rec(rec, 1, maxn);
    return out;
}

inline GeneratorSet gens_of_degrees(const std::vector<int>& degs) {
    GeneratorSet g;
    for (std::size_t i = 0; i < degs.size(); ++i)
        g.add("g" + std::to_string(i), degs[i]);
    return g;
}

} // namespace kla_test

#endif
