#ifndef KLA_DUAL_HPP
#define KLA_DUAL_HPP

#include <string>
#include <vector>

#include "kla/cohomology.hpp"
#include "kla/table.hpp"

namespace kla {

namespace wedge {

/// Index helpers for exterior powers of an n-dimensional space.  Monomials
/// of Lambda^k are k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> monomials(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k == 0) { out.push_back({}); return out; }
    while (true) {
        out.push_back(idx);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
    return out;
}

/// Sign of appending letter v to a sorted monomial and resorting: v hops
/// left past every element greater than it.  Returns 0 on a repeat.  When a
/// sorted block is multiplied in, insert its letters in ascending order so
/// earlier-inserted letters never count as hops.
inline int insert(std::vector<int>& m, int v) {
    std::size_t pos = 0;
    for (; pos < m.size(); ++pos) {
        if (m[pos] == v) return 0;
        if (m[pos] > v) break;
    }
    std::size_t hops = m.size() - pos;
    m.insert(m.begin() + pos, v);
    return (hops % 2 == 0) ? 1 : -1;
}

} // namespace wedge

/// Quadratic data of a quadratic presentation: the relation space R inside
/// Lambda^2 V and its annihilator in the dual wedge square.
template <scalar K>
struct QuadraticData {
    FieldSpec fs;
    int n = 0;              // dim V = number of degree-1 generators
    Echelon<K> R;           // echelonized relation space
    Echelon<K> Rperp;       // annihilator, same coordinate space

    QuadraticData(FieldSpec f, int dim) : fs(f), n(dim), R(f), Rperp(f) {}

    int pair_count() const { return n * (n - 1) / 2; }
};

template <scalar K>
QuadraticData<K> quadratic_data(const Presentation<K>& p) {
    if (!p.is_quadratic_shape())
        throw UsageError("quadratic data needs a quadratic presentation");
    QuadraticData<K> qd(p.field, p.gens.size());
    for (const auto& r : p.relations)
        qd.R.add(r.coords); // F_2 Lyndon coords = wedge pair coords
    int m = qd.pair_count();
    ExactMatrix<K> rows(qd.R.rank(), m, p.field);
    int ri = 0;
    for (const auto& row : qd.R.rows()) {
        for (auto& [c, v] : row) rows.set(ri, c, v);
        ++ri;
    }
    for (auto& v : rank_kernel(rows).kernel) qd.Rperp.add(std::move(v));
    return qd;
}

/// The quadratic dual Lambda(V*)/(Rperp) with its full multiplication.
template <scalar K>
struct DualAlgebra {
    FieldSpec fs;
    int n = 0;
    std::vector<long> dims;                      // dims[i], 0..n
    std::vector<std::vector<int>> qbasis;        // complement monomial indices
    std::vector<Echelon<K>> ideal;               // ideal component per degree
    std::vector<std::vector<int>> qpos;          // monomial index -> coordinate

    /// Coordinates of a Lambda^k vector in the degree-k quotient basis.
    SVec<K> project(int k, SVec<K> v) const {
        ideal[k].reduce(v);
        SVec<K> out;
        for (auto& [i, c] : v) out[qpos[k][i]] = c;
        return out;
    }

    /// Product of quotient basis elements, in quotient coordinates.
    SVec<K> multiply_basis(int a, int i, int b, int j) const {
        if (a + b > n) return {};
        auto ma = wedge::monomials(n, a)[qbasis[a][i]];
        auto mb = wedge::monomials(n, b)[qbasis[b][j]];
        std::vector<int> prod = ma;
        long sign = 1;
        for (int v : mb) {
            int s = wedge::insert(prod, v);
            if (s == 0) return {};
            sign *= s;
        }
        auto all = wedge::monomials(n, a + b);
        int idx = static_cast<int>(std::lower_bound(all.begin(), all.end(), prod) - all.begin());
        SVec<K> v;
        sv_set(v, idx, Field<K>::mul_long(Field<K>::one(fs), sign));
        return project(a + b, std::move(v));
    }
};

template <scalar K>
DualAlgebra<K> dual_algebra(const QuadraticData<K>& qd) {
    DualAlgebra<K> A;
    A.fs = qd.fs;
    A.n = qd.n;
    A.dims.assign(A.n + 1, 0);
    A.qbasis.assign(A.n + 1, {});
    A.qpos.assign(A.n + 1, {});
    A.ideal.assign(A.n + 1, Echelon<K>(qd.fs));
    for (int k = 0; k <= A.n; ++k) {
        auto monoms = wedge::monomials(A.n, k);
        auto lower = wedge::monomials(A.n, k - 2);
        if (k >= 2) {
            for (const auto& w : lower) {
                for (const auto& rho : qd.Rperp.rows()) {
                    // w ^ rho in Lambda^k coordinates
                    SVec<K> img;
                    auto pairs = wedge::monomials(A.n, 2);
                    for (auto& [pi, c] : rho) {
                        std::vector<int> m = w;
                        int s1 = wedge::insert(m, pairs[pi][0]);
                        if (s1 == 0) continue;
                        int s2 = wedge::insert(m, pairs[pi][1]);
                        if (s2 == 0) continue;
                        int idx = static_cast<int>(
                            std::lower_bound(monoms.begin(), monoms.end(), m) - monoms.begin());
                        K val = Field<K>::mul_long(c, s1 * s2);
                        auto it = img.find(idx);
                        if (it == img.end()) {
                            if (!Field<K>::is_zero(val)) img.emplace(idx, val);
                        } else {
                            it->second = it->second + val;
                            if (Field<K>::is_zero(it->second)) img.erase(it);
                        }
                    }
                    if (!img.empty()) A.ideal[k].add(std::move(img));
                }
            }
        }
        A.qbasis[k] = A.ideal[k].complement(static_cast<int>(monoms.size()));
        A.qpos[k].assign(monoms.size(), -1);
        for (int i = 0; i < static_cast<int>(A.qbasis[k].size()); ++i)
            A.qpos[k][A.qbasis[k][i]] = i;
        A.dims[k] = static_cast<long>(A.qbasis[k].size());
    }
    return A;
}

inline PolySeries dual_hilbert(const std::vector<long>& dims) {
    PolySeries p;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (dims[i]) p = p + PolySeries::monomial(static_cast<int>(i), Rat(dims[i]));
    return p;
}

/// Froberg check: H_U(t) * H_dual(-t) should be 1 through degree N.
struct FrobergResult {
    bool ok = true;
    int defect_degree = 0;
    Rat defect_value;

    std::string str() const {
        return ok ? "OK" : "FirstDefect(" + std::to_string(defect_degree) + ", " +
                               defect_value.get_str() + ")";
    }
};

inline FrobergResult froberg_check(const PolySeries& hu, const std::vector<long>& dual_dims,
                                   int N) {
    PolySeries prod = (hu * dual_hilbert(dual_dims).alternated()).truncated(N);
    if (prod.coeff(0) != 1) throw UsageError("froberg: constant term is not 1");
    for (int k = 1; k <= N; ++k) {
        Rat c = prod.coeff(k);
        if (sgn(c) != 0) return {false, k, c};
    }
    return {};
}

/// Darboux decomposition of a skew form: radical basis plus hyperbolic
/// pairs; char != 2 throughout.
template <scalar K>
struct DarbouxResult {
    std::vector<SVec<K>> radical;
    std::vector<std::pair<SVec<K>, SVec<K>>> pairs;
};

template <scalar K>
DarbouxResult<K> darboux_decompose(const FieldSpec& fs, const std::vector<std::vector<K>>& B) {
    int n = static_cast<int>(B.size());
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(B[i].size()) != n) throw UsageError("skew form must be square");
        if (!Field<K>::is_zero(B[i][i])) throw UsageError("skew form has a nonzero diagonal");
        for (int j = 0; j < n; ++j)
            if (!Field<K>::is_zero(K(B[i][j] + B[j][i])))
                throw UsageError("form is not skew-symmetric");
    }
    auto apply = [&](const SVec<K>& u, const SVec<K>& v) {
        K acc = Field<K>::zero(fs);
        for (auto& [i, ci] : u)
            for (auto& [j, cj] : v) acc = acc + ci * cj * B[i][j];
        return acc;
    };
    DarbouxResult<K> out;
    // radical = kernel of B
    ExactMatrix<K> m(n, n, fs);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!Field<K>::is_zero(B[i][j])) m.set(i, j, B[i][j]);
    out.radical = rank_kernel(m).kernel;
    // working complement: coordinate vectors reduced mod nothing; peel pairs
    std::vector<SVec<K>> work;
    {
        Echelon<K> rad(fs);
        for (auto& r : out.radical) rad.add(r);
        for (int i = 0; i < n; ++i) {
            SVec<K> e;
            sv_set(e, i, Field<K>::one(fs));
            rad.reduce(e);
            if (!sv_is_zero(e)) {
                Echelon<K> sofar(fs);
                for (auto& w : work) sofar.add(w);
                for (auto& r : out.radical) sofar.add(r);
                if (sofar.add(e)) work.push_back(std::move(e));
            }
        }
    }
    while (!work.empty()) {
        SVec<K> u = work.front();
        int vi = -1;
        for (std::size_t k = 1; k < work.size(); ++k)
            if (!Field<K>::is_zero(apply(u, work[k]))) { vi = static_cast<int>(k); break; }
        if (vi < 0) throw UsageError("degenerate complement in darboux (internal)");
        SVec<K> v = sv_scaled(work[vi], Field<K>::inv(apply(u, work[vi])));
        std::vector<SVec<K>> next;
        for (std::size_t k = 1; k < work.size(); ++k) {
            if (static_cast<int>(k) == vi) continue;
            SVec<K> w = work[k];
            // w' = w + B(v,w) u - B(u,w) v
            sv_axpy(w, apply(v, w), u);
            sv_axpy(w, -apply(u, w), v);
            next.push_back(std::move(w));
        }
        out.pairs.emplace_back(std::move(u), std::move(v));
        work = std::move(next);
    }
    return out;
}

/// Skew form of a single quadratic relation in the generator basis.
template <scalar K>
std::vector<std::vector<K>> relation_skew_form(const Presentation<K>& p, const SVec<K>& rel) {
    int n = p.gens.size();
    std::vector<std::vector<K>> B(n, std::vector<K>(n, Field<K>::zero(p.field)));
    auto pairs = wedge::monomials(n, 2);
    for (auto& [idx, c] : rel) {
        int i = pairs[idx][0], j = pairs[idx][1];
        B[i][j] = c;
        B[j][i] = -c;
    }
    return B;
}

/// One-relator classification: L = G_{2d} * free(f) with d the half-rank of
/// the relation's skew form and f the radical dimension; d = 0 means free.
struct OneRelatorClass {
    long genus = 0;
    long free_rank = 0;
};

template <scalar K>
OneRelatorClass classify_one_relator(const Presentation<K>& p) {
    QuadraticData<K> qd = quadratic_data(p);
    if (qd.R.rank() != 1) throw UsageError("classify-1rel needs exactly one independent relation");
    auto B = relation_skew_form(p, qd.R.rows()[0]);
    auto dx = darboux_decompose(p.field, B);
    return {static_cast<long>(dx.pairs.size()), static_cast<long>(dx.radical.size())};
}

/// Two-relator criterion: the dual degree-3 component must vanish.  By the
/// theory this always passes; a failure flags a computation bug.
struct TwoRelatorResult {
    bool pass;
    long dual_dim3;
};

template <scalar K>
TwoRelatorResult two_relator_bk_check(const Presentation<K>& p) {
    QuadraticData<K> qd = quadratic_data(p);
    if (qd.R.rank() != 2) throw UsageError("check-2rel needs exactly two independent relations");
    DualAlgebra<K> A = dual_algebra(qd);
    return {A.dims[3] == 0, A.dims[3]};
}

/// Universal quadratic cover: minimal degree-1 generators with the kernel of
/// the bracket Lambda^2 L_1 -> L_2 as relations.
template <scalar K>
Presentation<K> quadratic_cover(const Presentation<K>& p) {
    AlgebraTable<K> T = expand_tables(p, 2);
    GeneratorSet g;
    for (int i = 0; i < p.gens.size(); ++i)
        if (p.gens.degrees[i] == 1) g.add(p.gens.names[i], 1);
    Presentation<K> cover(p.name + "_cover", p.field, g);
    int n = g.size();
    if (n == 0) return cover;
    auto pairs = wedge::monomials(n, 2);
    // bracket matrix Lambda^2 L_1 -> L_2 (degree-1 generators in order)
    std::vector<int> gen_index;
    for (int i = 0; i < p.gens.size(); ++i)
        if (p.gens.degrees[i] == 1) gen_index.push_back(i);
    ExactMatrix<K> M(T.dim(2), static_cast<int>(pairs.size()), p.field);
    for (int c = 0; c < static_cast<int>(pairs.size()); ++c) {
        SVec<K> a = T.generator_image(gen_index[pairs[c][0]]);
        SVec<K> b = T.generator_image(gen_index[pairs[c][1]]);
        SVec<K> br = T.t.bracket_vec(1, a, 1, b);
        for (auto& [r, v] : br) M.set(r, c, v);
    }
    for (auto& k : rank_kernel(M).kernel) {
        LieElem<K> rel;
        rel.degree = 2;
        rel.coords = k; // pair coords = F_2 Lyndon coords of the cover
        cover.relations.push_back(std::move(rel));
    }
    return cover;
}

} // namespace kla

#endif
