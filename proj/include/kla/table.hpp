#ifndef KLA_TABLE_HPP
#define KLA_TABLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "kla/builders.hpp"
#include "kla/presentation.hpp"
#include "kla/series.hpp"

namespace kla {

/// Degree-truncated graded Lie algebra presented by per-degree dimensions
/// and bracket structure constants.  This is all the cohomology and series
/// machinery needs; it is produced both by quotient expansion and by
/// subalgebra views.
template <scalar K>
struct StructureTable {
    FieldSpec fs;
    int N = 0;
    std::vector<int> dims; // dims[d] for 1 <= d <= N; dims[0] unused

    int dim(int d) const { return (d >= 1 && d <= N) ? dims[d] : 0; }

    /// [e^a_i, e^b_j] in the degree a+b basis; requires a+b <= N.
    SVec<K> bracket_basis(int a, int i, int b, int j) const {
        if (a + b > N) throw UsageError("bracket beyond the table truncation");
        if (a > b || (a == b && i > j)) return sv_neg(bracket_basis(b, j, a, i));
        if (a == b && i == j) return {};
        return c_.at({a, b})[i][j];
    }

    SVec<K> bracket_vec(int a, const SVec<K>& u, int b, const SVec<K>& v) const {
        SVec<K> out;
        for (auto& [i, ci] : u)
            for (auto& [j, cj] : v) {
                if (a == b && i == j) continue;
                sv_axpy(out, ci * cj, bracket_basis(a, i, b, j));
            }
        return out;
    }

    void set_constant(int a, int i, int b, int j, SVec<K> v) {
        auto& block = c_[{a, b}];
        if (block.empty()) block.assign(dims[a], std::vector<SVec<K>>(dims[b]));
        block[i][j] = std::move(v);
    }

private:
    std::map<std::pair<int, int>, std::vector<std::vector<SVec<K>>>> c_; // a <= b
};

/// Full expansion of a presentation up to degree N: ideal closure, quotient
/// bases and structure constants.  Bases are canonical: the ideal is kept in
/// reduced echelon form and L_d is identified with the non-pivot Lyndon
/// coordinates.
template <scalar K>
struct AlgebraTable {
    Presentation<K> pres;
    int N = 0;
    StructureTable<K> t;
    std::vector<Echelon<K>> ideal;        // per degree
    std::vector<std::vector<int>> qbasis; // L_d basis = free basis positions
    std::vector<std::vector<int>> qpos;   // free position -> L_d coordinate or -1

    const FieldSpec& field() const { return pres.field; }

    int dim(int d) const { return t.dim(d); }

    /// F_d coordinates -> L_d coordinates.
    SVec<K> project(int d, SVec<K> v) const {
        ideal[d].reduce(v);
        SVec<K> out;
        for (auto& [i, c] : v) out[qpos[d][i]] = c;
        return out;
    }

    /// Canonical lift L_d -> F_d (quotient coordinates to representative).
    SVec<K> lift(int d, const SVec<K>& v) const {
        SVec<K> out;
        for (auto& [i, c] : v) out[qbasis[d][i]] = c;
        return out;
    }

    /// Image of generator g in L_{deg g} coordinates.
    SVec<K> generator_image(int g) const {
        int d = pres.gens.degrees[g];
        if (d > N) throw UsageError("generator degree beyond truncation");
        SVec<K> unit;
        sv_set(unit, pres.free->basis_index(d, Word(1, char(g))), Field<K>::one(pres.field));
        return project(d, std::move(unit));
    }
};

/// Expand a presentation into its degree-truncated quotient model.  The
/// ideal component I_d is span(R_d) + sum_g [g, I_{d - deg g}], closed
/// degree by degree (lower components are complete when degree d runs, so
/// one ascending pass is a fixed point).
template <scalar K>
AlgebraTable<K> expand_tables(const Presentation<K>& p, int N) {
    if (N < 2) throw UsageError("expansion needs max degree >= 2");
    AlgebraTable<K> T;
    T.pres = p;
    T.N = N;
    T.t.fs = p.field;
    T.t.N = N;
    T.t.dims.assign(N + 1, 0);
    T.ideal.assign(N + 1, Echelon<K>(p.field));
    T.qbasis.assign(N + 1, {});
    T.qpos.assign(N + 1, {});
    FreeLie& F = *p.free;

    for (int d = 1; d <= N; ++d) {
        Echelon<K>& I = T.ideal[d];
        for (const auto& r : p.relations)
            if (r.degree == d) I.add(r.coords);
        for (int g = 0; g < p.gens.size(); ++g) {
            int w = p.gens.degrees[g];
            int dl = d - w;
            if (dl < 1) continue;
            SVec<K> letter;
            sv_set(letter, F.basis_index(w, Word(1, char(g))), Field<K>::one(p.field));
            for (const auto& row : T.ideal[dl].rows())
                I.add(F.bracket_vec(p.field, w, letter, dl, row));
        }
        int fd = F.dim(d);
        T.qbasis[d] = I.complement(fd);
        T.qpos[d].assign(fd, -1);
        for (int k = 0; k < static_cast<int>(T.qbasis[d].size()); ++k)
            T.qpos[d][T.qbasis[d][k]] = k;
        T.t.dims[d] = static_cast<int>(T.qbasis[d].size());
    }

    for (int a = 1; a <= N; ++a)
        for (int b = a; a + b <= N; ++b) {
            if (T.t.dims[a] == 0 || T.t.dims[b] == 0) continue;
            for (int i = 0; i < T.t.dims[a]; ++i)
                for (int j = (a == b ? i + 1 : 0); j < T.t.dims[b]; ++j) {
                    const SVec<long>& fb = F.bracket_basis(a, T.qbasis[a][i], b, T.qbasis[b][j]);
                    SVec<K> v;
                    sv_axpy_long(p.field, v, Field<K>::one(p.field), fb);
                    T.t.set_constant(a, i, b, j, T.project(a + b, std::move(v)));
                }
        }
    return T;
}

/// Hilbert series of L itself: sum dims[d] t^d, truncated at N.
template <scalar K>
PolySeries hilbert_series_L(const StructureTable<K>& t) {
    PolySeries s = PolySeries::zero().truncated(t.N);
    for (int d = 1; d <= t.N; ++d)
        if (t.dims[d]) s = s + PolySeries::monomial(d, Rat(t.dims[d]));
    return s;
}

/// PBW series of U(L): prod_d (1 - t^d)^{-dims[d]} mod t^{N+1}.
template <scalar K>
PolySeries hilbert_series_U(const StructureTable<K>& t) {
    PolySeries s = PolySeries::one().truncated(t.N);
    for (int d = 1; d <= t.N; ++d) {
        long l = t.dims[d];
        if (l == 0) continue;
        // (1 - t^d)^{-l} = sum_k C(l+k-1, k) t^{dk}
        PolySeries f = PolySeries::one().truncated(t.N);
        Rat binom(1);
        for (int k = 1; d * k <= t.N; ++k) {
            binom *= rat(l + k - 1, k);
            f = f + PolySeries::monomial(d * k, binom);
        }
        s = s * f;
    }
    return s;
}

/// Standard subalgebra view: the graded subalgebra generated by a space
/// V of degree-1 elements, spanned left-normed as S_d = [V, S_{d-1}].
template <scalar K>
struct SubalgebraView {
    std::string describe;
    std::vector<SVec<K>> generating; // vectors in ambient L_1 coordinates
    std::vector<std::vector<SVec<K>>> bases; // bases[d]: vectors in ambient L_d coords
    StructureTable<K> t;
};

template <scalar K>
SubalgebraView<K> subalgebra_tables(const StructureTable<K>& parent,
                                    const std::vector<SVec<K>>& v, int N,
                                    std::string describe = {}) {
    if (N > parent.N) throw UsageError("view truncation beyond the parent table");
    for (const auto& w : v)
        for (auto& [i, c] : w)
            if (i < 0 || i >= parent.dim(1))
                throw UsageError("generating vector outside degree 1");
    Echelon<K> indep(parent.fs);
    for (const auto& w : v)
        if (!indep.add(w)) throw UsageError("generating vectors are not independent");

    SubalgebraView<K> S;
    S.describe = std::move(describe);
    S.generating = v;
    S.bases.assign(N + 1, {});
    S.t.fs = parent.fs;
    S.t.N = N;
    S.t.dims.assign(N + 1, 0);
    S.bases[1] = v;
    for (int d = 2; d <= N; ++d) {
        Echelon<K> ech(parent.fs);
        for (const auto& gv : v)
            for (const auto& u : S.bases[d - 1]) {
                SVec<K> w = parent.bracket_vec(1, gv, d - 1, u);
                if (!sv_is_zero(w)) ech.add(std::move(w));
            }
        // reduced echelon rows: canonical given V
        S.bases[d].assign(ech.rows().begin(), ech.rows().end());
    }
    for (int d = 1; d <= N; ++d) S.t.dims[d] = static_cast<int>(S.bases[d].size());

    for (int a = 1; a <= N; ++a)
        for (int b = a; a + b <= N; ++b) {
            int da = S.t.dims[a], db = S.t.dims[b];
            if (da == 0 || db == 0) continue;
            SpanSolver<K> solver(parent.fs, parent.dim(a + b));
            for (const auto& row : S.bases[a + b]) solver.add(row);
            for (int i = 0; i < da; ++i)
                for (int j = (a == b ? i + 1 : 0); j < db; ++j) {
                    SVec<K> w = parent.bracket_vec(a, S.bases[a][i], b, S.bases[b][j]);
                    auto sol = solver.solve(std::move(w));
                    if (!sol)
                        throw UsageError("bracket left the subalgebra span (internal)");
                    SVec<K> coords;
                    for (auto& [k, c] : *sol) sv_set(coords, k, c);
                    S.t.set_constant(a, i, b, j, std::move(coords));
                }
        }
    return S;
}

/// Graded center: elements commuting with every generator image, reported
/// for the degrees where this is decidable inside the truncation.
template <scalar K>
struct GradedSubspace {
    std::vector<int> dims;                    // per degree, index 0 unused
    std::vector<std::vector<SVec<K>>> bases;  // vectors in L_d coordinates
};

template <scalar K>
int center_degree_cap(const AlgebraTable<K>& T) {
    int m = T.pres.max_generator_degree();
    return m >= 1 ? T.N - m : T.N;
}

template <scalar K>
GradedSubspace<K> center(const AlgebraTable<K>& T) {
    const FieldSpec& fs = T.field();
    GradedSubspace<K> Z;
    int cap = center_degree_cap(T);
    Z.dims.assign(std::max(cap + 1, 1), 0);
    Z.bases.assign(std::max(cap + 1, 1), {});
    std::vector<std::pair<int, SVec<K>>> gens; // (degree, image)
    for (int g = 0; g < T.pres.gens.size(); ++g)
        gens.emplace_back(T.pres.gens.degrees[g], T.generator_image(g));
    for (int d = 1; d <= cap; ++d) {
        int nd = T.dim(d);
        if (nd == 0) continue;
        int rows = 0;
        for (auto& [w, img] : gens) rows += T.dim(d + w);
        ExactMatrix<K> M(rows, nd, fs);
        for (int i = 0; i < nd; ++i) {
            SVec<K> e;
            sv_set(e, i, Field<K>::one(fs));
            int off = 0;
            for (auto& [w, img] : gens) {
                SVec<K> br = T.t.bracket_vec(d, e, w, img);
                for (auto& [r, c] : br) M.set(off + r, i, c);
                off += T.dim(d + w);
            }
        }
        auto rk = rank_kernel(M);
        Z.dims[d] = static_cast<int>(rk.kernel.size());
        Z.bases[d] = rk.kernel;
    }
    return Z;
}

/// Closure of a set of homogeneous elements under the bracket, inside the
/// truncation; used for image subalgebras of arbitrary generator degrees.
template <scalar K>
std::vector<int> subalgebra_closure_dims(const StructureTable<K>& t,
                                         const std::vector<std::pair<int, SVec<K>>>& elems) {
    std::vector<Echelon<K>> S(t.N + 1, Echelon<K>(t.fs));
    for (auto& [d, v] : elems) {
        if (d < 1 || d > t.N) throw UsageError("element degree outside truncation");
        S[d].add(v);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (int a = 1; a <= t.N; ++a)
            for (int b = a; a + b <= t.N; ++b) {
                std::vector<SVec<K>> add;
                for (const auto& u : S[a].rows())
                    for (const auto& v : S[b].rows()) {
                        SVec<K> w = t.bracket_vec(a, u, b, v);
                        if (!sv_is_zero(w)) add.push_back(std::move(w));
                    }
                for (auto& w : add)
                    if (S[a + b].add(std::move(w))) grew = true;
            }
    }
    std::vector<int> dims(t.N + 1, 0);
    for (int d = 1; d <= t.N; ++d) dims[d] = S[d].rank();
    return dims;
}

/// Derived series dimensions per level, computed degreewise inside the
/// truncation, until the series vanishes or stabilizes.
template <scalar K>
std::vector<std::vector<int>> derived_series(const StructureTable<K>& t) {
    std::vector<std::vector<SVec<K>>> cur(t.N + 1);
    for (int d = 1; d <= t.N; ++d)
        for (int i = 0; i < t.dim(d); ++i) {
            SVec<K> e;
            sv_set(e, i, Field<K>::one(t.fs));
            cur[d].push_back(std::move(e));
        }
    std::vector<std::vector<int>> levels;
    auto dims_of = [&](const std::vector<std::vector<SVec<K>>>& x) {
        std::vector<int> ds(t.N + 1, 0);
        for (int d = 1; d <= t.N; ++d) ds[d] = static_cast<int>(x[d].size());
        return ds;
    };
    levels.push_back(dims_of(cur));
    while (true) {
        std::vector<Echelon<K>> next(t.N + 1, Echelon<K>(t.fs));
        for (int a = 1; a <= t.N; ++a)
            for (int b = a; a + b <= t.N; ++b)
                for (const auto& u : cur[a])
                    for (const auto& v : cur[b]) {
                        SVec<K> w = t.bracket_vec(a, u, b, v);
                        if (!sv_is_zero(w)) next[a + b].add(std::move(w));
                    }
        std::vector<std::vector<SVec<K>>> nx(t.N + 1);
        for (int d = 1; d <= t.N; ++d)
            nx[d].assign(next[d].rows().begin(), next[d].rows().end());
        std::vector<int> nd = dims_of(nx);
        if (nd == levels.back()) break; // stationary (inside the truncation)
        levels.push_back(nd);
        cur = std::move(nx);
        bool zero = true;
        for (int d = 1; d <= t.N; ++d) zero = zero && nd[d] == 0;
        if (zero) break;
    }
    return levels;
}

/// Upper central series Z_1 <= Z_2 <= ... with the stabilized limit; each
/// level's membership is tested against the generator images, on degrees
/// where the truncation allows the test.
template <scalar K>
struct UpperCentralSeries {
    std::vector<std::vector<int>> levels; // per level, dims per degree
    std::vector<int> z_infinity;          // stabilized dims
    int degree_cap = 0;
};

template <scalar K>
UpperCentralSeries<K> upper_central_series(const AlgebraTable<K>& T) {
    const FieldSpec& fs = T.field();
    int cap = center_degree_cap(T);
    UpperCentralSeries<K> out;
    out.degree_cap = cap;
    std::vector<std::pair<int, SVec<K>>> gens;
    for (int g = 0; g < T.pres.gens.size(); ++g)
        gens.emplace_back(T.pres.gens.degrees[g], T.generator_image(g));
    // Z_n per degree as echelons; Z_0 = 0
    std::vector<Echelon<K>> z(T.N + 1, Echelon<K>(fs));
    while (true) {
        std::vector<std::vector<SVec<K>>> nzbases(cap + 1);
        std::vector<int> dims(cap + 1, 0);
        for (int d = 1; d <= cap; ++d) {
            int nd = T.dim(d);
            if (nd == 0) continue;
            int rows = 0;
            for (auto& [w, img] : gens) rows += T.dim(d + w);
            ExactMatrix<K> M(rows, nd, fs);
            for (int i = 0; i < nd; ++i) {
                SVec<K> e;
                sv_set(e, i, Field<K>::one(fs));
                int off = 0;
                for (auto& [w, img] : gens) {
                    SVec<K> br = T.t.bracket_vec(d, e, w, img);
                    z[d + w].reduce(br); // modulo Z_n
                    for (auto& [r, c] : br) M.set(off + r, i, c);
                    off += T.dim(d + w);
                }
            }
            auto rk = rank_kernel(M);
            dims[d] = static_cast<int>(rk.kernel.size());
            nzbases[d] = std::move(rk.kernel);
        }
        bool grew = false;
        if (!out.levels.empty()) {
            for (int d = 1; d <= cap; ++d)
                if (dims[d] != out.levels.back()[d]) grew = true;
        } else {
            grew = true;
        }
        if (!grew) break;
        out.levels.push_back(dims);
        for (int d = 1; d <= cap; ++d)
            for (auto& vv : nzbases[d]) z[d].add(vv);
    }
    out.z_infinity.assign(cap + 1, 0);
    for (int d = 1; d <= cap; ++d) out.z_infinity[d] = z[d].rank();
    return out;
}

} // namespace kla

#endif
