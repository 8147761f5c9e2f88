#ifndef KLA_HNN_HPP
#define KLA_HNN_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kla/builders.hpp"
#include "kla/cohomology.hpp"
#include "kla/dual.hpp"
#include "kla/table.hpp"

namespace kla {

/// Derivation data at table level: a degree-1 generating space A_1 of the
/// domain subalgebra and the images of its basis, all in table coordinates.
template <scalar K>
struct DerivationSpec {
    std::vector<SVec<K>> domain; // vectors in L_1 coordinates of M
    int degree = 1;              // derivation degree d >= 1
    std::vector<SVec<K>> values; // values[i] in L_{1+degree} coordinates
};

template <scalar K>
struct DerivationCheck {
    bool ok = true;
    int violation_degree = 0;
    SVec<K> witness; // nonzero value forced on the zero element

    std::string str() const {
        return ok ? "OK" : "violation at degree " + std::to_string(violation_degree);
    }
};

/// Leibniz-extendability: extend the map over left-normed brackets and watch
/// for a dependency whose image fails to vanish.  Pairs (element, value) are
/// kept as one echelon per degree; a row supported purely in the value block
/// is a violation witness.
template <scalar K>
DerivationCheck<K> validate_derivation(const StructureTable<K>& m, const DerivationSpec<K>& d,
                                       int N) {
    if (d.degree < 1) throw UsageError("derivation degree must be >= 1");
    if (d.domain.size() != d.values.size())
        throw UsageError("derivation domain/value count mismatch");
    for (const auto& v : d.domain)
        for (auto& [i, c] : v)
            if (i < 0 || i >= m.dim(1)) throw UsageError("derivation domain outside degree 1");
    for (const auto& v : d.values)
        for (auto& [i, c] : v)
            if (i < 0 || i >= m.dim(1 + d.degree))
                throw UsageError("derivation value outside the target component");

    // pairs at degree w live in L_w (+) L_{w+d}
    auto paired = [&](int w, const SVec<K>& elem, const SVec<K>& val) {
        SVec<K> p = elem;
        int off = m.dim(w);
        for (auto& [i, c] : val) p[off + i] = c;
        return p;
    };
    std::vector<std::vector<std::pair<SVec<K>, SVec<K>>>> pairs(N + 1);
    for (std::size_t i = 0; i < d.domain.size(); ++i)
        pairs[1].emplace_back(d.domain[i], d.values[i]);
    for (int w = 1; w <= N - d.degree; ++w) {
        Echelon<K> ech(m.fs);
        std::vector<std::pair<SVec<K>, SVec<K>>> reduced;
        for (auto& [elem, val] : pairs[w]) {
            SVec<K> row = paired(w, elem, val);
            ech.reduce(row);
            if (row.empty()) continue;
            if (row.begin()->first >= m.dim(w)) {
                DerivationCheck<K> out;
                out.ok = false;
                out.violation_degree = w;
                for (auto& [i, c] : row) out.witness[i - m.dim(w)] = c;
                return out;
            }
            ech.add(row);
            // keep the raw pair for the next bracket level
            reduced.emplace_back(elem, val);
        }
        if (w + 1 > N - d.degree && w + 1 + d.degree > N) break;
        if (w + 1 > N) break;
        // extend left-normed: ([v,u], [phi v, u] + [v, phi u])
        for (std::size_t g = 0; g < d.domain.size(); ++g)
            for (auto& [elem, val] : reduced) {
                if (1 + w > N) continue;
                SVec<K> nelem = m.bracket_vec(1, d.domain[g], w, elem);
                SVec<K> nval;
                if (1 + d.degree + w <= N) {
                    nval = m.bracket_vec(1 + d.degree, d.values[g], w, elem);
                    sv_axpy(nval, Field<K>::one(m.fs),
                            m.bracket_vec(1, d.domain[g], w + d.degree, val));
                } else {
                    continue; // value would leave the truncation
                }
                if (sv_is_zero(nelem) && sv_is_zero(nval)) continue;
                pairs[w + 1].emplace_back(std::move(nelem), std::move(nval));
            }
    }
    return {};
}

/// Presentation-level derivation: domain over the degree-1 generators,
/// values as elements of the free algebra on the source generators.
template <scalar K>
struct PresDerivation {
    std::vector<SVec<K>> domain;    // over degree-1 generators, in order
    int degree = 1;
    std::vector<LieElem<K>> values; // in F(source), degree 1 + degree each
};

/// Indices of the degree-1 generators, in declaration order.
inline std::vector<int> degree_one_positions(const GeneratorSet& g) {
    std::vector<int> out;
    for (int i = 0; i < g.size(); ++i)
        if (g.degrees[i] == 1) out.push_back(i);
    return out;
}

/// Table-level form of a presentation derivation (projects the values).
template <scalar K>
DerivationSpec<K> to_table_derivation(const AlgebraTable<K>& T, const PresDerivation<K>& d) {
    DerivationSpec<K> out;
    out.degree = d.degree;
    auto deg1 = degree_one_positions(T.pres.gens);
    for (const auto& v : d.domain) {
        SVec<K> img;
        for (auto& [i, c] : v) {
            if (i < 0 || i >= static_cast<int>(deg1.size()))
                throw UsageError("derivation domain outside the degree-1 generators");
            sv_axpy(img, c, T.generator_image(deg1[i]));
        }
        out.domain.push_back(std::move(img));
    }
    for (const auto& val : d.values) {
        if (val.degree != 1 + d.degree)
            throw UsageError("derivation value degree mismatch");
        out.values.push_back(T.project(val.degree, val.coords));
    }
    return out;
}

/// HNN composition: adjoin the stable letter t of degree d with relations
/// [t, a_i] - phi(a_i) over a basis of A_1, keeping M's relations.
template <scalar K>
Presentation<K> hnn_compose(const Presentation<K>& m, const PresDerivation<K>& d,
                            const std::string& stable_letter, int validate_to = 0) {
    if (validate_to >= 2) {
        AlgebraTable<K> T = expand_tables(m, validate_to);
        auto check = validate_derivation(T.t, to_table_derivation(T, d), validate_to);
        if (!check.ok)
            throw UsageError("invalid derivation: violation at degree " +
                             std::to_string(check.violation_degree));
    }
    GeneratorSet g = m.gens;
    g.add(stable_letter, d.degree);
    Presentation<K> out("hnn_" + m.name, m.field, g);
    std::vector<int> idmap(m.gens.size());
    for (int i = 0; i < m.gens.size(); ++i) idmap[i] = i;
    auto imgs = injection_images<K>(m.field, m.gens, idmap);
    for (const auto& r : m.relations)
        out.relations.push_back(substitute(*m.free, *out.free, m.field, r, imgs));
    int t_index = g.size() - 1;
    auto deg1 = degree_one_positions(m.gens);
    for (std::size_t i = 0; i < d.domain.size(); ++i) {
        // [t, a_i] - phi(a_i)
        LieElem<K> t{d.degree, {}};
        sv_set(t.coords, out.free->basis_index(d.degree, Word(1, char(t_index))),
               Field<K>::one(m.field));
        LieElem<K> a{1, {}};
        for (auto& [j, c] : d.domain[i]) {
            sv_set(a.coords, out.free->basis_index(1, Word(1, char(deg1[j]))), c);
        }
        LieElem<K> rel = bracket(*out.free, m.field, t, a);
        LieElem<K> val = substitute(*m.free, *out.free, m.field, d.values[i], imgs);
        sv_axpy(rel.coords, -Field<K>::one(m.field), val.coords);
        if (rel.is_zero()) continue;
        out.relations.push_back(std::move(rel));
    }
    return out;
}

/// Result of splitting a quadratic presentation over a generator x.
template <scalar K>
struct HnnDecomposition {
    Presentation<K> m;               // presentation on the other generators
    std::vector<SVec<K>> domain;     // A_1 basis over M's degree-1 generators
    std::vector<LieElem<K>> values;  // phi values in F(M_1), degree 2
    Presentation<K> reconstruction;  // hnn_compose(m, phi, x)
    std::string stable_letter;
};

/// Decompose a quadratic presentation as an HNN extension over the maximal
/// standard subalgebra avoiding the chosen generator.  The relation set is
/// echelonized with the x-involving pair coordinates first, so rows split
/// into pure-M relations and rows [x, a_i] + m_i with independent a_i.
template <scalar K>
HnnDecomposition<K> hnn_decompose(const Presentation<K>& p, int x_index) {
    if (!p.is_quadratic_shape())
        throw UsageError("hnn decomposition needs a quadratic presentation");
    int n = p.gens.size();
    if (x_index < 0 || x_index >= n) throw UsageError("no such generator");
    // coordinate order: pairs {x, m} first (by m), then pairs {i < j} without x
    auto pairs = wedge::monomials(n, 2);
    std::vector<int> remap(pairs.size());
    std::vector<int> m_of_xpair; // other endpoint per x-pair slot
    {
        int next = 0;
        for (int m = 0; m < n; ++m) {
            if (m == x_index) continue;
            std::vector<int> key{std::min(m, x_index), std::max(m, x_index)};
            int idx = static_cast<int>(std::lower_bound(pairs.begin(), pairs.end(), key) -
                                       pairs.begin());
            remap[idx] = next++;
            m_of_xpair.push_back(m);
        }
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (pairs[i][0] != x_index && pairs[i][1] != x_index) remap[i] = next++;
    }
    Echelon<K> ech(p.field);
    for (const auto& r : p.relations) {
        SVec<K> v;
        for (auto& [i, c] : r.coords) sv_set(v, remap[i], c);
        ech.add(std::move(v));
    }
    // M generators and the pair indexing inside M
    GeneratorSet mg;
    std::vector<int> m_index(n, -1);
    for (int i = 0; i < n; ++i) {
        if (i == x_index) continue;
        m_index[i] = mg.size();
        mg.add(p.gens.names[i], p.gens.degrees[i]);
    }
    auto mpairs = wedge::monomials(n - 1, 2);
    HnnDecomposition<K> out;
    out.stable_letter = p.gens.names[x_index];
    out.m = Presentation<K>(p.name + "_m", p.field, mg);
    int nx = n - 1; // number of x-pair slots
    auto mpair_coord = [&](int slot) {
        // slot indexes pairs without x, in the remapped order = lex order of
        // pairs of m-indices
        return slot;
    };
    for (const auto& row : ech.rows()) {
        int pivot = row.begin()->first;
        if (pivot >= nx) {
            // pure M relation
            LieElem<K> rel;
            rel.degree = 2;
            for (auto& [i, c] : row) sv_set(rel.coords, mpair_coord(i - nx), c);
            out.m.relations.push_back(std::move(rel));
        } else {
            // [x, a] + m-part; phi(a) = -m-part
            SVec<K> a;
            LieElem<K> val;
            val.degree = 2;
            for (auto& [i, c] : row) {
                if (i < nx) {
                    int m = m_of_xpair[i];
                    // pair {x, m}: coefficient of [x, g_m] is +c when x < m,
                    // -c when m < x (the lex pair is (m, x) = -[x, m])
                    K coeff = (x_index < m) ? c : K(-c);
                    sv_set(a, m_index[m], coeff);
                } else {
                    sv_set(val.coords, mpair_coord(i - nx), -c);
                }
            }
            out.domain.push_back(std::move(a));
            out.values.push_back(std::move(val));
        }
    }
    (void)mpairs;
    PresDerivation<K> phi{out.domain, 1, out.values};
    out.reconstruction = hnn_compose(out.m, phi, p.gens.names[x_index]);
    return out;
}

/// Betti recursion b_{i+1}(L) = b_i(A) + b_{i+1}(M) on diagonal Betti
/// numbers, for -1 <= i <= N-1.
struct RecursionCheck {
    bool ok = true;
    int failing_index = 0;
    long lhs = 0, rhs = 0;
};

inline RecursionCheck betti_recursion_check(const BettiTable& l, const BettiTable& m,
                                            const BettiTable& a, int N) {
    auto diag = [](const BettiTable& t, int i) { return i < 0 ? 0 : t.get(i, i); };
    for (int i = -1; i <= N - 1; ++i) {
        long lhs = diag(l, i + 1);
        long rhs = diag(a, i) + diag(m, i + 1);
        if (lhs != rhs) return {false, i, lhs, rhs};
    }
    return {};
}

/// Injectivity proxy for an embedding: the image subalgebra's dimensions
/// must match the source dimensions through the truncation.
template <scalar K>
struct EmbeddingCertificate {
    Presentation<K> source;
    Presentation<K> target;
    std::vector<std::pair<std::string, LieElem<K>>> images; // in F(target)
    int N = 0;
    std::vector<int> source_dims; // 1..N
    std::vector<int> image_dims;  // 1..N
    bool dims_match = false;
};

template <scalar K>
void check_certificate(EmbeddingCertificate<K>& cert, int N) {
    cert.N = N;
    AlgebraTable<K> src = expand_tables(cert.source, N);
    AlgebraTable<K> tgt = expand_tables(cert.target, N);
    std::vector<std::pair<int, SVec<K>>> elems;
    for (auto& [name, img] : cert.images) {
        if (img.degree > N) continue; // beyond the certificate window
        elems.emplace_back(img.degree, tgt.project(img.degree, img.coords));
    }
    auto dims = subalgebra_closure_dims(tgt.t, elems);
    cert.source_dims.assign(src.t.dims.begin() + 1, src.t.dims.end());
    cert.image_dims.assign(dims.begin() + 1, dims.end());
    cert.dims_match = cert.source_dims == cert.image_dims;
}

namespace hnn_detail {

inline std::string fresh_name(const GeneratorSet& g, const std::string& prefix, int& counter) {
    while (true) {
        std::string name = prefix + std::to_string(++counter);
        if (g.find(name) < 0) return name;
    }
}

/// Apply a single-letter substitution g := expr to a presentation, dropping
/// the generator; expr lives in the free algebra on the remaining letters.
/// Also pushes the substitution through tracked images.
template <scalar K>
Presentation<K> eliminate_generator(const Presentation<K>& p, int gen, const TPoly<K>& expr,
                                    std::vector<std::pair<std::string, LieElem<K>>>* images,
                                    const GeneratorSet& new_gens,
                                    const std::vector<int>& index_map) {
    Presentation<K> out(p.name, p.field, new_gens);
    std::vector<TPoly<K>> imgs(p.gens.size());
    for (int i = 0; i < p.gens.size(); ++i) {
        if (i == gen) {
            imgs[i] = expr;
        } else {
            imgs[i][Word(1, char(index_map[i]))] = Field<K>::one(p.field);
        }
    }
    for (const auto& r : p.relations) {
        LieElem<K> s = substitute(*p.free, *out.free, p.field, r, imgs);
        if (!s.is_zero()) out.relations.push_back(std::move(s));
    }
    if (images)
        for (auto& [name, img] : *images)
            img = substitute(*p.free, *out.free, p.field, img, imgs);
    return out;
}

} // namespace hnn_detail

/// Standardization: replace each top-degree generator g by a stable letter
/// t of degree (deg g - 1) with g = [t, x] for a fixed degree-1 generator x,
/// iterating until every generator has degree 1.  If no degree-1 generator
/// exists, first take the direct sum with a one-generator abelian algebra.
template <scalar K>
struct StandardizeResult {
    Presentation<K> presentation;
    EmbeddingCertificate<K> certificate;
    bool padded = false;
};

namespace hnn_detail {

template <scalar K>
Presentation<K> standardize_core(Presentation<K> cur,
                                 std::vector<std::pair<std::string, LieElem<K>>>& images,
                                 int& counter, bool* padded) {
    if (cur.gens.size() > 0 && degree_one_positions(cur.gens).empty()) {
        GeneratorSet pad;
        int pc = 0;
        pad.add(fresh_name(cur.gens, "_pad", pc), 1);
        Presentation<K> padp("pad", cur.field, pad);
        Presentation<K> old = cur;
        std::vector<int> idmap(old.gens.size());
        for (int i = 0; i < old.gens.size(); ++i) idmap[i] = i;
        cur = direct_sum(old, padp);
        auto imgs = injection_images<K>(old.field, old.gens, idmap);
        for (auto& [name, img] : images)
            img = substitute(*old.free, *cur.free, old.field, img, imgs);
        if (padded) *padded = true;
    }
    while (true) {
        int top = cur.max_generator_degree();
        if (top <= 1) break;
        for (int g = 0; g < cur.gens.size(); ++g) {
            if (cur.gens.degrees[g] != top) continue;
            int x = degree_one_positions(cur.gens).front();
            std::string t = fresh_name(cur.gens, "_e", counter);
            GeneratorSet ng;
            std::vector<int> index_map(cur.gens.size(), -1);
            for (int i = 0; i < cur.gens.size(); ++i) {
                if (i == g) continue;
                index_map[i] = ng.size();
                ng.add(cur.gens.names[i], cur.gens.degrees[i]);
            }
            int t_index = ng.size();
            ng.add(t, top - 1);
            // g := [t, x]
            TPoly<K> expr;
            Word tx{char(t_index), char(index_map[x])};
            Word xt{char(index_map[x]), char(t_index)};
            expr[tx] = Field<K>::one(cur.field);
            expr[xt] = -Field<K>::one(cur.field);
            cur = eliminate_generator(cur, g, expr, &images, ng, index_map);
            --g; // generator list shrank at or before g
        }
    }
    return cur;
}

} // namespace hnn_detail

template <scalar K>
std::vector<std::pair<std::string, LieElem<K>>> identity_images(const Presentation<K>& p) {
    std::vector<std::pair<std::string, LieElem<K>>> images;
    for (int i = 0; i < p.gens.size(); ++i) {
        LieElem<K> e{p.gens.degrees[i], {}};
        sv_set(e.coords, p.free->basis_index(e.degree, Word(1, char(i))),
               Field<K>::one(p.field));
        images.emplace_back(p.gens.names[i], e);
    }
    return images;
}

template <scalar K>
StandardizeResult<K> standardize(const Presentation<K>& p) {
    StandardizeResult<K> out;
    auto images = identity_images(p);
    int counter = 0;
    out.presentation = hnn_detail::standardize_core(p, images, counter, &out.padded);
    out.certificate.source = p;
    out.certificate.target = out.presentation;
    out.certificate.images = std::move(images);
    return out;
}

/// One summand of a left-normed split r = sum_g [g, a_g] over degree-1 slots.
template <scalar K>
struct SplitTerm {
    int slot;          // generator index in the presentation's alphabet
    LieElem<K> value;  // a_g, in the presentation's free algebra
};

/// Split a homogeneous element over the degree-1 letters that appear in it,
/// with greedy-minimal slot support (singles, then pairs, then everything).
/// Returns nullopt if the element needs a higher-degree slot.
template <scalar K>
std::optional<std::vector<SplitTerm<K>>> left_normed_split(const Presentation<K>& p,
                                                           const LieElem<K>& r) {
    FreeLie& F = *p.free;
    std::set<int> letters_set;
    for (auto& [i, c] : r.coords)
        for (char ch : F.basis(r.degree)[i]) letters_set.insert(static_cast<unsigned char>(ch));
    std::vector<int> letters(letters_set.begin(), letters_set.end());
    // sub-alphabet free algebra (order inherited)
    GeneratorSet sub;
    std::vector<int> back; // sub index -> ambient index
    for (int l : letters) {
        sub.add(p.gens.names[l], p.gens.degrees[l]);
        back.push_back(l);
    }
    FreeLie fsub(sub);
    // transport r into the sub-alphabet
    std::map<int, int> fwd;
    for (std::size_t i = 0; i < back.size(); ++i) fwd[back[i]] = static_cast<int>(i);
    TPoly<K> rt;
    {
        LieElem<K> rc = r;
        TPoly<K> amb = F.expand(p.field, rc);
        for (auto& [w, c] : amb) {
            Word nw;
            for (char ch : w) nw.push_back(char(fwd.at(static_cast<unsigned char>(ch))));
            rt[nw] = c;
        }
    }
    SVec<K> rvec = fsub.normalize(p.field, r.degree, std::move(rt));
    std::vector<int> slots;
    for (int i = 0; i < sub.size(); ++i)
        if (sub.degrees[i] == 1) slots.push_back(i);
    if (slots.empty()) return std::nullopt;

    auto try_slots = [&](const std::vector<int>& chosen)
        -> std::optional<std::vector<SplitTerm<K>>> {
        int d = r.degree;
        SpanSolver<K> solver(p.field, fsub.dim(d));
        std::vector<std::pair<int, int>> col_info; // (slot, basis index at d-1)
        for (int s : chosen) {
            SVec<K> letter;
            sv_set(letter, fsub.basis_index(1, Word(1, char(s))), Field<K>::one(p.field));
            for (int b = 0; b < fsub.dim(d - 1); ++b) {
                SVec<K> unit;
                sv_set(unit, b, Field<K>::one(p.field));
                SVec<K> col = fsub.bracket_vec(p.field, 1, letter, d - 1, unit);
                solver.add(std::move(col));
                col_info.emplace_back(s, b);
            }
        }
        auto sol = solver.solve(rvec);
        if (!sol) return std::nullopt;
        std::map<int, SVec<K>> per_slot;
        for (auto& [col, c] : *sol) {
            auto [s, b] = col_info[col];
            sv_set(per_slot[s], b, K(per_slot[s][b] + c));
        }
        std::vector<SplitTerm<K>> terms;
        for (auto& [s, vec] : per_slot) {
            if (sv_is_zero(vec)) continue;
            // transport a_g back to the ambient alphabet
            LieElem<K> sub_el{r.degree - 1, vec};
            auto imgs = injection_images<K>(p.field, sub, back);
            SplitTerm<K> term;
            term.slot = back[s];
            term.value = substitute(fsub, F, p.field, sub_el, imgs);
            terms.push_back(std::move(term));
        }
        return terms;
    };

    for (int s : slots) {
        auto t = try_slots({s});
        if (t) return t;
    }
    for (std::size_t i = 0; i < slots.size(); ++i)
        for (std::size_t j = i + 1; j < slots.size(); ++j) {
            auto t = try_slots({slots[i], slots[j]});
            if (t) return t;
        }
    return try_slots(slots);
}

/// Eliminate generators that appear linearly in a relation (the relation
/// then defines them); run to a fixed point.  Homogeneity guarantees the
/// rest of such a relation never mentions the eliminated generator.
template <scalar K>
Presentation<K> tietze_reduce(Presentation<K> p,
                              std::vector<std::pair<std::string, LieElem<K>>>* images) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t ri = 0; ri < p.relations.size() && !changed; ++ri) {
            const LieElem<K>& r = p.relations[ri];
            for (auto& [i, c] : r.coords) {
                const Word& w = p.free->basis(r.degree)[i];
                if (w.size() != 1) continue;
                int g = static_cast<unsigned char>(w[0]);
                // expr := -(1/c) * (r - c*g), over the alphabet without g
                GeneratorSet ng;
                std::vector<int> index_map(p.gens.size(), -1);
                for (int q = 0; q < p.gens.size(); ++q) {
                    if (q == g) continue;
                    index_map[q] = ng.size();
                    ng.add(p.gens.names[q], p.gens.degrees[q]);
                }
                TPoly<K> expr;
                K scale = -Field<K>::inv(c);
                LieElem<K> rest = r;
                rest.coords.erase(i);
                TPoly<K> amb = p.free->expand(p.field, rest);
                for (auto& [word, coeff] : amb) {
                    Word nw;
                    for (char ch : word) {
                        int q = static_cast<unsigned char>(ch);
                        if (q == g) throw UsageError("tietze: generator recurs (internal)");
                        nw.push_back(char(index_map[q]));
                    }
                    expr[nw] = K(coeff * scale);
                }
                p = hnn_detail::eliminate_generator(p, g, expr, images, ng, index_map);
                changed = true;
                break;
            }
        }
    }
    return p;
}

/// Replace the relation list by exactly-minimal relations of the same
/// ideal: per degree, representatives of I_e modulo the closure of the
/// lower-degree selections.  Sound because both ideals are generated in
/// degrees <= D and agree there.
template <scalar K>
Presentation<K> minimize_relations(const Presentation<K>& p) {
    int D = std::max(2, p.max_relation_degree());
    AlgebraTable<K> T = expand_tables(p, D);
    FreeLie& F = *p.free;
    Presentation<K> out(p.name, p.field, p.gens);
    std::vector<Echelon<K>> J(D + 1, Echelon<K>(p.field));
    for (int e = 2; e <= D; ++e) {
        for (int g = 0; g < p.gens.size(); ++g) {
            int w = p.gens.degrees[g];
            if (e - w < 1) continue;
            SVec<K> letter;
            sv_set(letter, F.basis_index(w, Word(1, char(g))), Field<K>::one(p.field));
            for (const auto& row : J[e - w].rows())
                J[e].add(F.bracket_vec(p.field, w, letter, e - w, row));
        }
        for (const auto& row : T.ideal[e].rows()) {
            SVec<K> v = row;
            if (J[e].add(std::move(v))) {
                LieElem<K> rel;
                rel.degree = e;
                rel.coords = row;
                out.relations.push_back(std::move(rel));
            }
        }
    }
    return out;
}

/// Cost guard for mid-pipeline minimization: total Lyndon dimensions that a
/// full expansion to D would touch.
template <scalar K>
long expansion_cost(const Presentation<K>& p, int D) {
    long total = 0;
    for (int d = 1; d <= D; ++d) total += free_dimension(p.gens, d);
    return total;
}

/// Quadratization after Theorem A's gadget, bounded by the certification
/// window N: relations of degree > N cannot affect the reported degrees and
/// are set aside (listed in the result).  Each round removes the first
/// top-degree relation, adds a fresh commuting letter t1, value letters s_i
/// and the stable letter t2, then re-standardizes, eliminates definable
/// generators and re-minimizes the relation list.
template <scalar K>
struct QuadratizeResult {
    Presentation<K> presentation;
    EmbeddingCertificate<K> certificate;
    std::vector<int> dropped_relation_degrees;
    bool padded = false;
};

template <scalar K>
QuadratizeResult<K> quadratize(const Presentation<K>& p, int N) {
    if (N < 2) throw UsageError("quadratize needs a window of degree >= 2");
    QuadratizeResult<K> out;
    auto images = identity_images(p);
    int counter = 0;
    Presentation<K> cur = hnn_detail::standardize_core(p, images, counter, &out.padded);
    {
        std::vector<LieElem<K>> kept;
        for (auto& r : cur.relations) {
            if (r.degree > N) out.dropped_relation_degrees.push_back(r.degree);
            else kept.push_back(r);
        }
        cur.relations = std::move(kept);
    }
    const long cost_cap = 60000;
    int last_level = 0;
    while (true) {
        int d = cur.max_relation_degree();
        if (d <= 2) break;
        if (last_level != d && expansion_cost(cur, d) <= cost_cap) {
            cur = minimize_relations(cur);
            d = cur.max_relation_degree();
            if (d <= 2) break;
        }
        last_level = d;
        // first relation of top degree, in presentation order
        std::size_t ri = 0;
        while (cur.relations[ri].degree != d) ++ri;
        LieElem<K> r = cur.relations[ri];
        auto split = left_normed_split(cur, r);
        if (!split) {
            cur = hnn_detail::standardize_core(cur, images, counter, nullptr);
            split = left_normed_split(cur, r); // all letters now degree 1
            if (!split) throw UsageError("left-normed split failed (internal)");
        }
        auto& terms = *split;
        cur.relations.erase(cur.relations.begin() + ri);

        // enlarge the alphabet: t1 (degree 1), s_i (degree d-2, one per
        // extra slot), t2 (degree d-2)
        Presentation<K> old = cur;
        GeneratorSet ng = old.gens;
        std::string t1 = hnn_detail::fresh_name(ng, "_h", counter);
        ng.add(t1, 1);
        int t1_idx = ng.size() - 1;
        std::vector<int> s_idx;
        for (std::size_t i = 1; i < terms.size(); ++i) {
            std::string s = hnn_detail::fresh_name(ng, "_h", counter);
            ng.add(s, d - 2);
            s_idx.push_back(ng.size() - 1);
        }
        std::string t2 = hnn_detail::fresh_name(ng, "_h", counter);
        ng.add(t2, d - 2);
        int t2_idx = ng.size() - 1;

        Presentation<K> next(old.name, old.field, ng);
        std::vector<int> idmap(old.gens.size());
        for (int i = 0; i < old.gens.size(); ++i) idmap[i] = i;
        auto imgs = injection_images<K>(old.field, old.gens, idmap);
        for (const auto& rel : old.relations)
            next.relations.push_back(substitute(*old.free, *next.free, old.field, rel, imgs));
        for (auto& [name, img] : images)
            img = substitute(*old.free, *next.free, old.field, img, imgs);

        auto unit = [&](int idx, int deg) {
            LieElem<K> e{deg, {}};
            sv_set(e.coords, next.free->basis_index(deg, Word(1, char(idx))),
                   Field<K>::one(next.field));
            return e;
        };
        LieElem<K> t1e = unit(t1_idx, 1);
        // crosses [t1, x] for every slot in the support
        for (auto& term : terms) {
            LieElem<K> x = unit(term.slot, 1);
            next.relations.push_back(bracket(*next.free, next.field, t1e, x));
        }
        // [s_i, t1] - a_i for the extra slots
        for (std::size_t i = 1; i < terms.size(); ++i) {
            LieElem<K> si = unit(s_idx[i - 1], d - 2);
            LieElem<K> rel = bracket(*next.free, next.field, si, t1e);
            LieElem<K> a = substitute(*old.free, *next.free, old.field, terms[i].value, imgs);
            sv_axpy(rel.coords, -Field<K>::one(next.field), a.coords);
            next.relations.push_back(std::move(rel));
        }
        // [t2, t1] - a_1
        {
            LieElem<K> t2e = unit(t2_idx, d - 2);
            LieElem<K> rel = bracket(*next.free, next.field, t2e, t1e);
            LieElem<K> a = substitute(*old.free, *next.free, old.field, terms[0].value, imgs);
            sv_axpy(rel.coords, -Field<K>::one(next.field), a.coords);
            next.relations.push_back(std::move(rel));
        }
        // [t2, x1] - sum_{i >= 2} [x_i, s_i]
        {
            LieElem<K> t2e = unit(t2_idx, d - 2);
            LieElem<K> rel = bracket(*next.free, next.field, t2e, unit(terms[0].slot, 1));
            for (std::size_t i = 1; i < terms.size(); ++i) {
                LieElem<K> br = bracket(*next.free, next.field, unit(terms[i].slot, 1),
                                        unit(s_idx[i - 1], d - 2));
                sv_axpy(rel.coords, -Field<K>::one(next.field), br.coords);
            }
            if (!rel.is_zero()) next.relations.push_back(std::move(rel));
        }
        cur = std::move(next);
        cur = hnn_detail::standardize_core(cur, images, counter, nullptr);
        cur = tietze_reduce(cur, &images);
    }
    if (expansion_cost(cur, std::max(2, cur.max_relation_degree())) <= cost_cap)
        cur = minimize_relations(cur);
    cur.name = p.name + "_quadratized";
    out.certificate.source = p;
    out.certificate.target = cur;
    out.certificate.images = images;
    out.presentation = std::move(cur);
    return out;
}

} // namespace kla

#endif
