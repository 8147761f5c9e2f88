#ifndef KLA_BUILDERS_HPP
#define KLA_BUILDERS_HPP

#include <string>
#include <vector>

#include "kla/presentation.hpp"

namespace kla {

/// Re-express a homogeneous element through a letter substitution.  Image
/// polynomials must be homogeneous of the same degree as their letter (or
/// empty, meaning the letter maps to zero).
template <scalar K>
LieElem<K> substitute(FreeLie& src, FreeLie& dst, const FieldSpec& fs, const LieElem<K>& e,
                      const std::vector<TPoly<K>>& letter_image) {
    TPoly<K> expanded = src.expand(fs, e);
    TPoly<K> out;
    for (auto& [w, c] : expanded) {
        // product of letter images over the word
        TPoly<K> acc{{Word{}, c}};
        for (char ch : w) {
            const TPoly<K>& img = letter_image[static_cast<unsigned char>(ch)];
            if (img.empty()) { acc.clear(); break; }
            TPoly<K> next;
            for (auto& [wa, ca] : acc)
                for (auto& [wi, ci] : img) {
                    K v = ca * ci;
                    auto key = wa + wi;
                    auto it = next.find(key);
                    if (it == next.end()) {
                        if (!Field<K>::is_zero(v)) next.emplace(key, v);
                    } else {
                        it->second = it->second + v;
                        if (Field<K>::is_zero(it->second)) next.erase(it);
                    }
                }
            acc = std::move(next);
            if (acc.empty()) break;
        }
        for (auto& [wk, ck] : acc) {
            auto it = out.find(wk);
            if (it == out.end()) out.emplace(wk, ck);
            else {
                it->second = it->second + ck;
                if (Field<K>::is_zero(it->second)) out.erase(it);
            }
        }
    }
    LieElem<K> r;
    r.degree = e.degree;
    r.coords = dst.normalize(fs, e.degree, std::move(out));
    return r;
}

/// Identity images for an injection of alphabets given by index_map.
template <scalar K>
std::vector<TPoly<K>> injection_images(const FieldSpec& fs, const GeneratorSet& src,
                                        const std::vector<int>& index_map) {
    std::vector<TPoly<K>> imgs(src.size());
    for (int i = 0; i < src.size(); ++i)
        imgs[i][Word(1, char(index_map[i]))] = Field<K>::one(fs);
    return imgs;
}

/// Direct sum: disjoint generators, both relation sets, and all cross
/// brackets [g_p, g_q] as new relations.
template <scalar K>
Presentation<K> direct_sum(const Presentation<K>& p, const Presentation<K>& q) {
    if (!(p.field == q.field)) throw UsageError("direct sum over different fields");
    GeneratorSet g = p.gens;
    for (int i = 0; i < q.gens.size(); ++i) g.add(q.gens.names[i], q.gens.degrees[i]);
    Presentation<K> out(p.name + "+" + q.name, p.field, g);
    std::vector<int> pmap(p.gens.size()), qmap(q.gens.size());
    for (int i = 0; i < p.gens.size(); ++i) pmap[i] = i;
    for (int i = 0; i < q.gens.size(); ++i) qmap[i] = p.gens.size() + i;
    auto pimg = injection_images<K>(p.field, p.gens, pmap);
    auto qimg = injection_images<K>(q.field, q.gens, qmap);
    for (const auto& r : p.relations)
        out.relations.push_back(substitute(*p.free, *out.free, p.field, r, pimg));
    for (const auto& r : q.relations)
        out.relations.push_back(substitute(*q.free, *out.free, q.field, r, qimg));
    for (int i = 0; i < p.gens.size(); ++i)
        for (int j = 0; j < q.gens.size(); ++j) {
            LieElem<K> a{p.gens.degrees[i], {}}, b{q.gens.degrees[j], {}};
            sv_set(a.coords, out.free->basis_index(a.degree, Word(1, char(pmap[i]))),
                   Field<K>::one(p.field));
            sv_set(b.coords, out.free->basis_index(b.degree, Word(1, char(qmap[j]))),
                   Field<K>::one(p.field));
            out.relations.push_back(bracket(*out.free, p.field, a, b));
        }
    return out;
}

/// Free product: generators and relations side by side, nothing else.
template <scalar K>
Presentation<K> free_product(const Presentation<K>& p, const Presentation<K>& q) {
    if (!(p.field == q.field)) throw UsageError("free product over different fields");
    GeneratorSet g = p.gens;
    for (int i = 0; i < q.gens.size(); ++i) g.add(q.gens.names[i], q.gens.degrees[i]);
    Presentation<K> out(p.name + "*" + q.name, p.field, g);
    std::vector<int> pmap(p.gens.size()), qmap(q.gens.size());
    for (int i = 0; i < p.gens.size(); ++i) pmap[i] = i;
    for (int i = 0; i < q.gens.size(); ++i) qmap[i] = p.gens.size() + i;
    auto pimg = injection_images<K>(p.field, p.gens, pmap);
    auto qimg = injection_images<K>(q.field, q.gens, qmap);
    for (const auto& r : p.relations)
        out.relations.push_back(substitute(*p.free, *out.free, p.field, r, pimg));
    for (const auto& r : q.relations)
        out.relations.push_back(substitute(*q.free, *out.free, q.field, r, qimg));
    return out;
}

/// Quotient by a span of degree-1 generators: eliminate the pivots of V by a
/// basis change and rewrite every relation.  Vectors are coordinates over
/// the degree-1 generators in declaration order.
template <scalar K>
Presentation<K> quotient_by_span(const Presentation<K>& p, const std::vector<SVec<K>>& span) {
    // degree-1 generator positions
    std::vector<int> deg1;
    for (int i = 0; i < p.gens.size(); ++i)
        if (p.gens.degrees[i] == 1) deg1.push_back(i);
    Echelon<K> v(p.field);
    for (const auto& w : span) {
        for (auto& [i, c] : w)
            if (i < 0 || i >= static_cast<int>(deg1.size()))
                throw UsageError("span vector outside the degree-1 generator space");
        v.add(w);
    }
    // eliminated generator (by pivot) -> expression in the kept ones
    std::vector<bool> killed(p.gens.size(), false);
    for (int piv : v.pivots()) killed[deg1[piv]] = true;
    GeneratorSet g;
    std::vector<int> new_index(p.gens.size(), -1);
    for (int i = 0; i < p.gens.size(); ++i) {
        if (killed[i]) continue;
        new_index[i] = g.size();
        g.add(p.gens.names[i], p.gens.degrees[i]);
    }
    Presentation<K> out(p.name + "_quot", p.field, g);
    std::vector<TPoly<K>> imgs(p.gens.size());
    for (int i = 0; i < p.gens.size(); ++i)
        if (!killed[i]) imgs[i][Word(1, char(new_index[i]))] = Field<K>::one(p.field);
    for (int piv : v.pivots()) {
        const SVec<K>& row = v.pivot_row(piv);
        K lead_inv = Field<K>::inv(row.begin()->second);
        TPoly<K>& img = imgs[deg1[piv]];
        for (auto& [j, c] : row) {
            if (j == piv) continue;
            int gen = deg1[j];
            if (killed[gen])
                throw UsageError("span basis is not in echelon form"); // cannot happen: RREF
            K coeff = -(c * lead_inv);
            img[Word(1, char(new_index[gen]))] = coeff;
        }
    }
    for (const auto& r : p.relations) {
        LieElem<K> s = substitute(*p.free, *out.free, p.field, r, imgs);
        if (!s.is_zero()) out.relations.push_back(std::move(s));
    }
    return out;
}

} // namespace kla

#endif
