#ifndef KLA_LYNDON_HPP
#define KLA_LYNDON_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kla/field.hpp"
#include "kla/matrix.hpp"
#include "kla/series.hpp"

namespace kla {

/// Ordered, weighted generators of a free graded Lie algebra.  The order is
/// declaration order and fixes every downstream basis.
struct GeneratorSet {
    std::vector<std::string> names;
    std::vector<int> degrees;

    int size() const { return static_cast<int>(names.size()); }

    int degree_of(int i) const { return degrees[i]; }

    int find(const std::string& n) const {
        for (int i = 0; i < size(); ++i)
            if (names[i] == n) return i;
        return -1;
    }

    void add(const std::string& n, int deg) {
        if (find(n) >= 0) throw UsageError("duplicate generator '" + n + "'");
        if (deg < 1) throw UsageError("generator degree must be >= 1");
        if (size() >= 250) throw UsageError("too many generators");
        names.push_back(n);
        degrees.push_back(deg);
    }

    bool operator==(const GeneratorSet&) const = default;
};

/// Associative words in the generators; letters are generator indices.
/// Short strings keep these allocation-free at the lengths we use.
using Word = std::string;

/// Integer-coefficient noncommutative polynomial (element of the tensor
/// algebra).  Lyndon-basis expansions always have integer coefficients.
using TPolyZ = std::map<Word, long>;

template <scalar K> using TPoly = std::map<Word, K>;

/// Homogeneous element of the free Lie algebra, as sparse coordinates in the
/// Lyndon basis of its degree.
template <scalar K>
struct LieElem {
    int degree = 0;
    SVec<K> coords;

    bool is_zero() const { return coords.empty(); }
};

namespace detail {

inline bool is_lyndon(const Word& w) {
    // strictly smaller than every proper rotation <=> smaller than every
    // proper suffix
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w.compare(w.substr(i)) >= 0) return false;
    return true;
}

/// Standard (right) factorization of a Lyndon word of length >= 2: the right
/// factor is the lexicographically smallest proper suffix.
inline std::size_t std_split(const Word& w) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < w.size(); ++i)
        if (w.compare(i, Word::npos, w, best, Word::npos) < 0) best = i;
    return best;
}

inline void tz_add(TPolyZ& a, const TPolyZ& b, long c) {
    for (auto& [w, x] : b) {
        long& slot = a[w];
        slot += c * x;
        if (slot == 0) a.erase(w);
    }
}

/// Commutator product a*b - b*a of integer tensor polynomials.
inline TPolyZ tz_commutator(const TPolyZ& a, const TPolyZ& b) {
    TPolyZ r;
    for (auto& [wa, ca] : a)
        for (auto& [wb, cb] : b) {
            long c = ca * cb;
            {
                long& s = r[wa + wb];
                s += c;
                if (s == 0) r.erase(wa + wb);
            }
            {
                long& s = r[wb + wa];
                s -= c;
                if (s == 0) r.erase(wb + wa);
            }
        }
    return r;
}

} // namespace detail

/// Shared per-generator-set cache of Lyndon bases, their tensor expansions
/// and free structure constants.  Built degree by degree under a
/// single-writer discipline; lookups afterwards are read-only.
class FreeLie {
public:
    explicit FreeLie(GeneratorSet g) : gens_(std::move(g)) {
        if (gens_.size() == 0) built_ = 0;
    }

    const GeneratorSet& gens() const { return gens_; }

    int word_weight(const Word& w) const {
        int s = 0;
        for (char c : w) s += gens_.degrees[static_cast<unsigned char>(c)];
        return s;
    }

    /// Lyndon basis of the given weight, in lexicographic word order.
    const std::vector<Word>& basis(int weight) {
        ensure(weight);
        return basis_[weight];
    }

    int dim(int weight) {
        ensure(weight);
        return static_cast<int>(basis_[weight].size());
    }

    int basis_index(int weight, const Word& w) {
        ensure(weight);
        auto it = index_[weight].find(w);
        return it == index_[weight].end() ? -1 : it->second;
    }

    /// Integer tensor expansion of the standard bracketing of basis word i.
    const TPolyZ& expansion(int weight, int i) {
        ensure(weight);
        auto& slot = expans_[weight][i];
        if (!slot) {
            slot = std::make_unique<TPolyZ>(expand_word(basis_[weight][i]));
        }
        return *slot;
    }

    /// Free structure constants: coordinates of [b_i, b_j] (weights wa, wb).
    const SVec<long>& bracket_basis(int wa, int ia, int wb, int ib) {
        auto key = std::make_tuple(wa, ia, wb, ib);
        auto it = brkt_.find(key);
        if (it != brkt_.end()) return it->second;
        TPolyZ t = detail::tz_commutator(expansion(wa, ia), expansion(wb, ib));
        SVec<long> coords = normalize_z(wa + wb, std::move(t));
        return brkt_.emplace(key, std::move(coords)).first->second;
    }

    /// Bracket of sparse coordinate vectors of the stated weights.
    template <scalar K>
    SVec<K> bracket_vec(const FieldSpec& fs, int wa, const SVec<K>& a, int wb, const SVec<K>& b) {
        SVec<K> out;
        for (auto& [ia, ca] : a)
            for (auto& [ib, cb] : b) {
                if (wa == wb && ia == ib) continue;
                const SVec<long>& sc = bracket_basis(wa, ia, wb, ib);
                sv_axpy_long(fs, out, ca * cb, sc);
            }
        return out;
    }

    /// Reduce a tensor polynomial of pure weight to Lyndon coordinates.
    /// Throws if a non-Lie residue remains.
    template <scalar K>
    SVec<K> normalize(const FieldSpec& fs, int weight, TPoly<K> t) {
        SVec<K> coords;
        while (!t.empty()) {
            auto lead = t.begin(); // lexicographically least word
            int idx = basis_index(weight, lead->first);
            if (idx < 0)
                throw UsageError("tensor polynomial is not a Lie element");
            K c = lead->second;
            sv_set(coords, idx, c);
            const TPolyZ& ex = expansion(weight, idx);
            for (auto& [w, z] : ex) {
                K v = Field<K>::mul_long(c, z);
                auto it = t.find(w);
                if (it == t.end()) {
                    if (!Field<K>::is_zero(v)) t.emplace(w, -v);
                } else {
                    it->second = it->second - v;
                    if (Field<K>::is_zero(it->second)) t.erase(it);
                }
            }
        }
        return coords;
    }

    /// Integer variant (expansions are unimodular in the lead, so reduction
    /// of an integer Lie element stays integral).
    SVec<long> normalize_z(int weight, TPolyZ t) {
        SVec<long> coords;
        while (!t.empty()) {
            auto lead = t.begin();
            int idx = basis_index(weight, lead->first);
            if (idx < 0) throw UsageError("tensor polynomial is not a Lie element");
            long c = lead->second;
            coords[idx] = c;
            const TPolyZ& ex = expansion(weight, idx);
            detail::tz_add(t, ex, -c);
        }
        return coords;
    }

    /// Tensor expansion of a coordinate element.
    template <scalar K>
    TPoly<K> expand(const FieldSpec& fs, const LieElem<K>& e) {
        TPoly<K> out;
        for (auto& [i, c] : e.coords) {
            const TPolyZ& ex = expansion(e.degree, i);
            for (auto& [w, z] : ex) {
                K v = Field<K>::mul_long(c, z);
                auto it = out.find(w);
                if (it == out.end()) {
                    if (!Field<K>::is_zero(v)) out.emplace(w, v);
                } else {
                    it->second = it->second + v;
                    if (Field<K>::is_zero(it->second)) out.erase(it);
                }
            }
            (void)fs;
        }
        return out;
    }

    /// Standard bracketing of a Lyndon word rendered with generator names.
    std::string bracketing_str(const Word& w) const {
        if (w.size() == 1) return gens_.names[static_cast<unsigned char>(w[0])];
        std::size_t s = detail::std_split(w);
        return "[" + bracketing_str(w.substr(0, s)) + "," + bracketing_str(w.substr(s)) + "]";
    }

private:
    void ensure(int weight) {
        if (weight <= built_) return;
        if (weight > 12) throw UsageError("truncation degree above the supported cap (12)");
        // Duval's algorithm: all Lyndon words of length <= weight in lex
        // order, bucketed by weight.  Buckets already built are unchanged.
        std::vector<std::vector<Word>> buckets(weight + 1);
        int g = gens_.size();
        if (g > 0) {
            Word cur(1, char(0));
            while (true) {
                int ww = word_weight(cur);
                if (ww <= weight) buckets[ww].push_back(cur);
                Word t = cur;
                while (static_cast<int>(t.size()) < weight) t.push_back(t[t.size() % cur.size()]);
                while (!t.empty() && static_cast<unsigned char>(t.back()) == g - 1) t.pop_back();
                if (t.empty()) break;
                t.back() = char(static_cast<unsigned char>(t.back()) + 1);
                cur = t;
            }
        }
        basis_.resize(weight + 1);
        index_.resize(weight + 1);
        expans_.resize(weight + 1);
        for (int w = built_ + 1; w <= weight; ++w) {
            basis_[w] = std::move(buckets[w]);
            for (int i = 0; i < static_cast<int>(basis_[w].size()); ++i) index_[w][basis_[w][i]] = i;
            expans_[w] = std::vector<std::unique_ptr<TPolyZ>>(basis_[w].size());
        }
        built_ = weight;
    }

    TPolyZ expand_word(const Word& w) {
        if (w.size() == 1) return TPolyZ{{w, 1}};
        std::size_t s = detail::std_split(w);
        TPolyZ left = expand_word(w.substr(0, s));
        TPolyZ right = expand_word(w.substr(s));
        return detail::tz_commutator(left, right);
    }

    GeneratorSet gens_;
    int built_ = 0;
    std::vector<std::vector<Word>> basis_;
    std::vector<std::map<Word, int>> index_;
    std::vector<std::vector<std::unique_ptr<TPolyZ>>> expans_;
    std::map<std::tuple<int, int, int, int>, SVec<long>> brkt_;
};

/// Bracket of homogeneous elements over the same generator set.
template <scalar K>
LieElem<K> bracket(FreeLie& f, const FieldSpec& fs, const LieElem<K>& u, const LieElem<K>& v) {
    LieElem<K> r;
    r.degree = u.degree + v.degree;
    r.coords = f.bracket_vec(fs, u.degree, u.coords, v.degree, v.coords);
    return r;
}

/// Dimension of the free graded Lie algebra in the given weight, by the
/// generalized necklace (Witt) formula: n*l_n = sum_{d|n} mu(d) S(n/d) with
/// S(m) = m [t^m](-log(1 - H_V)).  Independent of the Lyndon enumeration.
inline long free_dimension(const GeneratorSet& g, int n) {
    if (n < 1) throw UsageError("free_dimension needs degree >= 1");
    PolySeries h;
    for (int d : g.degrees) h = h + PolySeries::monomial(d, Rat(1));
    h = h.truncated(n);
    PolySeries u = PolySeries::zero().truncated(n);
    PolySeries hp = PolySeries::one().truncated(n);
    for (int j = 1; j <= n; ++j) {
        hp = hp * h;
        if (hp.is_zero()) break;
        u = u + hp.scaled(rat(1, j));
    }
    auto mobius = [](int m) {
        int r = 1;
        for (int p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                m /= p;
                if (m % p == 0) return 0;
                r = -r;
            }
        }
        if (m > 1) r = -r;
        return r;
    };
    Rat total(0);
    for (int d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        int m = n / d;
        int mu = mobius(d);
        if (mu == 0) continue;
        total += Rat(mu) * Rat(m) * u.coeff(m);
    }
    Rat l = total / n;
    if (l.get_den() != 1) throw DomainError("necklace formula produced a non-integer");
    return static_cast<long>(l.get_num().get_si());
}

} // namespace kla

#endif
