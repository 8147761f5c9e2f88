#ifndef KLA_MATRIX_HPP
#define KLA_MATRIX_HPP

#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include "kla/field.hpp"

namespace kla {

/// Sparse vector: index -> nonzero coefficient.  Also used with plain
/// integer coefficients (free structure constants), hence unconstrained.
template <class K> using SVec = std::map<int, K>;

template <class K>
bool sv_is_zero(const SVec<K>& v) { return v.empty(); }

template <scalar K>
void sv_set(SVec<K>& v, int i, const std::type_identity_t<K>& c) {
    if (Field<K>::is_zero(c)) v.erase(i);
    else v[i] = c;
}

/// a += c * b
template <scalar K>
void sv_axpy(SVec<K>& a, const std::type_identity_t<K>& c, const SVec<K>& b) {
    if (Field<K>::is_zero(c)) return;
    for (auto& [i, x] : b) {
        auto it = a.find(i);
        if (it == a.end()) {
            K v = c * x;
            if (!Field<K>::is_zero(v)) a.emplace(i, v);
        } else {
            it->second = it->second + c * x;
            if (Field<K>::is_zero(it->second)) a.erase(it);
        }
    }
}

template <scalar K>
SVec<K> sv_scaled(const SVec<K>& v, const std::type_identity_t<K>& c) {
    SVec<K> r;
    if (Field<K>::is_zero(c)) return r;
    for (auto& [i, x] : v) {
        K y = c * x;
        if (!Field<K>::is_zero(y)) r.emplace(i, y);
    }
    return r;
}

template <scalar K>
SVec<K> sv_neg(const SVec<K>& v) {
    SVec<K> r;
    for (auto& [i, x] : v) r.emplace(i, -x);
    return r;
}

/// Integer-coefficient vector scaled into K.
template <scalar K>
void sv_axpy_long(const FieldSpec& fs, SVec<K>& a, const std::type_identity_t<K>& c, const SVec<long>& b) {
    for (auto& [i, x] : b) {
        K v = Field<K>::mul_long(c, x);
        if (Field<K>::is_zero(v)) continue;
        auto it = a.find(i);
        if (it == a.end()) a.emplace(i, v);
        else {
            it->second = it->second + v;
            if (Field<K>::is_zero(it->second)) a.erase(it);
        }
    }
    (void)fs;
}

namespace detail {

/// Canonical scaling: over F_p make the leading coefficient 1; over Q scale
/// to coprime integers with positive leading coefficient (this keeps the
/// elimination division-free at the row level and entries small).
inline void normalize_row(const FieldSpec&, SVec<Rat>& v) {
    if (v.empty()) return;
    Int den(1), num(0);
    for (auto& [i, x] : v) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    }
    for (auto& [i, x] : v) {
        Int n = x.get_num() * (den / x.get_den());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), n.get_mpz_t());
    }
    Rat scale(den, num);
    scale.canonicalize();
    if (sgn(v.begin()->second) < 0) scale = -scale;
    for (auto& [i, x] : v) x *= scale;
}

inline void normalize_row(const FieldSpec& fs, SVec<Fp>& v) {
    if (v.empty()) return;
    Fp lead = v.begin()->second;
    Fp il = fp_inv(lead);
    for (auto& [i, x] : v) x = x * il;
    (void)fs;
}

} // namespace detail

/// Incrementally built reduced echelon basis of a subspace.  The reduced
/// form of a span is unique, so every quotient basis and projection derived
/// from it is deterministic regardless of insertion order.
template <scalar K>
class Echelon {
public:
    explicit Echelon(FieldSpec fs = FieldSpec::rationals()) : fs_(fs) {}

    /// Reduce v against the rows; v is modified in place to its normal form.
    /// Every row's first entry is its pivot, so elimination only touches
    /// indices >= the hit column and a single ascending sweep suffices.
    void reduce(SVec<K>& v) const {
        auto it = v.begin();
        while (it != v.end()) {
            auto p = piv_.find(it->first);
            if (p == piv_.end()) { ++it; continue; }
            int col = it->first;
            const SVec<K>& row = rows_[p->second];
            K factor = -(it->second * Field<K>::inv(row.begin()->second));
            sv_axpy(v, factor, row);
            it = v.lower_bound(col);
        }
    }

    /// Insert the vector's reduction if independent; returns true if rank grew.
    bool add(SVec<K> v) {
        reduce(v);
        if (v.empty()) return false;
        detail::normalize_row(fs_, v);
        int pivot = v.begin()->first;
        // keep reduced form: clear the new pivot column from existing rows
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            auto it = rows_[r].find(pivot);
            if (it == rows_[r].end()) continue;
            K factor = -(it->second * Field<K>::inv(v.begin()->second));
            sv_axpy(rows_[r], factor, v);
            detail::normalize_row(fs_, rows_[r]);
        }
        piv_[pivot] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(v));
        return true;
    }

    bool contains(SVec<K> v) const {
        reduce(v);
        return v.empty();
    }

    int rank() const { return static_cast<int>(rows_.size()); }

    bool has_pivot(int col) const { return piv_.count(col) != 0; }

    std::vector<int> pivots() const {
        std::vector<int> p;
        p.reserve(piv_.size());
        for (auto& [c, r] : piv_) p.push_back(c);
        return p;
    }

    /// Row with the given pivot column.
    const SVec<K>& pivot_row(int col) const { return rows_[piv_.at(col)]; }

    const std::vector<SVec<K>>& rows() const { return rows_; }
    const FieldSpec& field() const { return fs_; }

    /// Columns in [0, dim) without a pivot, ascending: a canonical basis of
    /// the quotient by this subspace.
    std::vector<int> complement(int dim) const {
        std::vector<int> free;
        for (int c = 0; c < dim; ++c)
            if (!piv_.count(c)) free.push_back(c);
        return free;
    }

private:
    FieldSpec fs_;
    std::vector<SVec<K>> rows_;
    std::map<int, int> piv_; // pivot col -> row index
};

/// Echelon with coefficient tracking: answers "is v in the span of the added
/// vectors, and with which coefficients".  Ambient coordinates occupy
/// [0, dim); tag coordinates dim + k mark the k-th added vector.
template <scalar K>
class SpanSolver {
public:
    SpanSolver(FieldSpec fs, int dim) : ech_(fs), fs_(fs), dim_(dim), count_(0) {}

    int add(SVec<K> v) {
        sv_set(v, dim_ + count_, Field<K>::one(fs_));
        ech_.add(std::move(v));
        return count_++;
    }

    /// If v lies in the span, return coefficients (index of added vector,
    /// coefficient); otherwise nullopt.
    std::optional<std::vector<std::pair<int, K>>> solve(SVec<K> v) const {
        ech_.reduce(v);
        std::vector<std::pair<int, K>> coeffs;
        for (auto& [i, c] : v) {
            if (i < dim_) return std::nullopt;
            coeffs.emplace_back(i - dim_, -c);
        }
        return coeffs;
    }

private:
    Echelon<K> ech_;
    FieldSpec fs_;
    int dim_;
    int count_;
};

/// Sparse exact matrix over one field.
template <scalar K>
struct ExactMatrix {
    int rows = 0;
    int cols = 0;
    FieldSpec fs;
    std::map<std::pair<int, int>, K> a;

    ExactMatrix(int r, int c, FieldSpec f) : rows(r), cols(c), fs(f) {}

    void set(int r, int c, const K& v) {
        if (r < 0 || r >= rows || c < 0 || c >= cols) throw UsageError("matrix index out of range");
        if (Field<K>::is_zero(v)) a.erase({r, c});
        else a[{r, c}] = v;
    }

    SVec<K> row(int r) const {
        SVec<K> v;
        for (auto it = a.lower_bound({r, 0}); it != a.end() && it->first.first == r; ++it)
            v[it->first.second] = it->second;
        return v;
    }
};

template <scalar K>
struct RankKernel {
    int rank = 0;
    std::vector<SVec<K>> kernel; // right kernel basis, canonical
};

/// Rank and an exact basis of the right kernel {v : M v = 0}.
template <scalar K>
RankKernel<K> rank_kernel(const ExactMatrix<K>& m) {
    Echelon<K> ech(m.fs);
    for (int r = 0; r < m.rows; ++r) {
        SVec<K> row = m.row(r);
        if (!row.empty()) ech.add(std::move(row));
    }
    RankKernel<K> out;
    out.rank = ech.rank();
    for (int f : ech.complement(m.cols)) {
        SVec<K> v;
        sv_set(v, f, Field<K>::one(m.fs));
        for (int p : ech.pivots()) {
            const SVec<K>& row = ech.pivot_row(p);
            auto it = row.find(f);
            if (it == row.end()) continue;
            sv_set(v, p, -(it->second * Field<K>::inv(row.begin()->second)));
        }
        detail::normalize_row(m.fs, v);
        out.kernel.push_back(std::move(v));
    }
    return out;
}

} // namespace kla

#endif
