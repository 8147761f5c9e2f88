#ifndef KLA_SERIES_HPP
#define KLA_SERIES_HPP

#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "kla/field.hpp"

namespace kla {

/// Exact polynomial or truncated power series with rational coefficients.
/// A value either is an honest polynomial (finitely many coefficients, all
/// known) or is known modulo t^{N+1} for its truncation N.  Arithmetic
/// propagates truncations and refuses to report coefficients beyond them.
class PolySeries {
public:
    PolySeries() = default;

    static PolySeries zero() { return PolySeries{}; }
    static PolySeries one() { return monomial(0, Rat(1)); }

    static PolySeries monomial(int deg, const Rat& c) {
        PolySeries s;
        if (sgn(c) != 0) s.c_[deg] = c;
        return s;
    }

    static PolySeries polynomial(const std::vector<Rat>& coeffs) {
        PolySeries s;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (sgn(coeffs[i]) != 0) s.c_[static_cast<int>(i)] = coeffs[i];
        return s;
    }

    bool is_polynomial() const { return !trunc_.has_value(); }
    std::optional<int> truncation() const { return trunc_; }

    /// Degree of a polynomial (-1 for the zero polynomial).
    int degree() const {
        if (!is_polynomial()) throw UsageError("degree of a truncated series");
        return c_.empty() ? -1 : c_.rbegin()->first;
    }

    Rat coeff(int i) const {
        if (trunc_ && i > *trunc_)
            throw UsageError("coefficient beyond series truncation");
        auto it = c_.find(i);
        return it == c_.end() ? Rat(0) : it->second;
    }

    /// Largest index with a nonzero coefficient within the known window.
    int top_nonzero() const { return c_.empty() ? -1 : c_.rbegin()->first; }

    PolySeries truncated(int n) const {
        PolySeries s;
        s.trunc_ = trunc_ ? std::min(*trunc_, n) : n;
        for (auto& [d, c] : c_)
            if (d <= *s.trunc_) s.c_[d] = c;
        return s;
    }

    friend PolySeries operator+(const PolySeries& a, const PolySeries& b) {
        PolySeries s = a.with_joined_trunc(b);
        for (auto& [d, c] : b.c_) {
            if (s.trunc_ && d > *s.trunc_) continue;
            Rat v = s.coeff0(d) + c;
            s.set(d, v);
        }
        return s;
    }

    friend PolySeries operator-(const PolySeries& a, const PolySeries& b) {
        PolySeries s = a.with_joined_trunc(b);
        for (auto& [d, c] : b.c_) {
            if (s.trunc_ && d > *s.trunc_) continue;
            Rat v = s.coeff0(d) - c;
            s.set(d, v);
        }
        return s;
    }

    friend PolySeries operator*(const PolySeries& a, const PolySeries& b) {
        PolySeries s;
        if (a.trunc_ || b.trunc_) {
            int n = std::min(a.trunc_.value_or(INT32_MAX), b.trunc_.value_or(INT32_MAX));
            s.trunc_ = n;
        }
        for (auto& [da, ca] : a.c_)
            for (auto& [db, cb] : b.c_) {
                int d = da + db;
                if (s.trunc_ && d > *s.trunc_) continue;
                s.set(d, s.coeff0(d) + ca * cb);
            }
        return s;
    }

    PolySeries scaled(const Rat& r) const {
        PolySeries s;
        s.trunc_ = trunc_;
        if (sgn(r) == 0) return s;
        for (auto& [d, c] : c_) s.c_[d] = c * r;
        return s;
    }

    /// Multiplicative inverse modulo t^{n+1}; requires a nonzero constant term.
    PolySeries inverse(int n) const {
        Rat c0 = coeff(0);
        if (sgn(c0) == 0) throw DomainError("series inverse needs a nonzero constant term");
        PolySeries q;
        q.trunc_ = n;
        Rat ic0 = Rat(1) / c0;
        q.c_[0] = ic0;
        for (int k = 1; k <= n; ++k) {
            Rat acc(0);
            for (auto& [i, ci] : c_) {
                if (i <= 0 || i > k) continue;
                Rat qk = q.coeff0(k - i);
                if (sgn(qk) != 0) acc += ci * qk;
            }
            Rat v = -acc * ic0;
            q.set(k, v);
        }
        return q;
    }

    /// Substitute t -> -t.
    PolySeries alternated() const {
        PolySeries s;
        s.trunc_ = trunc_;
        for (auto& [d, c] : c_) s.c_[d] = (d % 2 == 0) ? c : -c;
        return s;
    }

    Rat eval(const Rat& x) const {
        if (!is_polynomial()) throw UsageError("evaluating a truncated series");
        Rat acc(0);
        // Horner over the sparse support.
        int prev = -1;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            if (prev >= 0)
                for (int k = it->first; k < prev; ++k) acc *= x;
            acc += it->second;
            prev = it->first;
        }
        if (prev > 0)
            for (int k = 0; k < prev; ++k) acc *= x;
        return acc;
    }

    bool operator==(const PolySeries& o) const { return c_ == o.c_ && trunc_ == o.trunc_; }

    bool is_zero() const { return c_.empty(); }

    const std::map<int, Rat>& support() const { return c_; }

    std::string str() const {
        if (c_.empty()) return trunc_ ? "0 + O(t^" + std::to_string(*trunc_ + 1) + ")" : "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [d, c] : c_) {
            Rat a = c;
            if (first) {
                if (sgn(a) < 0) { os << "-"; a = -a; }
            } else {
                os << (sgn(a) < 0 ? " - " : " + ");
                if (sgn(a) < 0) a = -a;
            }
            first = false;
            bool unit = (a == 1);
            if (d == 0) os << a.get_str();
            else {
                if (!unit) os << a.get_str() << "*";
                os << "t";
                if (d != 1) os << "^" << d;
            }
        }
        if (trunc_) os << " + O(t^" << *trunc_ + 1 << ")";
        return os.str();
    }

private:
    Rat coeff0(int i) const {
        auto it = c_.find(i);
        return it == c_.end() ? Rat(0) : it->second;
    }
    void set(int d, const Rat& v) {
        if (sgn(v) == 0) c_.erase(d);
        else c_[d] = v;
    }
    PolySeries with_joined_trunc(const PolySeries& b) const {
        PolySeries s = *this;
        if (trunc_ || b.trunc_) {
            int n = std::min(trunc_.value_or(INT32_MAX), b.trunc_.value_or(INT32_MAX));
            s = truncated(n);
        }
        return s;
    }

    std::map<int, Rat> c_;
    std::optional<int> trunc_;
};

} // namespace kla

#endif
