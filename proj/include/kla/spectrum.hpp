#ifndef KLA_SPECTRUM_HPP
#define KLA_SPECTRUM_HPP

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "kla/series.hpp"

namespace kla {

/// Poincare polynomial: exact nonnegative Betti numbers with b_0 = 1.
/// Diagonal data read off a truncated table is only as complete as its
/// cutoff; the provenance label travels with every report.
struct PoincarePoly {
    std::vector<long> b; // b[i]
    std::string provenance;

    PoincarePoly() = default;
    PoincarePoly(std::vector<long> coeffs, std::string prov)
        : b(std::move(coeffs)), provenance(std::move(prov)) {
        if (b.empty() || b[0] != 1) throw UsageError("poincare polynomial needs b_0 = 1");
        for (long c : b)
            if (c < 0) throw UsageError("poincare coefficients must be nonnegative");
        while (b.size() > 1 && b.back() == 0) b.pop_back();
    }

    int degree() const { return static_cast<int>(b.size()) - 1; }

    PolySeries series() const {
        std::vector<Rat> cs;
        for (long c : b) cs.emplace_back(c);
        return PolySeries::polynomial(cs);
    }

    long eval_at_one() const {
        long s = 0;
        for (long c : b) s += c;
        return s;
    }

    long euler_characteristic() const {
        long s = 0;
        for (std::size_t i = 0; i < b.size(); ++i) s += (i % 2 == 0) ? b[i] : -b[i];
        return s;
    }
};

/// Complex eigenvalues lambda_i with P(t) = prod (1 + lambda_i t), found by
/// simultaneous (Durand-Kerner) iteration on the roots of P.
struct EigenvalueSet {
    struct Value {
        std::complex<double> lambda;
        int multiplicity = 1;
    };
    std::vector<Value> values;
    double residual = 0.0;
    bool converged = true;
};

namespace spectrum_detail {

/// Coefficients of the j-th derivative (descending j applications).
inline std::vector<double> derivative(const std::vector<double>& c, int j) {
    std::vector<double> d = c;
    for (int k = 0; k < j; ++k) {
        std::vector<double> next(d.size() > 1 ? d.size() - 1 : 1, 0.0);
        for (std::size_t i = 1; i < d.size(); ++i) next[i - 1] = d[i] * static_cast<double>(i);
        if (d.size() <= 1) next[0] = 0.0;
        d = std::move(next);
    }
    return d;
}

inline std::complex<double> horner(const std::vector<double>& c, std::complex<double> x) {
    std::complex<double> acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline double coeff_scale(const std::vector<double>& c, double radius) {
    double s = 0, pw = 1;
    for (double v : c) {
        s += std::abs(v) * pw;
        pw *= std::max(1.0, radius);
    }
    return std::max(s, 1.0);
}

} // namespace spectrum_detail

/// Durand-Kerner iteration, then verified multiplicity clustering: nearby
/// roots merge only if Newton refinement on the (k-1)-st derivative lands on
/// a point annihilating all lower derivatives to working precision.  This
/// keeps (1+t)^n exact to machine precision despite the clustered roots.
inline EigenvalueSet eigenvalues(const PoincarePoly& p, double tol = 1e-12) {
    using namespace spectrum_detail;
    EigenvalueSet out;
    int n = p.degree();
    if (n == 0) return out;
    std::vector<double> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = static_cast<double>(p.b[i]);
    std::vector<std::complex<double>> roots(n);
    std::complex<double> seed(0.4, 0.9), pw = 1.0;
    for (int i = 0; i < n; ++i) {
        pw *= seed;
        roots[i] = pw;
    }
    double delta_err = 0;
    for (int iter = 0; iter < 2000; ++iter) {
        delta_err = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> denom = c[n];
            for (int k = 0; k < n; ++k)
                if (k != i) denom *= roots[i] - roots[k];
            std::complex<double> delta = horner(c, roots[i]) / denom;
            roots[i] -= delta;
            delta_err = std::max(delta_err, std::abs(delta));
        }
        if (delta_err < tol) break;
    }
    // residual convergence: multiple roots stall in delta but not in |P|
    double residual = 0;
    for (auto& r : roots) {
        double scale = coeff_scale(c, std::abs(r));
        residual = std::max(residual, std::abs(horner(c, r)) / scale);
    }
    out.residual = residual;
    out.converged = delta_err < tol || residual < 1e-10;

    // single-linkage clusters with a generous cutoff; false merges are
    // rejected by the derivative verification below
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double cutoff = 2e-2 * std::max({1.0, std::abs(roots[i]), std::abs(roots[j])});
            if (std::abs(roots[i] - roots[j]) < cutoff) parent[find(i)] = find(j);
        }
    std::map<int, std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) clusters[find(i)].push_back(i);

    std::vector<std::pair<std::complex<double>, int>> certified;
    for (auto& [rep, members] : clusters) {
        std::vector<int> pending = members;
        while (!pending.empty()) {
            int k = static_cast<int>(pending.size());
            std::complex<double> center = 0;
            for (int m : pending) center += roots[m];
            center /= static_cast<double>(k);
            bool ok = false;
            if (k == 1) {
                ok = true;
            } else {
                // refine on P^(k-1), where the k-fold root is simple
                std::vector<double> dk1 = derivative(c, k - 1);
                std::vector<double> dk = derivative(c, k);
                std::complex<double> z = center;
                for (int it = 0; it < 100; ++it) {
                    std::complex<double> f = horner(dk1, z), fp = horner(dk, z);
                    if (std::abs(fp) == 0.0) break;
                    std::complex<double> step = f / fp;
                    z -= step;
                    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
                }
                ok = true;
                for (int j = 0; j < k && ok; ++j) {
                    std::vector<double> dj = derivative(c, j);
                    double scale = coeff_scale(dj, std::abs(z));
                    if (std::abs(horner(dj, z)) > 1e-8 * scale) ok = false;
                }
                if (ok) center = z;
            }
            if (ok) {
                certified.emplace_back(center, k);
                pending.clear();
            } else {
                // split: peel the root farthest from the center
                std::size_t far = 0;
                double best = -1;
                for (std::size_t q = 0; q < pending.size(); ++q) {
                    double d = std::abs(roots[pending[q]] - center);
                    if (d > best) { best = d; far = q; }
                }
                certified.emplace_back(roots[pending[far]], 1);
                pending.erase(pending.begin() + far);
            }
        }
    }
    for (auto& [root, mult] : certified)
        out.values.push_back({-1.0 / root, mult});
    std::sort(out.values.begin(), out.values.end(), [](const auto& a, const auto& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    return out;
}

/// Real eigenvalues with their signs; any nonpositive real eigenvalue is
/// flagged (it rules out a genuine type-FP Poincare polynomial).
struct PositivityReport {
    struct Entry {
        double value;
        int multiplicity;
        bool violation;
    };
    std::vector<Entry> real_eigenvalues;
    bool any_violation = false;
};

inline PositivityReport positivity_report(const EigenvalueSet& e, double imag_tol = 1e-7) {
    PositivityReport rep;
    for (auto& v : e.values) {
        if (std::abs(v.lambda.imag()) > imag_tol) continue;
        PositivityReport::Entry entry{v.lambda.real(), v.multiplicity,
                                      v.lambda.real() <= imag_tol};
        rep.any_violation = rep.any_violation || entry.violation;
        rep.real_eigenvalues.push_back(entry);
    }
    return rep;
}

/// omega(L) = (n-1) b_1^2 - 2 n b_2, exact.
inline long omega_b2(long b1, long b2, long n) {
    if (n < 1) throw UsageError("omega needs cohomological dimension >= 1");
    return (n - 1) * b1 * b1 - 2 * n * b2;
}

/// Newton's inequality at position j for a degree-n polynomial with
/// nonnegative coefficients: b_{j-1} b_{j+1} <= j(n-j)/((j+1)(n-j+1)) b_j^2.
struct NewtonVerdict {
    bool pass = true;
    Rat slack; // rhs - lhs, exact
};

inline NewtonVerdict newton_check(const PoincarePoly& p, int j) {
    int n = p.degree();
    if (j < 1 || j > n - 1) throw UsageError("newton index out of range");
    auto coeff = [&](int i) { return Rat(i >= 0 && i <= n ? p.b[i] : 0); };
    Rat lhs = coeff(j - 1) * coeff(j + 1);
    Rat rhs = rat(static_cast<long>(j) * (n - j), static_cast<long>(j + 1) * (n - j + 1)) *
              coeff(j) * coeff(j);
    NewtonVerdict v;
    v.slack = rhs - lhs;
    v.pass = sgn(v.slack) >= 0;
    return v;
}

/// Bogvad divisibility: 1/H_U(t), computed on the truncation window, should
/// look polynomial and be divisible by 1 - t^n for each center degree n.
struct BogvadReport {
    bool window_polynomial = false;
    PolySeries inverse;                       // the computed window of 1/H_U
    std::vector<std::pair<int, bool>> checks; // (center degree, divisible)
    bool all_pass = true;
};

inline BogvadReport bogvad_divisibility(const PolySeries& hu, const std::vector<int>& center_degrees) {
    if (!hu.truncation()) throw UsageError("bogvad check expects a truncated U-series");
    int N = *hu.truncation();
    BogvadReport rep;
    rep.inverse = hu.inverse(N);
    int top = rep.inverse.top_nonzero();
    // "looks polynomial": trailing zeros on the window beyond the support
    rep.window_polynomial = top < N;
    if (!rep.window_polynomial) {
        rep.all_pass = false;
        for (int n : center_degrees) rep.checks.emplace_back(n, false);
        return rep;
    }
    std::vector<Rat> p(top + 1, Rat(0));
    for (auto& [d, c] : rep.inverse.support())
        if (d <= top) p[d] = c;
    for (int n : center_degrees) {
        // synthetic division by 1 - t^n: q_k = p_k + q_{k-n}
        bool ok = true;
        if (n <= 0 || n > top) ok = (n > 0 && top == -1);
        std::vector<Rat> q(top + 1, Rat(0));
        if (ok) {
            for (int k = 0; k <= top; ++k) {
                q[k] = p[k];
                if (k >= n) q[k] += q[k - n];
            }
            // exact division iff the top n quotient slots vanish
            for (int k = top; k > top - n && k >= 0; --k)
                if (sgn(q[k]) != 0) { ok = false; break; }
        }
        rep.checks.emplace_back(n, ok);
        rep.all_pass = rep.all_pass && ok;
    }
    return rep;
}

/// Toral-rank inequality P(1) >= 2^z.
struct TrcVerdict {
    bool pass;
    long total_cohomology;
    long bound;
};

inline TrcVerdict trc_check(const PoincarePoly& p, int center_dim) {
    if (center_dim < 0 || center_dim > 62) throw UsageError("center dimension out of range");
    long bound = 1L << center_dim;
    long total = p.eval_at_one();
    return {total >= bound, total, bound};
}

/// Center-degree constraints under asserted properties: a Koszul algebra
/// has its center in odd degrees < cd/2 + 1; a BK algebra in degree 1.
struct CenterConstraintReport {
    struct Flag {
        int degree;
        std::string reason;
    };
    std::vector<Flag> flags;
    bool consistent() const { return flags.empty(); }
};

inline CenterConstraintReport center_constraints(const std::vector<int>& center_degrees,
                                                 int cd_assertion, bool koszul_asserted,
                                                 bool bk_asserted) {
    CenterConstraintReport rep;
    for (int d : center_degrees) {
        if (koszul_asserted && d % 2 == 0)
            rep.flags.push_back({d, "even center degree contradicts Koszulity"});
        if (koszul_asserted && cd_assertion > 0 && 2 * d >= cd_assertion + 2)
            rep.flags.push_back({d, "center degree >= cd/2 + 1 contradicts Koszulity"});
        if (bk_asserted && d >= 2)
            rep.flags.push_back({d, "center degree >= 2 contradicts the BK property"});
    }
    return rep;
}

} // namespace kla

#endif
