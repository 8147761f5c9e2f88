#ifndef KLA_FIELD_HPP
#define KLA_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace kla {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact rational scalar (arbitrary precision, always canonicalized by GMP).
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

namespace detail {
inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
} // namespace detail

/// Ground field: the rationals or an odd prime field F_p, p >= 3.
class FieldSpec {
public:
    FieldSpec() = default;

    static FieldSpec rationals() { return FieldSpec{}; }

    static FieldSpec prime(std::uint32_t p) {
        if (p == 2) throw DomainError("characteristic 2 is not supported");
        if (!detail::is_prime_u32(p) || p < 3)
            throw DomainError("field modulus must be an odd prime >= 3");
        FieldSpec f;
        f.p_ = p;
        return f;
    }

    bool is_rational() const { return p_ == 0; }
    std::uint32_t characteristic() const { return p_; }

    bool operator==(const FieldSpec&) const = default;

    std::string str() const {
        return is_rational() ? "rational" : "gf(" + std::to_string(p_) + ")";
    }

private:
    std::uint32_t p_ = 0; // 0 = rationals
};

/// Element of F_p. The modulus travels with the value; the only element
/// allowed to be unbound (p == 0) is the default-constructed zero, so that
/// sparse containers can default-insert safely.
struct Fp {
    std::int64_t v = 0;
    std::uint32_t p = 0;

    Fp() = default;
    Fp(std::int64_t value, std::uint32_t mod) : v(value), p(mod) { normalize(); }

    void normalize() {
        if (p == 0) {
            if (v != 0) throw UsageError("unbound F_p element with nonzero value");
            return;
        }
        v %= static_cast<std::int64_t>(p);
        if (v < 0) v += p;
    }

    bool is_zero() const { return v == 0; }

    friend std::uint32_t common_mod(const Fp& a, const Fp& b) {
        if (a.p == 0) return b.p;
        if (b.p == 0) return a.p;
        if (a.p != b.p) throw UsageError("mixed prime fields in one computation");
        return a.p;
    }

    friend Fp operator+(const Fp& a, const Fp& b) {
        std::uint32_t m = common_mod(a, b);
        if (m == 0) return Fp{};
        return Fp(a.v + b.v, m);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        std::uint32_t m = common_mod(a, b);
        if (m == 0) return Fp{};
        return Fp(a.v - b.v, m);
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        std::uint32_t m = common_mod(a, b);
        if (m == 0) return Fp{};
        return Fp(a.v * b.v, m);
    }
    Fp operator-() const { return p == 0 ? Fp{} : Fp(-v, p); }

    friend bool operator==(const Fp& a, const Fp& b) {
        if (a.p != 0 && b.p != 0 && a.p != b.p)
            throw UsageError("mixed prime fields in one computation");
        return a.v == b.v;
    }
};

inline Fp fp_inv(const Fp& x) {
    if (x.is_zero()) throw DomainError("inverse of zero in F_p");
    // extended Euclid
    std::int64_t a = x.v, m = x.p, u = 1, w = 0;
    while (a != 0) {
        std::int64_t q = m / a;
        m -= q * a; std::swap(a, m);
        w -= q * u; std::swap(u, w);
    }
    return Fp(w, x.p);
}

/// Uniform scalar interface used by the generic linear algebra and table code.
template <class K> struct Field;

template <> struct Field<Rat> {
    static Rat zero(const FieldSpec&) { return Rat(0); }
    static Rat one(const FieldSpec&) { return Rat(1); }
    static Rat from_long(const FieldSpec&, long v) { return Rat(v); }
    static Rat from_rat(const FieldSpec&, const Rat& q) { return q; }
    static bool is_zero(const Rat& x) { return sgn(x) == 0; }
    static Rat inv(const Rat& x) {
        if (sgn(x) == 0) throw DomainError("inverse of zero");
        return Rat(1) / x;
    }
    static Rat mul_long(const Rat& x, long c) { return x * c; }
    static std::string str(const Rat& x) { return x.get_str(); }
};

template <> struct Field<Fp> {
    static Fp zero(const FieldSpec& f) { return Fp(0, f.characteristic()); }
    static Fp one(const FieldSpec& f) { return Fp(1, f.characteristic()); }
    static Fp from_long(const FieldSpec& f, long v) { return Fp(v, f.characteristic()); }
    static Fp from_rat(const FieldSpec& f, const Rat& q) {
        std::uint32_t p = f.characteristic();
        Int num = q.get_num() % p;
        Int den = q.get_den() % p;
        if (den == 0) throw DomainError("denominator divisible by the field characteristic");
        Fp n(num.get_si(), p), d(den.get_si(), p);
        return n * fp_inv(d);
    }
    static bool is_zero(const Fp& x) { return x.is_zero(); }
    static Fp inv(const Fp& x) { return fp_inv(x); }
    static Fp mul_long(const Fp& x, long c) {
        if (x.p == 0) return Fp{};
        return Fp(x.v * (c % static_cast<long>(x.p)), x.p);
    }
    static std::string str(const Fp& x) { return std::to_string(x.v); }
};

// GMP's operators return expression templates, so require convertibility
// rather than exact result types.
template <class K>
concept scalar = requires(K a, K b, FieldSpec f) {
    { Field<K>::zero(f) } -> std::same_as<K>;
    { Field<K>::is_zero(a) } -> std::same_as<bool>;
    { K(a + b) } -> std::same_as<K>;
    { K(a * b) } -> std::same_as<K>;
    { K(-a) } -> std::same_as<K>;
};

} // namespace kla

#endif
