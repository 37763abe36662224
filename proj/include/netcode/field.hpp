#pragma once

// Exact arithmetic in GF(p) and small extension fields GF(p^k).
//
// Elements are carried as canonical integers: the least nonnegative residue for
// prime fields, and for GF(p^k) the base-p encoding c0 + c1*p + ... + c_{k-1}*p^{k-1}
// of the reduced coefficient vector (c0 is the constant term).

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "netcode/error.hpp"

namespace netcode {

namespace detail {

struct ModulusEntry {
    std::uint32_t p;
    unsigned k;
    std::vector<std::uint32_t> coeffs;  // low degree first, monic
};

// Conway polynomials for every (p, k > 1) with p^k <= 256.
inline const std::vector<ModulusEntry>& conway_table() {
    static const std::vector<ModulusEntry> table = {
        {2, 2, {1, 1, 1}},
        {2, 3, {1, 1, 0, 1}},
        {2, 4, {1, 1, 0, 0, 1}},
        {2, 5, {1, 0, 1, 0, 0, 1}},
        {2, 6, {1, 1, 0, 1, 1, 0, 1}},
        {2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
        {2, 8, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
        {3, 2, {2, 2, 1}},
        {3, 3, {1, 2, 0, 1}},
        {3, 4, {2, 0, 0, 2, 1}},
        {3, 5, {1, 2, 0, 0, 0, 1}},
        {5, 2, {2, 4, 1}},
        {5, 3, {3, 3, 0, 1}},
        {7, 2, {3, 6, 1}},
        {11, 2, {2, 7, 1}},
        {13, 2, {2, 12, 1}},
    };
    return table;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Remainder of polynomial a modulo monic m over GF(p); both low degree first.
inline std::vector<std::uint32_t> poly_mod(std::vector<std::uint32_t> a, const std::vector<std::uint32_t>& m,
                                           std::uint32_t p) {
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        const std::uint32_t lead = a.back();
        if (lead != 0) {
            const std::size_t shift = a.size() - 1 - dm;
            for (std::size_t i = 0; i <= dm; ++i) {
                const std::uint64_t sub = static_cast<std::uint64_t>(lead) * m[i] % p;
                a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
            }
        }
        a.pop_back();
    }
    return a;
}

// Irreducibility by trial division with every monic polynomial of degree <= k/2.
inline bool is_irreducible(const std::vector<std::uint32_t>& m, std::uint32_t p) {
    const std::size_t k = m.size() - 1;
    for (std::size_t d = 1; d <= k / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            std::vector<std::uint32_t> f(d + 1, 0);
            std::uint64_t c = code;
            for (std::size_t i = 0; i < d; ++i) {
                f[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            f[d] = 1;
            auto r = poly_mod(m, f, p);
            if (std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; })) return false;
        }
    }
    return true;
}

struct FieldTables {
    std::uint32_t p = 2;
    unsigned k = 1;
    std::uint32_t q = 2;
    std::vector<std::uint32_t> modulus;  // empty for prime fields
    // Extension fields only: discrete log / antilog with respect to a fixed generator.
    std::vector<std::uint32_t> exp;
    std::vector<std::uint32_t> log;

    [[nodiscard]] std::vector<std::uint32_t> digits(std::uint32_t v) const {
        std::vector<std::uint32_t> d(k, 0);
        for (unsigned i = 0; i < k; ++i) {
            d[i] = v % p;
            v /= p;
        }
        return d;
    }
    [[nodiscard]] std::uint32_t encode(const std::vector<std::uint32_t>& d) const {
        std::uint32_t v = 0;
        for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
        return v;
    }
    [[nodiscard]] std::uint32_t poly_mul(std::uint32_t a, std::uint32_t b) const {
        const auto da = digits(a);
        const auto db = digits(b);
        std::vector<std::uint32_t> prod(2 * k - 1, 0);
        for (unsigned i = 0; i < k; ++i)
            for (unsigned j = 0; j < k; ++j)
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p);
        auto r = poly_mod(std::move(prod), modulus, p);
        r.resize(k, 0);
        return encode(r);
    }

    void build_log_tables() {
        exp.assign(q - 1, 0);
        log.assign(q, 0);
        for (std::uint32_t g = 2; g < q; ++g) {
            std::uint32_t x = 1;
            std::uint32_t order = 0;
            do {
                exp[order] = x;
                x = poly_mul(x, g);
                ++order;
            } while (x != 1 && order < q - 1);
            if (x == 1 && order == q - 1) {
                for (std::uint32_t i = 0; i < q - 1; ++i) log[exp[i]] = i;
                return;
            }
        }
        throw Error(ErrorCode::InvalidArgument, "modulus does not define a field");
    }
};

}  // namespace detail

class FieldElement;

/// A finite field GF(p^k). Cheap to copy; all copies share immutable lookup tables.
class Field {
public:
    using Value = std::uint32_t;

    static constexpr std::uint32_t kMaxExtensionOrder = 1u << 16;

    /// GF(2).
    Field() : Field(prime(2)) {}

    static Field prime(std::uint32_t p) {
        if (!detail::is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
        auto t = std::make_shared<detail::FieldTables>();
        t->p = p;
        t->k = 1;
        t->q = p;
        return Field(std::move(t));
    }

    /// GF(p^k) using the shipped Conway polynomial for (p, k).
    static Field make(std::uint32_t p, unsigned k) {
        if (k == 0) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
        if (k == 1) return prime(p);
        for (const auto& entry : detail::conway_table())
            if (entry.p == p && entry.k == k) return extension(p, entry.coeffs);
        throw Error(ErrorCode::InvalidArgument,
                    "no modulus polynomial shipped for " + std::to_string(p) + "^" + std::to_string(k));
    }

    /// GF(p^k) with an explicit monic modulus (low degree first, length k+1).
    static Field extension(std::uint32_t p, std::vector<std::uint32_t> modulus) {
        if (!detail::is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
        if (modulus.size() < 3 || modulus.back() != 1)
            throw Error(ErrorCode::InvalidArgument, "modulus must be monic of degree >= 2");
        for (auto c : modulus)
            if (c >= p) throw Error(ErrorCode::InvalidArgument, "modulus coefficient out of range");
        const unsigned k = static_cast<unsigned>(modulus.size() - 1);
        std::uint64_t q = 1;
        for (unsigned i = 0; i < k; ++i) {
            q *= p;
            if (q > kMaxExtensionOrder) throw Error(ErrorCode::CapExceeded, "extension field order too large");
        }
        if (!detail::is_irreducible(modulus, p)) throw Error(ErrorCode::InvalidArgument, "modulus is reducible");
        auto t = std::make_shared<detail::FieldTables>();
        t->p = p;
        t->k = k;
        t->q = static_cast<std::uint32_t>(q);
        t->modulus = std::move(modulus);
        t->build_log_tables();
        return Field(std::move(t));
    }

    /// Parses the "p^k" / "p" notation, e.g. "5", "2^2". A prime power such as "9" is accepted too.
    static Field parse(std::string_view text) {
        auto read = [&](std::string_view s) {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
                throw Error(ErrorCode::Parse, "bad field spec '" + std::string(text) + "'");
            return v;
        };
        const auto caret = text.find('^');
        if (caret != std::string_view::npos) {
            const auto p = read(text.substr(0, caret));
            const auto k = read(text.substr(caret + 1));
            if (p > UINT32_MAX || k > 32) throw Error(ErrorCode::Parse, "bad field spec '" + std::string(text) + "'");
            return make(static_cast<std::uint32_t>(p), static_cast<unsigned>(k));
        }
        const auto q = read(text);
        if (q > UINT32_MAX) throw Error(ErrorCode::Parse, "bad field spec '" + std::string(text) + "'");
        if (detail::is_prime(q)) return prime(static_cast<std::uint32_t>(q));
        for (std::uint64_t p = 2; p * p <= q; ++p) {
            if (q % p != 0) continue;
            std::uint64_t r = q;
            unsigned k = 0;
            while (r % p == 0) {
                r /= p;
                ++k;
            }
            if (r == 1 && detail::is_prime(p)) return make(static_cast<std::uint32_t>(p), k);
            break;
        }
        throw Error(ErrorCode::Parse, "'" + std::string(text) + "' is not a prime power");
    }

    [[nodiscard]] std::uint32_t characteristic() const noexcept { return t_->p; }
    [[nodiscard]] unsigned degree() const noexcept { return t_->k; }
    [[nodiscard]] std::uint32_t order() const noexcept { return t_->q; }
    [[nodiscard]] const std::vector<std::uint32_t>& modulus() const noexcept { return t_->modulus; }

    [[nodiscard]] std::string to_string() const {
        if (t_->k == 1) return std::to_string(t_->p);
        return std::to_string(t_->p) + "^" + std::to_string(t_->k);
    }

    [[nodiscard]] Value zero() const noexcept { return 0; }
    [[nodiscard]] Value one() const noexcept { return 1; }
    [[nodiscard]] bool contains(Value a) const noexcept { return a < t_->q; }

    [[nodiscard]] Value add(Value a, Value b) const {
        if (t_->k == 1) return static_cast<Value>((static_cast<std::uint64_t>(a) + b) % t_->p);
        if (t_->p == 2) return a ^ b;
        Value out = 0;
        Value scale = 1;
        for (unsigned i = 0; i < t_->k; ++i) {
            out += ((a % t_->p + b % t_->p) % t_->p) * scale;
            a /= t_->p;
            b /= t_->p;
            scale *= t_->p;
        }
        return out;
    }

    [[nodiscard]] Value neg(Value a) const {
        if (t_->k == 1) return a == 0 ? 0 : t_->p - a;
        if (t_->p == 2) return a;
        Value out = 0;
        Value scale = 1;
        for (unsigned i = 0; i < t_->k; ++i) {
            const Value d = a % t_->p;
            out += (d == 0 ? 0 : t_->p - d) * scale;
            a /= t_->p;
            scale *= t_->p;
        }
        return out;
    }

    [[nodiscard]] Value sub(Value a, Value b) const { return add(a, neg(b)); }

    [[nodiscard]] Value mul(Value a, Value b) const {
        if (t_->k == 1) return static_cast<Value>(static_cast<std::uint64_t>(a) * b % t_->p);
        if (a == 0 || b == 0) return 0;
        return t_->exp[(t_->log[a] + t_->log[b]) % (t_->q - 1)];
    }

    [[nodiscard]] Value inv(Value a) const {
        if (a == 0) throw Error(ErrorCode::DivisionByZero, "in GF(" + to_string() + ")");
        if (t_->k == 1) {
            // Fermat: a^(p-2)
            std::uint64_t result = 1, base = a, e = t_->p - 2;
            while (e > 0) {
                if (e & 1) result = result * base % t_->p;
                base = base * base % t_->p;
                e >>= 1;
            }
            return static_cast<Value>(result);
        }
        return t_->exp[(t_->q - 1 - t_->log[a]) % (t_->q - 1)];
    }

    [[nodiscard]] Value div(Value a, Value b) const { return mul(a, inv(b)); }

    [[nodiscard]] Value pow(Value a, std::uint64_t e) const {
        Value result = one();
        while (e > 0) {
            if (e & 1) result = mul(result, a);
            a = mul(a, a);
            e >>= 1;
        }
        return result;
    }

    /// Image of n in {-1, 0, 1} under the canonical ring map Z -> GF(q).
    [[nodiscard]] Value from_signed(int n) const {
        switch (n) {
            case 0: return zero();
            case 1: return one();
            case -1: return neg(one());
            default: throw Error(ErrorCode::InvalidArgument, "signed entry " + std::to_string(n) + " not in {-1,0,1}");
        }
    }

    [[nodiscard]] FieldElement element(Value v) const;
    [[nodiscard]] FieldElement from_signed_int(int n) const;

    friend bool operator==(const Field& a, const Field& b) noexcept {
        return a.t_ == b.t_ || (a.t_->p == b.t_->p && a.t_->k == b.t_->k && a.t_->modulus == b.t_->modulus);
    }

private:
    explicit Field(std::shared_ptr<const detail::FieldTables> t) : t_(std::move(t)) {}

    std::shared_ptr<const detail::FieldTables> t_;
};

inline std::ostream& operator<<(std::ostream& os, const Field& f) { return os << "GF(" << f.to_string() << ")"; }

/// A value of a specific field. Arithmetic between elements of different fields throws SpecMismatch.
class FieldElement {
public:
    FieldElement(Field field, Field::Value value) : field_(std::move(field)), value_(value) {
        if (!field_.contains(value_))
            throw Error(ErrorCode::InvalidArgument, std::to_string(value) + " is not an element of GF(" +
                                                        field_.to_string() + ")");
    }

    [[nodiscard]] const Field& field() const noexcept { return field_; }
    [[nodiscard]] Field::Value value() const noexcept { return value_; }
    [[nodiscard]] bool is_zero() const noexcept { return value_ == 0; }

    [[nodiscard]] FieldElement inverse() const { return {field_, field_.inv(value_)}; }

    FieldElement operator-() const { return {field_, field_.neg(value_)}; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return {a.field_, a.field_.add(a.value_, b.value_)};
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return {a.field_, a.field_.sub(a.value_, b.value_)};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return {a.field_, a.field_.mul(a.value_, b.value_)};
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return {a.field_, a.field_.div(a.value_, b.value_)};
    }
    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.field_ == b.field_ && a.value_ == b.value_;
    }

    friend std::ostream& operator<<(std::ostream& os, const FieldElement& e) { return os << e.value_; }

private:
    static void check(const FieldElement& a, const FieldElement& b) {
        if (!(a.field_ == b.field_))
            throw Error(ErrorCode::SpecMismatch, "GF(" + a.field_.to_string() + ") vs GF(" + b.field_.to_string() + ")");
    }

    Field field_;
    Field::Value value_;
};

inline FieldElement Field::element(Value v) const { return {*this, v}; }
inline FieldElement Field::from_signed_int(int n) const { return {*this, from_signed(n)}; }

inline FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement neg(const FieldElement& a) { return -a; }
inline FieldElement inv(const FieldElement& a) { return a.inverse(); }
inline FieldElement from_signed_int(int n, const Field& field) { return field.from_signed_int(n); }

/// All q elements in canonical ascending order.
inline std::vector<FieldElement> enumerate_elements(const Field& field, std::uint32_t cap = 256) {
    if (field.order() > cap)
        throw Error(ErrorCode::CapExceeded,
                    "GF(" + field.to_string() + ") has " + std::to_string(field.order()) + " elements, cap " +
                        std::to_string(cap));
    std::vector<FieldElement> out;
    out.reserve(field.order());
    for (Field::Value v = 0; v < field.order(); ++v) out.emplace_back(field, v);
    return out;
}

}  // namespace netcode
