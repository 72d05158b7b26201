#pragma once

// Exact arithmetic in Z/p^N and in the truncated power-series ring
// (Z/p^N)[[u]]/(u^M), the working model of S = Z_p[[u]].

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "prismlab/errors.hpp"

namespace prismlab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

namespace modular {

inline constexpr u64 kPrimalityBound = 1'000'003;
inline constexpr u64 kModulusLimit = u64{1} << 62;

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void require_prime(u64 p) {
    if (p > kPrimalityBound) throw ParameterError("prime " + std::to_string(p) + " exceeds the supported bound");
    if (!is_prime(p)) throw ParameterError(std::to_string(p) + " is not prime");
}

/// p^N, rejecting anything that would not leave headroom below 2^62.
inline u64 prime_power(u64 p, int N) {
    if (N < 0) throw ParameterError("negative precision");
    u64 r = 1;
    for (int i = 0; i < N; ++i) {
        if (r > kModulusLimit / p) throw ResourceError("p^N does not fit the 62-bit modulus limit");
        r *= p;
    }
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128{a} * b) % m); }
inline u64 addmod(u64 a, u64 b, u64 m) { return (a + b) % m; }
inline u64 submod(u64 a, u64 b, u64 m) { return (a + m - b) % m; }

inline u64 reduce(i64 v, u64 m) {
    i64 r = v % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

/// p-adic valuation of a residue mod p^cap; returns cap for 0.
inline int valuation(u64 v, u64 p, int cap) {
    if (v == 0) return cap;
    int k = 0;
    while (v % p == 0 && k < cap) {
        v /= p;
        ++k;
    }
    return k;
}

inline std::optional<u64> inverse(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        i64 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) return std::nullopt;
    return reduce(t, m);
}

}  // namespace modular

/// An element of Z/p^N.
class PadicInt {
public:
    PadicInt(u64 p, int N, i64 value = 0) : p_(p), N_(N) {
        if (N < 1) throw ParameterError("precision N must be positive");
        modular::require_prime(p);
        modulus_ = modular::prime_power(p, N);
        value_ = modular::reduce(value, modulus_);
    }

    u64 p() const { return p_; }
    int precision() const { return N_; }
    u64 modulus() const { return modulus_; }
    u64 value() const { return value_; }

    int valuation() const { return modular::valuation(value_, p_, N_); }
    bool is_unit() const { return value_ % p_ != 0; }

    PadicInt inverse() const {
        auto inv = modular::inverse(value_, modulus_);
        if (!inv) throw NotAUnitError("not a unit in Z/p^N", valuation());
        return with_value(*inv);
    }

    PadicInt operator+(const PadicInt& o) const { check(o); return with_value(modular::addmod(value_, o.value_, modulus_)); }
    PadicInt operator-(const PadicInt& o) const { check(o); return with_value(modular::submod(value_, o.value_, modulus_)); }
    PadicInt operator*(const PadicInt& o) const { check(o); return with_value(modular::mulmod(value_, o.value_, modulus_)); }
    PadicInt operator-() const { return with_value(modular::submod(0, value_, modulus_)); }
    bool operator==(const PadicInt& o) const = default;

private:
    PadicInt with_value(u64 v) const {
        PadicInt r = *this;
        r.value_ = v;
        return r;
    }
    void check(const PadicInt& o) const {
        if (p_ != o.p_ || N_ != o.N_) throw ParameterError("mixed-precision PadicInt arithmetic");
    }

    u64 p_;
    int N_;
    u64 modulus_;
    u64 value_;
};

struct SeriesParams {
    u64 p;
    int N;  // p-adic precision
    int M;  // u-adic precision
    bool operator==(const SeriesParams&) const = default;
};

inline std::string to_string(const SeriesParams& s) {
    return "(p=" + std::to_string(s.p) + ", N=" + std::to_string(s.N) + ", M=" + std::to_string(s.M) + ")";
}

/// An element of (Z/p^N)[[u]]/(u^M). Immutable in spirit: every operation
/// returns a new value, and mixing precisions is an error.
class TruncatedSeries {
public:
    TruncatedSeries(u64 p, int N, int M) : TruncatedSeries(SeriesParams{p, N, M}) {}

    explicit TruncatedSeries(SeriesParams params) : params_(params) {
        if (params.N < 1) throw ParameterError("p-precision N must be positive");
        if (params.M < 1) throw ParameterError("u-precision M must be positive");
        modular::require_prime(params.p);
        modulus_ = modular::prime_power(params.p, params.N);
        coeffs_.assign(static_cast<std::size_t>(params.M), 0);
    }

    static TruncatedSeries from_coeffs(SeriesParams params, std::span<const i64> coeffs) {
        TruncatedSeries s(params);
        for (std::size_t k = 0; k < coeffs.size() && k < s.coeffs_.size(); ++k)
            s.coeffs_[k] = modular::reduce(coeffs[k], s.modulus_);
        return s;
    }
    static TruncatedSeries from_coeffs(SeriesParams params, std::initializer_list<i64> coeffs) {
        std::vector<i64> v(coeffs);
        return from_coeffs(params, std::span<const i64>(v));
    }
    static TruncatedSeries constant(SeriesParams params, i64 c) { return from_coeffs(params, {c}); }
    static TruncatedSeries one(SeriesParams params) { return constant(params, 1); }
    static TruncatedSeries u(SeriesParams params) {
        TruncatedSeries s(params);
        if (params.M > 1) s.coeffs_[1] = 1 % s.modulus_;
        return s;
    }
    /// c * u^k
    static TruncatedSeries monomial(SeriesParams params, i64 c, int k) {
        TruncatedSeries s(params);
        if (k >= 0 && k < params.M) s.coeffs_[static_cast<std::size_t>(k)] = modular::reduce(c, s.modulus_);
        return s;
    }

    const SeriesParams& params() const { return params_; }
    u64 p() const { return params_.p; }
    int N() const { return params_.N; }
    int M() const { return params_.M; }
    u64 modulus() const { return modulus_; }
    u64 coeff(int k) const { return (k >= 0 && k < params_.M) ? coeffs_[static_cast<std::size_t>(k)] : 0; }
    const std::vector<u64>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](u64 c) { return c == 0; });
    }
    bool is_unit() const { return coeffs_[0] % params_.p != 0; }
    int constant_valuation() const { return modular::valuation(coeffs_[0], params_.p, params_.N); }

    /// Minimum p-adic valuation over all coefficients (N for the zero series).
    int p_valuation() const {
        int v = params_.N;
        for (u64 c : coeffs_) v = std::min(v, modular::valuation(c, params_.p, params_.N));
        return v;
    }

    /// Smallest k with a nonzero coefficient of u^k (M for zero).
    int u_valuation() const {
        for (int k = 0; k < params_.M; ++k)
            if (coeffs_[static_cast<std::size_t>(k)] != 0) return k;
        return params_.M;
    }

    TruncatedSeries operator+(const TruncatedSeries& o) const {
        check(o);
        TruncatedSeries r(*this);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) r.coeffs_[k] = modular::addmod(coeffs_[k], o.coeffs_[k], modulus_);
        return r;
    }
    TruncatedSeries operator-(const TruncatedSeries& o) const {
        check(o);
        TruncatedSeries r(*this);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) r.coeffs_[k] = modular::submod(coeffs_[k], o.coeffs_[k], modulus_);
        return r;
    }
    TruncatedSeries operator-() const {
        TruncatedSeries r(*this);
        for (auto& c : r.coeffs_) c = modular::submod(0, c, modulus_);
        return r;
    }
    TruncatedSeries operator*(const TruncatedSeries& o) const {
        check(o);
        TruncatedSeries r(params_);
        const std::size_t m = coeffs_.size();
        for (std::size_t i = 0; i < m; ++i) {
            if (coeffs_[i] == 0) continue;
            for (std::size_t j = 0; i + j < m; ++j) {
                if (o.coeffs_[j] == 0) continue;
                r.coeffs_[i + j] = modular::addmod(r.coeffs_[i + j], modular::mulmod(coeffs_[i], o.coeffs_[j], modulus_), modulus_);
            }
        }
        return r;
    }
    TruncatedSeries& operator+=(const TruncatedSeries& o) { return *this = *this + o; }
    TruncatedSeries& operator-=(const TruncatedSeries& o) { return *this = *this - o; }
    TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

    TruncatedSeries scaled(i64 c) const {
        TruncatedSeries r(*this);
        const u64 cm = modular::reduce(c, modulus_);
        for (auto& x : r.coeffs_) x = modular::mulmod(x, cm, modulus_);
        return r;
    }

    TruncatedSeries pow(u64 e) const {
        TruncatedSeries result = one(params_);
        TruncatedSeries base = *this;
        while (e) {
            if (e & 1) result *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return result;
    }

    TruncatedSeries inverse() const {
        auto a0inv = modular::inverse(coeffs_[0], modulus_);
        if (!a0inv) {
            int v = coeffs_[0] == 0 ? -1 : constant_valuation();
            throw NotAUnitError("series is not a unit: constant term divisible by p", v);
        }
        TruncatedSeries b(params_);
        b.coeffs_[0] = *a0inv;
        for (std::size_t k = 1; k < coeffs_.size(); ++k) {
            u64 acc = 0;
            for (std::size_t j = 1; j <= k; ++j)
                acc = modular::addmod(acc, modular::mulmod(coeffs_[j], b.coeffs_[k - j], modulus_), modulus_);
            b.coeffs_[k] = modular::mulmod(modular::submod(0, acc, modulus_), *a0inv, modulus_);
        }
        return b;
    }

    /// u -> u^p; exponents >= M are dropped, the result keeps u-precision M.
    TruncatedSeries frobenius() const {
        TruncatedSeries r(params_);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const std::size_t t = k * params_.p;
            if (t >= coeffs_.size()) break;
            r.coeffs_[t] = coeffs_[k];
        }
        return r;
    }

    /// Image under Z/p^N -> Z/p^{N2}, N2 <= N.
    TruncatedSeries with_p_precision(int N2) const {
        if (N2 > params_.N) throw PrecisionError("cannot raise p-precision without a lift");
        TruncatedSeries r(SeriesParams{params_.p, N2, params_.M});
        for (std::size_t k = 0; k < coeffs_.size(); ++k) r.coeffs_[k] = coeffs_[k] % r.modulus_;
        return r;
    }

    /// Canonical lift of the residues to precision N2 >= N (digits above N are 0).
    TruncatedSeries lifted_to(int N2) const {
        if (N2 < params_.N) throw ParameterError("lift target below current precision");
        TruncatedSeries r(SeriesParams{params_.p, N2, params_.M});
        r.coeffs_ = coeffs_;
        return r;
    }

    TruncatedSeries with_u_precision(int M2) const {
        if (M2 > params_.M) throw PrecisionError("cannot raise u-precision of a truncated series");
        TruncatedSeries r(SeriesParams{params_.p, params_.N, M2});
        std::copy_n(coeffs_.begin(), M2, r.coeffs_.begin());
        return r;
    }

    /// Exact division by p; the result lives at precision N-1.
    TruncatedSeries divided_by_p() const {
        if (params_.N < 2) throw PrecisionError("division by p needs N >= 2");
        TruncatedSeries r(SeriesParams{params_.p, params_.N - 1, params_.M});
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k] % params_.p != 0)
                throw InvariantViolation("exact division by p failed at u^" + std::to_string(k));
            r.coeffs_[k] = coeffs_[k] / params_.p;
        }
        return r;
    }

    /// Value of the series at u = 0.
    PadicInt at_zero() const { return PadicInt(params_.p, params_.N, static_cast<i64>(coeffs_[0])); }

    bool operator==(const TruncatedSeries& o) const { return params_ == o.params_ && coeffs_ == o.coeffs_; }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const u64 c = coeffs_[k];
            if (c == 0) continue;
            if (!first) os << " + ";
            first = false;
            if (k == 0) {
                os << c;
                continue;
            }
            if (c != 1) os << c << '*';
            os << 'u';
            if (k > 1) os << '^' << k;
        }
        if (first) os << '0';
        return os.str();
    }

    static TruncatedSeries parse(SeriesParams params, std::string_view text);

    nlohmann::json to_json() const {
        return {{"p", params_.p}, {"N", params_.N}, {"M", params_.M}, {"coeffs", coeffs_}};
    }
    static TruncatedSeries from_json(const nlohmann::json& j) {
        SeriesParams prm{j.at("p").get<u64>(), j.at("N").get<int>(), j.at("M").get<int>()};
        auto c = j.at("coeffs").get<std::vector<i64>>();
        if (static_cast<int>(c.size()) > prm.M) throw ParseError("more coefficients than u-precision M");
        return from_coeffs(prm, std::span<const i64>(c));
    }

private:
    void check(const TruncatedSeries& o) const {
        if (!(params_ == o.params_))
            throw ParameterError("mismatched series parameters " + prismlab::to_string(params_) + " vs " +
                                 prismlab::to_string(o.params_));
    }

    SeriesParams params_;
    u64 modulus_ = 1;
    std::vector<u64> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s) { return os << s.to_string(); }

namespace detail {

/// Splits "a + b - c" into signed terms with whitespace removed.
inline std::vector<std::pair<int, std::string>> signed_terms(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty expression");
    std::vector<std::pair<int, std::string>> out;
    int sign = 1;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        const bool after_caret = i > 0 && s[i - 1] == '^';
        if ((c == '+' || c == '-') && !after_caret) {
            if (!cur.empty()) {
                out.emplace_back(sign, cur);
                cur.clear();
                sign = 1;
            }
            if (c == '-') sign = -sign;
        } else {
            cur.push_back(c);
        }
    }
    if (cur.empty()) throw ParseError("dangling operator in '" + std::string(text) + "'");
    out.emplace_back(sign, cur);
    return out;
}

inline i64 parse_int(std::string_view s) {
    if (s.empty()) throw ParseError("expected an integer");
    i64 v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad integer '" + std::string(s) + "'");
        if (v > (INT64_MAX - 9) / 10) throw ParseError("integer literal too large");
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace detail

/// Parses "c0 + c1*u + c2*u^2 + ..."; terms may repeat, coefficients may be negative.
inline TruncatedSeries TruncatedSeries::parse(SeriesParams params, std::string_view text) {
    TruncatedSeries r(params);
    for (const auto& [sign, term] : detail::signed_terms(text)) {
        i64 c = 1;
        int e = 0;
        std::string_view t = term;
        auto upos = t.find('u');
        if (upos == std::string_view::npos) {
            c = detail::parse_int(t);
        } else {
            std::string_view coef = t.substr(0, upos);
            if (!coef.empty()) {
                if (coef.back() != '*') throw ParseError("expected '*' before u in '" + std::string(t) + "'");
                c = detail::parse_int(coef.substr(0, coef.size() - 1));
            }
            std::string_view rest = t.substr(upos + 1);
            if (rest.empty()) {
                e = 1;
            } else {
                if (rest.front() != '^') throw ParseError("expected '^' after u in '" + std::string(t) + "'");
                e = static_cast<int>(detail::parse_int(rest.substr(1)));
            }
        }
        r = r + monomial(params, sign * c, e);
    }
    return r;
}

/// A monic Eisenstein polynomial with integer coefficients, low degree first.
class EisensteinPoly {
public:
    EisensteinPoly(u64 p, std::vector<i64> coeffs) : p_(p), coeffs_(std::move(coeffs)) { validate(); }

    u64 p() const { return p_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<i64>& coeffs() const { return coeffs_; }

    TruncatedSeries to_series(SeriesParams params) const {
        if (params.p != p_) throw ParameterError("Eisenstein prime does not match series prime");
        return TruncatedSeries::from_coeffs(params, std::span<const i64>(coeffs_));
    }

    /// E(u) = u - p, the uniformizer of Q_p itself.
    static EisensteinPoly unramified(u64 p) { return EisensteinPoly(p, {-static_cast<i64>(p), 1}); }

    bool operator==(const EisensteinPoly&) const = default;

private:
    void validate() const {
        modular::require_prime(p_);
        if (coeffs_.size() < 2) throw ValidationError("Eisenstein polynomial must have degree >= 1");
        if (coeffs_.back() != 1)
            throw ValidationError("Eisenstein check failed: leading coefficient c_" + std::to_string(degree()) +
                                  " = " + std::to_string(coeffs_.back()) + " is not 1");
        const i64 p = static_cast<i64>(p_);
        for (int i = 0; i < degree(); ++i)
            if (coeffs_[static_cast<std::size_t>(i)] % p != 0)
                throw ValidationError("Eisenstein check failed: p does not divide c_" + std::to_string(i) + " = " +
                                      std::to_string(coeffs_[static_cast<std::size_t>(i)]));
        if (coeffs_[0] % (p * p) == 0)
            throw ValidationError("Eisenstein check failed: p^2 divides c_0 = " + std::to_string(coeffs_[0]));
    }

    u64 p_;
    std::vector<i64> coeffs_;
};

/// Stored examples used by the prism checks and the CLI defaults.
inline const std::vector<EisensteinPoly>& eisenstein_examples() {
    static const std::vector<EisensteinPoly> polys = {
        EisensteinPoly(2, {-2, 1}),    EisensteinPoly(2, {2, 2, 1}),    EisensteinPoly(2, {2, 0, 0, 1}), EisensteinPoly(2, {-6, 4, 0, 0, 1}),
        EisensteinPoly(3, {-3, 1}),    EisensteinPoly(3, {3, 0, 1}),    EisensteinPoly(3, {-3, 6, 3, 1}), EisensteinPoly(5, {-5, 1}),
        EisensteinPoly(5, {5, 5, 0, 1}), EisensteinPoly(7, {7, 0, 1}),
    };
    return polys;
}

}  // namespace prismlab
