#pragma once

// Sparse multivariate polynomials over Z with arbitrary-precision coefficients,
// plus a small expression parser ("1 + x1 + x2", "c1^2 - 2*c2", "(u+1)^3").

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "prismlab/errors.hpp"

namespace prismlab {

using BigInt = boost::multiprecision::cpp_int;
using Exponents = std::vector<std::uint32_t>;

class Poly {
public:
    explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}

    static Poly constant(std::size_t nvars, const BigInt& c) {
        Poly r(nvars);
        if (c != 0) r.terms_[Exponents(nvars, 0)] = c;
        return r;
    }
    static Poly variable(std::size_t nvars, std::size_t i) {
        if (i >= nvars) throw ParameterError("variable index out of range");
        Exponents e(nvars, 0);
        e[i] = 1;
        Poly r(nvars);
        r.terms_[e] = 1;
        return r;
    }
    static Poly monomial(Exponents e, const BigInt& c) {
        Poly r(e.size());
        if (c != 0) r.terms_[std::move(e)] = c;
        return r;
    }

    std::size_t nvars() const { return nvars_; }
    const std::map<Exponents, BigInt>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }

    BigInt coeff(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    /// Degree with per-variable weights (total degree for all-ones weights). -1 for zero.
    long weighted_degree(const std::vector<long>& w) const {
        long best = -1;
        for (const auto& [e, c] : terms_) {
            long d = 0;
            for (std::size_t i = 0; i < nvars_; ++i) d += w[i] * static_cast<long>(e[i]);
            best = std::max(best, d);
        }
        return best;
    }
    long total_degree() const { return weighted_degree(std::vector<long>(nvars_, 1)); }

    /// Terms of weighted degree exactly d.
    Poly homogeneous_part(const std::vector<long>& w, long d) const {
        Poly r(nvars_);
        for (const auto& [e, c] : terms_) {
            long k = 0;
            for (std::size_t i = 0; i < nvars_; ++i) k += w[i] * static_cast<long>(e[i]);
            if (k == d) r.terms_.emplace(e, c);
        }
        return r;
    }

    void add_term(const Exponents& e, const BigInt& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly operator+(const Poly& o) const {
        check(o);
        Poly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    Poly operator-(const Poly& o) const {
        check(o);
        Poly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }
    Poly operator*(const Poly& o) const {
        check(o);
        Poly r(nvars_);
        Exponents e(nvars_);
        for (const auto& [e1, c1] : terms_) {
            for (const auto& [e2, c2] : o.terms_) {
                for (std::size_t i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
                r.add_term(e, c1 * c2);
            }
        }
        if (r.terms_.size() > kTermLimit) throw ResourceError("polynomial exceeds the term limit");
        return r;
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const BigInt& k) const {
        if (k == 0) return Poly(nvars_);
        Poly r = *this;
        for (auto& [e, c] : r.terms_) c *= k;
        return r;
    }

    Poly pow(unsigned e) const {
        Poly result = constant(nvars_, 1);
        Poly base = *this;
        while (e) {
            if (e & 1) result *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return result;
    }

    /// Exact division of every coefficient by d.
    Poly divided_exact(const BigInt& d) const {
        Poly r = *this;
        for (auto& [e, c] : r.terms_) {
            if (c % d != 0) throw InvariantViolation("inexact coefficient division");
            c /= d;
        }
        return r;
    }

    /// Substitutes variable i by images[i]; all images share one variable set.
    Poly compose(const std::vector<Poly>& images) const {
        if (images.size() != nvars_) throw ParameterError("compose needs one image per variable");
        const std::size_t target = images.empty() ? 0 : images.front().nvars();
        Poly r(target);
        for (const auto& [e, c] : terms_) {
            Poly t = constant(target, c);
            for (std::size_t i = 0; i < nvars_; ++i)
                if (e[i]) t *= images[i].pow(e[i]);
            r += t;
        }
        return r;
    }

    /// Re-embeds into a larger variable set; variable i goes to slot map[i].
    Poly embedded(std::size_t new_nvars, const std::vector<std::size_t>& map) const {
        Poly r(new_nvars);
        for (const auto& [e, c] : terms_) {
            Exponents ne(new_nvars, 0);
            for (std::size_t i = 0; i < nvars_; ++i) ne[map[i]] += e[i];
            r.add_term(ne, c);
        }
        return r;
    }

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    std::string to_string(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // Highest total degree first reads naturally for the small outputs we print.
        std::vector<std::pair<Exponents, BigInt>> ordered(terms_.begin(), terms_.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            std::uint32_t da = 0, db = 0;
            for (auto x : a.first) da += x;
            for (auto x : b.first) db += x;
            return da < db;
        });
        for (const auto& [e, c] : ordered) {
            BigInt mag = c < 0 ? BigInt(-c) : c;
            if (first) {
                if (c < 0) os << '-';
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            bool is_const = std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
            bool wrote = false;
            if (mag != 1 || is_const) {
                os << mag;
                wrote = true;
            }
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i]) continue;
                if (wrote) os << '*';
                os << names.at(i);
                if (e[i] > 1) os << '^' << e[i];
                wrote = true;
            }
        }
        return os.str();
    }

    static constexpr std::size_t kTermLimit = 2'000'000;

private:
    void check(const Poly& o) const {
        if (nvars_ != o.nvars_) throw ParameterError("polynomials over different variable sets");
    }

    std::size_t nvars_;
    std::map<Exponents, BigInt> terms_;
};

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view text, const std::vector<std::string>& names) : s_(text), names_(names) {}

    Poly parse() {
        Poly r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    Poly expr() {
        Poly r = term();
        for (;;) {
            skip();
            if (eat('+')) r += term();
            else if (eat('-')) r -= term();
            else return r;
        }
    }
    Poly term() {
        Poly r = factor();
        for (;;) {
            skip();
            if (eat('*')) r *= factor();
            else return r;
        }
    }
    Poly factor() {
        skip();
        if (eat('-')) return -factor();
        Poly base = primary();
        skip();
        if (eat('^')) {
            skip();
            base = base.pow(static_cast<unsigned>(integer()));
        }
        return base;
    }
    Poly primary() {
        skip();
        if (eat('(')) {
            Poly r = expr();
            skip();
            if (!eat(')')) fail("missing ')'");
            return r;
        }
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Poly::constant(names_.size(), BigInt(std::string(s_.substr(start, pos_ - start))));
        }
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            auto it = std::find(names_.begin(), names_.end(), name);
            if (it == names_.end()) fail("unknown variable '" + name + "'");
            return Poly::variable(names_.size(), static_cast<std::size_t>(it - names_.begin()));
        }
        fail("expected a number, variable or '('");
    }
    unsigned long integer() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an exponent");
        return std::stoul(std::string(s_.substr(start, pos_ - start)));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("polynomial parse error at offset " + std::to_string(pos_) + ": " + msg + " in '" +
                         std::string(s_) + "'");
    }

    std::string_view s_;
    const std::vector<std::string>& names_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly parse_poly(std::string_view text, const std::vector<std::string>& names) {
    return detail::PolyParser(text, names).parse();
}

}  // namespace prismlab
