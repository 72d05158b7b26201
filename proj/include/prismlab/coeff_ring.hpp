#pragma once

#include <memory>
#include <string>
#include <vector>

#include "prismlab/padic.hpp"
#include "prismlab/poly.hpp"

namespace prismlab {

/// Coefficient vector of an element of a CoeffRing (low powers of y first).
using RingElem = std::vector<u64>;

/// A finite commutative ring (Z/p^a)[y]/(f) with f monic of degree d, given by
/// its reduction table y^d = r_0 + r_1*y + ... + r_{d-1}*y^{d-1}.
/// Z/p^a is the case d = 1, f = y; F_p[y]/(y^c) is a = 1, f = y^c.
class CoeffRing {
public:
    CoeffRing(u64 p, int a, std::vector<i64> reduction) : p_(p), a_(a) {
        modular::require_prime(p);
        if (a < 1) throw ParameterError("coefficient ring exponent must be positive");
        if (reduction.empty()) throw ParameterError("reduction table must have degree >= 1");
        q_ = modular::prime_power(p, a);
        for (i64 r : reduction) reduction_.push_back(modular::reduce(r, q_));
        nilpotent_table_ = std::all_of(reduction_.begin(), reduction_.end(), [](u64 r) { return r == 0; });
        verify_axioms();
    }

    static std::shared_ptr<const CoeffRing> residue(u64 p, int a) {
        return std::make_shared<const CoeffRing>(p, a, std::vector<i64>{0});
    }
    static std::shared_ptr<const CoeffRing> prime_field(u64 p) { return residue(p, 1); }
    /// F_p[y]/(y^c)
    static std::shared_ptr<const CoeffRing> truncated_poly(u64 p, int c) {
        if (c < 1) throw ParameterError("truncation degree must be positive");
        return std::make_shared<const CoeffRing>(p, 1, std::vector<i64>(static_cast<std::size_t>(c), 0));
    }

    u64 p() const { return p_; }
    int char_exponent() const { return a_; }
    u64 characteristic() const { return q_; }
    int dimension() const { return static_cast<int>(reduction_.size()); }
    const std::vector<u64>& reduction() const { return reduction_; }
    bool is_fp_algebra() const { return a_ == 1; }

    bool operator==(const CoeffRing& o) const { return p_ == o.p_ && a_ == o.a_ && reduction_ == o.reduction_; }

    RingElem zero() const { return RingElem(reduction_.size(), 0); }
    RingElem one() const { return from_int(1); }
    RingElem from_int(i64 k) const {
        RingElem r = zero();
        r[0] = modular::reduce(k, q_);
        return r;
    }
    RingElem from_int(const BigInt& k) const {
        BigInt m = k % q_;
        if (m < 0) m += q_;
        RingElem r = zero();
        r[0] = static_cast<u64>(m);
        return r;
    }
    /// The generator y (zero when the table has degree 1).
    RingElem gen() const {
        RingElem r = zero();
        if (r.size() > 1) r[1] = 1;
        else r[0] = reduction_[0];
        return r;
    }
    RingElem from_coeffs(const std::vector<i64>& c) const {
        RingElem acc = zero();
        RingElem ypow = one();
        const RingElem y = gen();
        for (i64 ci : c) {
            acc = add(acc, scale(ypow, ci));
            ypow = mul(ypow, y);
        }
        return acc;
    }

    bool is_zero(const RingElem& x) const {
        return std::all_of(x.begin(), x.end(), [](u64 c) { return c == 0; });
    }

    RingElem add(const RingElem& x, const RingElem& y) const {
        RingElem r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = modular::addmod(x[i], y[i], q_);
        return r;
    }
    RingElem sub(const RingElem& x, const RingElem& y) const {
        RingElem r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = modular::submod(x[i], y[i], q_);
        return r;
    }
    RingElem neg(const RingElem& x) const { return sub(zero(), x); }
    RingElem scale(const RingElem& x, i64 k) const {
        const u64 km = modular::reduce(k, q_);
        RingElem r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = modular::mulmod(x[i], km, q_);
        return r;
    }

    RingElem mul(const RingElem& x, const RingElem& y) const {
        const std::size_t d = reduction_.size();
        if (nilpotent_table_) {
            RingElem r(d, 0);
            for (std::size_t i = 0; i < d; ++i) {
                if (!x[i]) continue;
                for (std::size_t j = 0; i + j < d; ++j)
                    if (y[j]) r[i + j] = modular::addmod(r[i + j], modular::mulmod(x[i], y[j], q_), q_);
            }
            return r;
        }
        std::vector<u64> full(2 * d - 1, 0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                full[i + j] = modular::addmod(full[i + j], modular::mulmod(x[i], y[j], q_), q_);
        for (std::size_t k = full.size() - 1; k >= d; --k) {
            const u64 t = full[k];
            if (!t) continue;
            full[k] = 0;
            for (std::size_t i = 0; i < d; ++i)
                full[k - d + i] = modular::addmod(full[k - d + i], modular::mulmod(t, reduction_[i], q_), q_);
        }
        full.resize(d);
        return full;
    }

    RingElem pow(RingElem b, u64 e) const {
        RingElem r = one();
        while (e) {
            if (e & 1) r = mul(r, b);
            e >>= 1;
            if (e) b = mul(b, b);
        }
        return r;
    }

    std::string to_string(const RingElem& x) const {
        if (reduction_.size() == 1) return std::to_string(x[0]);
        std::string out;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (!x[k]) continue;
            if (!out.empty()) out += " + ";
            if (k == 0) {
                out += std::to_string(x[k]);
                continue;
            }
            if (x[k] != 1) out += std::to_string(x[k]) + "*";
            out += "y";
            if (k > 1) out += "^" + std::to_string(k);
        }
        return out.empty() ? "0" : out;
    }

    std::string description() const {
        std::string base = a_ == 1 ? "F_" + std::to_string(p_) : "Z/" + std::to_string(p_) + "^" + std::to_string(a_);
        if (reduction_.size() == 1 && reduction_[0] == 0) return base;
        return base + "[y]/(deg " + std::to_string(reduction_.size()) + ")";
    }

private:
    // Sampled associativity/distributivity on a deterministic element set.
    void verify_axioms() const {
        const std::size_t d = reduction_.size();
        std::vector<RingElem> sample;
        u64 state = 0x9e3779b97f4a7c15ULL ^ (p_ * 1315423911ULL) ^ d;
        for (int k = 0; k < 6; ++k) {
            RingElem e(d);
            for (auto& c : e) {
                state = state * 6364136223846793005ULL + 1442695040888963407ULL;
                c = (state >> 17) % q_;
            }
            sample.push_back(std::move(e));
        }
        for (const auto& x : sample)
            for (const auto& y : sample) {
                if (mul(x, y) != mul(y, x)) throw InvariantViolation("reduction table: multiplication not commutative");
                for (const auto& z : sample) {
                    if (mul(mul(x, y), z) != mul(x, mul(y, z)))
                        throw InvariantViolation("reduction table: multiplication not associative");
                    if (mul(x, add(y, z)) != add(mul(x, y), mul(x, z)))
                        throw InvariantViolation("reduction table: distributivity fails");
                }
            }
    }

    u64 p_;
    int a_;
    u64 q_ = 1;
    std::vector<u64> reduction_;
    bool nilpotent_table_ = false;
};

}  // namespace prismlab
