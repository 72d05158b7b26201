#pragma once

// p-typical Witt vectors of finite length over a CoeffRing. Arithmetic goes
// through the universal sum/product/negation polynomials, which are derived
// from the ghost equations and cached per (p, n).

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "prismlab/coeff_ring.hpp"
#include "prismlab/poly.hpp"
#include "prismlab/rng.hpp"

namespace prismlab {

/// Universal polynomials over Z in x_0..x_{n-1}, y_0..y_{n-1} (2n variables).
/// Negation polynomials use the same variable set and ignore the y's.
struct WittPolys {
    u64 p = 0;
    int n = 0;
    std::vector<Poly> sum;
    std::vector<Poly> prod;
    std::vector<Poly> neg;

    std::vector<std::string> variable_names() const {
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
        for (int i = 0; i < n; ++i) names.push_back("y" + std::to_string(i));
        return names;
    }
};

inline constexpr u64 kWittPolyDegreeLimit = 125;  // p^{n-1}

/// w_i = sum_{j<=i} p^j v_{offset+j}^{p^{i-j}} in a polynomial ring with nvars variables.
inline Poly ghost_polynomial(u64 p, int i, std::size_t nvars, std::size_t offset) {
    Poly w(nvars);
    BigInt pj = 1;
    for (int j = 0; j <= i; ++j) {
        Exponents e(nvars, 0);
        u64 exp = 1;
        for (int k = 0; k < i - j; ++k) exp *= p;
        e[offset + static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(exp);
        w.add_term(e, pj);
        pj *= p;
    }
    return w;
}

/// Solves the ghost equations by back-substitution:
///   T_i = (target_i - sum_{j<i} p^j T_j^{p^{i-j}}) / p^i.
inline std::vector<Poly> solve_ghost_equations(u64 p, const std::vector<Poly>& target) {
    std::vector<Poly> out;
    BigInt pi = 1;
    for (std::size_t i = 0; i < target.size(); ++i) {
        Poly acc = target[i];
        BigInt pj = 1;
        for (std::size_t j = 0; j < i; ++j) {
            u64 e = 1;
            for (std::size_t k = 0; k < i - j; ++k) e *= p;
            acc -= out[j].pow(static_cast<unsigned>(e)).scaled(pj);
            pj *= p;
        }
        out.push_back(acc.divided_exact(pi));
        pi *= p;
    }
    return out;
}

inline WittPolys compute_universal_witt_polys(u64 p, int n) {
    modular::require_prime(p);
    if (n < 1) throw ParameterError("Witt length must be positive");
    u64 top = 1;
    for (int i = 1; i < n; ++i) {
        top *= p;
        if (top > kWittPolyDegreeLimit) throw ResourceError("universal Witt polynomials exceed the size bound (p^{n-1} <= 125)");
    }
    const std::size_t nv = 2 * static_cast<std::size_t>(n);
    std::vector<Poly> wsum, wprod, wneg;
    for (int i = 0; i < n; ++i) {
        Poly wx = ghost_polynomial(p, i, nv, 0);
        Poly wy = ghost_polynomial(p, i, nv, static_cast<std::size_t>(n));
        wsum.push_back(wx + wy);
        wprod.push_back(wx * wy);
        wneg.push_back(-wx);
    }
    WittPolys out;
    out.p = p;
    out.n = n;
    out.sum = solve_ghost_equations(p, wsum);
    out.prod = solve_ghost_equations(p, wprod);
    out.neg = solve_ghost_equations(p, wneg);
    return out;
}

namespace detail {

/// A universal polynomial with coefficients reduced into one CoeffRing's
/// characteristic, laid out for fast repeated evaluation.
struct CompiledPoly {
    struct Term {
        u64 coeff;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;  // (variable, exponent)
    };
    std::vector<Term> terms;
};

struct CompiledWitt {
    std::vector<CompiledPoly> sum, prod, neg;
    std::vector<std::uint32_t> max_exp;  // per variable
};

inline CompiledPoly compile(const Poly& poly, u64 q, std::vector<std::uint32_t>& max_exp) {
    CompiledPoly cp;
    for (const auto& [e, c] : poly.terms()) {
        BigInt m = c % q;
        if (m < 0) m += q;
        if (m == 0) continue;
        CompiledPoly::Term t{static_cast<u64>(m), {}};
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (!e[v]) continue;
            t.factors.emplace_back(static_cast<std::uint32_t>(v), e[v]);
            max_exp[v] = std::max(max_exp[v], e[v]);
        }
        cp.terms.push_back(std::move(t));
    }
    return cp;
}

class WittCache {
public:
    static WittCache& instance() {
        static WittCache cache;
        return cache;
    }

    std::shared_ptr<const WittPolys> polys(u64 p, int n) {
        std::lock_guard lock(mu_);
        auto key = std::make_pair(p, n);
        auto it = polys_.find(key);
        if (it != polys_.end()) return it->second;
        auto made = std::make_shared<const WittPolys>(compute_universal_witt_polys(p, n));
        polys_.emplace(key, made);
        return made;
    }

    std::shared_ptr<const CompiledWitt> compiled(u64 p, int n, u64 q) {
        auto universal = polys(p, n);
        std::lock_guard lock(mu_);
        auto key = std::make_tuple(p, n, q);
        auto it = compiled_.find(key);
        if (it != compiled_.end()) return it->second;
        auto cw = std::make_shared<CompiledWitt>();
        cw->max_exp.assign(2 * static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            cw->sum.push_back(compile(universal->sum[static_cast<std::size_t>(i)], q, cw->max_exp));
            cw->prod.push_back(compile(universal->prod[static_cast<std::size_t>(i)], q, cw->max_exp));
            cw->neg.push_back(compile(universal->neg[static_cast<std::size_t>(i)], q, cw->max_exp));
        }
        std::shared_ptr<const CompiledWitt> frozen = cw;
        compiled_.emplace(key, frozen);
        return frozen;
    }

private:
    std::mutex mu_;
    std::map<std::pair<u64, int>, std::shared_ptr<const WittPolys>> polys_;
    std::map<std::tuple<u64, int, u64>, std::shared_ptr<const CompiledWitt>> compiled_;
};

}  // namespace detail

/// Cached universal polynomials. Safe for concurrent callers.
inline const WittPolys& universal_witt_polys(u64 p, int n) { return *detail::WittCache::instance().polys(p, n); }

class WittVector {
public:
    WittVector(std::shared_ptr<const CoeffRing> ring, std::vector<RingElem> components)
        : ring_(std::move(ring)), comps_(std::move(components)) {
        if (!ring_) throw ParameterError("Witt vector needs a coefficient ring");
        if (comps_.empty()) throw ParameterError("Witt length must be positive");
        for (const auto& c : comps_)
            if (static_cast<int>(c.size()) != ring_->dimension()) throw ParameterError("component does not belong to the ring");
    }

    static WittVector zero(std::shared_ptr<const CoeffRing> ring, int n) {
        std::vector<RingElem> c(static_cast<std::size_t>(n), ring->zero());
        return WittVector(std::move(ring), std::move(c));
    }
    static WittVector teichmuller(std::shared_ptr<const CoeffRing> ring, const RingElem& x, int n) {
        WittVector w = zero(ring, n);
        w.comps_[0] = x;
        return w;
    }
    static WittVector one(std::shared_ptr<const CoeffRing> ring, int n) {
        auto u = ring->one();
        return teichmuller(std::move(ring), u, n);
    }
    /// The image of k under Z -> W_n(R).
    static WittVector from_integer(std::shared_ptr<const CoeffRing> ring, int n, i64 k) {
        return one(std::move(ring), n).times_integer(k);
    }

    int length() const { return static_cast<int>(comps_.size()); }
    const std::shared_ptr<const CoeffRing>& ring() const { return ring_; }
    const RingElem& component(int i) const { return comps_.at(static_cast<std::size_t>(i)); }
    const std::vector<RingElem>& components() const { return comps_; }

    WittVector operator+(const WittVector& o) const { return apply(o, &detail::CompiledWitt::sum); }
    WittVector operator*(const WittVector& o) const { return apply(o, &detail::CompiledWitt::prod); }
    WittVector operator-() const { return apply(*this, &detail::CompiledWitt::neg); }
    WittVector operator-(const WittVector& o) const { return *this + (-o); }
    WittVector& operator+=(const WittVector& o) { return *this = *this + o; }
    WittVector& operator*=(const WittVector& o) { return *this = *this * o; }

    WittVector times_integer(i64 k) const {
        const bool negate = k < 0;
        u64 m = negate ? static_cast<u64>(-k) : static_cast<u64>(k);
        WittVector acc = zero(ring_, length());
        WittVector base = *this;
        while (m) {
            if (m & 1) acc += base;
            m >>= 1;
            if (m) base += base;
        }
        return negate ? -acc : acc;
    }

    WittVector pow(u64 e) const {
        WittVector r = one(ring_, length());
        WittVector b = *this;
        while (e) {
            if (e & 1) r *= b;
            e >>= 1;
            if (e) b *= b;
        }
        return r;
    }

    /// Witt Frobenius; only defined here for F_p-algebra coefficients, where it
    /// is the componentwise p-th power.
    WittVector frobenius() const {
        if (!ring_->is_fp_algebra())
            throw ParameterError("Witt Frobenius is only supported over F_p-algebras, not " + ring_->description());
        WittVector r = *this;
        for (auto& c : r.comps_) c = ring_->pow(c, ring_->p());
        return r;
    }

    /// V(a) = (0, a_0, ..., a_{n-2})
    WittVector verschiebung() const {
        WittVector r = zero(ring_, length());
        for (std::size_t i = 1; i < comps_.size(); ++i) r.comps_[i] = comps_[i - 1];
        return r;
    }

    /// Ghost components w_i = sum_{j<=i} p^j a_j^{p^{i-j}}, computed in the coefficient ring.
    std::vector<RingElem> ghost() const {
        std::vector<RingElem> w;
        const u64 p = ring_->p();
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            RingElem acc = ring_->zero();
            i64 pj = 1;
            for (std::size_t j = 0; j <= i; ++j) {
                u64 e = 1;
                for (std::size_t k = 0; k < i - j; ++k) e *= p;
                acc = ring_->add(acc, ring_->scale(ring_->pow(comps_[j], e), pj));
                pj = static_cast<i64>(modular::mulmod(static_cast<u64>(pj), p, ring_->characteristic()));
            }
            w.push_back(std::move(acc));
        }
        return w;
    }

    /// Applies a ring map componentwise (Witt vectors are functorial).
    template <class F>
    WittVector mapped(std::shared_ptr<const CoeffRing> target, F&& f) const {
        std::vector<RingElem> c;
        for (const auto& x : comps_) c.push_back(f(x));
        return WittVector(std::move(target), std::move(c));
    }

    bool operator==(const WittVector& o) const { return *ring_ == *o.ring_ && comps_ == o.comps_; }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            if (i) s += "; ";
            s += ring_->to_string(comps_[i]);
        }
        return s + ")";
    }

private:
    WittVector apply(const WittVector& o, std::vector<detail::CompiledPoly> detail::CompiledWitt::*family) const {
        if (length() != o.length()) throw ParameterError("Witt vectors of different lengths");
        if (!(*ring_ == *o.ring_)) throw ParameterError("Witt vectors over different coefficient rings");
        const int n = length();
        auto cw = detail::WittCache::instance().compiled(ring_->p(), n, ring_->characteristic());

        // powers[v][k] = value of variable v raised to k
        const std::size_t nv = 2 * static_cast<std::size_t>(n);
        std::vector<std::vector<RingElem>> powers(nv);
        for (std::size_t v = 0; v < nv; ++v) {
            const RingElem& base = v < static_cast<std::size_t>(n) ? comps_[v] : o.comps_[v - static_cast<std::size_t>(n)];
            auto& pw = powers[v];
            pw.push_back(ring_->one());
            for (std::uint32_t k = 1; k <= cw->max_exp[v]; ++k) pw.push_back(ring_->mul(pw.back(), base));
        }

        std::vector<RingElem> out;
        for (const auto& poly : (*cw).*family) {
            RingElem acc = ring_->zero();
            for (const auto& t : poly.terms) {
                RingElem term = ring_->scale(ring_->one(), static_cast<i64>(t.coeff));
                for (auto [v, e] : t.factors) term = ring_->mul(term, powers[v][e]);
                acc = ring_->add(acc, term);
            }
            out.push_back(std::move(acc));
        }
        return WittVector(ring_, std::move(out));
    }

    std::shared_ptr<const CoeffRing> ring_;
    std::vector<RingElem> comps_;
};

struct GhostCheckReport {
    u64 p = 0;
    int n = 0;
    int coefficient_precision = 0;
    int samples = 0;
    u64 seed = 0;
    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

/// Random pairs over Z/p^a: ghost(x + y) and ghost(x * y) against the
/// componentwise sum and product of ghost vectors.
inline GhostCheckReport check_ghost_homomorphism(u64 p, int n, int a, int samples, u64 seed) {
    auto R = CoeffRing::residue(p, a);
    GhostCheckReport rep{p, n, a, samples, seed, {}};
    Rng rng(seed);
    const u64 q = R->characteristic();
    auto random_vec = [&] {
        std::vector<RingElem> c;
        for (int i = 0; i < n; ++i) c.push_back(R->from_int(static_cast<i64>(rng.below(q))));
        return WittVector(R, std::move(c));
    };
    for (int t = 0; t < samples; ++t) {
        const WittVector x = random_vec(), y = random_vec();
        const auto gx = x.ghost(), gy = y.ghost(), gs = (x + y).ghost(), gp = (x * y).ghost();
        for (int i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (!(gs[k] == R->add(gx[k], gy[k]))) rep.failures.push_back("sum " + x.to_string() + " " + y.to_string());
            if (!(gp[k] == R->mul(gx[k], gy[k]))) rep.failures.push_back("product " + x.to_string() + " " + y.to_string());
        }
    }
    return rep;
}

/// W_n(F_p) -> Z/p^n, (x_i) -> sum p^i [x_i] with [x] = x^{p^{n-1}} mod p^n.
inline u64 witt_to_integer(const WittVector& w) {
    const auto& R = *w.ring();
    if (!R.is_fp_algebra() || R.dimension() != 1) throw ParameterError("needs Witt vectors over F_p");
    const u64 p = R.p();
    const int n = w.length();
    const u64 q = modular::prime_power(p, n);
    const u64 e = modular::prime_power(p, n - 1);
    u64 acc = 0, pi = 1;
    for (int i = 0; i < n; ++i) {
        acc = modular::addmod(acc, modular::mulmod(pi, modular::powmod(w.component(i)[0], e, q), q), q);
        pi = modular::mulmod(pi, p, q);
    }
    return acc;
}

inline std::ostream& operator<<(std::ostream& os, const WittVector& w) { return os << w.to_string(); }

}  // namespace prismlab
