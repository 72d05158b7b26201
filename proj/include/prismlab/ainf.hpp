#pragma once

// A finite model of A_inf: Witt vectors of length n over R = F_p[y]/(y^c),
// with eps^{1/p^m} = 1 + y and eps^{1/p^j} = (1 + y)^{p^{m-j}}.
// theta is deliberately absent; only the Witt-ring identities among
// eps, mu, nu, xi and xi~ are modelled.

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "prismlab/witt.hpp"

namespace prismlab {

class AinfModel {
public:
    AinfModel(u64 p, int n, int m, int c)
        : p_(p), n_(n), m_(m), c_(c), ring_(CoeffRing::truncated_poly(p, c)) {
        if (n < 1) throw ParameterError("Witt length must be positive");
        if (m < 0) throw ParameterError("tilt depth m must be nonnegative");
        u64 root_exp = 1;  // p^{m-1}
        for (int i = 1; i < m; ++i) root_exp *= p;
        const RingElem one_plus_y = ring_->add(ring_->one(), ring_->gen());
        eps_ = m == 0 ? ring_->one() : ring_->pow(one_plus_y, root_exp * p);
        eps_root_ = m == 0 ? ring_->one() : ring_->pow(one_plus_y, root_exp);
    }

    u64 p() const { return p_; }
    int n() const { return n_; }
    int m() const { return m_; }
    int c() const { return c_; }
    const std::shared_ptr<const CoeffRing>& ring() const { return ring_; }

    const RingElem& epsilon() const { return eps_; }
    const RingElem& epsilon_root() const { return eps_root_; }  // eps^{1/p}

    WittVector teich(const RingElem& x) const { return WittVector::teichmuller(ring_, x, n_); }
    WittVector one() const { return WittVector::one(ring_, n_); }

    WittVector mu() const { return teich(eps_) - one(); }
    WittVector nu() const { return teich(eps_root_) - one(); }

    /// xi = sum_{i<p} [eps^{i/p}]
    WittVector xi() const {
        WittVector acc = WittVector::zero(ring_, n_);
        for (u64 i = 0; i < p_; ++i) acc += teich(ring_->pow(eps_root_, i));
        return acc;
    }

    /// xi~ = sum_{i<p} [eps]^i
    WittVector xi_tilde() const {
        WittVector acc = WittVector::zero(ring_, n_);
        const WittVector e = teich(eps_);
        for (u64 i = 0; i < p_; ++i) acc += e.pow(i);
        return acc;
    }

    /// sum_{i=1}^{p-1} sum_{j<i} [eps]^j, so that xi~ - p = mu * cofactor.
    WittVector telescoping_cofactor() const {
        WittVector acc = WittVector::zero(ring_, n_);
        const WittVector e = teich(eps_);
        for (u64 i = 1; i < p_; ++i)
            for (u64 j = 0; j < i; ++j) acc += e.pow(j);
        return acc;
    }

    /// mu vanishes although eps was meant to be nontrivial: y^{p^m} = 0 in R.
    bool degenerate() const { return m_ > 0 && mu() == WittVector::zero(ring_, n_); }

    /// Reduction to F_p[y]/(y^{c2}) for c2 <= c, applied to a Witt vector.
    WittVector truncate(const WittVector& w, int c2) const {
        if (c2 > c_ || c2 < 1) throw ParameterError("truncation target must satisfy 1 <= c' <= c");
        auto target = CoeffRing::truncated_poly(p_, c2);
        return w.mapped(target, [c2](const RingElem& x) { return RingElem(x.begin(), x.begin() + c2); });
    }

    nlohmann::json params_json() const { return {{"p", p_}, {"n", n_}, {"m", m_}, {"c", c_}}; }

private:
    u64 p_;
    int n_, m_, c_;
    std::shared_ptr<const CoeffRing> ring_;
    RingElem eps_, eps_root_;
};

struct IdentityCheck {
    std::string name;
    WittVector lhs;
    WittVector rhs;
    bool holds() const { return lhs == rhs; }
};

struct MuFactorizationReport {
    IdentityCheck xi_nu;        // xi * nu = mu
    IdentityCheck phi_mu;       // phi(mu) = xi~ * mu
    bool passed() const { return xi_nu.holds() && phi_mu.holds(); }
};

inline void require_nondegenerate(const AinfModel& A) {
    if (A.degenerate()) {
        u64 pm = 1;
        for (int i = 0; i < A.m(); ++i) pm *= A.p();
        throw PrecisionError("degenerate truncation: mu = 0 because y^" + std::to_string(pm) +
                             " = 0; use c > " + std::to_string(pm));
    }
}

inline MuFactorizationReport verify_mu_factorization(const AinfModel& A) {
    require_nondegenerate(A);
    const WittVector mu = A.mu();
    return {{"xi*nu = mu", A.xi() * A.nu(), mu}, {"phi(mu) = xi~*mu", mu.frobenius(), A.xi_tilde() * mu}};
}

struct XiTildeCongruenceReport {
    WittVector cofactor;       // c with xi~ - p = mu * c
    WittVector xi_cofactor;    // nu * c, so xi~ - p = xi * (nu * c)
    IdentityCheck mu_multiple;
    IdentityCheck xi_multiple;
    IdentityCheck mu_in_xi;    // mu = xi * nu
    bool passed() const { return mu_multiple.holds() && xi_multiple.holds() && mu_in_xi.holds(); }
};

inline XiTildeCongruenceReport verify_xitilde_congruence(const AinfModel& A) {
    require_nondegenerate(A);
    const WittVector lhs = A.xi_tilde() - WittVector::from_integer(A.ring(), A.n(), static_cast<i64>(A.p()));
    const WittVector c = A.telescoping_cofactor();
    const WittVector nu_c = A.nu() * c;
    return {c,
            nu_c,
            {"xi~ - p = mu*c", lhs, A.mu() * c},
            {"xi~ - p = xi*(nu*c)", lhs, A.xi() * nu_c},
            {"mu = xi*nu", A.mu(), A.xi() * A.nu()}};
}

inline nlohmann::json to_json(const IdentityCheck& c) {
    auto comps = [](const WittVector& w) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& x : w.components()) arr.push_back(w.ring()->to_string(x));
        return arr;
    };
    return {{"identity", c.name}, {"holds", c.holds()}, {"lhs", comps(c.lhs)}, {"rhs", comps(c.rhs)}};
}

}  // namespace prismlab
