#pragma once

// delta-structures on p-torsion-free truncations. The Frobenius lift phi is the
// single stored datum; delta is always derived as (phi(x) - x^p)/p, which costs
// one unit of p-precision.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prismlab/padic.hpp"
#include "prismlab/rng.hpp"

namespace prismlab {

enum class PrismKind { crystalline, breuil_kisin };

inline std::string to_string(PrismKind k) { return k == PrismKind::crystalline ? "crystalline" : "breuil_kisin"; }

inline PrismKind parse_prism_kind(const std::string& s) {
    if (s == "crystalline") return PrismKind::crystalline;
    if (s == "breuil_kisin" || s == "bk") return PrismKind::breuil_kisin;
    throw ParameterError("unknown prism kind '" + s + "'");
}

/// Either Z/p^N (modelled as series with M = 1, where u -> u^p is the identity)
/// or (Z/p^N)[[u]]/(u^M) with phi(u) = u^p.
class DeltaRing {
public:
    static DeltaRing crystalline(u64 p, int N) { return DeltaRing(PrismKind::crystalline, SeriesParams{p, N, 1}); }
    static DeltaRing breuil_kisin(u64 p, int N, int M) { return DeltaRing(PrismKind::breuil_kisin, SeriesParams{p, N, M}); }

    PrismKind kind() const { return kind_; }
    const SeriesParams& params() const { return params_; }
    u64 p() const { return params_.p; }
    int N() const { return params_.N; }
    int M() const { return params_.M; }

    TruncatedSeries constant(i64 c) const { return TruncatedSeries::constant(params_, c); }
    TruncatedSeries parse(std::string_view text) const { return TruncatedSeries::parse(params_, text); }

    TruncatedSeries phi(const TruncatedSeries& x) const {
        require_member(x);
        return x.frobenius();
    }

    /// delta(x) at precision N-1.
    TruncatedSeries delta(const TruncatedSeries& x) const {
        require_member(x);
        if (params_.N < 2) throw PrecisionError("delta needs p-precision N >= 2");
        const TruncatedSeries diff = phi(x) - x.pow(params_.p);
        try {
            return diff.divided_by_p();
        } catch (const InvariantViolation&) {
            throw InvariantViolation("phi(x) - x^p is not divisible by p: the stored Frobenius lift is broken");
        }
    }

    TruncatedSeries random_element(Rng& rng) const {
        std::vector<i64> c(static_cast<std::size_t>(params_.M));
        const u64 q = modular::prime_power(params_.p, params_.N);
        for (auto& x : c) x = static_cast<i64>(rng.below(q));
        return TruncatedSeries::from_coeffs(params_, std::span<const i64>(c));
    }

private:
    DeltaRing(PrismKind kind, SeriesParams params) : kind_(kind), params_(params) {
        TruncatedSeries probe(params);  // validates p, N, M
        (void)probe;
    }

    void require_member(const TruncatedSeries& x) const {
        if (!(x.params() == params_))
            throw ParameterError("element " + to_string(x.params()) + " does not live in this delta-ring " + to_string(params_));
    }

    PrismKind kind_;
    SeriesParams params_;
};

struct DeltaAxiomFailure {
    std::string law;
    TruncatedSeries x;
    TruncatedSeries y;
};

struct DeltaAxiomReport {
    int samples = 0;
    int checked_precision = 0;  // N - 1
    u64 seed = 0;
    std::vector<DeltaAxiomFailure> failures;
    bool passed() const { return failures.empty(); }
};

/// Checks, on random pairs, the sum and product laws of delta at precision N-1,
/// plus phi being a ring map lifting Frobenius and x^p + p*delta(x) = phi(x).
inline DeltaAxiomReport check_delta_axioms(const DeltaRing& R, int samples, u64 seed) {
    if (R.N() < 2) throw PrecisionError("delta-ring axioms need N >= 2");
    DeltaAxiomReport rep;
    rep.samples = samples;
    rep.checked_precision = R.N() - 1;
    rep.seed = seed;
    Rng rng(seed);
    const u64 p = R.p();
    const int lo = R.N() - 1;
    auto low = [lo](const TruncatedSeries& s) { return s.with_p_precision(lo); };
    auto fail = [&](const char* law, const TruncatedSeries& x, const TruncatedSeries& y) {
        rep.failures.push_back({law, x, y});
    };

    auto check_pair = [&](const TruncatedSeries& x, const TruncatedSeries& y) {
        const TruncatedSeries dx = R.delta(x), dy = R.delta(y);
        const TruncatedSeries xp = x.pow(p), yp = y.pow(p);

        const TruncatedSeries carry = (xp + yp - (x + y).pow(p)).divided_by_p();
        if (!(R.delta(x + y) == dx + dy + carry)) fail("sum", x, y);

        const TruncatedSeries rhs = low(xp) * dy + low(yp) * dx + (dx * dy).scaled(static_cast<i64>(p));
        if (!(R.delta(x * y) == rhs)) fail("product", x, y);

        if (!(R.phi(x + y) == R.phi(x) + R.phi(y)) || !(R.phi(x * y) == R.phi(x) * R.phi(y)))
            fail("phi-homomorphism", x, y);
        if (!((R.phi(x) - xp).with_p_precision(1).is_zero())) fail("frobenius-lift", x, y);
        if (!(low(xp) + dx.lifted_to(R.N()).scaled(static_cast<i64>(p)).with_p_precision(lo) == low(R.phi(x))))
            fail("reconstruction", x, y);
    };

    const TruncatedSeries zero = R.constant(0), one = R.constant(1);
    if (!R.delta(zero).is_zero() || !R.delta(one).is_zero()) fail("delta(0)=delta(1)=0", zero, one);
    for (int i = 0; i < samples; ++i) check_pair(R.random_element(rng), R.random_element(rng));
    return rep;
}

struct DistinguishedResult {
    bool distinguished = false;
    TruncatedSeries delta;                  // at precision N-1
    std::optional<TruncatedSeries> inverse;  // of delta(d), when a unit
    int valuation = 0;                      // p-valuation of the constant term of delta(d)
};

inline DistinguishedResult is_distinguished(const DeltaRing& R, const TruncatedSeries& d) {
    DistinguishedResult res{false, R.delta(d), std::nullopt, 0};
    res.valuation = res.delta.constant_valuation();
    if (res.delta.is_unit()) {
        res.distinguished = true;
        res.inverse = res.delta.inverse();
        res.valuation = 0;
    }
    return res;
}

/// Explicit membership p = a*d + b*phi(d), i.e. p lies in I + phi(I)A for I = (d).
/// From phi(d) = d^p + p*delta(d): b = delta(d)^{-1}, a = -d^{p-1} * delta(d)^{-1}.
struct IdealCertificate {
    TruncatedSeries a;
    TruncatedSeries b;
    bool verified = false;
};

class Prism {
public:
    Prism(DeltaRing ring, TruncatedSeries d, std::optional<EisensteinPoly> E)
        : ring_(std::move(ring)), d_(std::move(d)), E_(std::move(E)) {
        auto dist = is_distinguished(ring_, d_);
        if (!dist.distinguished)
            throw ValidationError("prism generator " + d_.to_string() + " is not distinguished (delta has valuation " +
                                  std::to_string(dist.valuation) + ")");
        delta_inverse_ = *dist.inverse;
    }

    const DeltaRing& ring() const { return ring_; }
    PrismKind kind() const { return ring_.kind(); }
    const TruncatedSeries& generator() const { return d_; }
    const std::optional<EisensteinPoly>& eisenstein() const { return E_; }
    const SeriesParams& params() const { return ring_.params(); }

    IdealCertificate ideal_certificate() const {
        const int N = ring_.N();
        const TruncatedSeries b = delta_inverse_.lifted_to(N);
        const TruncatedSeries a = -(d_.pow(ring_.p() - 1) * b);
        IdealCertificate cert{a, b, false};
        cert.verified = (a * d_ + b * ring_.phi(d_)) == ring_.constant(static_cast<i64>(ring_.p()));
        return cert;
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"kind", to_string(kind())}, {"p", ring_.p()}, {"N", ring_.N()}, {"M", ring_.M()}};
        if (E_) j["E"] = E_->coeffs();
        return j;
    }

private:
    DeltaRing ring_;
    TruncatedSeries d_;
    std::optional<EisensteinPoly> E_;
    TruncatedSeries delta_inverse_ = TruncatedSeries(2, 1, 1);
};

inline Prism make_prism(PrismKind kind, u64 p, int N, int M, const std::optional<EisensteinPoly>& E) {
    if (N < 2) throw PrecisionError("prisms need N >= 2 to test distinguishedness");
    if (kind == PrismKind::crystalline) {
        DeltaRing R = DeltaRing::crystalline(p, N);
        return Prism(R, R.constant(static_cast<i64>(p)), std::nullopt);
    }
    if (!E) throw ParameterError("a Breuil-Kisin prism needs an Eisenstein polynomial E");
    if (E->p() != p) throw ParameterError("Eisenstein polynomial prime does not match p");
    DeltaRing R = DeltaRing::breuil_kisin(p, N, M);
    return Prism(R, E->to_series(R.params()), E);
}

inline Prism prism_from_json(const nlohmann::json& j) {
    const PrismKind kind = parse_prism_kind(j.at("kind").get<std::string>());
    const u64 p = j.at("p").get<u64>();
    const int N = j.at("N").get<int>();
    const int M = kind == PrismKind::crystalline ? j.value("M", 1) : j.at("M").get<int>();
    std::optional<EisensteinPoly> E;
    if (j.contains("E")) E = EisensteinPoly(p, j.at("E").get<std::vector<i64>>());
    return make_prism(kind, p, N, kind == PrismKind::crystalline ? 1 : M, E);
}

}  // namespace prismlab
