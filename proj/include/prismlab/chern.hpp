#pragma once

// Chern-class calculus: symmetric polynomials in formal roots, the Whitney
// identity, flag and projective bundle presentations, and Chern numbers of
// bundles on products of projective spaces.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prismlab/graded_ring.hpp"
#include "prismlab/padic.hpp"

namespace prismlab {

inline std::vector<std::string> indexed_names(const std::string& stem, std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
    return v;
}

/// Polynomial in roots t1..tr. `symmetric` is only ever set by a passing check.
struct SymPoly {
    Poly poly;
    std::size_t r = 0;
    bool symmetric = false;

    std::vector<std::string> names() const { return indexed_names("t", r); }
    std::string to_string() const { return poly.to_string(names()); }
};

inline Poly swap_variables(const Poly& f, std::size_t i, std::size_t j) {
    Poly out(f.nvars());
    for (const auto& [e, c] : f.terms()) {
        Exponents s = e;
        std::swap(s[i], s[j]);
        out.add_term(s, c);
    }
    return out;
}

/// Invariance under every adjacent transposition of the first r variables.
inline bool is_symmetric(const Poly& f, std::size_t r) {
    for (std::size_t i = 0; i + 1 < r; ++i)
        if (!(swap_variables(f, i, i + 1) == f)) return false;
    return true;
}

inline SymPoly make_sympoly(Poly f, std::size_t r) {
    if (f.nvars() != r) throw ParameterError("polynomial must be in exactly r root variables");
    const bool s = is_symmetric(f, r);
    return {std::move(f), r, s};
}

/// sigma_i(vars) inside a ring with nvars variables.
inline Poly elementary_in(std::size_t nvars, const std::vector<std::size_t>& vars, std::size_t i) {
    Poly out(nvars);
    if (i > vars.size()) return out;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (pick.size() == i) {
            Exponents e(nvars, 0);
            for (auto v : pick) e[v] += 1;
            out.add_term(e, 1);
            return;
        }
        for (std::size_t k = start; k < vars.size(); ++k) {
            pick.push_back(vars[k]);
            rec(k + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

inline SymPoly elementary_symmetric(std::size_t i, std::size_t r) {
    if (i > r) throw ParameterError("need 0 <= i <= r");
    std::vector<std::size_t> vars;
    for (std::size_t k = 0; k < r; ++k) vars.push_back(k);
    return {elementary_in(r, vars, i), r, true};
}

/// Rewrites a symmetric polynomial in t1..tr as a polynomial in c1..cr
/// (c_i = sigma_i) by peeling off lex-leading terms.
inline Poly symmetric_to_elementary(const SymPoly& f) {
    if (!is_symmetric(f.poly, f.r)) throw ValidationError("polynomial is not symmetric in its roots");
    const std::size_t r = f.r;
    std::vector<Poly> sig;
    for (std::size_t i = 1; i <= r; ++i) sig.push_back(elementary_symmetric(i, r).poly);
    Poly rest = f.poly;
    Poly out(r);
    while (!rest.is_zero()) {
        const auto& [lead, c] = *rest.terms().rbegin();  // lex-largest exponent
        Exponents ce(r, 0);
        Poly term = Poly::constant(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            const std::uint32_t next = i + 1 < r ? lead[i + 1] : 0;
            if (lead[i] < next) throw InvariantViolation("leading exponent of a symmetric polynomial is not a partition");
            ce[i] = lead[i] - next;
            if (ce[i]) term *= sig[i].pow(ce[i]);
        }
        out.add_term(ce, c);
        rest -= term;
    }
    return out;
}

struct WhitneyWitness {
    std::size_t r1 = 0, r2 = 0;
    Poly lhs;  // sum_i sigma_i(t_1..t_{r1+r2}) x^i
    Poly rhs;  // product of the two partial generating functions
    std::vector<std::string> names;
    bool holds() const { return lhs == rhs; }
};

inline WhitneyWitness whitney_check(std::size_t r1, std::size_t r2) {
    if (r1 > 6 || r2 > 6) throw ResourceError("Whitney check is limited to r1, r2 <= 6");
    const std::size_t r = r1 + r2, nv = r + 1;  // roots then x
    std::vector<std::size_t> all, first, second;
    for (std::size_t i = 0; i < r; ++i) (i < r1 ? first : second).push_back(i), all.push_back(i);
    auto gen_fn = [&](const std::vector<std::size_t>& vars) {
        Poly s(nv);
        for (std::size_t i = 0; i <= vars.size(); ++i) {
            Exponents xe(nv, 0);
            xe[r] = static_cast<std::uint32_t>(i);
            s += elementary_in(nv, vars, i) * Poly::monomial(xe, 1);
        }
        return s;
    };
    WhitneyWitness w{r1, r2, gen_fn(all), gen_fn(first) * gen_fn(second), indexed_names("t", r)};
    w.names.push_back("x");
    return w;
}

// ---------------------------------------------------------------------------
// Bases and bundles

/// H*(P^{n_1} x ... x P^{n_k}) with hyperplane classes x1..xk in degree 2.
inline GradedRing projective_product_ring(const std::vector<int>& dims) {
    std::vector<Generator> g;
    std::vector<Relation> rels;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 0) throw ParameterError("projective space dimension must be nonnegative");
        g.push_back({"x" + std::to_string(i + 1), 2, -1});
        rels.push_back(PowerRelation{g.back().name, dims[i] + 1});
    }
    return GradedRing(std::move(g), std::move(rels));
}

/// Parses a class on the base; a single factor also accepts the bare name x.
inline Poly parse_base_class(const GradedRing& base, std::string_view text) {
    try {
        return base.parse(text);
    } catch (const ParseError&) {
        if (base.nvars() != 1) throw;
        return parse_poly(text, {"x"});
    }
}

class BundleData {
public:
    BundleData(std::vector<int> proj, int rank, Poly total_chern, std::optional<std::vector<Poly>> line_summands = std::nullopt)
        : proj_(std::move(proj)), rank_(rank), base_(projective_product_ring(proj_)) {
        if (rank < 0) throw ParameterError("bundle rank must be nonnegative");
        total_ = base_.reduce(total_chern);
        if (total_.coeff(Exponents(base_.nvars(), 0)) != 1) throw ValidationError("total Chern class must start with c_0 = 1");
        for (int i = rank + 1; i <= dim(); ++i)
            if (!chern_class(i).is_zero())
                throw ValidationError("c_" + std::to_string(i) + " is nonzero above the rank " + std::to_string(rank));
        if (line_summands) {
            if (static_cast<int>(line_summands->size()) != rank) throw ValidationError("need one line summand per unit of rank");
            Poly prod = Poly::constant(base_.nvars(), 1);
            for (const auto& l : *line_summands) {
                const std::vector<long> ones(base_.nvars(), 1);
                if (!(l.homogeneous_part(ones, 1) == l)) throw ValidationError("a line summand's class must be linear");
                prod = base_.reduce(prod * (Poly::constant(base_.nvars(), 1) + l));
            }
            if (!(prod == total_)) throw ValidationError("line summands do not multiply to the declared total Chern class");
            lines_ = std::move(line_summands);
        }
    }

    const std::vector<int>& proj() const { return proj_; }
    int rank() const { return rank_; }
    int dim() const {
        int d = 0;
        for (int n : proj_) d += n;
        return d;
    }
    const GradedRing& base() const { return base_; }
    const Poly& total_chern() const { return total_; }
    const std::optional<std::vector<Poly>>& line_summands() const { return lines_; }

    /// c_i(E): the polynomial-degree-i part of the total class.
    Poly chern_class(int i) const {
        if (i < 0) return Poly(base_.nvars());
        const std::vector<long> ones(base_.nvars(), 1);
        return total_.homogeneous_part(ones, i);
    }

    Exponents top_monomial() const {
        Exponents e;
        for (int n : proj_) e.push_back(static_cast<std::uint32_t>(n));
        return e;
    }

    static BundleData from_json(const nlohmann::json& j) {
        std::vector<int> proj = j.at("base").at("proj").get<std::vector<int>>();
        const GradedRing base = projective_product_ring(proj);
        const int rank = j.at("rank").get<int>();
        const Poly total = parse_base_class(base, j.at("total_chern").get<std::string>());
        std::optional<std::vector<Poly>> lines;
        if (j.contains("line_summands")) {
            lines.emplace();
            for (const auto& l : j["line_summands"]) lines->push_back(parse_base_class(base, l.get<std::string>()));
        }
        return BundleData(std::move(proj), rank, total, std::move(lines));
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"base", {{"proj", proj_}}}, {"rank", rank_}, {"total_chern", total_.to_string(base_.names())}};
        if (lines_) {
            nlohmann::json l = nlohmann::json::array();
            for (const auto& x : *lines_) l.push_back(x.to_string(base_.names()));
            j["line_summands"] = l;
        }
        return j;
    }

private:
    std::vector<int> proj_;
    int rank_;
    GradedRing base_;
    Poly total_;
    std::optional<std::vector<Poly>> lines_;
};

// ---------------------------------------------------------------------------
// Flag and projective bundles

struct BundleRing {
    GradedRing ring;
    std::vector<std::string> fibre_generators;
    std::vector<Exponents> fibre_basis;  // exponents on the fibre generators only
    std::size_t rank = 0;                // rank as a module over the base
    bool certified = false;              // basis count matches the expected rank
};

inline void require_classes_on(const GradedRing& base, const std::vector<Poly>& classes) {
    for (const auto& c : classes)
        if (c.nvars() != base.nvars()) throw ParameterError("Chern classes must be polynomials on the base");
}

inline std::vector<Exponents> staircase(const std::vector<std::uint32_t>& caps) {
    std::vector<Exponents> out;
    Exponents e(caps.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == caps.size()) {
            out.push_back(e);
            return;
        }
        for (std::uint32_t k = 0; k <= caps[i]; ++k) {
            e[i] = k;
            rec(i + 1);
        }
        e[i] = 0;
    };
    rec(0);
    return out;
}

/// base[xi_1..xi_r]/(sigma_i(xi) = c_i). classes holds c_1..c_r on the base.
inline BundleRing flag_bundle_ring(const GradedRing& base, const std::vector<Poly>& classes, int r) {
    if (r < 1 || r > 5) throw ParameterError("flag bundles are supported for 1 <= r <= 5");
    if (static_cast<int>(classes.size()) != r) throw ParameterError("need exactly r Chern classes");
    require_classes_on(base, classes);
    std::vector<Generator> gens = base.gens();
    const auto roots = indexed_names("xi", static_cast<std::size_t>(r));
    for (const auto& n : roots) gens.push_back({n, 2, -1});
    const std::size_t nv = gens.size();
    std::vector<std::size_t> map;
    for (std::size_t i = 0; i < base.nvars(); ++i) map.push_back(i);

    std::vector<Relation> rels = base.rels();
    for (auto& rel : rels) {
        if (auto* m = std::get_if<MonicRelation>(&rel))
            for (auto& c : m->coeffs) c = c.embedded(nv, map);
        if (auto* e = std::get_if<ElementarySymmetricRelation>(&rel))
            for (auto& c : e->classes) c = c.embedded(nv, map);
    }
    ElementarySymmetricRelation es{roots, {}};
    for (const auto& c : classes) es.classes.push_back(c.embedded(nv, map));
    rels.push_back(std::move(es));

    BundleRing out{GradedRing(std::move(gens), std::move(rels)), roots, {}, 0, false};
    std::vector<std::uint32_t> caps;
    for (int i = 1; i <= r; ++i) caps.push_back(static_cast<std::uint32_t>(r - i));
    out.fibre_basis = staircase(caps);
    out.rank = out.fibre_basis.size();
    std::size_t fact = 1;
    for (int i = 2; i <= r; ++i) fact *= static_cast<std::size_t>(i);
    bool caps_match = true;
    for (int i = 0; i < r; ++i) {
        const auto& cap = out.ring.exponent_caps()[base.nvars() + static_cast<std::size_t>(i)];
        caps_match = caps_match && cap && *cap == caps[static_cast<std::size_t>(i)];
    }
    out.certified = caps_match && out.rank == fact;
    return out;
}

/// base[xi]/(xi^r + c_1 xi^{r-1} + ... + c_r).
inline BundleRing projective_bundle_ring(const GradedRing& base, const std::vector<Poly>& classes, int r) {
    if (r < 1 || r > 6) throw ParameterError("projective bundles are supported for 1 <= r <= 6");
    if (static_cast<int>(classes.size()) != r) throw ParameterError("need exactly r Chern classes");
    require_classes_on(base, classes);
    std::vector<Generator> gens = base.gens();
    gens.push_back({"xi", 2, -1});
    const std::size_t nv = gens.size();
    std::vector<std::size_t> map;
    for (std::size_t i = 0; i < base.nvars(); ++i) map.push_back(i);
    std::vector<Relation> rels = base.rels();
    for (auto& rel : rels) {
        if (auto* m = std::get_if<MonicRelation>(&rel))
            for (auto& c : m->coeffs) c = c.embedded(nv, map);
        if (auto* e = std::get_if<ElementarySymmetricRelation>(&rel))
            for (auto& c : e->classes) c = c.embedded(nv, map);
    }
    MonicRelation mono{"xi", {}};
    for (const auto& c : classes) mono.coeffs.push_back(c.embedded(nv, map));
    rels.push_back(std::move(mono));
    BundleRing out{GradedRing(std::move(gens), std::move(rels)), {"xi"}, {}, 0, false};
    out.fibre_basis = staircase({static_cast<std::uint32_t>(r - 1)});
    out.rank = out.fibre_basis.size();
    const auto& cap = out.ring.exponent_caps().back();
    out.certified = cap && *cap == static_cast<std::uint32_t>(r - 1) && out.rank == static_cast<std::size_t>(r);
    return out;
}

/// Chern classes c_1..c_r of a bundle, as the input to the bundle constructions.
inline std::vector<Poly> chern_classes(const BundleData& E) {
    std::vector<Poly> out;
    for (int i = 1; i <= E.rank(); ++i) out.push_back(E.chern_class(i));
    return out;
}

// ---------------------------------------------------------------------------
// Chern numbers

struct ChernNumberOptions {
    std::vector<u64> primes{2, 3};
    BigInt volume_unit = 1;  // the normalisation of the fundamental class
};

struct ChernNumber {
    BigInt value;
    std::map<u64, std::optional<int>> valuations;  // nullopt for value 0

    nlohmann::json to_json() const {
        nlohmann::json v = nlohmann::json::object();
        for (const auto& [p, val] : valuations) {
            if (val) v[std::to_string(p)] = *val;
            else v[std::to_string(p)] = "inf";
        }
        nlohmann::json value_json;
        if (boost::multiprecision::abs(value) < BigInt(1) << 62) value_json = static_cast<long long>(value);
        else value_json = value.str();
        return {{"value", value_json}, {"valuations", v}};
    }
};

inline std::optional<int> big_valuation(BigInt v, u64 p) {
    if (v == 0) return std::nullopt;
    int k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

namespace detail {

inline ChernNumber integrate(const BundleData& E, const Poly& f, const std::vector<Poly>& images, const ChernNumberOptions& opt) {
    const int dim = E.dim();
    std::vector<long> w;
    for (std::size_t i = 1; i <= f.nvars(); ++i) w.push_back(static_cast<long>(i));
    if (!f.is_zero() && !(f.homogeneous_part(w, dim) == f))
        throw DegreeError("f must be homogeneous of cohomological degree " + std::to_string(2 * dim) +
                          " (with deg c_i = 2i) to integrate over the base");
    for (u64 p : opt.primes) {
        modular::require_prime(p);
        if (opt.volume_unit % p == 0) throw NotAUnitError("volume normalisation is not a unit", 1);
    }
    const Poly reduced = E.base().reduce(f.compose(images));
    ChernNumber out{reduced.coeff(E.top_monomial()) * opt.volume_unit, {}};
    for (u64 p : opt.primes) out.valuations[p] = big_valuation(out.value, p);
    return out;
}

}  // namespace detail

/// f is a polynomial in c1..cr where r = f.nvars().
inline ChernNumber chern_number(const Poly& f, const BundleData& E, const ChernNumberOptions& opt = {}) {
    std::vector<Poly> images;
    for (std::size_t i = 1; i <= f.nvars(); ++i) images.push_back(E.chern_class(static_cast<int>(i)));
    return detail::integrate(E, f, images, opt);
}

inline ChernNumber chern_number(const SymPoly& f, const BundleData& E, const ChernNumberOptions& opt = {}) {
    return chern_number(symmetric_to_elementary(f), E, opt);
}

/// Same number, with c_i replaced by sigma_i of the declared line summands' classes.
inline ChernNumber chern_number_via_roots(const Poly& f, const BundleData& E, const ChernNumberOptions& opt = {}) {
    if (!E.line_summands()) throw ParameterError("bundle has no declared line-bundle splitting");
    const auto& lines = *E.line_summands();
    const std::size_t nb = E.base().nvars(), r = lines.size();
    // sigma_i(l_1..l_r) computed in root variables, then composed with the l_j.
    std::vector<Poly> images;
    std::vector<std::size_t> vars;
    for (std::size_t k = 0; k < r; ++k) vars.push_back(k);
    for (std::size_t i = 1; i <= f.nvars(); ++i) {
        if (r == 0) {
            images.push_back(Poly(nb));
            continue;
        }
        images.push_back(elementary_in(r, vars, i).compose(lines));
    }
    return detail::integrate(E, f, images, opt);
}

inline Poly parse_chern_polynomial(std::string_view text, std::size_t r) { return parse_poly(text, indexed_names("c", r)); }

}  // namespace prismlab
