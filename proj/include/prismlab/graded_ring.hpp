#pragma once

// Finitely presented graded-commutative rings with Breuil-Kisin twist labels.
// Normal forms are supported for three relation shapes whose leading terms are
// pure powers of distinct generators:
//   power      g^k = 0
//   monic      g^r + c_1 g^{r-1} + ... + c_r = 0       (c_i free of g)
//   elementary sigma_i(xi_1..xi_r) = c_i, i = 1..r      (c_i free of the xi)
// Pure-power leading terms on distinct generators make these rule sets
// confluent, and the irreducible monomials are those below per-generator caps.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "prismlab/bk_module.hpp"
#include "prismlab/poly.hpp"
#include "prismlab/rng.hpp"

namespace prismlab {

struct Generator {
    std::string name;
    int degree = 2;
    int twist = -1;
    bool operator==(const Generator&) const = default;
};

struct PowerRelation {
    std::string gen;
    int exp = 1;
};

struct MonicRelation {
    std::string gen;
    std::vector<Poly> coeffs;  // c_1..c_r, polynomials in the ring's generators
};

struct ElementarySymmetricRelation {
    std::vector<std::string> roots;
    std::vector<Poly> classes;  // c_1..c_r
};

using Relation = std::variant<PowerRelation, MonicRelation, ElementarySymmetricRelation>;

/// Graded dimensions a_0..a_D plus the rational form
/// prod_i (1 - t^{num_i}) / prod_j (1 - t^{den_j}).
struct PoincareSeries {
    std::vector<u64> coeffs;
    std::vector<int> numerator_degrees;
    std::vector<int> denominator_degrees;

    u64 operator[](std::size_t d) const { return d < coeffs.size() ? coeffs[d] : 0; }
    bool operator==(const PoincareSeries& o) const { return coeffs == o.coeffs; }

    std::string to_string() const {
        std::string s;
        for (std::size_t d = 0; d < coeffs.size(); ++d) {
            if (!coeffs[d]) continue;
            if (!s.empty()) s += " + ";
            if (d == 0 || coeffs[d] != 1) s += std::to_string(coeffs[d]);
            if (d > 0) {
                if (coeffs[d] != 1) s += "*";
                s += "t";
                if (d > 1) s += "^" + std::to_string(d);
            }
        }
        return (s.empty() ? "0" : s) + " + ...";
    }

    nlohmann::json to_json() const {
        return {{"coeffs", coeffs}, {"numerator_degrees", numerator_degrees}, {"denominator_degrees", denominator_degrees}};
    }
};

/// Coefficientwise product of two series, truncated to the shorter cap.
inline PoincareSeries convolve(const PoincareSeries& a, const PoincareSeries& b) {
    PoincareSeries r;
    const std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
    r.coeffs.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    r.numerator_degrees = a.numerator_degrees;
    r.numerator_degrees.insert(r.numerator_degrees.end(), b.numerator_degrees.begin(), b.numerator_degrees.end());
    r.denominator_degrees = a.denominator_degrees;
    r.denominator_degrees.insert(r.denominator_degrees.end(), b.denominator_degrees.begin(), b.denominator_degrees.end());
    return r;
}

class GradedRing {
public:
    struct Rule {
        std::size_t var;
        std::uint32_t power;
        Poly replacement;  // var^power == replacement
    };

    GradedRing() = default;
    GradedRing(std::vector<Generator> gens, std::vector<Relation> rels) : gens_(std::move(gens)), rels_(std::move(rels)) {
        validate();
        build_rules();
    }

    const std::vector<Generator>& gens() const { return gens_; }
    const std::vector<Relation>& rels() const { return rels_; }
    std::size_t nvars() const { return gens_.size(); }

    std::vector<std::string> names() const {
        std::vector<std::string> n;
        for (const auto& g : gens_) n.push_back(g.name);
        return n;
    }
    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name == name) return i;
        throw ParameterError("no generator named '" + name + "'");
    }
    std::vector<long> degree_weights() const {
        std::vector<long> w;
        for (const auto& g : gens_) w.push_back(g.degree);
        return w;
    }
    Poly parse(std::string_view expr) const { return parse_poly(expr, names()); }
    Poly gen(const std::string& name) const { return Poly::variable(nvars(), index_of(name)); }

    /// Largest exponent a normal-form monomial may carry in each generator.
    const std::vector<std::optional<std::uint32_t>>& exponent_caps() const { return caps_; }
    const std::vector<Rule>& rules() const { return rules_; }

    bool is_normal(const Exponents& e) const {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (caps_[i] && e[i] > *caps_[i]) return false;
        return true;
    }

    long degree_of(const Exponents& e) const {
        long d = 0;
        for (std::size_t i = 0; i < e.size(); ++i) d += static_cast<long>(e[i]) * gens_[i].degree;
        return d;
    }
    long twist_of(const Exponents& e) const {
        long t = 0;
        for (std::size_t i = 0; i < e.size(); ++i) t += static_cast<long>(e[i]) * gens_[i].twist;
        return t;
    }

    /// Normal form. With an Rng, reducible terms and rules are picked at random
    /// (used to exercise confluence); otherwise the first reducible term is used.
    Poly reduce(const Poly& f, Rng* random_order = nullptr) const {
        if (f.nvars() != nvars()) throw ParameterError("polynomial over the wrong generator set");
        Poly cur = f;
        for (std::size_t steps = 0;; ++steps) {
            if (steps > 1'000'000) throw ResourceError("normal-form reduction did not terminate");
            std::vector<std::pair<Exponents, std::size_t>> candidates;
            for (const auto& [e, c] : cur.terms()) {
                for (std::size_t r = 0; r < rules_.size(); ++r)
                    if (e[rules_[r].var] >= rules_[r].power) {
                        candidates.emplace_back(e, r);
                        if (!random_order) break;
                    }
                if (!random_order && !candidates.empty()) break;
            }
            if (candidates.empty()) return cur;
            const auto& [e, r] = random_order ? candidates[random_order->below(candidates.size())] : candidates.front();
            const Rule& rule = rules_[r];
            const BigInt c = cur.coeff(e);
            Exponents rest = e;
            rest[rule.var] -= rule.power;
            Poly replaced = Poly::monomial(rest, c) * rule.replacement;
            Poly removed = Poly::monomial(e, c);
            cur = cur - removed + replaced;
        }
    }

    /// All normal-form monomials of the given degree.
    std::vector<Exponents> normal_monomials(long degree) const {
        std::vector<Exponents> out;
        Exponents e(nvars(), 0);
        enumerate(0, degree, e, out);
        return out;
    }

    PoincareSeries poincare(int D) const {
        if (D < 0) throw ParameterError("degree cap must be nonnegative");
        for (const auto& g : gens_)
            if (g.degree <= 0) throw UnsupportedShapeError("Poincare series needs positive generator degrees");
        PoincareSeries s;
        for (int d = 0; d <= D; ++d) s.coeffs.push_back(normal_monomials(d).size());
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            s.denominator_degrees.push_back(gens_[i].degree);
            if (caps_[i]) s.numerator_degrees.push_back(gens_[i].degree * static_cast<int>(*caps_[i] + 1));
        }
        return s;
    }

    nlohmann::json to_json() const {
        const auto nm = names();
        nlohmann::json g = nlohmann::json::array();
        for (const auto& x : gens_) g.push_back({{"name", x.name}, {"deg", x.degree}, {"twist", x.twist}});
        nlohmann::json r = nlohmann::json::array();
        for (const auto& rel : rels_) {
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, PowerRelation>) {
                        r.push_back({{"shape", "power"}, {"gen", x.gen}, {"exp", x.exp}});
                    } else if constexpr (std::is_same_v<T, MonicRelation>) {
                        nlohmann::json cs = nlohmann::json::array();
                        for (const auto& c : x.coeffs) cs.push_back(c.to_string(nm));
                        r.push_back({{"shape", "monic"}, {"gen", x.gen}, {"coeffs", cs}});
                    } else {
                        nlohmann::json cs = nlohmann::json::array();
                        for (const auto& c : x.classes) cs.push_back(c.to_string(nm));
                        r.push_back({{"shape", "elementary_symmetric"}, {"roots", x.roots}, {"classes", cs}});
                    }
                },
                rel);
        }
        return {{"gens", g}, {"rels", r}};
    }

    static GradedRing from_json(const nlohmann::json& j) {
        std::vector<Generator> gens;
        for (const auto& g : j.at("gens"))
            gens.push_back({g.at("name").get<std::string>(), g.at("deg").get<int>(), g.value("twist", -g.at("deg").get<int>() / 2)});
        std::vector<std::string> nm;
        for (const auto& g : gens) nm.push_back(g.name);
        std::vector<Relation> rels;
        if (j.contains("rels")) {
            for (const auto& r : j["rels"]) {
                const std::string shape = r.at("shape").get<std::string>();
                if (shape == "power") {
                    rels.push_back(PowerRelation{r.at("gen").get<std::string>(), r.at("exp").get<int>()});
                } else if (shape == "monic") {
                    MonicRelation m{r.at("gen").get<std::string>(), {}};
                    for (const auto& c : r.at("coeffs")) m.coeffs.push_back(parse_poly(c.get<std::string>(), nm));
                    rels.push_back(std::move(m));
                } else if (shape == "elementary_symmetric") {
                    ElementarySymmetricRelation e{r.at("roots").get<std::vector<std::string>>(), {}};
                    for (const auto& c : r.at("classes")) e.classes.push_back(parse_poly(c.get<std::string>(), nm));
                    rels.push_back(std::move(e));
                } else {
                    throw UnsupportedShapeError("unsupported relation shape '" + shape + "'");
                }
            }
        }
        return GradedRing(std::move(gens), std::move(rels));
    }

private:
    void enumerate(std::size_t i, long budget, Exponents& e, std::vector<Exponents>& out) const {
        if (i == gens_.size()) {
            if (budget == 0) out.push_back(e);
            return;
        }
        const long deg = gens_[i].degree;
        for (std::uint32_t k = 0;; ++k) {
            if (static_cast<long>(k) * deg > budget) break;
            if (caps_[i] && k > *caps_[i]) break;
            e[i] = k;
            enumerate(i + 1, budget - static_cast<long>(k) * deg, e, out);
        }
        e[i] = 0;
    }

    void require_homogeneous(const Poly& p, long degree, const std::string& what) const {
        if (p.is_zero()) return;
        const auto w = degree_weights();
        if (!(p.homogeneous_part(w, degree) == p))
            throw ParameterError(what + " is not homogeneous of degree " + std::to_string(degree));
    }
    void require_free_of(const Poly& p, std::size_t var, const std::string& what) const {
        for (const auto& [e, c] : p.terms())
            if (e[var]) throw UnsupportedShapeError(what + " involves its own leading generator");
    }

    void validate() {
        std::set<std::string> seen;
        for (const auto& g : gens_) {
            if (g.name.empty() || !(std::isalpha(static_cast<unsigned char>(g.name[0])) || g.name[0] == '_'))
                throw ParameterError("bad generator name '" + g.name + "'");
            if (!seen.insert(g.name).second) throw ParameterError("duplicate generator name '" + g.name + "'");
        }
        for (const auto& rel : rels_) {
            if (const auto* pw = std::get_if<PowerRelation>(&rel)) {
                index_of(pw->gen);
                if (pw->exp < 1) throw ParameterError("power relation exponent must be positive");
            } else if (const auto* mo = std::get_if<MonicRelation>(&rel)) {
                const std::size_t v = index_of(mo->gen);
                for (std::size_t i = 0; i < mo->coeffs.size(); ++i) {
                    require_homogeneous(mo->coeffs[i], static_cast<long>(i + 1) * gens_[v].degree, "monic coefficient");
                    require_free_of(mo->coeffs[i], v, "monic coefficient");
                }
            } else {
                const auto& es = std::get<ElementarySymmetricRelation>(rel);
                if (es.classes.size() != es.roots.size()) throw ParameterError("need one class per root");
                long d = -1;
                for (const auto& r : es.roots) {
                    const long rd = gens_[index_of(r)].degree;
                    if (d >= 0 && rd != d) throw ParameterError("Chern roots must share one degree");
                    d = rd;
                }
                for (std::size_t i = 0; i < es.classes.size(); ++i) {
                    require_homogeneous(es.classes[i], static_cast<long>(i + 1) * d, "symmetric class c_" + std::to_string(i + 1));
                    for (const auto& r : es.roots) require_free_of(es.classes[i], index_of(r), "symmetric class");
                }
            }
        }
    }

    /// h_m(vars) as a polynomial in nvars() variables.
    Poly complete_homogeneous(unsigned m, const std::vector<std::size_t>& vars) const {
        Poly out(nvars());
        Exponents e(nvars(), 0);
        std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
            if (i + 1 == vars.size()) {
                e[vars[i]] = left;
                out.add_term(e, 1);
                e[vars[i]] = 0;
                return;
            }
            for (unsigned k = 0; k <= left; ++k) {
                e[vars[i]] = k;
                rec(i + 1, left - k);
            }
            e[vars[i]] = 0;
        };
        if (vars.empty()) return m == 0 ? Poly::constant(nvars(), 1) : out;
        rec(0, m);
        return out;
    }

    void build_rules() {
        caps_.assign(nvars(), std::nullopt);
        rules_.clear();
        auto add_rule = [&](std::size_t var, std::uint32_t power, Poly replacement) {
            if (caps_[var]) throw UnsupportedShapeError("two relations lead with generator '" + gens_[var].name + "'");
            caps_[var] = power - 1;
            rules_.push_back({var, power, std::move(replacement)});
        };
        for (const auto& rel : rels_) {
            if (const auto* pw = std::get_if<PowerRelation>(&rel)) {
                add_rule(index_of(pw->gen), static_cast<std::uint32_t>(pw->exp), Poly(nvars()));
            } else if (const auto* mo = std::get_if<MonicRelation>(&rel)) {
                const std::size_t v = index_of(mo->gen);
                const auto r = static_cast<std::uint32_t>(mo->coeffs.size());
                Poly rep(nvars());
                for (std::uint32_t i = 1; i <= r; ++i) {
                    Exponents e(nvars(), 0);
                    e[v] = r - i;
                    rep -= mo->coeffs[i - 1] * Poly::monomial(e, 1);
                }
                add_rule(v, r, std::move(rep));
            } else {
                // For xi_1..xi_r with c(t) = prod(1 + xi_i t):
                //   prod_{i<=k}(1 + xi_i t)^{-1} c(t) has degree r-k in t, so for m = r-k+1
                //   G_k = sum_{j=0}^{m} (-1)^{m-j} c_j h_{m-j}(xi_1..xi_k) = 0,
                // whose lex-leading term is (-1)^m xi_k^m.
                const auto& es = std::get<ElementarySymmetricRelation>(rel);
                const std::size_t r = es.roots.size();
                std::vector<std::size_t> idx;
                for (const auto& n : es.roots) idx.push_back(index_of(n));
                for (std::size_t k = 1; k <= r; ++k) {
                    const unsigned m = static_cast<unsigned>(r - k + 1);
                    std::vector<std::size_t> prefix(idx.begin(), idx.begin() + static_cast<long>(k));
                    Poly G(nvars());
                    for (unsigned j = 0; j <= m; ++j) {
                        Poly cj = j == 0 ? Poly::constant(nvars(), 1) : es.classes[j - 1];
                        Poly term = cj * complete_homogeneous(m - j, prefix);
                        if ((m - j) % 2) G -= term;
                        else G += term;
                    }
                    if (m % 2) G = -G;  // leading coefficient +1
                    Exponents lead(nvars(), 0);
                    lead[idx[k - 1]] = m;
                    add_rule(idx[k - 1], m, Poly::monomial(lead, 1) - G);
                }
            }
        }
    }

    std::vector<Generator> gens_;
    std::vector<Relation> rels_;
    std::vector<std::optional<std::uint32_t>> caps_;
    std::vector<Rule> rules_;
};

// ---------------------------------------------------------------------------
// Constructors for classifying stacks and projective spaces.

/// Fundamental degrees of a split reductive group, given as a product of
/// factors joined by 'x' or '*': Gm, GL<r>, A<n>, B<n>, C<n>, D<n>, G2, F4, E6, E7, E8.
inline std::vector<int> fundamental_degrees(const std::string& label) {
    std::vector<std::string> factors;
    std::string cur;
    for (char ch : label) {
        if (ch == 'x' || ch == '*') {
            factors.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '_') {
            cur.push_back(ch);
        }
    }
    factors.push_back(cur);

    std::vector<int> out;
    for (const auto& f : factors) {
        if (f.empty()) throw ParameterError("empty factor in type label '" + label + "'");
        if (f == "Gm" || f == "G_m") {
            out.push_back(1);
            continue;
        }
        std::size_t split = 0;
        while (split < f.size() && std::isalpha(static_cast<unsigned char>(f[split]))) ++split;
        const std::string family = f.substr(0, split);
        const std::string rank_text = f.substr(split);
        if (rank_text.empty() || !std::all_of(rank_text.begin(), rank_text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ParameterError("unknown type label '" + f + "'");
        const int n = std::stoi(rank_text);
        auto need = [&](bool ok) {
            if (!ok) throw ParameterError("type label '" + f + "' is outside the classification");
        };
        if (family == "GL") {
            need(n >= 1);
            for (int i = 1; i <= n; ++i) out.push_back(i);
        } else if (family == "A") {
            need(n >= 1);
            for (int i = 2; i <= n + 1; ++i) out.push_back(i);
        } else if (family == "B" || family == "C") {
            need(family == "B" ? n >= 2 : n >= 1);
            for (int i = 1; i <= n; ++i) out.push_back(2 * i);
        } else if (family == "D") {
            need(n >= 3);
            for (int i = 1; i <= n - 1; ++i) out.push_back(2 * i);
            out.push_back(n);
        } else if (family == "G") {
            need(n == 2);
            out.insert(out.end(), {2, 6});
        } else if (family == "F") {
            need(n == 4);
            out.insert(out.end(), {2, 6, 8, 12});
        } else if (family == "E") {
            need(n >= 6 && n <= 8);
            if (n == 6) out.insert(out.end(), {2, 5, 6, 8, 9, 12});
            if (n == 7) out.insert(out.end(), {2, 6, 8, 10, 12, 14, 18});
            if (n == 8) out.insert(out.end(), {2, 8, 12, 14, 18, 20, 24, 30});
        } else {
            throw ParameterError("unknown type label '" + f + "'");
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// H*(BG_m): one generator x in degree 2, twist -1.
inline GradedRing make_bgm() { return GradedRing({{"x", 2, -1}}, {}); }

/// H*(P^n) = S[x]/(x^{n+1}).
inline GradedRing make_projective_space(int n) {
    if (n < 0) throw ParameterError("projective space dimension must be nonnegative");
    return GradedRing({{"x", 2, -1}}, {PowerRelation{"x", n + 1}});
}

/// H*(BT) for a split torus of rank r: polynomial on t1..tr in degree 2.
inline GradedRing make_bt(int rank) {
    if (rank < 0) throw ParameterError("torus rank must be nonnegative");
    std::vector<Generator> g;
    for (int i = 1; i <= rank; ++i) g.push_back({"t" + std::to_string(i), 2, -1});
    return GradedRing(std::move(g), {});
}

/// H*(BG) for p non-torsion: polynomial on generators of degree 2e_i, twist -e_i.
inline GradedRing make_bg(const std::string& type_label) {
    std::vector<Generator> g;
    const auto degs = fundamental_degrees(type_label);
    for (std::size_t i = 0; i < degs.size(); ++i) g.push_back({"x" + std::to_string(i + 1), 2 * degs[i], -degs[i]});
    return GradedRing(std::move(g), {});
}

/// Tensor product of presentations; colliding names get _1 / _2 suffixes.
inline GradedRing kunneth(const GradedRing& a, const GradedRing& b) {
    std::set<std::string> an, bn;
    for (const auto& g : a.gens()) an.insert(g.name);
    for (const auto& g : b.gens()) bn.insert(g.name);
    bool collide = false;
    for (const auto& n : an) collide = collide || bn.count(n);
    auto rename = [&](const std::string& n, int side) { return collide ? n + "_" + std::to_string(side) : n; };

    std::vector<Generator> gens;
    for (const auto& g : a.gens()) gens.push_back({rename(g.name, 1), g.degree, g.twist});
    for (const auto& g : b.gens()) gens.push_back({rename(g.name, 2), g.degree, g.twist});
    const std::size_t total = gens.size();
    std::vector<std::size_t> amap, bmap;
    for (std::size_t i = 0; i < a.nvars(); ++i) amap.push_back(i);
    for (std::size_t i = 0; i < b.nvars(); ++i) bmap.push_back(a.nvars() + i);

    std::vector<Relation> rels;
    auto transport = [&](const Relation& rel, int side) -> Relation {
        const auto& map = side == 1 ? amap : bmap;
        return std::visit(
            [&](const auto& x) -> Relation {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, PowerRelation>) {
                    return PowerRelation{rename(x.gen, side), x.exp};
                } else if constexpr (std::is_same_v<T, MonicRelation>) {
                    MonicRelation m{rename(x.gen, side), {}};
                    for (const auto& c : x.coeffs) m.coeffs.push_back(c.embedded(total, map));
                    return m;
                } else {
                    ElementarySymmetricRelation e;
                    for (const auto& r : x.roots) e.roots.push_back(rename(r, side));
                    for (const auto& c : x.classes) e.classes.push_back(c.embedded(total, map));
                    return e;
                }
            },
            rel);
    };
    for (const auto& r : a.rels()) rels.push_back(transport(r, 1));
    for (const auto& r : b.rels()) rels.push_back(transport(r, 2));
    return GradedRing(std::move(gens), std::move(rels));
}

/// First degree in which the series of H*(BG_m) and H*(P^n) disagree.
inline int truncation_connectivity(int n, int D) {
    if (n < 0) throw ParameterError("n must be nonnegative");
    if (D <= 2 * n + 2) throw ParameterError("degree cap must exceed 2n+2");
    const auto a = make_bgm().poincare(D);
    const auto b = make_projective_space(n).poincare(D);
    for (int d = 0; d <= D; ++d)
        if (a[static_cast<std::size_t>(d)] != b[static_cast<std::size_t>(d)]) return d;
    throw InvariantViolation("series agree up to the cap");
}

/// The degree-d piece as a Breuil-Kisin module: one S{twist} per normal monomial.
inline BKModule graded_piece_bk(const GradedRing& R, long degree, const std::shared_ptr<const BKContext>& ctx) {
    std::vector<BKModule> parts;
    for (const auto& e : R.normal_monomials(degree))
        parts.push_back(BKModule::elementary_free_twist(ctx, static_cast<int>(R.twist_of(e))));
    return BKModule::direct_sum(ctx, parts);
}

}  // namespace prismlab
