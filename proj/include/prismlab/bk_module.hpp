#pragma once

// Breuil-Kisin modules over the truncated model of S, restricted to the class
// generated by elementary blocks (S{n}, S/p^s) under direct sum, tensor product
// and twist. Every generator line carries phi(g) = E^{-h} * alpha^a * E^k * g,
// so the structure matrix is diagonal and is rebuilt exactly from (a, k, h).

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prismlab/delta_ring.hpp"
#include "prismlab/rng.hpp"

namespace prismlab {

/// The base of every BK module: a Breuil-Kisin prism plus the unit alpha that
/// enters S{1}. alpha defaults to 1.
class BKContext {
public:
    explicit BKContext(Prism prism) : BKContext(prism, TruncatedSeries::one(prism.params())) {}
    BKContext(Prism prism, TruncatedSeries alpha)
        : prism_(std::move(prism)), alpha_(std::move(alpha)), alpha_inv_(alpha_) {
        if (prism_.kind() != PrismKind::breuil_kisin) throw ParameterError("BK modules need a Breuil-Kisin prism");
        if (!(alpha_.params() == prism_.params())) throw ParameterError("alpha does not live in S");
        alpha_inv_ = alpha_.inverse();  // throws NotAUnitError
        E_ = prism_.generator();
    }

    static std::shared_ptr<const BKContext> make(Prism prism) { return std::make_shared<const BKContext>(std::move(prism)); }
    static std::shared_ptr<const BKContext> make(Prism prism, TruncatedSeries alpha) {
        return std::make_shared<const BKContext>(std::move(prism), std::move(alpha));
    }

    const Prism& prism() const { return prism_; }
    const SeriesParams& params() const { return prism_.params(); }
    const TruncatedSeries& E() const { return E_; }
    const TruncatedSeries& alpha() const { return alpha_; }
    int e() const { return prism_.eisenstein()->degree(); }

    TruncatedSeries alpha_pow(int a) const { return a >= 0 ? alpha_.pow(static_cast<u64>(a)) : alpha_inv_.pow(static_cast<u64>(-a)); }
    TruncatedSeries E_pow(int k) const { return E_.pow(static_cast<u64>(k)); }

    bool operator==(const BKContext& o) const {
        return prism_.params() == o.prism_.params() && E_ == o.E_ && alpha_ == o.alpha_;
    }

private:
    Prism prism_;
    TruncatedSeries alpha_;
    TruncatedSeries alpha_inv_;
    TruncatedSeries E_ = TruncatedSeries(2, 1, 1);
};

/// Formal composition tree recording how a module was built.
struct LedgerNode {
    enum class Kind { free_twist, p_torsion, sum, tensor, twist };
    Kind kind = Kind::sum;
    int param = 0;
    std::vector<LedgerNode> children;

    static LedgerNode free_twist(int n) { return {Kind::free_twist, n, {}}; }
    static LedgerNode p_torsion(int s) { return {Kind::p_torsion, s, {}}; }
    static LedgerNode sum(std::vector<LedgerNode> c) { return {Kind::sum, 0, std::move(c)}; }
    static LedgerNode tensor(std::vector<LedgerNode> c) { return {Kind::tensor, 0, std::move(c)}; }
    static LedgerNode twist(int n, LedgerNode of) { return {Kind::twist, n, {std::move(of)}}; }

    bool operator==(const LedgerNode&) const = default;

    int depth() const {
        int d = 0;
        for (const auto& c : children) d = std::max(d, c.depth());
        return d + 1;
    }

    nlohmann::json to_json() const {
        switch (kind) {
            case Kind::free_twist: return {{"free_twist", param}};
            case Kind::p_torsion: return {{"p_torsion", param}};
            case Kind::twist: return {{"twist", param}, {"of", children.front().to_json()}};
            case Kind::sum:
            case Kind::tensor: {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& c : children) arr.push_back(c.to_json());
                return {{kind == Kind::sum ? "sum" : "tensor", arr}};
            }
        }
        return {};
    }

    static LedgerNode from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw ParseError("ledger node must be an object");
        if (j.contains("free_twist")) return free_twist(j["free_twist"].get<int>());
        if (j.contains("p_torsion")) return p_torsion(j["p_torsion"].get<int>());
        if (j.contains("twist")) {
            if (!j.contains("of")) throw ParseError("twist node needs an 'of' operand");
            return twist(j["twist"].get<int>(), from_json(j["of"]));
        }
        for (const char* key : {"sum", "tensor"}) {
            if (!j.contains(key)) continue;
            std::vector<LedgerNode> c;
            for (const auto& x : j[key]) c.push_back(from_json(x));
            return std::string(key) == "sum" ? sum(std::move(c)) : tensor(std::move(c));
        }
        throw ParseError("unknown ledger node " + j.dump());
    }
};

/// Ledger-side prediction: free rank and the multiset of torsion exponents.
struct LedgerShape {
    int free_rank = 0;
    std::vector<int> torsion;  // sorted

    bool operator==(const LedgerShape&) const = default;
};

inline LedgerShape ledger_shape(const LedgerNode& n) {
    using K = LedgerNode::Kind;
    LedgerShape out;
    switch (n.kind) {
        case K::free_twist: out.free_rank = 1; break;
        case K::p_torsion: out.torsion = {n.param}; break;
        case K::twist: out = ledger_shape(n.children.front()); break;
        case K::sum:
            for (const auto& c : n.children) {
                auto s = ledger_shape(c);
                out.free_rank += s.free_rank;
                out.torsion.insert(out.torsion.end(), s.torsion.begin(), s.torsion.end());
            }
            break;
        case K::tensor: {
            out.free_rank = 1;
            for (const auto& c : n.children) {
                auto s = ledger_shape(c);
                LedgerShape next;
                next.free_rank = out.free_rank * s.free_rank;
                // free x torsion(t) -> torsion(t); torsion(a) x torsion(b) -> torsion(min)
                for (int t : s.torsion)
                    for (int i = 0; i < out.free_rank; ++i) next.torsion.push_back(t);
                for (int t : out.torsion)
                    for (int i = 0; i < s.free_rank; ++i) next.torsion.push_back(t);
                for (int a : out.torsion)
                    for (int b : s.torsion) next.torsion.push_back(std::min(a, b));
                out = std::move(next);
            }
            break;
        }
    }
    std::sort(out.torsion.begin(), out.torsion.end());
    return out;
}

/// One generator line: phi(g) = E^{-h} * alpha^alpha_power * E^e_power * g,
/// with g killed by p^torsion when torsion is set.
struct BKLine {
    int alpha_power = 0;
    int e_power = 0;
    std::optional<int> torsion;
    bool operator==(const BKLine&) const = default;
};

using SeriesMatrix = std::vector<std::vector<TruncatedSeries>>;

struct IsoCertificate {
    SeriesMatrix B;
    int j = 0;
    TruncatedSeries unit;
};

/// Checks A*B = B*A = unit * E^j * Id exactly at working precision.
inline bool verify_iso_certificate(const SeriesMatrix& A, const IsoCertificate& cert, const TruncatedSeries& E) {
    const std::size_t r = A.size();
    if (cert.B.size() != r) return false;
    if (r == 0) return true;
    const TruncatedSeries target = cert.unit * E.pow(static_cast<u64>(cert.j));
    const TruncatedSeries zero(E.params());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < r; ++k) {
            TruncatedSeries ab = zero, ba = zero;
            for (std::size_t l = 0; l < r; ++l) {
                if (!A[i][l].is_zero() && !cert.B[l][k].is_zero()) ab += A[i][l] * cert.B[l][k];
                if (!cert.B[i][l].is_zero() && !A[l][k].is_zero()) ba += cert.B[i][l] * A[l][k];
            }
            const TruncatedSeries& want = i == k ? target : zero;
            if (!(ab == want) || !(ba == want)) return false;
        }
    return cert.unit.is_unit();
}

class BKModule {
public:
    static BKModule elementary_free_twist(std::shared_ptr<const BKContext> ctx, int n) {
        return BKModule(std::move(ctx), {BKLine{n, std::max(-n, 0), std::nullopt}}, std::max(n, 0), LedgerNode::free_twist(n));
    }
    static BKModule elementary_p_torsion(std::shared_ptr<const BKContext> ctx, int s) {
        if (s < 1) throw ParameterError("p-torsion exponent must be positive");
        if (s > ctx->params().N) throw PrecisionError("S/p^s with s > N is not representable at p-precision N");
        return BKModule(std::move(ctx), {BKLine{0, 0, s}}, 0, LedgerNode::p_torsion(s));
    }
    static BKModule zero(std::shared_ptr<const BKContext> ctx) { return BKModule(std::move(ctx), {}, 0, LedgerNode::sum({})); }

    static BKModule from_ledger(std::shared_ptr<const BKContext> ctx, const LedgerNode& node) {
        using K = LedgerNode::Kind;
        switch (node.kind) {
            case K::free_twist: return elementary_free_twist(ctx, node.param);
            case K::p_torsion: return elementary_p_torsion(ctx, node.param);
            case K::twist: return from_ledger(ctx, node.children.front()).twisted(node.param);
            case K::sum: {
                std::vector<BKModule> parts;
                for (const auto& c : node.children) parts.push_back(from_ledger(ctx, c));
                return direct_sum(ctx, parts);
            }
            case K::tensor: {
                std::vector<BKModule> parts;
                for (const auto& c : node.children) parts.push_back(from_ledger(ctx, c));
                return tensor(ctx, parts);
            }
        }
        throw ParameterError("bad ledger node");
    }

    /// Block-diagonal sum after raising every summand to the common pole order.
    static BKModule direct_sum(std::shared_ptr<const BKContext> ctx, const std::vector<BKModule>& parts) {
        int h = 0;
        std::vector<LedgerNode> ledger;
        for (const auto& m : parts) {
            m.require_context(*ctx);
            h = std::max(h, m.h_);
            ledger.push_back(m.ledger_);
        }
        std::vector<BKLine> lines;
        for (const auto& m : parts)
            for (BKLine l : m.lines_) {
                l.e_power += h - m.h_;
                lines.push_back(l);
            }
        return BKModule(std::move(ctx), std::move(lines), h, LedgerNode::sum(std::move(ledger)));
    }

    /// Kronecker product; pole orders add.
    static BKModule tensor(std::shared_ptr<const BKContext> ctx, const std::vector<BKModule>& parts) {
        std::vector<BKLine> lines{BKLine{}};
        int h = 0;
        std::vector<LedgerNode> ledger;
        for (const auto& m : parts) {
            m.require_context(*ctx);
            std::vector<BKLine> next;
            for (const auto& a : lines)
                for (const auto& b : m.lines_) {
                    BKLine l{a.alpha_power + b.alpha_power, a.e_power + b.e_power, a.torsion};
                    if (b.torsion) l.torsion = l.torsion ? std::min(*l.torsion, *b.torsion) : *b.torsion;
                    next.push_back(l);
                }
            lines = std::move(next);
            h += m.h_;
            ledger.push_back(m.ledger_);
        }
        return BKModule(std::move(ctx), std::move(lines), h, LedgerNode::tensor(std::move(ledger)));
    }

    BKModule twisted(int n) const {
        BKModule t = tensor(ctx_, {*this, elementary_free_twist(ctx_, n)});
        t.ledger_ = LedgerNode::twist(n, ledger_);
        return t;
    }

    BKModule operator+(const BKModule& o) const { return direct_sum(ctx_, {*this, o}); }
    BKModule operator*(const BKModule& o) const { return tensor(ctx_, {*this, o}); }

    const std::shared_ptr<const BKContext>& context() const { return ctx_; }
    int rank() const { return static_cast<int>(lines_.size()); }
    int pole_order() const { return h_; }
    const std::vector<BKLine>& lines() const { return lines_; }
    const LedgerNode& ledger() const { return ledger_; }

    /// Structure matrix A, with phi_M = E^{-h} * A * phi_S on coordinates.
    SeriesMatrix matrix() const {
        const TruncatedSeries zero(ctx_->params());
        SeriesMatrix A(lines_.size(), std::vector<TruncatedSeries>(lines_.size(), zero));
        for (std::size_t i = 0; i < lines_.size(); ++i) A[i][i] = entry(lines_[i]);
        return A;
    }

    /// B = diag(alpha^{-a_i} E^{j-k_i}) with j = max k_i, so A*B = E^j * Id.
    IsoCertificate certificate() const {
        int j = 0;
        for (const auto& l : lines_) j = std::max(j, l.e_power);
        const TruncatedSeries zero(ctx_->params());
        IsoCertificate cert{SeriesMatrix(lines_.size(), std::vector<TruncatedSeries>(lines_.size(), zero)), j,
                            TruncatedSeries::one(ctx_->params())};
        for (std::size_t i = 0; i < lines_.size(); ++i)
            cert.B[i][i] = ctx_->alpha_pow(-lines_[i].alpha_power) * ctx_->E_pow(j - lines_[i].e_power);
        return cert;
    }

    bool certificate_holds() const { return verify_iso_certificate(matrix(), certificate(), ctx_->E()); }

    /// Same lines, pole order and context; the ledger may differ.
    bool isomorphic_presentation(const BKModule& o) const {
        if (!(*ctx_ == *o.ctx_) || h_ != o.h_) return false;
        auto a = lines_, b = o.lines_;
        auto key = [](const BKLine& l) { return std::make_tuple(l.torsion.value_or(-1), l.e_power, l.alpha_power); };
        auto cmp = [&](const BKLine& x, const BKLine& y) { return key(x) < key(y); };
        std::sort(a.begin(), a.end(), cmp);
        std::sort(b.begin(), b.end(), cmp);
        return a == b;
    }

    nlohmann::json to_json() const {
        nlohmann::json A = nlohmann::json::array();
        for (const auto& row : matrix()) {
            nlohmann::json r = nlohmann::json::array();
            for (const auto& s : row) r.push_back(s.to_string());
            A.push_back(r);
        }
        nlohmann::json j{{"prism", ctx_->prism().to_json()},
                         {"ledger", nlohmann::json::array({ledger_.to_json()})},
                         {"rank", rank()},
                         {"h", h_},
                         {"A", A}};
        if (!(ctx_->alpha() == TruncatedSeries::one(ctx_->params()))) j["alpha"] = ctx_->alpha().to_string();
        return j;
    }

    /// Rebuilds from prism + ledger and checks the stored rank, h and A agree.
    static BKModule from_json(const nlohmann::json& j) {
        Prism prism = prism_from_json(j.at("prism"));
        auto ctx = j.contains("alpha")
                       ? BKContext::make(prism, TruncatedSeries::parse(prism.params(), j["alpha"].get<std::string>()))
                       : BKContext::make(prism);
        const auto& led = j.at("ledger");
        if (!led.is_array()) throw ParseError("ledger must be an array");
        LedgerNode root;
        if (led.size() == 1) {
            root = LedgerNode::from_json(led[0]);
        } else {
            std::vector<LedgerNode> c;
            for (const auto& x : led) c.push_back(LedgerNode::from_json(x));
            root = LedgerNode::sum(std::move(c));
        }
        BKModule m = from_ledger(ctx, root);
        if (j.contains("rank") && j["rank"].get<int>() != m.rank()) throw ParseError("stored rank disagrees with ledger");
        if (j.contains("h") && j["h"].get<int>() != m.pole_order()) throw ParseError("stored pole order disagrees with ledger");
        if (j.contains("A")) {
            const auto A = m.matrix();
            const auto& JA = j["A"];
            if (JA.size() != A.size()) throw ParseError("stored matrix has the wrong size");
            for (std::size_t r = 0; r < A.size(); ++r)
                for (std::size_t c = 0; c < A.size(); ++c)
                    if (!(TruncatedSeries::parse(ctx->params(), JA[r][c].get<std::string>()) == A[r][c]))
                        throw ParseError("stored matrix disagrees with ledger at (" + std::to_string(r) + "," +
                                         std::to_string(c) + ")");
        }
        return m;
    }

private:
    BKModule(std::shared_ptr<const BKContext> ctx, std::vector<BKLine> lines, int h, LedgerNode ledger)
        : ctx_(std::move(ctx)), lines_(std::move(lines)), h_(h), ledger_(std::move(ledger)) {
        normalize();
        check_visibility();
    }

    TruncatedSeries entry(const BKLine& l) const { return ctx_->alpha_pow(l.alpha_power) * ctx_->E_pow(l.e_power); }

    // Cancel common E-factors of all entries against the pole order.
    void normalize() {
        if (lines_.empty()) {
            h_ = 0;
            return;
        }
        int t = h_;
        for (const auto& l : lines_) t = std::min(t, l.e_power);
        h_ -= t;
        for (auto& l : lines_) l.e_power -= t;
    }

    // Mod p, E = u^e * (unit), so an entry alpha^a E^k has u-valuation e*k mod p.
    // When that reaches M the E-exponent can no longer be certified.
    void check_visibility() const {
        const int M = ctx_->params().M;
        for (const auto& l : lines_) {
            if (static_cast<long>(ctx_->e()) * l.e_power >= M)
                throw PrecisionError("E^" + std::to_string(l.e_power) + " is invisible at u-precision M = " +
                                     std::to_string(M) + "; raise M above " + std::to_string(ctx_->e() * l.e_power));
        }
    }

    void require_context(const BKContext& c) const {
        if (!(*ctx_ == c)) throw ParameterError("BK modules over different bases");
    }

    std::shared_ptr<const BKContext> ctx_;
    std::vector<BKLine> lines_;
    int h_ = 0;
    LedgerNode ledger_;
};

/// The O_K-module M/EM: free part and p-power torsion.
struct DeRhamReduction {
    int free_rank = 0;
    std::vector<int> torsion;  // exponents s of O_K/p^s, sorted
    int length_over_zp = 0;   // e * (N * free_rank + sum s)
};

inline DeRhamReduction reduce_mod_E(const BKModule& M) {
    const auto& ctx = *M.context();
    if (ctx.e() > ctx.params().M) throw PrecisionError("deg E exceeds the u-precision");
    DeRhamReduction out;
    for (const auto& l : M.lines()) {
        if (l.torsion) out.torsion.push_back(*l.torsion);
        else ++out.free_rank;
    }
    std::sort(out.torsion.begin(), out.torsion.end());
    const LedgerShape predicted = ledger_shape(M.ledger());
    if (predicted.free_rank != out.free_rank || predicted.torsion != out.torsion)
        throw InvariantViolation("ledger and generator data disagree on M/EM");
    int len = out.free_rank * ctx.params().N;
    for (int s : out.torsion) len += s;
    out.length_over_zp = ctx.e() * len;
    return out;
}

enum class TwistSign {
    cohomological,  // S{-d} reduces to phi-scale +d (phi acts on H^{2d} by p^d)
    twist_index     // report the twist index instead: S{n} reduces to n
};

struct CrysLine {
    std::optional<int> torsion;
    std::optional<int> scale;  // phi = p^scale * unit * sigma on this line; unset when invisible
    u64 unit = 0;              // residue of the unit mod p^(precision - valuation)
};

struct CrysModule {
    std::vector<CrysLine> lines;
    int free_rank() const {
        return static_cast<int>(std::count_if(lines.begin(), lines.end(), [](const CrysLine& l) { return !l.torsion; }));
    }
};

struct UnitValuation {
    std::optional<int> valuation;  // unset when the entry vanishes at the precision cap
    u64 unit = 0;
};

/// p-adic valuations (and unit parts) of the diagonal of A at u = 0.
/// Off-diagonal entries surviving u = 0 are outside the supported shapes.
inline std::vector<UnitValuation> valuations_at_u_zero(const SeriesMatrix& A, int precision_cap) {
    std::vector<UnitValuation> out;
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < A.size(); ++j)
            if (i != j && A[i][j].coeff(0) != 0) throw UnsupportedShapeError("structure matrix is not diagonal mod u");
        const TruncatedSeries& a = A[i][i];
        const int cap = std::min(precision_cap, a.N());
        const u64 c0 = a.coeff(0) % modular::prime_power(a.p(), cap);
        const int v = modular::valuation(c0, a.p(), cap);
        if (v >= cap) {
            out.push_back({});
            continue;
        }
        u64 unit = c0;
        for (int k = 0; k < v; ++k) unit /= a.p();
        out.push_back({v, unit % modular::prime_power(a.p(), cap - v)});
    }
    return out;
}

/// Sets u = 0. With v_p(E(0)) = 1, a line with entry alpha^a E^k and pole
/// order h has Frobenius p^{k-h} * unit * sigma.
inline CrysModule reduce_mod_u(const BKModule& M, TwistSign sign = TwistSign::cohomological) {
    const auto& ctx = *M.context();
    if (ctx.E().coeff(0) == 0) throw PrecisionError("E(0) vanishes at this precision");
    const auto A = M.matrix();
    CrysModule out;
    for (std::size_t i = 0; i < M.lines().size(); ++i) {
        const BKLine& l = M.lines()[i];
        const int cap = l.torsion.value_or(ctx.params().N);
        const UnitValuation uv = valuations_at_u_zero({{A[i][i]}}, cap).front();
        CrysLine cl{l.torsion, std::nullopt, 0};
        if (!uv.valuation) {
            if (l.e_power < cap) throw InvariantViolation("entry vanishes at u=0 although its E-power is below the cap");
            if (!l.torsion)
                throw PrecisionError("phi-scale of a free line exceeds p-precision N = " + std::to_string(ctx.params().N));
        } else {
            if (*uv.valuation != l.e_power) throw InvariantViolation("matrix valuation at u=0 disagrees with the ledger E-power");
            const int scale = *uv.valuation - M.pole_order();
            cl.scale = sign == TwistSign::cohomological ? scale : -scale;
            cl.unit = uv.unit;
        }
        out.lines.push_back(cl);
    }
    return out;
}

struct StructureInvariants {
    int free_rank = 0;
    int torsion_killed_by_power = 0;
    int rational_rank = 0;
};

inline StructureInvariants structure_invariants(const BKModule& M) {
    const LedgerShape shape = ledger_shape(M.ledger());
    StructureInvariants inv;
    inv.free_rank = shape.free_rank;
    for (int s : shape.torsion) inv.torsion_killed_by_power = std::max(inv.torsion_killed_by_power, s);
    inv.rational_rank = inv.free_rank;
    const int mod_E = reduce_mod_E(M).free_rank;
    const int mod_u = reduce_mod_u(M).free_rank();
    if (mod_E != inv.rational_rank || mod_u != inv.rational_rank)
        throw InvariantViolation("rank mismatch across realizations: rational " + std::to_string(inv.rational_rank) +
                                 ", mod E " + std::to_string(mod_E) + ", mod u " + std::to_string(mod_u));
    if (!M.certificate_holds()) throw InvariantViolation("iso-after-inverting-E certificate fails");
    return inv;
}

struct RandomLedgerBounds {
    int max_depth = 4;
    int max_twist = 2;
    int max_torsion = 3;
    int max_rank = 48;
};

namespace detail {

inline LedgerNode random_node(Rng& rng, int depth, const RandomLedgerBounds& b) {
    const int leaf_kinds = 2, all_kinds = 5;
    const int kind = static_cast<int>(rng.below(depth <= 1 ? leaf_kinds : all_kinds));
    switch (kind) {
        case 0: return LedgerNode::free_twist(static_cast<int>(rng.between(-b.max_twist, b.max_twist)));
        case 1: return LedgerNode::p_torsion(static_cast<int>(rng.between(1, b.max_torsion)));
        case 2: {
            std::vector<LedgerNode> c;
            const int k = static_cast<int>(rng.between(1, 3));
            for (int i = 0; i < k; ++i) c.push_back(random_node(rng, depth - 1, b));
            return LedgerNode::sum(std::move(c));
        }
        case 3:
            return LedgerNode::tensor({random_node(rng, depth - 1, b), random_node(rng, depth - 1, b)});
        default:
            return LedgerNode::twist(static_cast<int>(rng.between(-b.max_twist, b.max_twist)), random_node(rng, depth - 1, b));
    }
}

}  // namespace detail

/// Random ledger-built module; draws are rejected until the module fits the
/// context's precision (visible E-powers, free-line phi-scales below N).
inline BKModule random_bk_module(const std::shared_ptr<const BKContext>& ctx, Rng& rng, const RandomLedgerBounds& b = {}) {
    for (int attempt = 0; attempt < 10'000; ++attempt) {
        LedgerNode node = detail::random_node(rng, b.max_depth, b);
        if (ledger_shape(node).free_rank + static_cast<int>(ledger_shape(node).torsion.size()) > b.max_rank) continue;
        try {
            BKModule m = BKModule::from_ledger(ctx, node);
            bool fits = true;
            for (const auto& l : m.lines())
                if (!l.torsion && l.e_power >= ctx->params().N) fits = false;
            if (fits) return m;
        } catch (const PrecisionError&) {
        }
    }
    throw ResourceError("could not draw a module fitting the precision budget");
}

}  // namespace prismlab
