#pragma once

// Command-line front end. dispatch() parses argv, runs one operation and
// returns the exit status: 0 success, 1 failed verification, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "prismlab/ainf.hpp"
#include "prismlab/bk_module.hpp"
#include "prismlab/chern.hpp"
#include "prismlab/conical.hpp"
#include "prismlab/delta_ring.hpp"
#include "prismlab/graded_ring.hpp"
#include "prismlab/lengths.hpp"
#include "prismlab/witt.hpp"

namespace prismlab::cli {

using nlohmann::json;

/// What an operation produced: a JSON value, its ASCII rendering and whether
/// the verification it performed (if any) passed.
struct Result {
    json data;
    std::string ascii;
    bool ok = true;
};

struct RunConfig {
    std::string format = "ascii";
    std::string output;
    u64 seed = 0;
};

namespace detail {

/// Accepts the Unicode minus sign wherever a '-' is meant.
inline std::string normalize_minus(std::string s) {
    const std::string minus = "\xE2\x88\x92";
    for (std::size_t pos; (pos = s.find(minus)) != std::string::npos;) s.replace(pos, minus.size(), "-");
    return s;
}

/// Literal text, or the contents of a file when prefixed with '@'.
inline std::string read_arg(const std::string& raw) {
    if (!raw.empty() && raw[0] == '@') {
        std::ifstream in(raw.substr(1));
        if (!in) throw ParameterError("cannot read file '" + raw.substr(1) + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return normalize_minus(ss.str());
    }
    return normalize_minus(raw);
}

inline json parse_json_arg(const std::string& raw, const std::string& flag) {
    try {
        return json::parse(read_arg(raw));
    } catch (const json::parse_error& e) {
        throw ParseError(flag + ": invalid JSON (" + std::string(e.what()) + ")");
    }
}

inline int default_maxdeg() {
    if (const char* env = std::getenv("PRISMLAB_MAXDEG")) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(env, &used);
            if (used == std::string(env).size() && v >= 0) return v;
        } catch (const std::exception&) {
        }
        throw ParameterError("PRISMLAB_MAXDEG must be a nonnegative integer, got '" + std::string(env) + "'");
    }
    return 24;
}

inline std::vector<i64> parse_int_list(const std::string& text, const std::string& flag) {
    const std::string t = normalize_minus(text);
    if (!t.empty() && t.front() == '[') return parse_json_arg(t, flag).get<std::vector<i64>>();
    std::vector<i64> out;
    std::string tok;
    std::stringstream ss(t);
    while (std::getline(ss, tok, t.find(';') != std::string::npos ? ';' : ',')) {
        try {
            out.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw ParseError(flag + ": bad integer '" + tok + "'");
        }
    }
    return out;
}

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
    return s;
}

inline json series_json(const PoincareSeries& s) {
    json j = s.to_json();
    j["text"] = s.to_string();
    return j;
}

inline std::string big_str(const BigInt& b) { return b.str(); }

struct PrismFlags {
    std::string kind = "breuil_kisin";
    u64 p = 2;
    int N = 4;
    int M = 8;
    std::string E = "[-2,1]";
    std::string json_text;

    void add(CLI::App* app) {
        app->add_option("--kind", kind, "crystalline or breuil_kisin");
        app->add_option("--p", p, "prime");
        app->add_option("--N", N, "p-adic precision");
        app->add_option("--M", M, "u-adic precision");
        app->add_option("--E", E, "Eisenstein polynomial, little-endian coefficients");
        app->add_option("--prism", json_text, "prism JSON (overrides the other prism flags)");
    }

    Prism build() const {
        if (!json_text.empty()) return prism_from_json(parse_json_arg(json_text, "--prism"));
        const PrismKind k = parse_prism_kind(kind);
        std::optional<EisensteinPoly> poly;
        if (k == PrismKind::breuil_kisin) poly = EisensteinPoly(p, parse_int_list(E, "--E"));
        return make_prism(k, p, N, k == PrismKind::crystalline ? 1 : M, poly);
    }
};

// ---------------------------------------------------------------------------
// witt

inline Result witt_polys(u64 p, int n) {
    const WittPolys& W = universal_witt_polys(p, n);
    const auto names = W.variable_names();
    Result r;
    json sum = json::array(), prod = json::array(), neg = json::array();
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        sum.push_back(W.sum[k].to_string(names));
        prod.push_back(W.prod[k].to_string(names));
        neg.push_back(W.neg[k].to_string(names));
        os << "S" << i << " = " << sum.back().get<std::string>() << "\n";
        os << "P" << i << " = " << prod.back().get<std::string>() << "\n";
        os << "N" << i << " = " << neg.back().get<std::string>() << "\n";
    }
    r.data = {{"p", p}, {"n", n}, {"sum", sum}, {"prod", prod}, {"neg", neg}};
    r.ascii = os.str();
    return r;
}

inline Result witt_compute(u64 p, int n, int a, const std::string& op, const std::string& xs, const std::string& ys) {
    auto R = CoeffRing::residue(p, a);
    auto vec = [&](const std::string& text, const std::string& flag) {
        const auto v = parse_int_list(text, flag);
        if (static_cast<int>(v.size()) != n) throw ParameterError(flag + ": expected " + std::to_string(n) + " components");
        std::vector<RingElem> c;
        for (i64 x : v) c.push_back(R->from_int(x));
        return WittVector(R, std::move(c));
    };
    const WittVector x = vec(xs, "--x");
    WittVector out = x;
    if (op == "add" || op == "mul" || op == "sub") {
        if (ys.empty()) throw ParameterError("--y is required for --op " + op);
        const WittVector y = vec(ys, "--y");
        out = op == "add" ? x + y : op == "mul" ? x * y : x - y;
    } else if (op == "neg") {
        out = -x;
    } else if (op == "frobenius") {
        out = x.frobenius();
    } else if (op == "verschiebung") {
        out = x.verschiebung();
    } else if (op == "teichmuller") {
        out = WittVector::teichmuller(R, x.component(0), n);
    } else if (op != "ghost") {
        throw ParameterError("--op: unknown operation '" + op + "'");
    }
    json ghost = json::array();
    for (const auto& g : out.ghost()) ghost.push_back(R->to_string(g));
    Result r;
    r.data = {{"p", p}, {"n", n}, {"ring", R->description()}, {"op", op}, {"result", out.to_string()}, {"ghost", ghost}};
    r.ascii = out.to_string() + "\nghost: " + ghost.dump() + "\n";
    if (R->is_fp_algebra()) {
        r.data["integer"] = witt_to_integer(out);
        r.ascii += "as integer mod " + std::to_string(modular::prime_power(p, n)) + ": " + std::to_string(witt_to_integer(out)) + "\n";
    }
    return r;
}

inline Result witt_check(u64 p, int n, int samples, u64 seed) {
    const GhostCheckReport rep = check_ghost_homomorphism(p, n, n + 2, samples, seed);
    Result r;
    r.ok = rep.passed();
    r.data = {{"p", p},        {"n", n},           {"coefficients", "Z/" + std::to_string(p) + "^" + std::to_string(n + 2)},
              {"samples", samples}, {"seed", seed}, {"failures", rep.failures},
              {"passed", rep.passed()}};
    r.ascii = "ghost map is a ring homomorphism on " + std::to_string(samples) + " pairs: " + (rep.passed() ? "yes" : "NO") + "\n";
    return r;
}

// ---------------------------------------------------------------------------
// delta and prism

inline DeltaRing delta_ring_from(const std::string& kind, u64 p, int N, int M) {
    return parse_prism_kind(kind) == PrismKind::crystalline ? DeltaRing::crystalline(p, N) : DeltaRing::breuil_kisin(p, N, M);
}

inline Result delta_check(const std::string& kind, u64 p, int N, int M, int samples, u64 seed) {
    const DeltaRing R = delta_ring_from(kind, p, N, M);
    const DeltaAxiomReport rep = check_delta_axioms(R, samples, seed);
    json fails = json::array();
    for (const auto& f : rep.failures) fails.push_back({{"law", f.law}, {"x", f.x.to_string()}, {"y", f.y.to_string()}});
    Result r;
    r.ok = rep.passed();
    r.data = {{"kind", kind},      {"p", p},          {"N", N},        {"M", R.M()},
              {"samples", samples}, {"seed", seed},   {"checked_precision", rep.checked_precision},
              {"failures", fails}, {"passed", rep.passed()}};
    r.ascii = "delta-ring axioms at precision " + std::to_string(rep.checked_precision) + " on " + std::to_string(samples) +
              " samples: " + (rep.passed() ? "hold" : "FAIL") + "\n";
    return r;
}

inline Result delta_compute(const std::string& kind, u64 p, int N, int M, const std::string& x_text) {
    const DeltaRing R = delta_ring_from(kind, p, N, M);
    const TruncatedSeries x = R.parse(x_text);
    const TruncatedSeries phi = R.phi(x), delta = R.delta(x);
    Result r;
    r.data = {{"x", x.to_string()}, {"phi", phi.to_string()}, {"delta", delta.to_string()}, {"delta_precision", N - 1}};
    r.ascii = "phi(x)   = " + phi.to_string() + "\ndelta(x) = " + delta.to_string() + "  (mod p^" + std::to_string(N - 1) + ")\n";
    return r;
}

inline Result prism_check(const PrismFlags& flags) {
    const Prism P = flags.build();
    const IdealCertificate cert = P.ideal_certificate();
    const DistinguishedResult d = is_distinguished(P.ring(), P.generator());
    Result r;
    r.ok = cert.verified;
    r.data = {{"prism", P.to_json()},
              {"generator", P.generator().to_string()},
              {"distinguished", d.distinguished},
              {"delta", d.delta.to_string()},
              {"certificate", {{"a", cert.a.to_string()}, {"b", cert.b.to_string()}, {"verified", cert.verified}}}};
    r.ascii = "d = " + P.generator().to_string() + "\ndelta(d) = " + d.delta.to_string() + " (unit)\np = a*d + b*phi(d) with\n  a = " +
              cert.a.to_string() + "\n  b = " + cert.b.to_string() + "\nverified: " + (cert.verified ? "yes" : "NO") + "\n";
    return r;
}

inline Result prism_distinguished(const std::string& kind, u64 p, int N, int M, const std::string& d_text) {
    const DeltaRing R = delta_ring_from(kind, p, N, M);
    const TruncatedSeries d = R.parse(d_text);
    const DistinguishedResult res = is_distinguished(R, d);
    Result r;
    r.data = {{"d", d.to_string()}, {"delta", res.delta.to_string()}, {"distinguished", res.distinguished}, {"valuation", res.valuation}};
    r.ascii = "delta(d) = " + res.delta.to_string() + "\ndistinguished: " + (res.distinguished ? "yes" : "no") + "\n";
    return r;
}

// ---------------------------------------------------------------------------
// ainf

inline Result ainf_check(u64 p, int n, int m, int c) {
    const AinfModel A(p, n, m, c);
    const MuFactorizationReport mu = verify_mu_factorization(A);
    const XiTildeCongruenceReport xt = verify_xitilde_congruence(A);
    Result r;
    r.ok = mu.passed() && xt.passed();
    json checks = json::array({to_json(mu.xi_nu), to_json(mu.phi_mu), to_json(xt.mu_multiple), to_json(xt.xi_multiple)});
    r.data = {{"params", A.params_json()},
              {"mu", A.mu().to_string()},
              {"xi", A.xi().to_string()},
              {"xi_tilde", A.xi_tilde().to_string()},
              {"cofactor", xt.cofactor.to_string()},
              {"checks", checks},
              {"passed", r.ok}};
    std::ostringstream os;
    os << "W_" << n << "(F_" << p << "[y]/(y^" << c << ")), eps^(1/p^" << m << ") = 1 + y\n";
    for (const auto* chk : {&mu.xi_nu, &mu.phi_mu, &xt.mu_multiple, &xt.xi_multiple})
        os << "  " << chk->name << ": " << (chk->holds() ? "holds" : "FAILS") << "\n";
    r.ascii = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// bk

inline json crys_json(const CrysModule& c) {
    json lines = json::array();
    for (const auto& l : c.lines) {
        json x = json::object();
        x["torsion"] = l.torsion ? json(*l.torsion) : json(nullptr);
        x["scale"] = l.scale ? json(*l.scale) : json(nullptr);
        x["unit"] = l.unit;
        lines.push_back(x);
    }
    return {{"free_rank", c.free_rank()}, {"lines", lines}};
}

inline TwistSign parse_sign(const std::string& s) {
    if (s == "cohomological") return TwistSign::cohomological;
    if (s == "twist_index") return TwistSign::twist_index;
    throw ParameterError("--sign must be cohomological or twist_index");
}

inline Result bk_compute(const PrismFlags& pf, const std::string& ledger_text, const std::string& alpha_text, const std::string& sign) {
    const Prism P = pf.build();
    auto ctx = alpha_text.empty() ? BKContext::make(P) : BKContext::make(P, TruncatedSeries::parse(P.params(), alpha_text));
    const json led = parse_json_arg(ledger_text, "--ledger");
    LedgerNode root;
    if (led.is_array()) {
        std::vector<LedgerNode> c;
        for (const auto& x : led) c.push_back(LedgerNode::from_json(x));
        root = c.size() == 1 ? c.front() : LedgerNode::sum(std::move(c));
    } else {
        root = LedgerNode::from_json(led);
    }
    const BKModule M = BKModule::from_ledger(ctx, root);
    const DeRhamReduction dr = reduce_mod_E(M);
    const CrysModule cr = reduce_mod_u(M, parse_sign(sign));
    const StructureInvariants inv = structure_invariants(M);
    Result r;
    r.ok = M.certificate_holds();
    r.data = {{"module", M.to_json()},
              {"mod_E", {{"free_rank", dr.free_rank}, {"torsion", dr.torsion}, {"length_over_zp", dr.length_over_zp}}},
              {"mod_u", crys_json(cr)},
              {"invariants", {{"free_rank", inv.free_rank}, {"rational_rank", inv.rational_rank}, {"torsion_killed_by", inv.torsion_killed_by_power}}},
              {"certificate", {{"j", M.certificate().j}, {"holds", r.ok}}}};
    std::ostringstream os;
    os << "rank " << M.rank() << ", pole order " << M.pole_order() << ", free rank " << inv.free_rank << "\n";
    os << "mod E: free " << dr.free_rank << ", torsion [" << detail::join([&] {
        std::vector<std::string> t;
        for (int s : dr.torsion) t.push_back(std::to_string(s));
        return t;
    }(), ",") << "], length over Z_p " << dr.length_over_zp << "\n";
    os << "mod u phi-scales:";
    for (const auto& l : cr.lines) os << " " << (l.scale ? std::to_string(*l.scale) : "-");
    os << "\niso after inverting E: " << (r.ok ? "certified" : "FAILED") << "\n";
    r.ascii = os.str();
    return r;
}

inline Result bk_fuzz(const PrismFlags& pf, int trials, u64 seed) {
    const Prism P = pf.build();
    auto ctx = BKContext::make(P);
    Rng rng(seed);
    int ok = 0;
    json failures = json::array();
    for (int t = 0; t < trials; ++t) {
        const BKModule M = random_bk_module(ctx, rng);
        try {
            structure_invariants(M);
            ++ok;
        } catch (const InvariantViolation& e) {
            failures.push_back({{"trial", t}, {"ledger", M.ledger().to_json()}, {"error", e.what()}});
        }
    }
    Result r;
    r.ok = failures.empty();
    r.data = {{"trials", trials}, {"seed", seed}, {"passed", ok}, {"failures", failures}};
    r.ascii = std::to_string(ok) + "/" + std::to_string(trials) + " random modules satisfy the rank and certificate invariants\n";
    return r;
}

// ---------------------------------------------------------------------------
// cohomology

inline Result ring_result(const std::string& label, const GradedRing& R, int maxdeg) {
    const PoincareSeries s = R.poincare(maxdeg);
    Result r;
    r.data = {{"ring", label}, {"presentation", R.to_json()}, {"maxdeg", maxdeg}, {"series", series_json(s)}};
    std::ostringstream os;
    os << label << ": generators";
    for (const auto& g : R.gens()) os << " " << g.name << "(deg " << g.degree << ", twist " << g.twist << ")";
    os << "\nP(t) = " << s.to_string() << "\n";
    r.ascii = os.str();
    return r;
}

inline Result cohomology_kunneth(const std::vector<std::string>& ring_texts, int maxdeg) {
    if (ring_texts.size() < 2) throw ParameterError("--ring must be given at least twice");
    std::vector<GradedRing> rings;
    for (const auto& t : ring_texts) rings.push_back(GradedRing::from_json(parse_json_arg(t, "--ring")));
    GradedRing prod = rings.front();
    PoincareSeries expected = rings.front().poincare(maxdeg);
    for (std::size_t i = 1; i < rings.size(); ++i) {
        prod = kunneth(prod, rings[i]);
        expected = convolve(expected, rings[i].poincare(maxdeg));
    }
    Result r = ring_result("tensor product", prod, maxdeg);
    r.ok = prod.poincare(maxdeg) == expected;
    r.data["series_multiply"] = r.ok;
    r.ascii += std::string("series multiply: ") + (r.ok ? "yes" : "NO") + "\n";
    return r;
}

// ---------------------------------------------------------------------------
// chern

inline std::vector<u64> parse_primes(const std::string& text) {
    std::vector<u64> out;
    for (i64 x : parse_int_list(text, "--primes")) {
        if (x < 2) throw ParameterError("--primes: " + std::to_string(x) + " is not prime");
        modular::require_prime(static_cast<u64>(x));
        out.push_back(static_cast<u64>(x));
    }
    return out;
}

inline std::string valuations_ascii(const ChernNumber& c) {
    std::string s;
    for (const auto& [p, v] : c.valuations) s += " v_" + std::to_string(p) + "=" + (v ? std::to_string(*v) : "inf");
    return s;
}

inline Result chern_number_cmd(const std::string& bundle_text, const std::string& f_text, const std::string& primes, const std::string& unit) {
    const BundleData E = BundleData::from_json(parse_json_arg(bundle_text, "--bundle"));
    ChernNumberOptions opt;
    opt.primes = parse_primes(primes);
    try {
        opt.volume_unit = BigInt(normalize_minus(unit));
    } catch (const std::exception&) {
        throw ParseError("--unit: bad integer '" + unit + "'");
    }
    const Poly f = parse_chern_polynomial(normalize_minus(f_text), static_cast<std::size_t>(std::max(E.rank(), 1)));
    const ChernNumber c = chern_number(f, E, opt);
    Result r;
    r.data = c.to_json();
    r.data["bundle"] = E.to_json();
    r.data["f"] = f.to_string(indexed_names("c", f.nvars()));
    r.ascii = "value " + big_str(c.value) + valuations_ascii(c) + "\n";
    if (E.line_summands()) {
        const ChernNumber via = chern_number_via_roots(f, E, opt);
        r.ok = via.value == c.value;
        r.data["via_roots"] = via.to_json();
        r.ascii += std::string("via Chern roots: ") + big_str(via.value) + (r.ok ? " (agrees)" : " (DISAGREES)") + "\n";
    }
    return r;
}

inline Result chern_whitney(int r1, int r2) {
    if (r1 < 0 || r2 < 0) throw ParameterError("--r1/--r2 must be nonnegative");
    const WhitneyWitness w = whitney_check(static_cast<std::size_t>(r1), static_cast<std::size_t>(r2));
    Result r;
    r.ok = w.holds();
    r.data = {{"r1", r1}, {"r2", r2}, {"lhs", w.lhs.to_string(w.names)}, {"rhs", w.rhs.to_string(w.names)}, {"holds", w.holds()}};
    r.ascii = "Whitney identity for r1=" + std::to_string(r1) + ", r2=" + std::to_string(r2) + ": " + (w.holds() ? "holds" : "FAILS") +
              " (" + std::to_string(w.lhs.num_terms()) + " terms)\n";
    return r;
}

inline Result chern_bundle_ring(const std::string& bundle_text, bool flag, int maxdeg) {
    const BundleData E = BundleData::from_json(parse_json_arg(bundle_text, "--bundle"));
    const auto classes = chern_classes(E);
    const BundleRing B = flag ? flag_bundle_ring(E.base(), classes, E.rank()) : projective_bundle_ring(E.base(), classes, E.rank());
    json basis = json::array();
    for (const auto& e : B.fibre_basis) {
        Poly m(B.fibre_generators.size());
        m.add_term(e, 1);
        basis.push_back(m.to_string(B.fibre_generators));
    }
    Result r = ring_result(flag ? "flag bundle" : "projective bundle", B.ring, maxdeg);
    r.ok = B.certified;
    r.data["rank_over_base"] = B.rank;
    r.data["basis"] = basis;
    r.data["certified"] = B.certified;
    r.ascii += "free over the base of rank " + std::to_string(B.rank) + " with basis " + basis.dump() + (B.certified ? "" : " (NOT certified)") + "\n";
    return r;
}

// ---------------------------------------------------------------------------
// conical

inline WeightData load_weights(const std::string& weights, const std::string& csv, std::optional<int> rank) {
    if (!csv.empty()) return WeightData::from_csv(read_arg("@" + csv));
    if (weights.empty()) throw ParameterError("--weights or --csv is required");
    const json j = parse_json_arg(weights, "--weights");
    if (j.is_object()) return WeightData::from_json(j);
    const auto rows = j.get<std::vector<IntVec>>();
    if (rows.empty()) throw ParameterError("--weights: need at least one weight");
    return WeightData(rank.value_or(static_cast<int>(rows.front().size())), rows);
}

inline Result conical_check(const WeightData& W) {
    const ConicalResult c = is_conical(W);
    Result res;
    res.ok = c.certificate.verify(W);
    res.data = {{"weights", W.to_json()}, {"conical", c.conical}, {"certificate", c.certificate.to_json()}, {"verified", res.ok}};
    std::ostringstream os;
    os << (c.conical ? "conical" : "non-conical") << "\n";
    auto vec = [](const std::vector<BigInt>& v) {
        std::vector<std::string> s;
        for (const auto& x : v) s.push_back(x.str());
        return "(" + join(s, ", ") + ")";
    };
    switch (c.certificate.kind) {
        case ConeCertificate::Kind::covector: os << "covector h = " << vec(c.certificate.h) << "\n"; break;
        case ConeCertificate::Kind::zero_weight: os << "zero weight at index " << c.certificate.zero_index << "\n"; break;
        case ConeCertificate::Kind::opposite_pair:
            os << "witness v = " << vec(c.certificate.v) << " with v = " << vec(c.certificate.plus_coeffs)
               << " . chi and -v = " << vec(c.certificate.minus_coeffs) << " . chi\n";
            break;
    }
    os << "certificate verified: " << (res.ok ? "yes" : "NO") << "\n";
    res.ascii = os.str();
    return res;
}

inline Result conical_dim(const WeightData& W, const std::string& target_text, const std::string& shift_text) {
    const IntVec target = parse_int_list(target_text, "--target");
    const bool shifted = !shift_text.empty();
    const IntVec shift = shifted ? parse_int_list(shift_text, "--shift") : IntVec{};
    const GradedDim d = graded_dim(W, target, shifted ? PieceKind::module_shift : PieceKind::sym_of_dual, shift);
    Result r;
    r.data = {{"weights", W.to_json()}, {"target", target}, {"kind", shifted ? "module_shift" : "sym_of_dual"}};
    if (shifted) r.data["shift"] = shift;
    if (d.infinite()) {
        r.data["dim"] = "inf";
        r.ascii = "infinite (weights are not conical)\n";
    } else {
        r.data["dim"] = static_cast<long long>(*d.count);
        r.ascii = "dim = " + d.count->str() + "\n";
    }
    return r;
}

inline Result conical_hodge(const WeightData& W, int pmax) {
    const HodgeComparison h = hodge_compare_an_t(W, pmax);
    Result r;
    r.ok = h.passed();
    r.data = h.to_json();
    r.ascii = h.to_ascii();
    return r;
}

// ---------------------------------------------------------------------------
// lengths

inline Result lengths_compute(const std::string& module_text) {
    const ModulePresentation M = ModulePresentation::from_json(parse_json_arg(module_text, "--module"));
    const LengthPair lp = lengths(M);
    Result r;
    r.data = {{"module", M.to_json()}, {"special", lp.special}, {"generic", lp.generic}, {"gap", lp.gap()}};
    r.ascii = "length of M/uM: " + std::to_string(lp.special) + "\nlength of M[1/u]: " + std::to_string(lp.generic) + "\n";
    const std::size_t B = static_cast<std::size_t>(oracle_truncation(M)) + 1;
    if (static_cast<std::size_t>(M.rows()) * B * static_cast<std::size_t>(M.cols()) * B <= 40000) {
        const LengthPair o = counting_oracle(M);
        r.ok = o.special == lp.special && o.generic == lp.generic;
        r.data["oracle"] = {{"special", o.special}, {"generic", o.generic}, {"agrees", r.ok}};
        r.ascii += std::string("counting oracle: ") + (r.ok ? "agrees" : "DISAGREES") + "\n";
    }
    return r;
}

inline Result lengths_fuzz(const FuzzConfig& cfg) {
    const FuzzReport rep = semicontinuity_fuzz(cfg);
    Result r;
    r.ok = rep.passed();
    r.data = rep.to_json();
    std::ostringstream os;
    os << rep.trials << " trials (p=" << cfg.p << ", n=" << cfg.n << ", seed " << cfg.seed << "): " << rep.violations.size()
       << " violations, oracle checked " << rep.oracle_checked << " with " << rep.oracle_mismatches.size() << " mismatches\n";
    os << "gap  count\n";
    for (const auto& [g, c] : rep.gap_histogram) os << std::setw(3) << g << "  " << c << "\n";
    r.ascii = os.str();
    return r;
}

}  // namespace detail

/// Parses args (without the program name), runs one operation and writes its
/// output. Returns 0, 1 or 2.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Exact computations with Witt vectors, prisms, Breuil-Kisin modules and cohomology tables", "prismlab"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--format", cfg.format, "ascii or json")->check(CLI::IsMember({"ascii", "json"}));
    app.add_option("--output", cfg.output, "write to this file instead of standard output");
    app.add_option("--seed", cfg.seed, "random seed (default 0)");

    std::function<Result()> action;
    auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        CLI::App* s = parent->add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    // witt
    u64 p = 2;
    int n = 2, samples = 1000, a = 1;
    std::string op = "add", xs, ys;
    CLI::App* witt = sub(&app, "witt", "p-typical Witt vectors");
    witt->require_subcommand(1);
    {
        auto* s = sub(witt, "polys", "universal sum, product and negation polynomials");
        s->add_option("--p", p)->required();
        s->add_option("--n", n)->required();
        s->callback([&] { action = [&] { return witt_polys(p, n); }; });
        s = sub(witt, "compute", "arithmetic in W_n(Z/p^a)");
        s->add_option("--p", p)->required();
        s->add_option("--n", n)->required();
        s->add_option("--a", a, "coefficient ring Z/p^a (default F_p)");
        s->add_option("--op", op, "add|sub|mul|neg|frobenius|verschiebung|teichmuller|ghost");
        s->add_option("--x", xs, "components, ';'-separated")->required();
        s->add_option("--y", ys, "second operand");
        s->callback([&] { action = [&] { return witt_compute(p, n, a, op, xs, ys); }; });
        s = sub(witt, "check", "ghost map is a ring homomorphism on random pairs");
        s->add_option("--p", p)->required();
        s->add_option("--n", n)->required();
        s->add_option("--samples", samples);
        s->callback([&] { action = [&] { return witt_check(p, n, samples, cfg.seed); }; });
    }

    // delta
    std::string kind = "breuil_kisin", x_text;
    int N = 3, M = 8;
    CLI::App* delta = sub(&app, "delta", "delta-rings");
    delta->require_subcommand(1);
    {
        auto* s = sub(delta, "check", "delta-ring axioms on random samples");
        s->add_option("--kind", kind);
        s->add_option("--p", p)->required();
        s->add_option("--N", N)->required();
        s->add_option("--M", M);
        s->add_option("--samples", samples);
        s->callback([&] { action = [&] { return delta_check(kind, p, N, M, samples, cfg.seed); }; });
        s = sub(delta, "compute", "phi and delta of one element");
        s->add_option("--kind", kind);
        s->add_option("--p", p)->required();
        s->add_option("--N", N)->required();
        s->add_option("--M", M);
        s->add_option("--x", x_text)->required();
        s->callback([&] { action = [&] { return delta_compute(kind, p, N, M, x_text); }; });
    }

    // prism
    PrismFlags pf;
    CLI::App* prism = sub(&app, "prism", "prisms and distinguished elements");
    prism->require_subcommand(1);
    {
        auto* s = sub(prism, "check", "distinguishedness and the ideal certificate");
        pf.add(s);
        s->callback([&] { action = [&] { return prism_check(pf); }; });
        s = sub(prism, "distinguished", "test one element for distinguishedness");
        s->add_option("--kind", kind);
        s->add_option("--p", p)->required();
        s->add_option("--N", N)->required();
        s->add_option("--M", M);
        s->add_option("--d", x_text)->required();
        s->callback([&] { action = [&] { return prism_distinguished(kind, p, N, M, x_text); }; });
    }

    // ainf
    int m = 1, c = 8;
    CLI::App* ainf = sub(&app, "ainf", "identities among eps, mu, xi, xi~ in a truncated A_inf");
    ainf->require_subcommand(1);
    {
        auto* s = sub(ainf, "check", "xi*nu = mu, phi(mu) = xi~*mu, xi~ - p in (mu) and (xi)");
        s->add_option("--p", p)->required();
        s->add_option("--n", n);
        s->add_option("--m", m);
        s->add_option("--c", c);
        s->callback([&] { action = [&] { return ainf_check(p, n, m, c); }; });
    }

    // bk
    std::string ledger, alpha, sign = "cohomological";
    int trials = 200;
    CLI::App* bk = sub(&app, "bk", "Breuil-Kisin modules");
    bk->require_subcommand(1);
    PrismFlags bkpf;
    bkpf.M = 24;
    {
        auto* s = sub(bk, "compute", "build a module from a ledger and reduce it");
        bkpf.add(s);
        s->add_option("--ledger", ledger)->required();
        s->add_option("--alpha", alpha, "unit alpha in S{1}");
        s->add_option("--sign", sign, "cohomological|twist_index");
        s->callback([&] { action = [&] { return bk_compute(bkpf, ledger, alpha, sign); }; });
        s = sub(bk, "fuzz", "random ledger modules against the structure invariants");
        bkpf.add(s);
        s->add_option("--trials", trials);
        s->callback([&] { action = [&] { return bk_fuzz(bkpf, trials, cfg.seed); }; });
    }

    // cohomology
    int maxdeg = -1, rank = 1;
    std::string type;
    std::vector<std::string> ring_texts;
    auto md = [&] { return maxdeg >= 0 ? maxdeg : default_maxdeg(); };
    CLI::App* coh = sub(&app, "cohomology", "cohomology rings and Poincare series");
    coh->require_subcommand(1);
    {
        auto* s = sub(coh, "bg", "classifying stack of a split reductive group");
        s->add_option("--type", type)->required();
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] { action = [&] { return ring_result("BG(" + type + ")", make_bg(type), md()); }; });
        s = sub(coh, "bgm", "classifying stack of G_m");
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] { action = [&] { return ring_result("BG_m", make_bgm(), md()); }; });
        s = sub(coh, "pn", "projective space");
        s->add_option("--n", n)->required();
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] { action = [&] { return ring_result("P^" + std::to_string(n), make_projective_space(n), md()); }; });
        s = sub(coh, "bt", "classifying stack of a split torus");
        s->add_option("--rank", rank)->required();
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] { action = [&] { return ring_result("BT^" + std::to_string(rank), make_bt(rank), md()); }; });
        s = sub(coh, "ring", "a presentation given as JSON");
        s->add_option("--ring", ring_texts)->required()->expected(1);
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] {
            action = [&] { return ring_result("ring", GradedRing::from_json(parse_json_arg(ring_texts.front(), "--ring")), md()); };
        });
        s = sub(coh, "kunneth", "tensor product of presentations");
        s->add_option("--ring", ring_texts)->required();
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] { action = [&] { return cohomology_kunneth(ring_texts, md()); }; });
        s = sub(coh, "connectivity", "first degree where BG_m and P^n differ");
        s->add_option("--n", n)->required();
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] {
            action = [&] {
                const int D = maxdeg >= 0 ? maxdeg : std::max(default_maxdeg(), 2 * n + 3);
                const int d = truncation_connectivity(n, D);
                Result r;
                r.data = {{"n", n}, {"maxdeg", D}, {"first_difference", d}};
                r.ascii = "H*(BG_m) and H*(P^" + std::to_string(n) + ") first differ in degree " + std::to_string(d) + "\n";
                return r;
            };
        });
    }

    // chern
    std::string bundle, f_text, primes = "2,3", unit = "1";
    int r1 = 1, r2 = 1;
    CLI::App* chern = sub(&app, "chern", "Chern classes and Chern numbers");
    chern->require_subcommand(1);
    {
        auto* s = sub(chern, "number", "integrate a polynomial in Chern classes");
        s->add_option("--bundle", bundle)->required();
        s->add_option("--f", f_text)->required();
        s->add_option("--primes", primes);
        s->add_option("--unit", unit, "normalisation of the fundamental class");
        s->callback([&] { action = [&] { return chern_number_cmd(bundle, f_text, primes, unit); }; });
        s = sub(chern, "whitney", "sum formula for elementary symmetric polynomials");
        s->add_option("--r1", r1)->required();
        s->add_option("--r2", r2)->required();
        s->callback([&] { action = [&] { return chern_whitney(r1, r2); }; });
        s = sub(chern, "flag", "flag bundle presentation");
        s->add_option("--bundle", bundle)->required();
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] { action = [&] { return chern_bundle_ring(bundle, true, md()); }; });
        s = sub(chern, "projective", "projective bundle presentation");
        s->add_option("--bundle", bundle)->required();
        s->add_option("--maxdeg", maxdeg);
        s->callback([&] { action = [&] { return chern_bundle_ring(bundle, false, md()); }; });
    }

    // conical
    std::string weights, csv, target, shift;
    std::optional<int> wrank;
    int pmax = 3;
    CLI::App* con = sub(&app, "conical", "torus weights");
    con->require_subcommand(1);
    auto add_weights = [&](CLI::App* s) {
        s->add_option("--weights", weights, "JSON list of weights or {\"rank\":..,\"weights\":..}");
        s->add_option("--csv", csv, "CSV file with one weight per row");
        s->add_option("--rank", wrank);
    };
    {
        auto* s = sub(con, "check", "decide conicality with a certificate");
        add_weights(s);
        s->callback([&] { action = [&] { return conical_check(load_weights(weights, csv, wrank)); }; });
        s = sub(con, "dim", "graded dimension of Sym(V^dual) or a shift");
        add_weights(s);
        s->add_option("--target", target)->required();
        s->add_option("--shift", shift);
        s->callback([&] { action = [&] { return conical_dim(load_weights(weights, csv, wrank), target, shift); }; });
        s = sub(con, "hodge", "weight-zero comparison table with BT");
        add_weights(s);
        s->add_option("--pmax", pmax);
        s->callback([&] { action = [&] { return conical_hodge(load_weights(weights, csv, wrank), pmax); }; });
    }

    // lengths
    std::string module_text;
    FuzzConfig fz;
    CLI::App* len = sub(&app, "lengths", "lengths of modules over (Z/p^n)[[u]]");
    len->require_subcommand(1);
    {
        auto* s = sub(len, "compute", "special and generic length of one presentation");
        s->add_option("--module", module_text)->required();
        s->callback([&] { action = [&] { return lengths_compute(module_text); }; });
        s = sub(len, "fuzz", "random presentations against the semicontinuity inequality");
        s->add_option("--trials", fz.trials);
        s->add_option("--p", fz.p);
        s->add_option("--n", fz.n);
        s->add_option("--size", fz.size);
        s->add_option("--deg", fz.deg);
        s->callback([&] {
            action = [&] {
                fz.seed = cfg.seed;
                return lengths_fuzz(fz);
            };
        });
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (!action) {
        err << app.help();
        return 2;
    }

    Result res;
    try {
        res = action();
    } catch (const InvariantViolation& e) {
        err << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const std::string text = cfg.format == "json" ? res.data.dump(2) + "\n" : res.ascii;
    if (cfg.output.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.output);
        if (!f) {
            err << "error: cannot write --output file '" << cfg.output << "'\n";
            return 2;
        }
        f << text;
    }
    return res.ok ? 0 : 1;
}

}  // namespace prismlab::cli
