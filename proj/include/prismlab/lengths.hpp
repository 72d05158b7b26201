#pragma once

// Lengths of M/uM and M[1/u] for M = coker of a matrix over (Z/p^n)[u],
// read over the completion. Both lengths come from diagonalising over a chain
// ring whose maximal ideal is (p):
//   special   Z/p^n                     (entries evaluated at u = 0)
//   generic   (Z/p^n)[u] localised at (p), which has the same lengths as
//             (Z/p^n)((u)); an element is a unit iff it is nonzero mod p.
// A coker of diag(p^{v_i}) over a chain ring of length n has length
// sum min(v_i, n), each missing pivot contributing n.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prismlab/padic.hpp"
#include "prismlab/poly.hpp"
#include "prismlab/rng.hpp"

namespace prismlab {

/// Dense polynomial in u with coefficients in Z/q, q = p^n; trailing zeros trimmed.
struct UPoly {
    std::vector<u64> c;

    bool is_zero() const { return c.empty(); }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
};

namespace detail {

inline UPoly upoly_sub(const UPoly& a, const UPoly& b, u64 q) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i)
        r.c[i] = modular::submod(i < a.c.size() ? a.c[i] : 0, i < b.c.size() ? b.c[i] : 0, q);
    r.trim();
    return r;
}

inline UPoly upoly_mul(const UPoly& a, const UPoly& b, u64 q) {
    if (a.is_zero() || b.is_zero()) return {};
    UPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = modular::addmod(r.c[i + j], modular::mulmod(a.c[i], b.c[j], q), q);
    }
    r.trim();
    return r;
}

/// Minimum p-valuation over the coefficients; n for zero.
inline int upoly_valuation(const UPoly& a, u64 p, int n) {
    int v = n;
    for (u64 x : a.c)
        if (x) v = std::min(v, modular::valuation(x, p, n));
    return v;
}

/// a / p^v coefficientwise, for v <= valuation(a).
inline UPoly upoly_shift_down(const UPoly& a, u64 p, int v) {
    UPoly r = a;
    u64 pv = 1;
    for (int i = 0; i < v; ++i) pv *= p;
    for (auto& x : r.c) x /= pv;
    r.trim();
    return r;
}

inline UPoly upoly_scale(const UPoly& a, u64 k, u64 q) {
    UPoly r = a;
    for (auto& x : r.c) x = modular::mulmod(x, k, q);
    r.trim();
    return r;
}

}  // namespace detail

class ModulePresentation {
public:
    /// rows generators, cols relations (the columns of the matrix).
    ModulePresentation(u64 p, int n, int rows, int cols, std::vector<std::vector<UPoly>> entries)
        : p_(p), n_(n), rows_(rows), cols_(cols), entries_(std::move(entries)) {
        modular::require_prime(p);
        if (n < 1) throw ParameterError("p-level n must be positive");
        q_ = modular::prime_power(p, n);
        if (rows < 0 || cols < 0) throw ParameterError("matrix dimensions must be nonnegative");
        if (static_cast<int>(entries_.size()) != rows) throw ParameterError("entry rows do not match the declared row count");
        for (auto& row : entries_) {
            if (static_cast<int>(row.size()) != cols) throw ParameterError("entry columns do not match the declared column count");
            for (auto& e : row) {
                for (auto& x : e.c) x %= q_;
                e.trim();
            }
        }
    }

    static ModulePresentation free_module(u64 p, int n, int rank) {
        return ModulePresentation(p, n, rank, 0, std::vector<std::vector<UPoly>>(static_cast<std::size_t>(rank)));
    }

    u64 p() const { return p_; }
    int n() const { return n_; }
    u64 modulus() const { return q_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<std::vector<UPoly>>& entries() const { return entries_; }

    int max_degree() const {
        int d = 0;
        for (const auto& row : entries_)
            for (const auto& e : row) d = std::max(d, static_cast<int>(e.c.size()) - 1);
        return d;
    }

    std::string entry_string(int i, int j) const {
        const UPoly& e = entries_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        std::vector<i64> co(e.c.begin(), e.c.end());
        if (co.empty()) return "0";
        Poly f(1);
        for (std::size_t k = 0; k < co.size(); ++k)
            if (co[k]) f.add_term({static_cast<std::uint32_t>(k)}, co[k]);
        return f.to_string({"u"});
    }

    static ModulePresentation from_json(const nlohmann::json& j) {
        const u64 p = j.at("p").get<u64>();
        const int n = j.at("n").get<int>();
        modular::require_prime(p);
        const u64 q = modular::prime_power(p, n);
        const auto& ent = j.at("entries");
        const int rows = j.contains("rows") ? j["rows"].get<int>() : static_cast<int>(ent.size());
        const int cols = j.contains("cols") ? j["cols"].get<int>() : (ent.empty() ? 0 : static_cast<int>(ent[0].size()));
        std::vector<std::vector<UPoly>> m;
        for (const auto& row : ent) {
            std::vector<UPoly> r;
            for (const auto& e : row) r.push_back(parse_upoly(e.is_string() ? e.get<std::string>() : e.dump(), q));
            m.push_back(std::move(r));
        }
        if (ent.empty()) m.assign(static_cast<std::size_t>(rows), {});
        return ModulePresentation(p, n, rows, cols, std::move(m));
    }

    nlohmann::json to_json() const {
        nlohmann::json e = nlohmann::json::array();
        for (int i = 0; i < rows_; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int k = 0; k < cols_; ++k) row.push_back(entry_string(i, k));
            e.push_back(row);
        }
        return {{"p", p_}, {"n", n_}, {"rows", rows_}, {"cols", cols_}, {"entries", e}};
    }

    static UPoly parse_upoly(const std::string& text, u64 q) {
        const Poly f = parse_poly(text, {"u"});
        UPoly r;
        for (const auto& [e, c] : f.terms()) {
            if (r.c.size() <= e[0]) r.c.resize(e[0] + 1, 0);
            BigInt m = c % q;
            if (m < 0) m += q;
            r.c[e[0]] = static_cast<u64>(m);
        }
        r.trim();
        return r;
    }

private:
    u64 p_;
    int n_;
    u64 q_ = 0;
    int rows_, cols_;
    std::vector<std::vector<UPoly>> entries_;
};

/// Block-diagonal sum of two presentations over the same (p, n).
inline ModulePresentation block_diagonal(const ModulePresentation& a, const ModulePresentation& b) {
    if (a.p() != b.p() || a.n() != b.n()) throw ParameterError("block sum needs matching p and n");
    const int rows = a.rows() + b.rows(), cols = a.cols() + b.cols();
    std::vector<std::vector<UPoly>> m(static_cast<std::size_t>(rows), std::vector<UPoly>(static_cast<std::size_t>(cols)));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a.entries()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            m[static_cast<std::size_t>(a.rows() + i)][static_cast<std::size_t>(a.cols() + j)] = b.entries()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return ModulePresentation(a.p(), a.n(), rows, cols, std::move(m));
}

namespace detail {

/// Diagonalises over the chain ring (unit = nonzero mod p) and returns the length of the cokernel.
inline int chain_ring_coker_length(std::vector<std::vector<UPoly>> A, int rows, int cols, u64 p, int n) {
    const u64 q = modular::prime_power(p, n);
    const int k = std::min(rows, cols);
    int length = 0;
    for (int t = 0; t < k; ++t) {
        int bi = -1, bj = -1, bv = n;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                const int v = upoly_valuation(A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p, n);
                if (v < bv) bv = v, bi = i, bj = j;
            }
        if (bi < 0) {
            length += n * (rows - t);  // everything left is zero
            return length;
        }
        std::swap(A[static_cast<std::size_t>(t)], A[static_cast<std::size_t>(bi)]);
        for (auto& row : A) std::swap(row[static_cast<std::size_t>(t)], row[static_cast<std::size_t>(bj)]);
        const UPoly unit = upoly_shift_down(A[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)], p, bv);
        // rows below: row_i <- unit*row_i - p^{w-v} b' * row_t
        for (int i = t + 1; i < rows; ++i) {
            auto& row = A[static_cast<std::size_t>(i)];
            const UPoly& b = row[static_cast<std::size_t>(t)];
            if (b.is_zero()) continue;
            const int w = upoly_valuation(b, p, n);
            const UPoly factor = upoly_scale(upoly_shift_down(b, p, w), modular::prime_power(p, w - bv), q);
            for (int j = t; j < cols; ++j)
                row[static_cast<std::size_t>(j)] = upoly_sub(upoly_mul(unit, row[static_cast<std::size_t>(j)], q),
                                                             upoly_mul(factor, A[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)], q), q);
        }
        // columns to the right, symmetric
        for (int j = t + 1; j < cols; ++j) {
            const UPoly b = A[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
            if (b.is_zero()) continue;
            const int w = upoly_valuation(b, p, n);
            const UPoly factor = upoly_scale(upoly_shift_down(b, p, w), modular::prime_power(p, w - bv), q);
            for (int i = t; i < rows; ++i) {
                auto& row = A[static_cast<std::size_t>(i)];
                row[static_cast<std::size_t>(j)] = upoly_sub(upoly_mul(unit, row[static_cast<std::size_t>(j)], q),
                                                             upoly_mul(factor, row[static_cast<std::size_t>(t)], q), q);
            }
        }
        length += bv;
    }
    return length + n * (rows - k);
}

}  // namespace detail

inline int length_special(const ModulePresentation& M) {
    std::vector<std::vector<UPoly>> A = M.entries();
    for (auto& row : A)
        for (auto& e : row) {
            if (e.c.size() > 1) e.c.resize(1);
            e.trim();
        }
    return detail::chain_ring_coker_length(std::move(A), M.rows(), M.cols(), M.p(), M.n());
}

inline int length_generic(const ModulePresentation& M) {
    if (M.n() > 3 || M.rows() > 6 || M.cols() > 6 || M.max_degree() > 8)
        throw ResourceError("generic length supports n <= 3, at most 6x6 matrices and degree <= 8");
    return detail::chain_ring_coker_length(M.entries(), M.rows(), M.cols(), M.p(), M.n());
}

struct LengthPair {
    int special = 0;
    int generic = 0;
    int gap() const { return special - generic; }
};

inline LengthPair lengths(const ModulePresentation& M) {
    LengthPair lp{length_special(M), length_generic(M)};
    if (lp.special < lp.generic)
        throw InvariantViolation("semicontinuity violated: special length " + std::to_string(lp.special) + " < generic length " +
                                 std::to_string(lp.generic));
    return lp;
}

// ---------------------------------------------------------------------------
// Counting oracle: lengths read off |coker| over (Z/p^n)[u]/(u^B).

/// log_p |coker| of the matrix over (Z/p^n)[u]/(u^B), by elimination of the
/// (rows*B) x (cols*B) integer matrix of multiplication by the entries.
inline int truncated_coker_length(const ModulePresentation& M, int B) {
    if (B < 1) throw ParameterError("truncation B must be positive");
    const u64 p = M.p(), q = M.modulus();
    const int n = M.n();
    const std::size_t R = static_cast<std::size_t>(M.rows()) * static_cast<std::size_t>(B);
    const std::size_t C = static_cast<std::size_t>(M.cols()) * static_cast<std::size_t>(B);
    // Column (j, s) is u^s * (column j), coordinate (i, t) the coefficient of u^t in row i.
    std::vector<std::vector<u64>> T(R, std::vector<u64>(C, 0));
    for (int j = 0; j < M.cols(); ++j)
        for (int s = 0; s < B; ++s)
            for (int i = 0; i < M.rows(); ++i) {
                const auto& e = M.entries()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].c;
                for (std::size_t d = 0; d < e.size() && static_cast<int>(d) + s < B; ++d)
                    T[static_cast<std::size_t>(i) * B + d + static_cast<std::size_t>(s)][static_cast<std::size_t>(j) * B + static_cast<std::size_t>(s)] = e[d];
            }
    // Integer elimination over Z/p^n choosing minimal-valuation pivots.
    int image_length = 0;
    std::vector<bool> row_used(R, false), col_used(C, false);
    for (;;) {
        int best = n;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < R; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < C; ++j) {
                if (col_used[j] || !T[i][j]) continue;
                const int v = modular::valuation(T[i][j], p, n);
                if (v < best) best = v, bi = i, bj = j;
            }
            if (best == 0) break;
        }
        if (best == n) break;
        row_used[bi] = col_used[bj] = true;
        image_length += n - best;
        const u64 pv = modular::prime_power(p, best);
        const u64 low = modular::prime_power(p, n - best);
        const u64 unit_inv = modular::inverse((T[bi][bj] / pv) % low, low).value();
        // Clear column bj in other rows using row bi, and row bi in other columns.
        for (std::size_t i = 0; i < R; ++i) {
            if (i == bi || !T[i][bj]) continue;
            const u64 f = modular::mulmod(T[i][bj] / pv, unit_inv, q);
            for (std::size_t j = 0; j < C; ++j)
                if (T[bi][j]) T[i][j] = modular::submod(T[i][j], modular::mulmod(f, T[bi][j], q), q);
        }
        for (std::size_t j = 0; j < C; ++j) {
            if (j == bj || !T[bi][j]) continue;
            const u64 f = modular::mulmod(T[bi][j] / pv, unit_inv, q);
            for (std::size_t i = 0; i < R; ++i)
                if (T[i][bj]) T[i][j] = modular::submod(T[i][j], modular::mulmod(f, T[i][bj], q), q);
        }
    }
    return static_cast<int>(R) * n - image_length;
}

inline int oracle_truncation(const ModulePresentation& M) {
    const int deg = std::max(1, M.max_degree());
    // u-power torsion can reach length n * deg(det), which outgrows the first bound for n >= 2
    return std::max(deg + std::max(M.rows(), M.cols()) * deg + 4, M.n() * deg * std::min(M.rows(), M.cols()) + 1);
}

/// special = length at B = 1, generic = eventual slope in B.
inline LengthPair counting_oracle(const ModulePresentation& M, std::optional<int> B = std::nullopt) {
    const int b = B.value_or(oracle_truncation(M));
    return {truncated_coker_length(M, 1), truncated_coker_length(M, b + 1) - truncated_coker_length(M, b)};
}

// ---------------------------------------------------------------------------
// Fuzzing

struct FuzzConfig {
    int trials = 1000;
    u64 seed = 0;
    u64 p = 2;
    int n = 1;
    int size = 3;
    int deg = 4;
    std::size_t oracle_cells = 40000;  // run the oracle when (rows*B)*(cols*B) is at most this
};

struct FuzzReport {
    FuzzConfig config;
    int trials = 0;
    std::vector<nlohmann::json> violations;
    std::map<int, int> gap_histogram;
    int oracle_checked = 0;
    std::vector<nlohmann::json> oracle_mismatches;
    bool passed() const { return violations.empty() && oracle_mismatches.empty(); }

    nlohmann::json to_json() const {
        nlohmann::json gaps = nlohmann::json::object();
        for (const auto& [g, c] : gap_histogram) gaps[std::to_string(g)] = c;
        return {{"seed", config.seed},         {"trials", trials},   {"p", config.p},
                {"n", config.n},               {"size", config.size}, {"deg", config.deg},
                {"violations", violations},    {"gaps", gaps},       {"oracle_checked", oracle_checked},
                {"oracle_mismatches", oracle_mismatches}, {"passed", passed()}};
    }
};

inline ModulePresentation random_presentation(Rng& rng, u64 p, int n, int size, int deg) {
    const u64 q = modular::prime_power(p, n);
    const int rows = static_cast<int>(rng.between(1, size));
    const int cols = static_cast<int>(rng.between(0, size));
    std::vector<std::vector<UPoly>> m(static_cast<std::size_t>(rows), std::vector<UPoly>(static_cast<std::size_t>(cols)));
    for (auto& row : m)
        for (auto& e : row) {
            if (rng.below(3) == 0) continue;  // sparse matrices give more torsion
            const int d = static_cast<int>(rng.between(0, deg));
            e.c.resize(static_cast<std::size_t>(d) + 1);
            for (auto& x : e.c) {
                // bias towards p-divisible and u-divisible entries
                x = rng.below(q);
                if (rng.below(4) == 0) x = modular::mulmod(x, p, q);
            }
            if (rng.below(3) == 0) e.c[0] = 0;
            e.trim();
        }
    return ModulePresentation(p, n, rows, cols, std::move(m));
}

inline FuzzReport semicontinuity_fuzz(const FuzzConfig& cfg) {
    if (cfg.n > 3 || cfg.size > 6 || cfg.deg > 8) throw ResourceError("fuzz bounds: n <= 3, size <= 6, deg <= 8");
    if (cfg.trials < 0) throw ParameterError("trial count must be nonnegative");
    modular::require_prime(cfg.p);
    FuzzReport rep;
    rep.config = cfg;
    Rng rng(cfg.seed);
    for (int t = 0; t < cfg.trials; ++t) {
        const ModulePresentation M = random_presentation(rng, cfg.p, cfg.n, cfg.size, cfg.deg);
        const LengthPair lp{length_special(M), length_generic(M)};
        ++rep.trials;
        rep.gap_histogram[lp.gap()] += 1;
        if (lp.special < lp.generic) rep.violations.push_back({{"trial", t}, {"module", M.to_json()}, {"special", lp.special}, {"generic", lp.generic}});
        const std::size_t B = static_cast<std::size_t>(oracle_truncation(M)) + 1;
        if (static_cast<std::size_t>(M.rows()) * B * static_cast<std::size_t>(M.cols()) * B <= cfg.oracle_cells) {
            ++rep.oracle_checked;
            const LengthPair o = counting_oracle(M);
            if (o.special != lp.special || o.generic != lp.generic)
                rep.oracle_mismatches.push_back({{"trial", t}, {"module", M.to_json()}, {"special", lp.special}, {"generic", lp.generic},
                                                 {"oracle_special", o.special}, {"oracle_generic", o.generic}});
        }
    }
    return rep;
}

}  // namespace prismlab
