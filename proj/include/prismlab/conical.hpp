#pragma once

// Torus weights: the conical criterion decided by exact rational LP, lattice
// point counts for graded pieces of Sym(V^dual) and its shifts, and the
// weight-zero Hodge comparison between [A^n/T] and BT.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "prismlab/errors.hpp"
#include "prismlab/padic.hpp"
#include "prismlab/poly.hpp"

namespace prismlab {

using Rational = boost::multiprecision::cpp_rational;
using IntVec = std::vector<i64>;

struct WeightData {
    int rank = 0;
    std::vector<IntVec> weights;

    WeightData() = default;
    WeightData(int r, std::vector<IntVec> w) : rank(r), weights(std::move(w)) {
        if (rank < 1) throw ParameterError("torus rank must be positive");
        if (weights.empty()) throw ParameterError("need at least one weight");
        for (const auto& c : weights)
            if (static_cast<int>(c.size()) != rank) throw ParameterError("every weight needs exactly rank coordinates");
    }
    std::size_t size() const { return weights.size(); }

    static WeightData from_json(const nlohmann::json& j) {
        return WeightData(j.at("rank").get<int>(), j.at("weights").get<std::vector<IntVec>>());
    }
    nlohmann::json to_json() const { return {{"rank", rank}, {"weights", weights}}; }

    /// One weight per line, coordinates separated by commas or spaces; '#' starts a comment.
    static WeightData from_csv(const std::string& text) {
        std::vector<IntVec> rows;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            IntVec row;
            std::string tok;
            while (ls >> tok) {
                try {
                    std::size_t used = 0;
                    row.push_back(std::stoll(tok, &used));
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw ParseError("bad weight coordinate '" + tok + "'");
                }
            }
            if (!row.empty()) rows.push_back(std::move(row));
        }
        if (rows.empty()) throw ParseError("no weights in CSV input");
        const int rank = static_cast<int>(rows.front().size());
        return WeightData(rank, std::move(rows));
    }
};

// ---------------------------------------------------------------------------
// Exact phase-one simplex: a point x >= 0 with A x = b, or nothing.

/// Reduced fraction with int64 parts. Every operation checks for overflow so
/// callers can fall back to cpp_rational.
class SmallFrac {
public:
    SmallFrac(i64 n = 0) : num_(n), den_(1) {}

    friend SmallFrac operator+(const SmallFrac& a, const SmallFrac& b) {
        return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend SmallFrac operator-(const SmallFrac& a, const SmallFrac& b) { return a + (-b); }
    friend SmallFrac operator*(const SmallFrac& a, const SmallFrac& b) {
        return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend SmallFrac operator/(const SmallFrac& a, const SmallFrac& b) {
        if (b.num_ == 0) throw InvariantViolation("division by zero in the simplex");
        return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    SmallFrac operator-() const {
        SmallFrac r = *this;
        if (r.num_ == INT64_MIN) throw std::overflow_error("fraction overflow");
        r.num_ = -r.num_;
        return r;
    }
    SmallFrac& operator+=(const SmallFrac& o) { return *this = *this + o; }
    SmallFrac& operator-=(const SmallFrac& o) { return *this = *this - o; }
    SmallFrac& operator/=(const SmallFrac& o) { return *this = *this / o; }
    friend bool operator==(const SmallFrac& a, const SmallFrac& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator<(const SmallFrac& a, const SmallFrac& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator<=(const SmallFrac& a, const SmallFrac& b) { return !(b < a); }

    Rational to_rational() const { return Rational(num_, den_); }

private:
    static SmallFrac make(__int128 n, __int128 d) {
        if (d < 0) n = -n, d = -d;
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) n /= a, d /= a;
        if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX) throw std::overflow_error("fraction overflow");
        SmallFrac r;
        r.num_ = static_cast<i64>(n);
        r.den_ = static_cast<i64>(d);
        return r;
    }
    i64 num_, den_;
};

template <class Q>
std::optional<std::vector<Q>> feasible_point(std::vector<std::vector<Q>> A, std::vector<Q> b) {
    const std::size_t m = A.size();
    const std::size_t nv = m ? A.front().size() : 0;
    for (std::size_t i = 0; i < m; ++i)
        if (b[i] < 0) {
            for (auto& x : A[i]) x = -x;
            b[i] = -b[i];
        }
    const std::size_t cols = nv + m;  // originals then artificials; rhs kept apart
    std::vector<std::vector<Q>> T(m, std::vector<Q>(cols));
    std::vector<Q> rhs = b;
    std::vector<Q> cost(cols);  // reduced costs of sum(artificials)
    Q obj = 0;                  // -(current sum of artificials)
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < nv; ++j) T[i][j] = A[i][j];
        T[i][nv + i] = 1;
        basis[i] = nv + i;
        for (std::size_t j = 0; j < nv; ++j) cost[j] -= A[i][j];
        obj -= b[i];
    }
    for (;;) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == cols) break;
        std::size_t leave = m;
        Q best;
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] <= 0) continue;
            Q ratio = rhs[i] / T[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) throw InvariantViolation("phase-one objective is bounded below; pivot column cannot be unbounded");
        const Q piv = T[leave][enter];
        for (auto& x : T[leave]) x /= piv;
        rhs[leave] /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || T[i][enter] == 0) continue;
            const Q f = T[i][enter];
            for (std::size_t j = 0; j < cols; ++j)
                if (T[leave][j] != 0) T[i][j] -= f * T[leave][j];
            rhs[i] -= f * rhs[leave];
        }
        if (cost[enter] != 0) {
            const Q f = cost[enter];
            for (std::size_t j = 0; j < cols; ++j)
                if (T[leave][j] != 0) cost[j] -= f * T[leave][j];
            obj -= f * rhs[leave];
        }
        basis[leave] = enter;
    }
    if (obj != 0) return std::nullopt;
    std::vector<Q> x(nv);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < nv) x[basis[i]] = rhs[i];
    return x;
}

/// Integer system; solved in SmallFrac first, in cpp_rational on overflow.
inline std::optional<std::vector<Rational>> feasible_point_int(const std::vector<IntVec>& A, const IntVec& b) {
    try {
        std::vector<std::vector<SmallFrac>> As;
        for (const auto& row : A) As.emplace_back(row.begin(), row.end());
        auto x = feasible_point(std::move(As), std::vector<SmallFrac>(b.begin(), b.end()));
        if (!x) return std::nullopt;
        std::vector<Rational> out;
        for (const auto& q : *x) out.push_back(q.to_rational());
        return out;
    } catch (const std::overflow_error&) {
        std::vector<std::vector<Rational>> Ar;
        for (const auto& row : A) Ar.emplace_back(row.begin(), row.end());
        return feasible_point(std::move(Ar), std::vector<Rational>(b.begin(), b.end()));
    }
}

// ---------------------------------------------------------------------------
// Certificates

struct ConeCertificate {
    enum class Kind { covector, opposite_pair, zero_weight };
    Kind kind = Kind::covector;
    std::vector<BigInt> h;             // covector: <h, chi_i> >= 1 for all i
    std::vector<BigInt> v;             // opposite_pair: v != 0
    std::vector<BigInt> plus_coeffs;   //   v = sum plus_i chi_i
    std::vector<BigInt> minus_coeffs;  //  -v = sum minus_i chi_i
    std::size_t zero_index = 0;        // zero_weight: chi_i = 0

    bool conical() const { return kind == Kind::covector; }

    /// Checks the certificate against W in integer arithmetic.
    bool verify(const WeightData& W) const {
        const std::size_t r = static_cast<std::size_t>(W.rank);
        switch (kind) {
            case Kind::covector: {
                if (h.size() != r) return false;
                for (const auto& chi : W.weights) {
                    BigInt s = 0;
                    for (std::size_t k = 0; k < r; ++k) s += h[k] * chi[k];
                    if (s < 1) return false;
                }
                return true;
            }
            case Kind::zero_weight:
                return zero_index < W.size() && std::all_of(W.weights[zero_index].begin(), W.weights[zero_index].end(), [](i64 x) { return x == 0; });
            case Kind::opposite_pair: {
                if (v.size() != r || plus_coeffs.size() != W.size() || minus_coeffs.size() != W.size()) return false;
                if (std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x == 0; })) return false;
                for (std::size_t k = 0; k < r; ++k) {
                    BigInt sp = 0, sm = 0;
                    for (std::size_t i = 0; i < W.size(); ++i) {
                        if (plus_coeffs[i] < 0 || minus_coeffs[i] < 0) return false;
                        sp += plus_coeffs[i] * W.weights[i][k];
                        sm += minus_coeffs[i] * W.weights[i][k];
                    }
                    if (sp != v[k] || sm != -v[k]) return false;
                }
                return true;
            }
        }
        return false;
    }

    nlohmann::json to_json() const {
        auto arr = [](const std::vector<BigInt>& xs) {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& x : xs) a.push_back(static_cast<long long>(x));
            return a;
        };
        switch (kind) {
            case Kind::covector: return {{"kind", "covector"}, {"h", arr(h)}};
            case Kind::zero_weight: return {{"kind", "zero_weight"}, {"index", zero_index}};
            case Kind::opposite_pair:
                return {{"kind", "opposite_pair"}, {"v", arr(v)}, {"v_coeffs", arr(plus_coeffs)}, {"minus_v_coeffs", arr(minus_coeffs)}};
        }
        return {};
    }
};

namespace detail {

inline BigInt lcm_of_denominators(const std::vector<Rational>& xs) {
    BigInt l = 1;
    for (const auto& x : xs) {
        const BigInt d = boost::multiprecision::denominator(x);
        l = l / boost::multiprecision::gcd(l, d) * d;
    }
    return l;
}

inline std::vector<BigInt> primitive_integers(const std::vector<Rational>& xs) {
    const BigInt l = lcm_of_denominators(xs);
    std::vector<BigInt> out;
    BigInt g = 0;
    for (const auto& x : xs) {
        out.push_back(boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x)));
        g = boost::multiprecision::gcd(g, out.back());
    }
    if (g > 1)
        for (auto& x : out) x /= g;
    return out;
}

}  // namespace detail

struct ConicalResult {
    bool conical = false;
    ConeCertificate certificate;
};

inline void check_conical_bounds(const WeightData& W) {
    if (W.rank > 6 || W.size() > 20) throw ResourceError("conical test supports rank <= 6 and at most 20 weights");
    for (const auto& c : W.weights)
        for (i64 x : c)
            if (x > 50 || x < -50) throw ResourceError("weight coordinates must satisfy |x| <= 50");
}

inline ConicalResult is_conical(const WeightData& W) {
    check_conical_bounds(W);
    const std::size_t r = static_cast<std::size_t>(W.rank), n = W.size();
    ConicalResult res;
    for (std::size_t i = 0; i < n; ++i)
        if (std::all_of(W.weights[i].begin(), W.weights[i].end(), [](i64 x) { return x == 0; })) {
            res.certificate.kind = ConeCertificate::Kind::zero_weight;
            res.certificate.zero_index = i;
            return res;
        }

    // Primal: <h+ - h-, chi_i> - s_i = 1 with h+, h-, s >= 0.
    {
        std::vector<IntVec> A(n, IntVec(2 * r + n, 0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < r; ++k) {
                A[i][k] = W.weights[i][k];
                A[i][r + k] = -W.weights[i][k];
            }
            A[i][2 * r + i] = -1;
        }
        if (auto x = feasible_point_int(A, IntVec(n, 1))) {
            std::vector<Rational> h(r);
            for (std::size_t k = 0; k < r; ++k) h[k] = (*x)[k] - (*x)[r + k];
            res.conical = true;
            res.certificate.kind = ConeCertificate::Kind::covector;
            res.certificate.h = detail::primitive_integers(h);
            return res;
        }
    }

    // Dual: a >= 0, sum a_i chi_i = 0, sum a_i = 1.
    std::vector<IntVec> A(r + 1, IntVec(n, 0));
    IntVec b(r + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < r; ++k) A[k][i] = W.weights[i][k];
        A[r][i] = 1;
    }
    b[r] = 1;
    auto a = feasible_point_int(A, b);
    if (!a) throw InvariantViolation("neither a covector nor a vanishing combination was found");
    const std::vector<BigInt> ai = detail::primitive_integers(*a);
    std::size_t j = 0;
    while (ai[j] == 0) ++j;
    auto& c = res.certificate;
    c.kind = ConeCertificate::Kind::opposite_pair;
    c.plus_coeffs.assign(n, 0);
    c.plus_coeffs[j] = 1;
    c.minus_coeffs = ai;
    c.minus_coeffs[j] -= 1;
    for (std::size_t k = 0; k < r; ++k) c.v.push_back(W.weights[j][k]);
    return res;
}

// ---------------------------------------------------------------------------
// Graded dimensions

enum class PieceKind { sym_of_dual, module_shift };

struct GradedDim {
    std::optional<BigInt> count;  // nullopt is the infinity flag
    bool infinite() const { return !count.has_value(); }
};

/// Number of a in N^n with sum a_i chi_i = goal, given a covector h with <h, chi_i> >= 1.
inline BigInt count_combinations(const WeightData& W, const std::vector<BigInt>& h, const IntVec& goal) {
    const std::size_t n = W.size(), r = static_cast<std::size_t>(W.rank);
    std::vector<BigInt> hchi(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < r; ++k) hchi[i] += h[k] * W.weights[i][k];
    std::map<std::pair<std::size_t, IntVec>, BigInt> memo;
    std::function<BigInt(std::size_t, const IntVec&)> rec = [&](std::size_t i, const IntVec& rest) -> BigInt {
        BigInt level = 0;
        for (std::size_t k = 0; k < r; ++k) level += h[k] * rest[k];
        if (level < 0) return 0;
        if (i == n) return std::all_of(rest.begin(), rest.end(), [](i64 x) { return x == 0; }) ? 1 : 0;
        const auto key = std::make_pair(i, rest);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        BigInt total = 0;
        IntVec cur = rest;
        for (BigInt used = 0; used <= level; used += hchi[i]) {
            total += rec(i + 1, cur);
            for (std::size_t k = 0; k < r; ++k) cur[k] -= W.weights[i][k];
        }
        memo.emplace(key, total);
        return total;
    };
    return rec(0, goal);
}

/// sym_of_dual counts sum a_i chi_i = -target; module_shift counts -target + alpha.
inline GradedDim graded_dim(const WeightData& W, const IntVec& target, PieceKind kind, const IntVec& alpha = {}) {
    if (static_cast<int>(target.size()) != W.rank) throw ParameterError("target must have rank coordinates");
    IntVec goal(target.size());
    for (std::size_t k = 0; k < goal.size(); ++k) goal[k] = -target[k];
    if (kind == PieceKind::module_shift) {
        if (static_cast<int>(alpha.size()) != W.rank) throw ParameterError("shift must have rank coordinates");
        for (std::size_t k = 0; k < goal.size(); ++k) goal[k] += alpha[k];
    }
    const ConicalResult c = is_conical(W);
    if (!c.conical) return {std::nullopt};
    return {count_combinations(W, c.certificate.h, goal)};
}

// ---------------------------------------------------------------------------
// Hodge comparison

class NonConicalError : public ValidationError {
public:
    NonConicalError(const std::string& what, ConeCertificate cert) : ValidationError(what), certificate(std::move(cert)) {}
    ConeCertificate certificate;
};

inline BigInt binomial(long n, long k) {
    if (k < 0 || n < k) return 0;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct HodgeRow {
    int p = 0;
    int a = 0;
    std::size_t shifts = 0;  // number of a-element subsets of the weights
    BigInt dim_quotient;     // weight-0 dimension on the [A^n/T] side
    BigInt dim_bt;           // expected from BT: binom(r+p-1, p) when a = 0, else 0
    bool matches() const { return dim_quotient == dim_bt; }
};

struct HodgeComparison {
    WeightData weights;
    ConeCertificate certificate;
    std::vector<HodgeRow> rows;

    bool passed() const {
        return std::all_of(rows.begin(), rows.end(), [](const HodgeRow& r) { return r.matches(); });
    }

    nlohmann::json to_json() const {
        nlohmann::json rs = nlohmann::json::array();
        for (const auto& r : rows)
            rs.push_back({{"p", r.p}, {"a", r.a}, {"shifts", r.shifts}, {"dim_quotient", static_cast<long long>(r.dim_quotient)},
                          {"dim_bt", static_cast<long long>(r.dim_bt)}, {"match", r.matches()}});
        return {{"weights", weights.to_json()}, {"certificate", certificate.to_json()}, {"rows", rs}, {"passed", passed()}};
    }

    std::string to_ascii() const {
        std::ostringstream os;
        os << std::setw(3) << "p" << std::setw(4) << "a" << std::setw(8) << "shifts" << std::setw(11) << "[A^n/T]" << std::setw(6)
           << "BT" << "  match\n";
        for (const auto& r : rows)
            os << std::setw(3) << r.p << std::setw(4) << r.a << std::setw(8) << r.shifts << std::setw(11) << r.dim_quotient.str()
               << std::setw(6) << r.dim_bt.str() << "  " << (r.matches() ? "yes" : "NO") << "\n";
        return os.str();
    }
};

/// Weight-zero dimensions of the pieces wedge^a(sum A(-chi_i)) (x) Gamma^{p-a}(t^dual (x) A).
inline HodgeComparison hodge_compare_an_t(const WeightData& W, int p_max) {
    if (p_max < 0 || p_max > 4) throw ParameterError("exterior degree cap must satisfy 0 <= p <= 4");
    if (W.rank > 3 || W.size() > 6) throw ParameterError("Hodge comparison supports rank <= 3 and at most 6 weights");
    const ConicalResult c = is_conical(W);
    if (!c.conical) throw NonConicalError("weights are not conical; the comparison needs a proper cone", c.certificate);

    HodgeComparison out{W, c.certificate, {}};
    const std::size_t n = W.size(), r = static_cast<std::size_t>(W.rank);
    for (int p = 0; p <= p_max; ++p) {
        for (int a = 0; a <= p; ++a) {
            HodgeRow row{p, a, 0, 0, 0};
            const BigInt gamma = binomial(W.rank + (p - a) - 1, p - a);
            std::vector<std::size_t> pick;
            std::function<void(std::size_t)> rec = [&](std::size_t start) {
                if (pick.size() == static_cast<std::size_t>(a)) {
                    IntVec shift(r, 0);  // A(-chi_I): shift by -sum chi_I
                    for (auto i : pick)
                        for (std::size_t k = 0; k < r; ++k) shift[k] -= W.weights[i][k];
                    ++row.shifts;
                    row.dim_quotient += count_combinations(W, c.certificate.h, shift) * gamma;
                    return;
                }
                for (std::size_t i = start; i < n; ++i) {
                    pick.push_back(i);
                    rec(i + 1);
                    pick.pop_back();
                }
            };
            rec(0);
            row.dim_bt = a == 0 ? binomial(W.rank + p - 1, p) : BigInt(0);
            out.rows.push_back(row);
        }
    }
    return out;
}

}  // namespace prismlab
