#include <gtest/gtest.h>

#include "oracles.hpp"
#include "prismlab/chern.hpp"

using namespace prismlab;

namespace {

Poly base_poly(const GradedRing& base, const std::string& s) { return parse_base_class(base, s); }

BundleData bundle(std::vector<int> proj, int rank, const std::string& total, std::vector<std::string> lines = {}) {
    const auto base = projective_product_ring(proj);
    std::optional<std::vector<Poly>> ls;
    if (!lines.empty()) {
        ls.emplace();
        for (const auto& l : lines) ls->push_back(base_poly(base, l));
    }
    return BundleData(proj, rank, base_poly(base, total), ls);
}

}  // namespace

TEST(Symmetric, ElementaryBySubsets) {
    for (std::size_t r = 1; r <= 6; ++r)
        for (std::size_t i = 0; i <= r; ++i) EXPECT_EQ(elementary_symmetric(i, r).poly, oracle::sigma_by_subsets(i, r, r));
    EXPECT_EQ(elementary_symmetric(1, 3).to_string(), parse_poly("t1 + t2 + t3", indexed_names("t", 3)).to_string(indexed_names("t", 3)));
    EXPECT_EQ(elementary_symmetric(2, 2).poly, parse_poly("t1*t2", indexed_names("t", 2)));
    EXPECT_EQ(elementary_symmetric(3, 4).poly.terms().size(), 4u);
}

TEST(Symmetric, FundamentalTheoremRoundTrip) {
    const auto names = indexed_names("t", 3);
    for (const char* text : {"t1^2 + t2^2 + t3^2", "t1^3 + t2^3 + t3^3", "(t1 - t2)^2*(t1 - t3)^2*(t2 - t3)^2", "t1*t2*t3 + 4", "(t1 + t2)*(t1 + t3)*(t2 + t3)"}) {
        const auto f = make_sympoly(parse_poly(text, names), 3);
        ASSERT_TRUE(f.symmetric) << text;
        const Poly g = symmetric_to_elementary(f);
        std::vector<Poly> sig;
        for (std::size_t i = 1; i <= 3; ++i) sig.push_back(oracle::sigma_by_subsets(i, 3, 3));
        EXPECT_EQ(g.compose(sig), f.poly) << text;
    }
    EXPECT_EQ(symmetric_to_elementary(make_sympoly(parse_poly("t1^2 + t2^2", indexed_names("t", 2)), 2)),
              parse_poly("c1^2 - 2*c2", indexed_names("c", 2)));
    EXPECT_THROW(symmetric_to_elementary(make_sympoly(parse_poly("t1", indexed_names("t", 2)), 2)), ValidationError);
}

TEST(Whitney, SplitsForAllSmallRanks) {
    for (std::size_t r1 = 0; r1 <= 6; ++r1)
        for (std::size_t r2 = 0; r1 + r2 <= 6; ++r2) {
            const auto w = whitney_check(r1, r2);
            EXPECT_TRUE(w.holds()) << r1 << "+" << r2;
            // independent form: sigma_k of all roots = sum_i sigma_i(first) sigma_{k-i}(second)
            const std::size_t r = r1 + r2;
            for (std::size_t k = 0; k <= r; ++k) {
                Poly rhs(r);
                for (std::size_t i = 0; i <= k; ++i) {
                    if (i > r1 || k - i > r2) continue;
                    rhs += oracle::sigma_by_subsets(i, r1, r, 0) * oracle::sigma_by_subsets(k - i, r2, r, r1);
                }
                EXPECT_EQ(oracle::sigma_by_subsets(k, r, r), rhs);
            }
        }
    const auto w = whitney_check(1, 1);
    EXPECT_EQ(w.lhs, parse_poly("1 + (t1 + t2)*x + t1*t2*x^2", w.names));
    EXPECT_THROW(whitney_check(7, 0), ResourceError);
}

TEST(FlagBundle, RanksOverPoint) {
    const auto pt = projective_product_ring({});
    for (int r = 1; r <= 5; ++r) {
        std::vector<Poly> zero(static_cast<std::size_t>(r), Poly(0));
        const auto B = flag_bundle_ring(pt, zero, r);
        u64 fact = 1;
        for (int i = 2; i <= r; ++i) fact *= static_cast<u64>(i);
        EXPECT_EQ(B.rank, fact);
        EXPECT_EQ(B.fibre_basis.size(), fact);
        EXPECT_TRUE(B.certified);
        const int D = r * (r - 1) + 2;
        EXPECT_EQ(B.ring.poincare(D).coeffs, oracle::q_factorial(r, D)) << r;
    }
    std::vector<Poly> zero2(2, Poly(0));
    EXPECT_EQ(flag_bundle_ring(pt, zero2, 2).ring.poincare(4).coeffs, (std::vector<u64>{1, 0, 1, 0, 0}));
}

TEST(FlagBundle, RootsSatisfyChernRelations) {
    const auto E = bundle({2}, 3, "1 + 2*x + x^2");
    const auto B = flag_bundle_ring(E.base(), chern_classes(E), 3);
    EXPECT_TRUE(B.certified);
    const auto& R = B.ring;
    EXPECT_EQ(R.reduce(R.parse("xi1 + xi2 + xi3")), R.parse("2*x1"));
    EXPECT_EQ(R.reduce(R.parse("xi1*xi2 + xi1*xi3 + xi2*xi3")), R.parse("x1^2"));
    EXPECT_TRUE(R.reduce(R.parse("xi1*xi2*xi3")).is_zero());
    // rank 6 over a base with series 1 + t^2 + t^4
    std::vector<u64> base{1, 0, 1, 0, 1};
    const auto fib = oracle::q_factorial(3, 10);
    std::vector<u64> want(11, 0);
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = 0; i + j <= 10; ++j) want[i + j] += base[i] * fib[j];
    EXPECT_EQ(R.poincare(10).coeffs, want);

    const auto L = bundle({1}, 1, "1 + x");
    const auto F1 = flag_bundle_ring(L.base(), chern_classes(L), 1);
    EXPECT_EQ(F1.rank, 1u);
    EXPECT_EQ(F1.ring.poincare(6), L.base().poincare(6));
}

TEST(ProjectiveBundle, Presentations) {
    const auto pt = projective_product_ring({});
    for (int r = 1; r <= 5; ++r) {
        std::vector<Poly> zero(static_cast<std::size_t>(r), Poly(0));
        const auto B = projective_bundle_ring(pt, zero, r);
        EXPECT_EQ(B.rank, static_cast<std::size_t>(r));
        EXPECT_TRUE(B.certified);
        EXPECT_EQ(B.ring.poincare(2 * r + 2).coeffs, make_projective_space(r - 1).poincare(2 * r + 2).coeffs);
    }
    const auto E = bundle({1}, 2, "1 + x", {"0", "x"});
    const auto B = projective_bundle_ring(E.base(), chern_classes(E), 2);
    EXPECT_EQ(B.ring.reduce(B.ring.parse("xi^2")), B.ring.parse("-x1*xi"));
    u64 total = 0;
    for (auto c : B.ring.poincare(10).coeffs) total += c;
    EXPECT_EQ(total, 4u);

    const auto L = bundle({1}, 1, "1 + x");
    const auto P = projective_bundle_ring(L.base(), chern_classes(L), 1);
    EXPECT_EQ(P.ring.reduce(P.ring.parse("xi")), P.ring.parse("-x1"));
    EXPECT_EQ(P.ring.poincare(6), L.base().poincare(6));
}

TEST(ChernNumber, SpecValues) {
    for (int n = 1; n <= 5; ++n) {
        const auto O1 = bundle({n}, 1, "1 + x");
        Poly f = parse_chern_polynomial("c1", 1).pow(static_cast<unsigned>(n));
        EXPECT_EQ(chern_number(f, O1).value, 1) << n;
    }
    const auto O11 = bundle({1, 1}, 1, "1 + x1 + x2", {"x1 + x2"});
    const auto c = chern_number(parse_chern_polynomial("c1^2", 1), O11);
    EXPECT_EQ(c.value, 2);
    EXPECT_EQ(c.valuations.at(2), 1);
    EXPECT_EQ(c.valuations.at(3), 0);
    EXPECT_EQ(chern_number_via_roots(parse_chern_polynomial("c1^2", 1), O11).value, 2);

    const auto split = bundle({1, 1}, 2, "1 + x1 + x2 + x1*x2", {"x1", "x2"});
    EXPECT_EQ(chern_number(parse_chern_polynomial("c2", 2), split).value, 1);
    EXPECT_EQ(chern_number_via_roots(parse_chern_polynomial("c2", 2), split).value, 1);
}

TEST(ChernNumber, TangentBundles) {
    // T P^n: c = (1 + x)^{n+1}; integral of c_n is n + 1, of c_1^n is (n + 1)^n.
    for (int n = 1; n <= 4; ++n) {
        const auto base = projective_product_ring({n});
        const Poly total = base.reduce(base.parse("1 + x1").pow(static_cast<unsigned>(n + 1)));
        const BundleData T({n}, n, total);
        Poly cn(static_cast<std::size_t>(n));
        Exponents e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(n - 1)] = 1;
        cn.add_term(e, 1);
        EXPECT_EQ(chern_number(cn, T).value, n + 1);
        Exponents e1(static_cast<std::size_t>(n), 0);
        e1[0] = static_cast<std::uint32_t>(n);
        BigInt want = 1;
        for (int i = 0; i < n; ++i) want *= n + 1;
        EXPECT_EQ(chern_number(Poly::monomial(e1, 1), T).value, want);
    }
    const auto T = bundle({1, 1}, 2, "1 + 2*x1 + 2*x2 + 4*x1*x2", {"2*x1", "2*x2"});
    EXPECT_EQ(chern_number(parse_chern_polynomial("c1^2", 2), T).value, 8);
    EXPECT_EQ(chern_number(parse_chern_polynomial("c2", 2), T).value, 4);
}

TEST(ChernNumber, ValuationsIgnoreUnitRescaling) {
    const auto T = bundle({1, 1}, 2, "1 + 2*x1 + 2*x2 + 4*x1*x2", {"2*x1", "2*x2"});
    for (const char* f : {"c1^2", "c2", "c1^2 - c2", "3*c2"}) {
        const Poly g = parse_chern_polynomial(f, 2);
        ChernNumberOptions base_opt;
        base_opt.primes = {2, 3, 5};
        const auto ref = chern_number(g, T, base_opt);
        for (int unit : {-1, 7, 11, 49, -13}) {
            ChernNumberOptions opt = base_opt;
            opt.volume_unit = unit;
            const auto got = chern_number(g, T, opt);
            EXPECT_EQ(got.value, ref.value * unit);
            EXPECT_EQ(got.valuations, ref.valuations) << f << " unit " << unit;
        }
    }
    ChernNumberOptions bad;
    bad.volume_unit = 6;
    EXPECT_THROW(chern_number(parse_chern_polynomial("c2", 2), T, bad), NotAUnitError);
}

TEST(ChernNumber, RootsAgreeWithClasses) {
    const std::vector<BundleData> bundles = {
        bundle({1, 1}, 2, "1 + x1 + x2 + x1*x2", {"x1", "x2"}),
        bundle({2}, 2, "1 + 3*x + 2*x^2", {"x", "2*x"}),
        bundle({1, 2}, 3, "(1 + x1)*(1 + x2)*(1 - x1 + x2)", {"x1", "x2", "x2 - x1"}),
        bundle({3}, 3, "(1 + x)^2*(1 - 2*x)", {"x", "x", "-2*x"})};
    for (const auto& E : bundles) {
        const std::size_t r = static_cast<std::size_t>(E.rank());
        // all monomials c^a of weighted degree dim
        std::function<void(std::size_t, int, Exponents&)> rec = [&](std::size_t i, int left, Exponents& e) {
            if (i == r) {
                if (left) return;
                const Poly f = Poly::monomial(e, 1);
                EXPECT_EQ(chern_number(f, E).value, chern_number_via_roots(f, E).value) << f.to_string(indexed_names("c", r));
                return;
            }
            for (int a = 0; a * static_cast<int>(i + 1) <= left; ++a) {
                e[i] = static_cast<std::uint32_t>(a);
                rec(i + 1, left - a * static_cast<int>(i + 1), e);
            }
            e[i] = 0;
        };
        Exponents e(r, 0);
        rec(0, E.dim(), e);
    }
}

TEST(ChernNumber, SymmetricInput) {
    const auto split = bundle({1, 1}, 2, "1 + x1 + x2 + x1*x2", {"x1", "x2"});
    const auto f = make_sympoly(parse_poly("t1^2 + t2^2", indexed_names("t", 2)), 2);
    // c1^2 - 2 c2 = 2 - 2
    EXPECT_EQ(chern_number(f, split).value, 0);
    EXPECT_FALSE(chern_number(f, split).valuations.at(2).has_value());
}

TEST(Bundles, ValidationAndJson) {
    EXPECT_THROW(bundle({1}, 1, "2 + x"), ValidationError);
    EXPECT_THROW(bundle({2}, 1, "1 + x + x^2"), ValidationError);
    EXPECT_THROW(bundle({1, 1}, 1, "1 + x1", {"x2"}), ValidationError);
    EXPECT_THROW(chern_number(parse_chern_polynomial("c1", 1), bundle({2}, 1, "1 + x")), DegreeError);

    const auto E = bundle({1, 2}, 2, "1 + x1 + x2 + x1*x2", {"x1", "x2"});
    const auto back = BundleData::from_json(nlohmann::json::parse(E.to_json().dump()));
    EXPECT_EQ(back.to_json(), E.to_json());
    EXPECT_EQ(back.total_chern(), E.total_chern());
    const auto single = BundleData::from_json(nlohmann::json::parse(R"({"base":{"proj":[3]},"rank":1,"total_chern":"1 + x"})"));
    EXPECT_EQ(single.chern_class(1), single.base().parse("x1"));
}
