#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "prismlab/witt.hpp"

using namespace prismlab;

namespace {

std::vector<u64> comps(const WittVector& w) {
    std::vector<u64> c;
    for (const auto& x : w.components()) c.push_back(x[0]);
    return c;
}

WittVector wv(const std::shared_ptr<const CoeffRing>& R, std::initializer_list<i64> xs) {
    std::vector<RingElem> c;
    for (i64 x : xs) c.push_back(R->from_int(x));
    return WittVector(R, c);
}

}  // namespace

TEST(WittPolys, SmallCases) {
    const auto& W = universal_witt_polys(2, 2);
    const auto names = W.variable_names();
    Poly x0 = Poly::variable(4, 0), x1 = Poly::variable(4, 1), y0 = Poly::variable(4, 2), y1 = Poly::variable(4, 3);
    EXPECT_EQ(W.sum[0], x0 + y0);
    EXPECT_EQ(W.sum[1], x1 + y1 - x0 * y0);
    EXPECT_EQ(W.prod[1], x0 * x0 * y1 + y0 * y0 * x1 + (x1 * y1).scaled(2));
    for (u64 p : {3u, 5u}) EXPECT_EQ(universal_witt_polys(p, 1).sum[0], x0.embedded(2, {0}) + Poly::variable(2, 1));
}

TEST(WittVector, SpecAdditions) {
    auto F2 = CoeffRing::residue(2, 1), F3 = CoeffRing::residue(3, 1);
    EXPECT_EQ(wv(F2, {1, 0}) + wv(F2, {1, 0}), wv(F2, {0, 1}));
    EXPECT_EQ(wv(F3, {1, 0}) + wv(F3, {1, 0}) + wv(F3, {1, 0}), wv(F3, {0, 1}));
    auto a = wv(F3, {2, 1});
    EXPECT_EQ(a + WittVector::zero(F3, 2), a);
}

TEST(WittVector, Teichmuller) {
    auto F5 = CoeffRing::residue(5, 1);
    EXPECT_EQ(WittVector::one(F5, 3), wv(F5, {1, 0, 0}));
    auto t2 = WittVector::teichmuller(F5, F5->from_int(2), 3);
    EXPECT_EQ(t2.pow(4), WittVector::teichmuller(F5, F5->one(), 3));

    auto R = CoeffRing::truncated_poly(2, 4);
    std::mt19937_64 gen(3);
    for (int t = 0; t < 200; ++t) {
        auto x = R->from_coeffs({static_cast<i64>(gen() % 2), static_cast<i64>(gen() % 2), static_cast<i64>(gen() % 2), static_cast<i64>(gen() % 2)});
        auto y = R->from_coeffs({static_cast<i64>(gen() % 2), static_cast<i64>(gen() % 2), static_cast<i64>(gen() % 2), static_cast<i64>(gen() % 2)});
        EXPECT_EQ(WittVector::teichmuller(R, x, 3) * WittVector::teichmuller(R, y, 3), WittVector::teichmuller(R, R->mul(x, y), 3));
    }
}

TEST(WittVector, FrobeniusVerschiebung) {
    auto F2 = CoeffRing::residue(2, 1), F3 = CoeffRing::residue(3, 1);
    EXPECT_EQ(wv(F2, {1, 0, 0}).verschiebung(), wv(F2, {0, 1, 0}));
    std::mt19937_64 gen(5);
    for (int t = 0; t < 100; ++t) {
        auto a = wv(F3, {static_cast<i64>(gen() % 3), static_cast<i64>(gen() % 3), static_cast<i64>(gen() % 3)});
        EXPECT_EQ(a.verschiebung().frobenius(), a.times_integer(3));
    }
    for (i64 x = 0; x < 3; ++x) {
        auto t = WittVector::teichmuller(F3, F3->from_int(x), 3);
        EXPECT_EQ(t.frobenius(), t);
    }
}

TEST(WittVector, GhostHomomorphismAgainstDirectGhost) {
    std::mt19937_64 gen(17);
    for (u64 p : {2u, 3u, 5u}) {
        for (int n = 1; n <= 3; ++n) {
            auto R = CoeffRing::residue(p, n + 2);
            const u64 q = R->characteristic();
            for (int t = 0; t < 1000; ++t) {
                std::vector<u64> xs, ys;
                std::vector<RingElem> xc, yc;
                for (int i = 0; i < n; ++i) {
                    xs.push_back(gen() % q);
                    ys.push_back(gen() % q);
                    xc.push_back(R->from_int(static_cast<i64>(xs.back())));
                    yc.push_back(R->from_int(static_cast<i64>(ys.back())));
                }
                const WittVector x(R, xc), y(R, yc);
                auto gx = oracle::ghost_direct(xs, p, q), gy = oracle::ghost_direct(ys, p, q);
                auto gs = oracle::ghost_direct(comps(x + y), p, q), gp = oracle::ghost_direct(comps(x * y), p, q);
                for (int k = 0; k < n; ++k) {
                    const auto i = static_cast<std::size_t>(k);
                    ASSERT_EQ(gs[i], (gx[i] + gy[i]) % q) << "p=" << p << " n=" << n;
                    ASSERT_EQ(gp[i], modular::mulmod(gx[i], gy[i], q)) << "p=" << p << " n=" << n;
                }
            }
        }
    }
}

TEST(WittVector, GhostReportMatchesLibrary) {
    auto rep = check_ghost_homomorphism(3, 2, 4, 50, 1);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.coefficient_precision, 4);
}

TEST(WittVector, FiniteFieldIsIntegersModPowerOfTwo) {
    auto F2 = CoeffRing::residue(2, 1);
    for (int n = 1; n <= 3; ++n) {
        const u64 q = u64{1} << n;
        std::vector<std::vector<u64>> all;
        for (u64 m = 0; m < q; ++m) {
            std::vector<u64> v;
            for (int i = 0; i < n; ++i) v.push_back((m >> i) & 1);
            all.push_back(v);
        }
        std::set<u64> image;
        for (const auto& a : all) {
            image.insert(oracle::witt_to_int(a, 2));
            for (const auto& b : all) {
                std::vector<RingElem> ac, bc;
                for (u64 x : a) ac.push_back(F2->from_int(static_cast<i64>(x)));
                for (u64 x : b) bc.push_back(F2->from_int(static_cast<i64>(x)));
                const WittVector wa(F2, ac), wb(F2, bc);
                EXPECT_EQ(oracle::witt_to_int(comps(wa + wb), 2), (oracle::witt_to_int(a, 2) + oracle::witt_to_int(b, 2)) % q);
                EXPECT_EQ(oracle::witt_to_int(comps(wa * wb), 2), oracle::witt_to_int(a, 2) * oracle::witt_to_int(b, 2) % q);
            }
        }
        EXPECT_EQ(image.size(), q);
        EXPECT_EQ(witt_to_integer(WittVector::from_integer(F2, n, 5)), 5 % q);
    }
}

TEST(WittVector, Errors) {
    auto F2 = CoeffRing::residue(2, 1), F3 = CoeffRing::residue(3, 1);
    EXPECT_THROW(wv(F2, {1}) + wv(F3, {1}), ParameterError);
    EXPECT_THROW(universal_witt_polys(5, 5), ResourceError);
    EXPECT_THROW(universal_witt_polys(4, 2), ParameterError);
}
