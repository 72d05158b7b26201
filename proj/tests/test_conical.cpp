#include <gtest/gtest.h>

#include "oracles.hpp"
#include "prismlab/conical.hpp"

using namespace prismlab;

namespace {

WeightData W(int r, std::vector<IntVec> w) { return WeightData(r, std::move(w)); }

long long dim(const WeightData& w, IntVec target) {
    auto d = graded_dim(w, target, PieceKind::sym_of_dual);
    EXPECT_FALSE(d.infinite());
    return d.infinite() ? -1 : static_cast<long long>(*d.count);
}

}  // namespace

TEST(Conical, PositiveLine) {
    auto w = W(1, {{1}, {1}});
    auto res = is_conical(w);
    EXPECT_TRUE(res.conical);
    ASSERT_EQ(res.certificate.h.size(), 1u);
    EXPECT_EQ(res.certificate.h[0], 1);
    EXPECT_TRUE(res.certificate.verify(w));
}

TEST(Conical, OppositeWeights) {
    auto w = W(1, {{1}, {-1}});
    auto res = is_conical(w);
    EXPECT_FALSE(res.conical);
    EXPECT_EQ(res.certificate.kind, ConeCertificate::Kind::opposite_pair);
    EXPECT_TRUE(res.certificate.verify(w));
    ASSERT_EQ(res.certificate.v.size(), 1u);
    EXPECT_EQ(abs(res.certificate.v[0]), 1);
}

TEST(Conical, PlaneExample) {
    auto w = W(2, {{1, 0}, {0, 1}, {1, 1}});
    auto res = is_conical(w);
    ASSERT_TRUE(res.conical);
    EXPECT_TRUE(res.certificate.verify(w));
    EXPECT_EQ(res.certificate.h, (std::vector<BigInt>{1, 1}));
}

TEST(Conical, ZeroWeight) {
    auto w = W(2, {{1, 0}, {0, 0}});
    auto res = is_conical(w);
    EXPECT_FALSE(res.conical);
    EXPECT_EQ(res.certificate.kind, ConeCertificate::Kind::zero_weight);
    EXPECT_EQ(res.certificate.zero_index, 1u);
    EXPECT_TRUE(res.certificate.verify(w));
}

TEST(Conical, HiddenRelation) {
    // (2,1) + (-1,1) + (-1,-2) = 0, though no two weights are opposite
    auto w = W(2, {{2, 1}, {-1, 1}, {-1, -2}});
    auto res = is_conical(w);
    EXPECT_FALSE(res.conical);
    EXPECT_TRUE(res.certificate.verify(w));
}

TEST(Conical, TamperedCertificateFails) {
    auto w = W(2, {{1, 0}, {0, 1}, {1, 1}});
    auto cert = is_conical(w).certificate;
    cert.h = {1, -1};
    EXPECT_FALSE(cert.verify(w));
}

TEST(Conical, Bounds) {
    EXPECT_THROW(is_conical(W(1, {{51}})), ResourceError);
    EXPECT_THROW(is_conical(W(7, {IntVec(7, 1)})), ResourceError);
    EXPECT_THROW(W(2, {{1}}), ParameterError);
    EXPECT_THROW(W(1, {}), ParameterError);
}

TEST(GradedDim, StarsAndBars) {
    auto w = W(1, {{1}, {1}});
    for (int d = 0; d <= 12; ++d) EXPECT_EQ(dim(w, {-d}), d + 1);
    EXPECT_EQ(dim(w, {3}), 0);
}

TEST(GradedDim, Examples) {
    EXPECT_EQ(dim(W(2, {{1, 0}, {0, 1}}), {-2, -1}), 1);
    for (auto w : {W(1, {{2}, {3}}), W(2, {{1, 0}, {0, 1}, {1, 1}}), W(2, {{1, 2}, {3, -1}, {1, 1}})}) EXPECT_EQ(dim(w, IntVec(w.rank, 0)), 1);
    // (1,0),(0,1),(1,1) at (-2,-2): x^2y^2, xy z, z^2
    EXPECT_EQ(dim(W(2, {{1, 0}, {0, 1}, {1, 1}}), {-2, -2}), 3);
}

TEST(GradedDim, ModuleShift) {
    auto w = W(1, {{1}, {1}});
    auto d = graded_dim(w, {0}, PieceKind::module_shift, {3});
    ASSERT_FALSE(d.infinite());
    EXPECT_EQ(*d.count, 4);
    EXPECT_EQ(*graded_dim(w, {0}, PieceKind::module_shift, {-1}).count, 0);
    EXPECT_THROW(graded_dim(w, {0}, PieceKind::module_shift), ParameterError);
}

TEST(GradedDim, InfiniteFlag) {
    EXPECT_TRUE(graded_dim(W(1, {{1}, {-1}}), {0}, PieceKind::sym_of_dual).infinite());
    EXPECT_TRUE(graded_dim(W(1, {{1}, {0}}), {-1}, PieceKind::sym_of_dual).infinite());
}

TEST(GradedDim, AgreesWithBoundedCount) {
    // For a conical set every solution has a_i <= <h, goal>, so a bound of 12 is exact here.
    auto w = W(2, {{1, 0}, {1, 1}, {1, -1}, {2, 1}});
    for (i64 x = 0; x <= 5; ++x)
        for (i64 y = -5; y <= 5; ++y)
            EXPECT_EQ(dim(w, {-x, -y}), static_cast<long long>(oracle::bounded_combinations(w.weights, {x, y}, 12))) << x << "," << y;
}

TEST(GradedDim, DecreasesToZero) {
    auto w = W(2, {{1, 0}, {0, 1}, {1, 1}});
    // Moving the target along +h eventually leaves the cone.
    for (int s = 0; s <= 6; ++s) EXPECT_EQ(dim(w, {s, 0}), s == 0 ? 1 : 0);
}

TEST(Hodge, Examples) {
    auto line = hodge_compare_an_t(W(1, {{1}, {1}}), 1);
    EXPECT_TRUE(line.passed());
    ASSERT_EQ(line.rows.size(), 3u);  // (p,a) = (0,0), (1,0), (1,1)
    EXPECT_EQ(line.rows[0].dim_quotient, 1);
    EXPECT_EQ(line.rows[1].dim_quotient, 1);
    EXPECT_EQ(line.rows[2].dim_quotient, 0);
    EXPECT_EQ(line.rows[2].shifts, 2u);

    auto plane = hodge_compare_an_t(W(2, {{1, 0}, {0, 1}, {1, 1}}), 2);
    EXPECT_TRUE(plane.passed());
    for (const auto& row : plane.rows) {
        if (row.p == 2 && row.a == 0) {
            EXPECT_EQ(row.dim_quotient, 3);
        }
        if (row.a >= 1) {
            EXPECT_EQ(row.dim_quotient, 0);
        }
    }
    EXPECT_NE(plane.to_ascii().find("match"), std::string::npos);
    EXPECT_TRUE(plane.to_json().at("passed").get<bool>());
}

TEST(Hodge, Errors) {
    try {
        hodge_compare_an_t(W(1, {{1}, {-1}}), 2);
        FAIL() << "expected NonConicalError";
    } catch (const NonConicalError& e) {
        EXPECT_EQ(e.certificate.kind, ConeCertificate::Kind::opposite_pair);
    }
    EXPECT_THROW(hodge_compare_an_t(W(1, {{1}}), 5), ParameterError);
    EXPECT_THROW(hodge_compare_an_t(W(4, {IntVec(4, 1)}), 1), ParameterError);
}

TEST(Conical, GridAgreesWithPlusMinusSearch) {
    // Rank 1 in full, rank 2 up to three weights; the acceptance run covers the whole grid.
    oracle::ReachTable table(8);
    int checked = 0;
    oracle::for_each_weight_set(2, 3, 3, [&](int r, const std::vector<std::vector<i64>>& w) {
        WeightData wd(r, w);
        auto res = is_conical(wd);
        ASSERT_EQ(res.conical, table.conical(w)) << wd.to_json().dump();
        ASSERT_TRUE(res.certificate.verify(wd));
        if (res.conical) {
            ASSERT_EQ(table.count(0, 0), 1u);
            auto h = hodge_compare_an_t(wd, 3);
            for (const auto& row : h.rows) {
                ASSERT_TRUE(row.matches());
                const BigInt gamma = binomial(r + (row.p - row.a) - 1, row.p - row.a);
                ASSERT_EQ(row.dim_quotient, row.a == 0 ? gamma : BigInt(0));
            }
        }
        ++checked;
    });
    EXPECT_GT(checked, 20000);
}

TEST(WeightIO, JsonAndCsv) {
    auto w = WeightData::from_json(nlohmann::json::parse(R"({"rank":2,"weights":[[1,0],[0,1],[1,1]]})"));
    EXPECT_EQ(w.size(), 3u);
    EXPECT_EQ(WeightData::from_json(w.to_json()).weights, w.weights);
    auto c = WeightData::from_csv("# weights\n1,0\n0 1\n1, 1  # last\n\n");
    EXPECT_EQ(c.rank, 2);
    EXPECT_EQ(c.weights, w.weights);
    EXPECT_THROW(WeightData::from_csv("1,0\n1\n"), ParameterError);
}
