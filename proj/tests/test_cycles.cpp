#include <gtest/gtest.h>

#include "support.hpp"

using namespace pspec;
using namespace testsupport;

TEST(Cycles, KagomeCounts)
{
    const auto g = kagome_lattice();
    const auto s1 = classify(count_walks(g, 1));
    EXPECT_EQ(s1.Nplus, 0);
    EXPECT_EQ(s1.Nodd, 0);
    const auto s2 = classify(count_walks(g, 2));
    EXPECT_EQ(s2.N0, 12);
    EXPECT_EQ(s2.Nplus, 12);
    EXPECT_EQ(s2.Nodd, 8);
    const auto s3 = classify(count_walks(g, 3));
    EXPECT_EQ(s3.N0, 12);
    EXPECT_EQ(s3.Nplus, 36);
    EXPECT_EQ(s3.Nodd, 24);
}

TEST(Cycles, KagomeSecondPowerCoefficients)
{
    const auto w = count_walks(kagome_lattice(), 2);
    const std::map<IndexVec, double> want{{{0, 0}, 12}, {{1, 0}, 2}, {{-1, 0}, 2}, {{0, 1}, 2},
                                          {{0, -1}, 2}, {{1, -1}, 2}, {{-1, 1}, 2}};
    EXPECT_EQ(w.by_index, want);
}

TEST(Cycles, SingleLoop)
{
    const auto w = count_walks(zd_lattice(1), 1);
    EXPECT_EQ(w.by_index, (std::map<IndexVec, double>{{{-1}, 1}, {{1}, 1}}));
    EXPECT_THROW(count_walks(zd_lattice(1), 0), InputError);
    EXPECT_THROW(count_walks(kagome_lattice(), 20), CapExceeded);
}

TEST(Cycles, CountsMatchFourierCoefficientsOfTrace)
{
    for (const auto& g : all_builtins())
        for (int n = 1; n <= 4; ++n) {
            const auto oracle = fourier_trace(g, OperatorKind::adjacency, n);
            const auto w = count_walks(g, n);
            for (const auto& [m, c] : oracle) EXPECT_NEAR(w.at(m), c.real(), 1e-9) << to_key(m);
            for (const auto& [m, c] : w.by_index) EXPECT_TRUE(oracle.count(m)) << to_key(m);
        }
}

TEST(Cycles, WalkEngineMatchesOracleForEveryKind)
{
    std::mt19937_64 rng(21);
    for (auto g : all_builtins()) {
        g = g.with_potential(random_potential(rng, g.num_vertices()));
        for (auto kind : kAllOperatorKinds)
            for (int n = 1; n <= 3; ++n) {
                const auto oracle = fourier_trace(g, kind, n);
                const auto p = walk_trace_series(g, kind, n);
                for (const auto& [m, c] : oracle) EXPECT_LT(std::abs(p.coeff(m) - c), 1e-9) << to_string(kind);
                for (const auto& [m, c] : p.terms())
                    if (std::abs(c) > 1e-9) EXPECT_TRUE(oracle.count(m)) << to_string(kind) << " " << to_key(m);
            }
    }
}

TEST(Cycles, DualEnginesAgree)
{
    std::mt19937_64 rng(22);
    for (auto g : all_builtins()) {
        g = g.with_potential(random_potential(rng, g.num_vertices()));
        for (auto kind : kAllOperatorKinds)
            for (int n = 1; n <= 4; ++n) EXPECT_LE(verify_trace_series(g, kind, n), kDualEngineTol);
    }
}

TEST(Cycles, CountsFromSeries)
{
    const auto g = hexagonal_lattice();
    const auto p = trace_series(g, OperatorKind::adjacency, 4);
    EXPECT_EQ(counts_from_series(p, 4).by_index, count_walks(g, 4).by_index);
    LaurentPoly bad(1);
    bad.add_term({0}, 0.5);
    EXPECT_THROW(counts_from_series(bad, 1), ConsistencyError);
}

TEST(Cycles, WeightedSumsDominateCounts)
{
    std::mt19937_64 rng(23);
    for (auto g : all_builtins()) {
        g = g.with_potential(random_potential(rng, g.num_vertices(), -3.0, 3.0));
        for (int n = 1; n <= 4; ++n) {
            const auto s = classify(count_walks(g, n), weighted_walk_sums(g, n));
            EXPECT_GE(s.Bn1, s.Nplus - 1e-9);
            EXPECT_GE(s.Bn2, 2.0 * s.Nodd - 1e-9);
        }
    }
}

TEST(Cycles, ZeroLoopWeightsReduceToCounts)
{
    // V = kappa makes every loop weight vanish
    const auto g = kagome_lattice().with_potential(std::vector<double>{4, 4, 4});
    for (int n = 1; n <= 3; ++n) {
        const auto s = classify(count_walks(g, n), weighted_walk_sums(g, n));
        EXPECT_DOUBLE_EQ(s.Bn1, double(s.Nplus));
        EXPECT_DOUBLE_EQ(s.Bn2, 2.0 * s.Nodd);
        EXPECT_DOUBLE_EQ(s.Tn0, double(s.N0));
    }
}

TEST(Cycles, RegularNormalizedWeightsAreScaledCounts)
{
    for (const char* name : {"kagome", "hexagonal", "zd(2)", "square_diag"}) {
        const auto g = builtin_graph(name);
        const double kappa = vertex_degrees(g)[0];
        for (int n = 1; n <= 4; ++n) {
            const auto s = classify(count_walks(g, n), normalized_walk_sums(g, n));
            const double scale = std::pow(kappa, n);
            EXPECT_NEAR(s.Bn1, s.Nplus / scale, 1e-12) << name;
            EXPECT_NEAR(s.Bn2, 2.0 * s.Nodd / scale, 1e-12) << name;
        }
    }
}

TEST(Cycles, GaugeKeepsClassCounts)
{
    std::mt19937_64 rng(24);
    for (const auto& g : all_builtins()) {
        const auto h = gauge_transform(g, random_gauge(rng, g));
        for (int n = 1; n <= 4; ++n) EXPECT_EQ(count_walks(g, n).by_index, count_walks(h, n).by_index);
    }
}
