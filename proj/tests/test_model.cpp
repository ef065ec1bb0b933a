#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "qmb/model.hpp"

using namespace qmb;

TEST(CouplingMatrix, ZeroParamsGiveZeroMatrix) {
    const auto m = build_coupling_matrix({0.0, 0.0, 0.0, 0.0, 0.0});
    EXPECT_TRUE(m.entries.isZero(0.0));
}

TEST(CouplingMatrix, ResonantUnitCouplings) {
    const auto m = build_coupling_matrix({1.0, 0.0, 1.0, 1.0, 0.0}).entries;
    RealMatrix6 expected = RealMatrix6::Zero();
    expected(3, 4) = expected(4, 3) = 1.0;
    expected(4, 5) = expected(5, 4) = 1.0;
    expected(0, 3) = expected(3, 0) = 1.0;
    expected(1, 4) = expected(4, 1) = 1.0;
    expected(2, 5) = expected(5, 2) = 1.0;
    EXPECT_EQ(m, expected);
    EXPECT_TRUE(m.diagonal().isZero(0.0));
}

TEST(CouplingMatrix, DiagonalCarriesDetuning) {
    const SystemParams p{0.5, 0.3, 0.8, 0.9, 0.0};
    const auto m = build_coupling_matrix(p).entries;
    Eigen::Matrix<double, kDim, 1> diag;
    diag << 0.3, 0.0, -0.3, 0.3, 0.0, -0.3;
    EXPECT_EQ(m.diagonal(), diag);
    // d/dt s1 = -i (delta s1 + f2 a1) in this convention
    EXPECT_EQ(m(0, 0), p.delta);
    EXPECT_EQ(m(0, 3), p.f2);
}

TEST(CouplingMatrix, MatchesLiteralEquationsUpToSiteRelabeling) {
    oracle::ParamSampler draw(11);
    const RealMatrix6 swap = oracle::site_swap();
    for (int i = 0; i < 200; ++i) {
        const auto p = draw();
        const RealMatrix6 literal = oracle::generator_from_equations(p);
        EXPECT_TRUE((swap * literal * swap.transpose()).isApprox(build_coupling_matrix(p).entries, 0.0))
            << "draw " << i;
        if (p.delta == 0.0) {
            EXPECT_EQ(literal, build_coupling_matrix(p).entries);
        }
    }
}

TEST(CouplingMatrix, SymmetricWithFixedSparsity) {
    oracle::ParamSampler draw(3);
    // allowed (row, col) positions
    bool allowed[kDim][kDim] = {};
    for (int d : {0, 2, 3, 5}) allowed[d][d] = true;
    for (auto [i, j] : {std::pair{0, 3}, {1, 4}, {2, 5}, {3, 4}, {4, 5}}) {
        allowed[i][j] = allowed[j][i] = true;
    }
    for (int n = 0; n < 500; ++n) {
        const auto m = build_coupling_matrix(draw()).entries;
        EXPECT_EQ(m, m.transpose());
        for (int i = 0; i < kDim; ++i) {
            for (int j = 0; j < kDim; ++j) {
                if (!allowed[i][j]) {
                    EXPECT_EQ(m(i, j), 0.0) << i << "," << j;
                }
            }
        }
    }
}

TEST(CouplingMatrix, MirrorOperatorAnticommutes) {
    oracle::ParamSampler draw(5);
    const RealMatrix6 s = mirror_operator();
    EXPECT_TRUE((s * s.transpose()).isIdentity(0.0));
    for (int n = 0; n < 500; ++n) {
        const auto m = build_coupling_matrix(draw()).entries;
        EXPECT_LE((s * m * s.transpose() + m).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(CouplingMatrix, RejectsInvalidParameters) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_THROW(build_coupling_matrix({nan, 0, 1, 1, 0}), InvalidParameter);
    EXPECT_THROW(build_coupling_matrix({0, inf, 1, 1, 0}), InvalidParameter);
    EXPECT_THROW(build_coupling_matrix({0, 0, -1, 1, 0}), InvalidParameter);
    EXPECT_THROW(build_coupling_matrix({0, 0, 1, -0.5, 0}), InvalidParameter);
    EXPECT_THROW(build_coupling_matrix({0, 0, 1, 1, nan}), InvalidParameter);
    EXPECT_NO_THROW(build_coupling_matrix({-1.0, -2.0, 1, 1, 0}));
}

TEST(CouplingMatrix, CarrierFrequencyNeverEntersGenerator) {
    EXPECT_EQ(build_coupling_matrix({0.4, 0.2, 1.0, 0.7, 0.0}).entries,
              build_coupling_matrix({0.4, 0.2, 1.0, 0.7, 123.0}).entries);
}

TEST(InitialState, UnitVectors) {
    const auto s2 = initial_state(2);
    EXPECT_EQ(s2[Mode::s2], Complex(1.0, 0.0));
    EXPECT_DOUBLE_EQ(s2.norm_squared(), 1.0);
    for (int k = 1; k <= kDim; ++k) {
        const auto v = initial_state(k);
        for (int i = 0; i < kDim; ++i) {
            EXPECT_EQ(v[static_cast<std::size_t>(i)], Complex(i == k - 1 ? 1.0 : 0.0, 0.0));
        }
    }
    EXPECT_EQ(initial_state(5)[Mode::a2], Complex(1.0, 0.0));
    EXPECT_EQ(initial_state(Mode::s1)[Mode::s1], Complex(1.0, 0.0));
}

TEST(InitialState, RejectsOutOfRange) {
    EXPECT_THROW(initial_state(0), InvalidParameter);
    EXPECT_THROW(initial_state(7), InvalidParameter);
    EXPECT_THROW(initial_state(-3), InvalidParameter);
}
