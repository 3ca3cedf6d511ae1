#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "example1.hpp"
#include "tracebound/ensemble.hpp"
#include "tracebound/matrix.hpp"

using namespace tracebound;
using test_support::example1;
using Complex = std::complex<double>;

TEST(Trace, Example1Powers) {
    const auto a = example1();
    EXPECT_EQ(trace(a), Complex(22));
    EXPECT_EQ(matrix_power_trace(a, 2), Complex(154));
    const CenteredMatrix<double> b(a);
    EXPECT_EQ(b.shift(), Complex(5.5));
    EXPECT_NEAR(matrix_power_trace(b.matrix(), 2).real(), 33.0, 1e-12);
    EXPECT_NEAR(matrix_power_trace(b.matrix(), 4).real(), 502.25, 1e-10);
    EXPECT_NEAR(matrix_power_trace(b.matrix(), 6).real(), 7965.5625, 1e-8);
    EXPECT_NEAR(std::abs(trace(b.matrix())), 0.0, 1e-14);
}

TEST(Trace, RejectsNonSquare) {
    const ComplexMatrix<double> a = ComplexMatrix<double>::Zero(2, 3);
    EXPECT_THROW(trace(a), ShapeError);
    EXPECT_THROW(matrix_power(a, 2), ShapeError);
    try {
        trace(a);
    } catch (const ShapeError& e) {
        EXPECT_EQ(e.rows(), 2u);
        EXPECT_EQ(e.cols(), 3u);
    }
    EXPECT_THROW(matrix_power(example1(), 0), ParameterError);
}

TEST(MatrixPower, MatchesRepeatedProduct) {
    const auto a = example1();
    EXPECT_TRUE(matrix_power(a, 1).isApprox(a));
    EXPECT_TRUE(matrix_power(a, 3).isApprox(a * a * a));
}

TEST(FrobeniusNorm, EqualsTraceOfGram) {
    const auto a = generate({EnsembleKind::ginibre, 6, 4});
    EXPECT_NEAR(frobenius_norm_sq(a), (a * a.adjoint()).trace().real(), 1e-12 * frobenius_norm_sq(a));
}

TEST(Structure, HermitianAndNormal) {
    const auto a = example1();
    EXPECT_TRUE(is_hermitian(a));
    EXPECT_TRUE(is_normal(a));

    ComplexMatrix<double> jordan(2, 2);
    jordan << 0, 1, 0, 0;
    EXPECT_FALSE(is_hermitian(jordan));
    EXPECT_FALSE(is_normal(jordan));

    ComplexMatrix<double> skew(2, 2);
    skew << 0, 1, -1, 0;
    EXPECT_FALSE(is_hermitian(skew));
    EXPECT_TRUE(is_normal(skew));

    EXPECT_TRUE(is_normal(generate({EnsembleKind::normal, 8, 2})));
    EXPECT_TRUE(is_hermitian(generate({EnsembleKind::hermitian, 8, 2})));
    EXPECT_FALSE(is_normal(generate({EnsembleKind::ginibre, 8, 2})));
}

TEST(MomentUpperBound, ExactOnNormalMatrices) {
    const auto a = example1();
    const CenteredMatrix<double> b(a);
    EXPECT_NEAR(moment_upper_bound(b, 1), 33.0, 1e-12);
    EXPECT_NEAR(moment_upper_bound(b, 2), 502.25, 1e-10);
}

TEST(MomentUpperBound, NilpotentHasZeroMoment) {
    ComplexMatrix<double> jordan(2, 2);
    jordan << 0, 1, 0, 0;
    EXPECT_NEAR(moment_upper_bound(jordan, 1), 0.0, 1e-15);
    EXPECT_THROW(moment_upper_bound(jordan, 0), ParameterError);
}

TEST(SpectralStats, Example1) {
    const auto s = spectral_stats(example1());
    EXPECT_EQ(s.n, 4u);
    EXPECT_EQ(s.effective_dim, 4u);
    EXPECT_TRUE(s.hermitian);
    EXPECT_TRUE(s.normal);
    EXPECT_EQ(s.trace, Complex(22));
    EXPECT_EQ(s.trace_sq, Complex(154));
    EXPECT_EQ(s.mean, Complex(5.5));
    EXPECT_NEAR(s.complex_variance.real(), 8.25, 1e-12);
    EXPECT_NEAR(s.complex_variance.imag(), 0.0, 1e-12);
    EXPECT_NEAR(s.abs_variance, 8.25, 1e-12);
    EXPECT_EQ(s.abs_variance_source, AbsVarianceSource::upper_bound);
    EXPECT_NEAR(s.real_part_variance, 8.25, 1e-12);
    EXPECT_NEAR(s.imag_part_variance, 0.0, 1e-12);
}

TEST(SpectralStats, ModesAgreeOnNormalInput) {
    const auto a = example1();
    const std::vector<Complex> eigs(std::begin(test_support::kExample1Eigenvalues),
                                    std::end(test_support::kExample1Eigenvalues));
    StatsOptions<double> oracle;
    oracle.mode = AbsVarianceSource::oracle;
    oracle.oracle_eigenvalues = eigs;
    StatsOptions<double> normal;
    normal.mode = AbsVarianceSource::normal_formula;
    EXPECT_NEAR(spectral_stats(a, oracle).abs_variance, 8.25, 1e-10);
    EXPECT_NEAR(spectral_stats(a, normal).abs_variance, 8.25, 1e-12);
}

TEST(SpectralStats, ModeErrors) {
    ComplexMatrix<double> jordan(2, 2);
    jordan << 0, 1, 0, 0;
    StatsOptions<double> normal;
    normal.mode = AbsVarianceSource::normal_formula;
    EXPECT_THROW(spectral_stats(jordan, normal), ModeError);

    StatsOptions<double> oracle;
    oracle.mode = AbsVarianceSource::oracle;
    EXPECT_THROW(spectral_stats(jordan, oracle), PreconditionError);

    StatsOptions<double> rank;
    rank.rank_override = 3;
    EXPECT_THROW(spectral_stats(jordan, rank), ParameterError);
    EXPECT_THROW(spectral_stats(ComplexMatrix<double>(0, 0)), DegenerateSizeError);
}

TEST(SpectralStats, UpperBoundDominatesOracle) {
    std::mt19937_64 seeds(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = generate({EnsembleKind::jordan_defective, 6, seeds()});
        const auto upper = spectral_stats(a);
        EXPECT_FALSE(upper.normal);
        EXPECT_GE(upper.abs_variance, 0.0);
    }
    ComplexMatrix<double> jordan(2, 2);
    jordan << 1, 1, 0, 1;
    // Spectrum {1, 1}: S_lambda^2 = 0, and the bound sees it.
    EXPECT_NEAR(spectral_stats(jordan).abs_variance, 0.0, 1e-15);
}

TEST(SpectralStats, RankOverrideUsesNonzeroEigenvalues) {
    // diag(0, 0, 2, 4): treating the two nonzero eigenvalues as the sequence.
    ComplexMatrix<double> a = ComplexMatrix<double>::Zero(4, 4);
    a(2, 2) = 2;
    a(3, 3) = 4;
    StatsOptions<double> options;
    options.mode = AbsVarianceSource::normal_formula;
    options.rank_override = 2;
    const auto s = spectral_stats(a, options);
    EXPECT_EQ(s.effective_dim, 2u);
    EXPECT_EQ(s.mean, Complex(3));
    EXPECT_NEAR(s.complex_variance.real(), 1.0, 1e-14);
    EXPECT_NEAR(s.abs_variance, 1.0, 1e-14);

    options.mode = AbsVarianceSource::upper_bound;
    EXPECT_NEAR(spectral_stats(a, options).abs_variance, 1.0, 1e-12);
}
