#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "example1.hpp"
#include "tracebound/charpoly.hpp"
#include "tracebound/eigensolver.hpp"
#include "tracebound/ensemble.hpp"
#include "tracebound/suite.hpp"

using namespace tracebound;
using test_support::example1;
using Complex = std::complex<double>;

namespace {

std::vector<double> sorted_real_parts(const std::vector<Complex>& zs) {
    std::vector<double> out;
    for (const auto& z : zs) out.push_back(z.real());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Eigenvalues, Diagonal) {
    ComplexMatrix<double> a = ComplexMatrix<double>::Zero(3, 3);
    a.diagonal() << 1, 2, 3;
    const auto s = eigenvalues(a);
    EXPECT_EQ(sorted_real_parts(s.eigenvalues), (std::vector<double>{1, 2, 3}));
    EXPECT_LE(s.residual, 1e-15);
}

TEST(Eigenvalues, NilpotentJordanBlock) {
    ComplexMatrix<double> a(2, 2);
    a << 0, 1, 0, 0;
    const auto s = eigenvalues(a);
    ASSERT_EQ(s.eigenvalues.size(), 2u);
    for (const auto& z : s.eigenvalues) EXPECT_EQ(std::abs(z), 0.0);
}

TEST(Eigenvalues, Example1MatchesCharacteristicPolynomial) {
    const auto s = eigenvalues(example1());
    const auto re = sorted_real_parts(s.eigenvalues);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(re[i], test_support::kExample1Eigenvalues[i], 1e-12);
    Complex sum, sum_sq;
    for (const auto& z : s.eigenvalues) {
        EXPECT_NEAR(z.imag(), 0.0, 1e-12);
        sum += z;
        sum_sq += z * z;
    }
    EXPECT_NEAR(std::abs(sum - 22.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(sum_sq - 154.0), 0.0, 1e-10);
}

TEST(Eigenvalues, TrivialAndInvalidInputs) {
    ComplexMatrix<double> one(1, 1);
    one << Complex(2, 3);
    EXPECT_EQ(eigenvalues(one).eigenvalues.front(), Complex(2, 3));
    EXPECT_TRUE(eigenvalues(ComplexMatrix<double>(0, 0)).eigenvalues.empty());
    EXPECT_THROW(eigenvalues(ComplexMatrix<double>(2, 3)), ShapeError);
    EXPECT_THROW(eigenvalues(one, 0.0), ParameterError);
    EXPECT_THROW(eigenvalues<double>(ComplexMatrix<double>::Zero(513, 513)), ParameterError);
    const auto zero = eigenvalues<double>(ComplexMatrix<double>::Zero(4, 4));
    for (const auto& z : zero.eigenvalues) EXPECT_EQ(z, Complex(0));
}

TEST(Eigenvalues, Deterministic) {
    const auto a = generate({EnsembleKind::ginibre, 12, 99});
    EXPECT_EQ(eigenvalues(a).eigenvalues, eigenvalues(a).eigenvalues);
}

TEST(Charpoly, Example1Coefficients) {
    const auto c = characteristic_polynomial(example1());
    const std::vector<double> expected{410, -481, 165, -22, 1};
    ASSERT_EQ(c.size(), expected.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_NEAR(static_cast<double>(c[i].real()), expected[i], 1e-12);
        EXPECT_NEAR(static_cast<double>(c[i].imag()), 0.0, 1e-12);
    }
    const auto roots = sorted_real_parts(charpoly_eigenvalues(example1()));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(roots[i], test_support::kExample1Eigenvalues[i], 1e-12);
    EXPECT_THROW(charpoly_eigenvalues<double>(ComplexMatrix<double>::Identity(9, 9)), ParameterError);
}

TEST(Charpoly, AgreesWithQrOnSmallMatrices) {
    std::mt19937_64 seeds(2024);
    for (const auto kind : {EnsembleKind::hermitian, EnsembleKind::normal, EnsembleKind::ginibre}) {
        for (std::size_t n = 2; n <= kMaxCharpolyOrder; ++n) {
            for (int trial = 0; trial < 10; ++trial) {
                const auto a = generate({kind, n, seeds()});
                const double d = spectral_match_distance(eigenvalues(a).eigenvalues, charpoly_eigenvalues(a));
                EXPECT_LE(d, 1e-8) << to_string(kind) << " n=" << n;
            }
        }
    }
}

TEST(Eigenvalues, AgreesWithEigenOnLargerMatrices) {
    for (const std::size_t n : {16, 32, 64}) {
        const auto a = generate({EnsembleKind::ginibre, n, n});
        const Eigen::ComplexEigenSolver<ComplexMatrix<double>> reference(a, false);
        std::vector<Complex> theirs(reference.eigenvalues().data(),
                                    reference.eigenvalues().data() + reference.eigenvalues().size());
        const auto ours = eigenvalues(a);
        EXPECT_LE(spectral_match_distance(ours.eigenvalues, theirs), 1e-8);
        EXPECT_LE(ours.residual, 1e-12);
    }
}

TEST(Eigenvalues, DefectiveSpectraRecovered) {
    // Jordan blocks split under rounding by about eps^(1/size); the trace
    // identities pin the multiset regardless.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = generate({EnsembleKind::jordan_defective, 6, seed});
        const auto s = eigenvalues(a);
        Complex sum;
        for (const auto& z : s.eigenvalues) sum += z;
        EXPECT_NEAR(std::abs(sum - a.trace()), 0.0, 1e-10 * a.norm());
        for (const auto& z : s.eigenvalues) EXPECT_LE(std::abs(z.imag()), 1e-4);
    }
}

TEST(MatchDistance, Permutations) {
    EXPECT_EQ(spectral_match_distance<double>({{1, 0}, {2, 0}}, {{2, 0}, {1, 0}}), 0.0);
    EXPECT_NEAR(spectral_match_distance<double>({{0, 0}, {10, 0}}, {{10.5, 0}, {0.25, 0}}), 0.5, 1e-15);
    EXPECT_THROW(spectral_match_distance<double>({{0, 0}}, {}), PreconditionError);
}

TEST(Ensembles, Structure) {
    EXPECT_TRUE(is_hermitian(generate({EnsembleKind::hermitian, 10, 1})));
    EXPECT_TRUE(is_normal(generate({EnsembleKind::normal, 10, 1})));
    EXPECT_FALSE(is_normal(generate({EnsembleKind::jordan_defective, 10, 1})));

    EnsembleSpec spec{EnsembleKind::diagonal, 0, 0, 1.0, {0, 0, 0, 4}};
    const auto d = generate(spec);
    ComplexMatrix<double> expected = ComplexMatrix<double>::Zero(4, 4);
    expected(3, 3) = 4;
    EXPECT_EQ(d, expected);
    EXPECT_TRUE(has_real_spectrum(spec));
    spec.values = {{0, 1}, {1, 0}};
    EXPECT_FALSE(has_real_spectrum(spec));
    EXPECT_TRUE(has_real_spectrum({EnsembleKind::jordan_defective, 5, 0}));
    EXPECT_FALSE(has_real_spectrum({EnsembleKind::ginibre, 5, 0}));
}

TEST(Ensembles, ReproducibleFromSeed) {
    for (const auto kind : {EnsembleKind::hermitian, EnsembleKind::normal, EnsembleKind::ginibre,
                            EnsembleKind::jordan_defective, EnsembleKind::diagonal}) {
        EXPECT_EQ(generate({kind, 7, 5}), generate({kind, 7, 5})) << to_string(kind);
        EXPECT_NE(generate({kind, 7, 5}), generate({kind, 7, 6})) << to_string(kind);
    }
}

TEST(Ensembles, ScaleAndNames) {
    const auto a = generate({EnsembleKind::ginibre, 5, 3, 1.0});
    const auto b = generate({EnsembleKind::ginibre, 5, 3, 2.5});
    EXPECT_TRUE(b.isApprox(2.5 * a));
    EXPECT_EQ(parse_ensemble_kind("jordan_defective"), EnsembleKind::jordan_defective);
    EXPECT_THROW(parse_ensemble_kind("wishart"), ParameterError);
}

TEST(Suite, HandCheckableDiagonal) {
    const EnsembleSpec spec{EnsembleKind::diagonal, 4, 0, 1.0, {0, 0, 0, 4}};
    const auto report = run_suite({spec}, 1);
    EXPECT_TRUE(report.passed());
    EXPECT_EQ(report.matrices, 1u);
    EXPECT_GT(report.claims_checked, 50u);
    EXPECT_NEAR(report.families.at("samuelson").min_margin, 0.0, 1e-12);
    EXPECT_NEAR(report.families.at("order_statistic").min_margin, 0.0, 1e-12);
}

TEST(Suite, DeterministicAcrossThreadCounts) {
    const std::vector<EnsembleSpec> specs{{EnsembleKind::ginibre, 5, 8}, {EnsembleKind::hermitian, 6, 9}};
    SuiteOptions one;
    one.threads = 1;
    SuiteOptions many;
    many.threads = 4;
    const auto a = run_suite(specs, 40, one);
    const auto b = run_suite(specs, 40, many);
    EXPECT_EQ(a.claims_checked, b.claims_checked);
    EXPECT_EQ(a.failure_count, b.failure_count);
    EXPECT_EQ(a.min_margin, b.min_margin);
    ASSERT_EQ(a.failures.size(), b.failures.size());
    for (std::size_t i = 0; i < a.failures.size(); ++i) {
        EXPECT_EQ(a.failures[i].claim, b.failures[i].claim);
        EXPECT_EQ(a.failures[i].seed, b.failures[i].seed);
    }
}

TEST(Suite, FailureSeedRegeneratesMatrix) {
    // Ginibre spectra break the complex count claim at k >= 2; every recorded
    // failure names a seed that reproduces it.
    const EnsembleSpec spec{EnsembleKind::ginibre, 4, 123};
    const auto report = run_suite({spec}, 30);
    ASSERT_FALSE(report.failures.empty());
    const auto& f = report.failures.front();
    EnsembleSpec again = spec;
    again.seed = f.seed;
    const auto replay = check_matrix(generate(again), false, f.seed, f.ensemble);
    EXPECT_GT(replay.failure_count, 0u);
    EXPECT_THROW(run_suite({spec}, 0), ParameterError);
}
