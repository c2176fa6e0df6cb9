#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "phiproj/divergence.hpp"

using namespace phiproj;

namespace {

std::vector<Divergence> all_builtins()
{
    std::vector<Divergence> out;
    for (const auto& name : builtin_divergence_names()) {
        if (name == "alpha_divergence") {
            for (double a : {-2.0, -0.5, 0.0, 0.5, 2.0})
                out.push_back(builtin_divergence(name, a));
        } else {
            out.push_back(builtin_divergence(name));
        }
    }
    return out;
}

Vector random_unit(std::mt19937_64& gen, int m, double lo = 0.0)
{
    std::uniform_real_distribution<double> u(lo, 1.0);
    Vector v(m);
    for (int i = 0; i < m; ++i)
        v[i] = u(gen);
    return v;
}

}  // namespace

TEST(Divergence, KappaExamples)
{
    EXPECT_DOUBLE_EQ(builtin_divergence("kullback_leibler").kappa_at(0.3), 0.3);
    EXPECT_DOUBLE_EQ(builtin_divergence("pearson_chi2").kappa_at(0.1), 2.0);
    EXPECT_DOUBLE_EQ(builtin_divergence("pearson_chi2").kappa_at(7.0), 2.0);
    EXPECT_DOUBLE_EQ(builtin_divergence("neyman_chi2").kappa_at(0.5), 0.25);
}

TEST(Divergence, PhiVanishesAtOne)
{
    for (const auto& d : all_builtins())
        EXPECT_NEAR(d.phi(1.0), 0.0, 1e-15) << d.name;
}

TEST(Divergence, DerivativesMatchFiniteDifferences)
{
    for (const auto& d : all_builtins()) {
        for (double x : {0.05, 0.3, 1.0, 2.5, 7.0}) {
            double h = 1e-6 * x;
            double fd1 = (d.phi(x + h) - d.phi(x - h)) / (2 * h);
            double fd2 = (d.phi_prime(x + h) - d.phi_prime(x - h)) / (2 * h);
            EXPECT_NEAR(d.phi_prime(x), fd1, 1e-6 * (1 + std::abs(fd1))) << d.name << " x=" << x;
            EXPECT_NEAR(d.phi_second(x), fd2, 1e-5 * (1 + std::abs(fd2))) << d.name << " x=" << x;
        }
    }
}

TEST(Divergence, StoredLimitsMatchNumericLimits)
{
    for (const auto& d : all_builtins()) {
        // x^0.25 for alpha = -0.5 needs very small / large probes
        double small = 1e-40;
        if (d.phi_at_zero.is_finite())
            EXPECT_NEAR(d.phi(small), d.phi_at_zero.value(), 1e-4) << d.name;
        else
            EXPECT_GT(d.phi(small), 20.0) << d.name;

        double big = 1e40;
        if (d.slope_at_infinity.is_finite())
            EXPECT_NEAR(d.phi(big) / big, d.slope_at_infinity.value(), 1e-4) << d.name;
        else
            EXPECT_GT(d.phi(big) / big, 10.0) << d.name;

        if (std::isinf(d.phi_prime_limit_at_zero))
            EXPECT_LT(d.phi_prime(1e-14), -10.0) << d.name;
        else
            EXPECT_NEAR(d.phi_prime(1e-12), d.phi_prime_limit_at_zero, 1e-4) << d.name;
    }
}

TEST(Divergence, HellingerSlopeAtInfinityIsZero)
{
    auto d = builtin_divergence("squared_hellinger");
    ASSERT_TRUE(d.slope_at_infinity.is_finite());
    EXPECT_EQ(d.slope_at_infinity.value(), 0.0);
}

TEST(Divergence, ConvexChordInequality)
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (const auto& d : all_builtins()) {
        for (int i = 0; i < 200; ++i) {
            double x = u(gen), z = u(gen);
            if (x > z)
                std::swap(x, z);
            double a = std::uniform_real_distribution<double>(0, 1)(gen);
            double y = a * x + (1 - a) * z;
            double chord = a * d.phi(x) + (1 - a) * d.phi(z);
            EXPECT_LE(d.phi(y), chord + 1e-12 * (1 + std::abs(chord))) << d.name;
        }
    }
}

TEST(Divergence, AlphaValidation)
{
    EXPECT_THROW(builtin_divergence("alpha_divergence"), ValidationError);
    EXPECT_THROW(builtin_divergence("alpha_divergence", 1.0), ValidationError);
    EXPECT_THROW(builtin_divergence("alpha_divergence", -1.0), ValidationError);
    EXPECT_THROW(builtin_divergence("alpha_divergence", 3.0), ValidationError);
    EXPECT_THROW(builtin_divergence("alpha_divergence", 4.5), ValidationError);
    EXPECT_THROW(builtin_divergence("kullback_leibler", 0.5), ValidationError);
    EXPECT_THROW(builtin_divergence("no_such_divergence"), ValidationError);
    EXPECT_NO_THROW(builtin_divergence("alpha_divergence", 2.9));
}

TEST(Divergence, KernelCases)
{
    auto kl = builtin_divergence("kullback_leibler");
    EXPECT_NEAR(f_eval(kl, 0.2, 0.4).value(), 0.4 * (0.5 * std::log(0.5)), 1e-15);
    EXPECT_NEAR(f_eval(kl, 0.2, 0.4).value(), -0.1386294, 1e-7);
    EXPECT_TRUE(f_eval(kl, 0.3, 0.0).is_infinite());
    EXPECT_THROW(f_eval(kl, -0.1, 0.3), ValidationError);
    EXPECT_THROW(f_eval(kl, 0.1, -0.3), ValidationError);

    for (const auto& d : all_builtins()) {
        EXPECT_EQ(f_eval(d, 0.0, 0.0), ExtendedReal(0.0)) << d.name;
        EXPECT_EQ(f_eval(d, 0.37, 0.61).value(), 0.61 * d.phi(0.37 / 0.61)) << d.name;
        EXPECT_EQ(f_eval(d, 0.0, 0.5), scale(0.5, d.phi_at_zero)) << d.name;
        EXPECT_EQ(f_eval(d, 0.5, 0.0), scale(0.5, d.slope_at_infinity)) << d.name;
    }
}

TEST(Divergence, EvalExamples)
{
    auto pearson = builtin_divergence("pearson_chi2");
    Vector s(2), t(2);
    s << 0.5, 0.5;
    t << 0.25, 0.75;
    EXPECT_NEAR(divergence_eval(pearson, s, t).value(), 0.25 + 0.75 / 9.0, 1e-15);

    auto kl = builtin_divergence("kullback_leibler");
    Vector p(3);
    p << 0.2, 0.5, 0.3;
    EXPECT_NEAR(divergence_eval(kl, p, p).value(), 0.0, 1e-16);
    EXPECT_THROW(divergence_eval(kl, p, s), ValidationError);

    // support of s outside support of t
    Vector a(2), b(2);
    a << 0.5, 0.5;
    b << 1.0, 0.0;
    EXPECT_TRUE(divergence_eval(kl, a, b).is_infinite());
    EXPECT_TRUE(divergence_eval(builtin_divergence("squared_hellinger"), a, b).is_finite());
}

// 10^3 random cases per divergence.
TEST(Divergence, RescalingIdentity)
{
    std::mt19937_64 gen(2024);
    const double M = 3.7;
    for (const auto& d : all_builtins()) {
        for (int rep = 0; rep < 1000; ++rep) {
            int m = 2 + rep % 4;
            Vector s = M * random_unit(gen, m);
            Vector t = M * random_unit(gen, m, 0.01);
            if (rep % 7 == 0)
                s[0] = 0.0;  // exercise the phi(0+) branch
            auto lhs = divergence_eval(d, s, t);
            auto rhs = scale(M, divergence_eval(d, s / M, t / M));
            ASSERT_EQ(lhs.is_finite(), rhs.is_finite()) << d.name;
            if (lhs.is_finite()) {
                ASSERT_NEAR(lhs.value(), rhs.value(), 1e-12 * (1 + std::abs(lhs.value())))
                    << d.name;
            }
            ASSERT_EQ(f_eval(d, 0.0, 0.0), ExtendedReal(0.0));
        }
    }
}

TEST(Divergence, NonnegativeOnProbabilityVectors)
{
    std::mt19937_64 gen(5);
    for (const auto& d : all_builtins()) {
        for (int rep = 0; rep < 200; ++rep) {
            Vector p = oracle::random_probability(gen, 4);
            Vector q = oracle::random_probability(gen, 4);
            EXPECT_GE(divergence_eval(d, p, q).value(), -1e-12) << d.name;
        }
    }
}

TEST(Divergence, StrongConvexityInFirstArgument)
{
    std::mt19937_64 gen(17);
    for (const auto& d : all_builtins()) {
        for (int rep = 0; rep < 100; ++rep) {
            Vector t = random_unit(gen, 3, 0.05);
            Vector s = random_unit(gen, 3, 0.01);
            Vector s2 = random_unit(gen, 3, 0.01);
            double a = std::uniform_real_distribution<double>(0, 1)(gen);
            double kappa = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 3; ++i)
                kappa = std::min(kappa, d.kappa_at(t[i]) / t[i]);
            double mix = divergence_eval(d, a * s + (1 - a) * s2, t).value();
            double chord = a * divergence_eval(d, s, t).value()
                           + (1 - a) * divergence_eval(d, s2, t).value();
            double margin = 0.5 * kappa * a * (1 - a) * (s - s2).squaredNorm();
            EXPECT_LE(mix, chord - margin + 1e-12 * (1 + std::abs(chord))) << d.name;
        }
    }
}

TEST(Divergence, GradientAndHessianExamples)
{
    auto kl = builtin_divergence("kullback_leibler");
    Vector s(2);
    s << 0.5, 0.5;
    EXPECT_TRUE(gradient_first(kl, s, s).isApprox(Vector::Ones(2)));
    EXPECT_TRUE(hessian_first_diag(kl, s, s).isApprox(Vector::Constant(2, 2.0)));

    auto pearson = builtin_divergence("pearson_chi2");
    Vector a(2), t(2);
    a << 0.3, 0.7;
    t << 0.5, 0.5;
    Vector g = gradient_first(pearson, a, t);
    EXPECT_NEAR(g[0], -0.8, 1e-15);
    EXPECT_NEAR(g[1], 0.8, 1e-15);
    EXPECT_TRUE(hessian_first_diag(pearson, a, t).isApprox(Vector::Constant(2, 4.0)));

    Vector edge(2);
    edge << 0.0, 1.0;
    EXPECT_THROW(gradient_first(kl, edge, t), BoundaryError);
    EXPECT_THROW(hessian_first_diag(kl, t, edge), BoundaryError);
}

TEST(Divergence, GradientMatchesFiniteDifferences)
{
    std::mt19937_64 gen(99);
    for (const auto& d : all_builtins()) {
        for (int rep = 0; rep < 100; ++rep) {
            Vector t = random_unit(gen, 4, 0.05);
            Vector s = random_unit(gen, 4, 0.05).cwiseMin(0.95);
            auto value = [&](const Vector& x) { return divergence_eval(d, x, t).value(); };
            Vector fd = oracle::gradient_fd(value, s);
            Vector g = gradient_first(d, s, t);
            ASSERT_LE((g - fd).lpNorm<Eigen::Infinity>(), 1e-6 * (1 + fd.lpNorm<Eigen::Infinity>()))
                << d.name;
            auto grad = [&](const Vector& x) { return gradient_first(d, x, t); };
            Matrix jfd = oracle::jacobian_fd(grad, s);
            Vector h = hessian_first_diag(d, s, t);
            ASSERT_LE((Matrix(h.asDiagonal()) - jfd).lpNorm<Eigen::Infinity>(),
                      1e-5 * (1 + h.lpNorm<Eigen::Infinity>()))
                << d.name;
        }
    }
}

TEST(Divergence, CustomMatchesBuiltin)
{
    auto custom = custom_divergence(
        "square", [](double x) { return (x - 1) * (x - 1); },
        [](double x) { return 2 * (x - 1); }, [](double) { return 2.0; }, 1.0,
        ExtendedReal::infinity(), -2.0);
    EXPECT_FALSE(custom.has_kappa());
    EXPECT_THROW(custom.kappa_at(1.0), ValidationError);
    auto pearson = builtin_divergence("pearson_chi2");
    std::mt19937_64 gen(3);
    for (int rep = 0; rep < 100; ++rep) {
        Vector s = random_unit(gen, 3), t = random_unit(gen, 3, 0.01);
        EXPECT_NEAR(divergence_eval(custom, s, t).value(), divergence_eval(pearson, s, t).value(),
                    1e-15);
    }

    auto xlogx = custom_divergence(
        "xlogx", [](double x) { return x * std::log(x); },
        [](double x) { return std::log(x) + 1; }, [](double x) { return 1 / x; }, 0.0,
        ExtendedReal::infinity(), -std::numeric_limits<double>::infinity());
    auto kl = builtin_divergence("kullback_leibler");
    for (double v : {0.0, 0.1, 0.7})
        for (double w : {0.0, 0.2, 0.9})
            EXPECT_EQ(f_eval(xlogx, v, w), f_eval(kl, v, w));

    EXPECT_THROW(custom_divergence("bad", nullptr, nullptr, nullptr, 0.0, 0.0, 0.0),
                 ValidationError);
    EXPECT_THROW(custom_divergence(
                     "inf", [](double x) { return -std::log(x); },
                     [](double x) { return -1 / x; }, [](double x) { return 1 / (x * x); },
                     std::numeric_limits<double>::infinity(), 0.0, -1.0),
                 ValidationError);
}

TEST(Divergence, CenteredPower)
{
    auto quartic = centered_power_divergence(4);
    EXPECT_FALSE(quartic.has_kappa());
    EXPECT_EQ(quartic.phi_second(1.0), 0.0);
    EXPECT_DOUBLE_EQ(quartic.phi_second(2.0), 12.0);
    EXPECT_DOUBLE_EQ(quartic.phi_prime_limit_at_zero, -4.0);
    EXPECT_TRUE(centered_power_divergence(2).has_kappa());
    EXPECT_THROW(centered_power_divergence(3), ValidationError);
    EXPECT_THROW(centered_power_divergence(0), ValidationError);
}

TEST(ExtendedRealArithmetic, InfinityRules)
{
    auto inf = ExtendedReal::infinity();
    EXPECT_TRUE((inf + ExtendedReal(2.0)).is_infinite());
    EXPECT_TRUE(scale(0.5, inf).is_infinite());
    EXPECT_EQ(ExtendedReal(1.5) + ExtendedReal(2.0), ExtendedReal(3.5));
    EXPECT_EQ(inf.value(), std::numeric_limits<double>::infinity());
    std::ostringstream os;
    os << inf;
    EXPECT_EQ(os.str(), "+inf");
}

TEST(Measure, Validation)
{
    Vector bad(2);
    bad << -0.1, 0.5;
    EXPECT_THROW(MeasureVector{bad}, ValidationError);
    Vector v(3);
    v << 0.0, 0.4, 0.6;
    MeasureVector mv(v);
    EXPECT_EQ(mv.support(), (std::vector<int>{1, 2}));
    EXPECT_FALSE(mv.is_interior());
    EXPECT_NO_THROW(ProbabilityVector{v});
    Vector w(2);
    w << 0.5, 0.49;
    EXPECT_THROW(ProbabilityVector{w}, ValidationError);
}
