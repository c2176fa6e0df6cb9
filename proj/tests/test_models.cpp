#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "phiproj/model.hpp"

using namespace phiproj;

namespace {

/// Random strictly feasible theta along a random ray from the interior point.
Vector random_interior(const ParametricModel& model, std::mt19937_64& gen)
{
    std::normal_distribution<double> normal;
    Vector d(model.k());
    for (Eigen::Index i = 0; i < d.size(); ++i)
        d[i] = normal(gen);
    const Vector& c = model.interior_point();
    Vector slack = model.constraint_bound() - model.constraint_matrix() * c;
    Vector rate = model.constraint_matrix() * d;
    double reach = 1e300;
    for (Eigen::Index j = 0; j < rate.size(); ++j)
        if (rate[j] > 0)
            reach = std::min(reach, slack[j] / rate[j]);
    double frac = std::uniform_real_distribution<double>(0.02, 0.98)(gen);
    return c + frac * reach * d;
}

Vector vec_of(std::initializer_list<double> xs)
{
    Vector v(xs.size());
    int i = 0;
    for (double x : xs)
        v[i++] = x;
    return v;
}

std::vector<ParametricModel> sample_models()
{
    std::vector<ParametricModel> out;
    out.push_back(binomial_model(3));
    out.push_back(binomial_model(6));
    out.push_back(moment_model(vec_of({0, 1, 2, 3, 4}), vec_of({1, 1.6, 3.52})));
    out.push_back(frechet_model({vec_of({0.2, 0.3, 0.5}), vec_of({0.5, 0.25, 0.25})}));
    out.push_back(frechet_model({vec_of({0.6, 0.4}), vec_of({0.3, 0.3, 0.4})}));
    Matrix ones = Matrix::Ones(1, 4);
    out.push_back(affine_from_linear_equalities(ones, Vector::Ones(1), Vector::Constant(4, 0.25)));
    return out;
}

}  // namespace

TEST(Binomial, Values)
{
    auto m5 = binomial_model(5);
    Vector s = m5.eval(Vector::Constant(1, 0.4));
    EXPECT_TRUE(s.isApprox(oracle::binomial_pmf(4, 0.4), 1e-14));
    Vector x = vec_of({0, 1, 2, 3, 4});
    Vector moments(4);
    for (int r = 1; r <= 4; ++r)
        moments[r - 1] = (x.array().pow(r) * s.array()).sum();
    EXPECT_TRUE(moments.isApprox(vec_of({1.6, 3.52, 8.896, 24.8704}), 1e-13));

    auto m3 = binomial_model(3);
    EXPECT_TRUE(m3.eval(Vector::Constant(1, 0.5)).isApprox(vec_of({0.25, 0.5, 0.25})));
    EXPECT_EQ(m3.k(), 1);
    EXPECT_EQ(m3.m(), 3);
    EXPECT_FALSE(m3.is_affine());
    EXPECT_TRUE(m3.is_probability_model());
    EXPECT_THROW(binomial_model(1), ValidationError);
    EXPECT_THROW(m3.affine_data(), ValidationError);
    EXPECT_THROW(m3.eval(Vector::Zero(2)), ValidationError);
}

TEST(Binomial, JacobianAtPointThree)
{
    auto m3 = binomial_model(3);
    Vector th = Vector::Constant(1, 0.3);
    auto f = [&](const Vector& t) { return oracle::binomial_pmf(2, t[0]); };
    EXPECT_LE((m3.jacobian(th) - oracle::jacobian_fd(f, th)).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Models, DerivativesMatchFiniteDifferences)
{
    std::mt19937_64 gen(8);
    for (const auto& model : sample_models()) {
        for (int rep = 0; rep < 50; ++rep) {
            Vector th = random_interior(model, gen);
            double h = 1e-6 * std::max(1.0, th.norm());
            auto f = [&](const Vector& t) { return model.eval(t); };
            Matrix jfd = oracle::jacobian_fd(f, th, h);
            ASSERT_LE((model.jacobian(th) - jfd).lpNorm<Eigen::Infinity>(), 1e-5) << model.kind();
            auto jv = [&](const Vector& t) { return vec(model.jacobian(t)); };
            Matrix j2fd = oracle::jacobian_fd(jv, th, h);
            ASSERT_LE((model.second_jacobian(th) - j2fd).lpNorm<Eigen::Infinity>(), 1e-5)
                << model.kind();
        }
    }
}

TEST(Models, InteriorMapsIntoOpenCube)
{
    std::mt19937_64 gen(81);
    for (const auto& model : sample_models()) {
        for (int rep = 0; rep < 100; ++rep) {
            Vector s = model.eval(random_interior(model, gen));
            ASSERT_TRUE((s.array() > 0).all() && (s.array() < 1).all()) << model.kind();
            if (model.is_probability_model())
                ASSERT_NEAR(s.sum(), 1.0, 1e-12);
        }
        // smallest singular value of the Jacobian at the interior point
        EXPECT_GT(min_singular_value(model.jacobian(model.interior_point())), 1e-10);
    }
}

TEST(Models, BoundaryMapsIntoClosedCube)
{
    std::mt19937_64 gen(82);
    for (const auto& model : sample_models()) {
        for (int rep = 0; rep < 50; ++rep) {
            Vector th = random_interior(model, gen);
            Vector d = th - model.interior_point();
            Vector slack = model.slack(model.interior_point());
            Vector rate = model.constraint_matrix() * d;
            double reach = 1e300;
            for (Eigen::Index j = 0; j < rate.size(); ++j)
                if (rate[j] > 0)
                    reach = std::min(reach, slack[j] / rate[j]);
            Vector edge = model.interior_point() + reach * d;
            Vector s = model.eval(edge);
            ASSERT_TRUE((s.array() > -1e-10).all() && (s.array() < 1 + 1e-10).all());
        }
    }
}

TEST(Models, AffineLinearityExact)
{
    std::mt19937_64 gen(9);
    for (const auto& model : sample_models()) {
        if (!model.is_affine())
            continue;
        const auto& aff = model.affine_data();
        for (int rep = 0; rep < 20; ++rep) {
            Vector a = random_interior(model, gen), b = random_interior(model, gen);
            EXPECT_EQ(model.second_jacobian(a), Matrix::Zero(model.m() * model.k(), model.k()));
            EXPECT_LE((model.eval(a) - (aff.a * a + aff.gamma)).lpNorm<Eigen::Infinity>(), 1e-15);
            double w = 0.3;
            Vector mix = model.eval(w * a + (1 - w) * b);
            Vector comb = w * model.eval(a) + (1 - w) * model.eval(b);
            EXPECT_LE((mix - comb).lpNorm<Eigen::Infinity>(), 1e-14);
        }
    }
}

TEST(Moment, BinomialMomentsInterior)
{
    Vector x = vec_of({0, 1, 2, 3, 4});
    auto model = moment_model(x, vec_of({1, 1.6, 3.52}));
    EXPECT_EQ(model.k(), 2);
    EXPECT_EQ(model.m(), 5);
    Vector theta = vec_of({8.896, 24.8704});
    EXPECT_TRUE(model.strictly_feasible(theta));
    EXPECT_TRUE(model.eval(theta).isApprox(oracle::binomial_pmf(4, 0.4), 1e-10));
    Vector back = affine_inverse(model, oracle::binomial_pmf(4, 0.4));
    EXPECT_LE((back - theta).lpNorm<Eigen::Infinity>(), 1e-9);

    std::mt19937_64 gen(4);
    Matrix u(3, 5);
    for (int i = 0; i < 3; ++i)
        u.row(i) = x.array().pow(i).matrix().transpose();
    for (int rep = 0; rep < 50; ++rep) {
        Vector s = model.eval(random_interior(model, gen));
        EXPECT_LE((u * s - vec_of({1, 1.6, 3.52})).lpNorm<Eigen::Infinity>(), 1e-10);
        EXPECT_NEAR(s.sum(), 1.0, 1e-12);
    }
}

TEST(Moment, ReferencePmfAndErrors)
{
    Vector x = vec_of({0, 1, 2, 3, 4});
    Vector mu = vec_of({1, 1.6, 3.52});
    auto model = moment_model(x, mu, oracle::binomial_pmf(4, 0.4));
    EXPECT_LE((model.interior_point() - vec_of({8.896, 24.8704})).norm(), 1e-9);
    EXPECT_THROW(moment_model(vec_of({0, 1, 1, 3, 4}), mu), ValidationError);
    EXPECT_THROW(moment_model(x, vec_of({1, 1.6, 3.52, 8.896, 24.8704})), ValidationError);
    EXPECT_EQ(moment_model(x, vec_of({1, 1.6, 3.52, 8.896})).k(), 1);
    EXPECT_THROW(moment_model(x, vec_of({0.9, 1.6})), ValidationError);
    EXPECT_THROW(moment_model(x, mu, vec_of({0.2, 0.2, 0.2, 0.2, 0.2})), ValidationError);
    // 25 points spread over [0, 1000]: Vandermonde far beyond 1e12
    Vector wide = Vector::LinSpaced(25, 0.0, 1000.0);
    EXPECT_THROW(moment_model(wide, vec_of({1, 500})), IllConditionedError);
}

TEST(Moment, MatchesLinearEqualityConstruction)
{
    Vector x = vec_of({0, 1, 2, 3, 4});
    Vector mu = vec_of({1, 1.6, 3.52});
    auto moment = moment_model(x, mu);
    Matrix b(3, 5);
    for (int i = 0; i < 3; ++i)
        b.row(i) = x.array().pow(i).matrix().transpose();
    auto eq = affine_from_linear_equalities(b, mu, oracle::binomial_pmf(4, 0.4));
    std::mt19937_64 gen(6);
    for (int rep = 0; rep < 50; ++rep) {
        Vector s1 = moment.eval(random_interior(moment, gen));
        EXPECT_TRUE(eq.feasible(affine_inverse(eq, s1), 1e-10));
        Vector s2 = eq.eval(random_interior(eq, gen));
        EXPECT_TRUE(moment.feasible(affine_inverse(moment, s2), 1e-10));
    }
}

TEST(Frechet, IndependentArrayAndMargins)
{
    Vector a = vec_of({0.2, 0.3, 0.5}), b = vec_of({0.5, 0.25, 0.25});
    auto model = frechet_model({a, b});
    EXPECT_EQ(model.k(), 4);
    EXPECT_EQ(model.m(), 9);
    Matrix ab = a * b.transpose();
    Vector theta = vec(ab.topLeftCorner(2, 2));
    EXPECT_TRUE(model.strictly_feasible(theta));
    EXPECT_LE((model.eval(theta) - vec(ab)).lpNorm<Eigen::Infinity>(), 1e-15);
    EXPECT_LE((affine_inverse(model, vec(ab)) - theta).lpNorm<Eigen::Infinity>(), 1e-14);
    EXPECT_EQ(numerical_rank(model.affine_data().a), 4);

    std::mt19937_64 gen(12);
    for (int rep = 0; rep < 100; ++rep) {
        Matrix s = unvec(model.eval(random_interior(model, gen)), 3, 3);
        EXPECT_LE((s.rowwise().sum() - a).lpNorm<Eigen::Infinity>(), 1e-12);
        EXPECT_LE((s.colwise().sum().transpose() - b).lpNorm<Eigen::Infinity>(), 1e-12);
    }

    EXPECT_THROW(frechet_model({vec_of({0.0, 1.0}), b}), ValidationError);
    EXPECT_THROW(frechet_model({vec_of({0.5, 0.6}), b}), ValidationError);
}

TEST(LinearEqualities, SimplexSlice)
{
    Matrix ones = Matrix::Ones(1, 3);
    Vector s0 = Vector::Constant(3, 1.0 / 3);
    auto model = affine_from_linear_equalities(ones, Vector::Ones(1), s0);
    EXPECT_EQ(model.k(), 2);
    EXPECT_TRUE(model.eval(Vector::Zero(2)).isApprox(s0));
    const Matrix& basis = model.affine_data().a;
    EXPECT_TRUE((basis.transpose() * basis).isApprox(Matrix::Identity(2, 2), 1e-12));

    std::mt19937_64 gen(13);
    for (int rep = 0; rep < 100; ++rep)
        EXPECT_NEAR(model.eval(random_interior(model, gen)).sum(), 1.0, 1e-10);

    EXPECT_THROW(affine_from_linear_equalities(ones, Vector::Constant(1, 0.9), s0),
                 ValidationError);
    EXPECT_THROW(affine_from_linear_equalities(Matrix::Identity(3, 3), s0, s0), ValidationError);
}

TEST(AffineInverse, RoundTripAndRejection)
{
    std::mt19937_64 gen(14);
    for (const auto& model : sample_models()) {
        if (!model.is_affine())
            continue;
        for (int rep = 0; rep < 100; ++rep) {
            Vector th = random_interior(model, gen);
            ASSERT_LE((affine_inverse(model, model.eval(th)) - th).lpNorm<Eigen::Infinity>(),
                      1e-12 * std::max(1.0, th.norm()));
        }
    }
    auto model = frechet_model({vec_of({0.2, 0.3, 0.5}), vec_of({0.5, 0.25, 0.25})});
    EXPECT_THROW(affine_inverse(model, Vector::Constant(9, 1.0 / 9)), ValidationError);
}

TEST(AffineModel, PhaseOneFindsInterior)
{
    Matrix a(3, 1);
    a << 1, 1, -2;
    auto model = affine_model(a, vec_of({0, 0, 1}));
    EXPECT_TRUE(model.strictly_feasible(model.interior_point()));
    EXPECT_NEAR(model.interior_point()[0], 1.0 / 3.0, 1e-3);  // max-min slack point
    // empty interior: S(theta) = (theta, 1 - theta, 1) only touches the box
    Matrix a2(3, 1);
    a2 << 1, -1, 0;
    EXPECT_THROW(affine_model(a2, vec_of({0, 1, 1})), ValidationError);
}
