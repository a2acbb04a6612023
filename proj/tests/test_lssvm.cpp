#include <doctest.h>

#include <cmath>
#include <vector>

#include "windcast/linalg.hpp"
#include "windcast/lssvm.hpp"
#include "windcast/rng.hpp"

using namespace windcast;

namespace {

// Textbook oracle: assemble the full (N+1)x(N+1) bordered KKT system and run
// Gaussian elimination with partial pivoting, independently of train().
struct OracleSolution {
    double bias;
    std::vector<double> duals;
};

OracleSolution oracle_solve(const TrainingSet& data, const LssvmHyper& hyper) {
    const std::size_t n = data.inputs.rows;
    std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1, 0.0));
    std::vector<double> rhs(n + 1, 0.0);
    a[0][0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[0][i + 1] = 1.0;
        a[i + 1][0] = 1.0;
        rhs[i + 1] = data.targets[i];
        for (std::size_t j = 0; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < data.inputs.cols; ++c) {
                double d = data.inputs(i, c) - data.inputs(j, c);
                d2 += d * d;
            }
            a[i + 1][j + 1] = std::exp(-d2 / (2.0 * hyper.sigma2));
        }
        a[i + 1][i + 1] += 1.0 / hyper.gamma;
    }
    // forward elimination with partial pivoting
    const std::size_t m = n + 1;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(m);
    for (std::size_t i = m; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t k = i + 1; k < m; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    OracleSolution sol;
    sol.bias = x[0];
    sol.duals.assign(x.begin() + 1, x.end());
    return sol;
}

TrainingSet random_problem(std::size_t n, std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    TrainingSet data;
    data.inputs = Matrix(n, dim);
    data.targets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) data.inputs(i, j) = rng.uniform(-2.0, 2.0);
        data.targets[i] = rng.uniform(-1.0, 1.0);
    }
    return data;
}

} // namespace

TEST_CASE("rbf kernel values") {
    CHECK(rbf_kernel({1.0, 2.0}, {1.0, 2.0}, 3.0) == 1.0);
    // squared distance 2*sigma2 gives exactly exp(-1)
    CHECK(rbf_kernel({0.0}, {3.0}, 4.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(rbf_kernel({0.0, 0.0}, {1.0, 1.0}, 1.0) ==
          doctest::Approx(rbf_kernel({1.0, 1.0}, {0.0, 0.0}, 1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(rbf_kernel({1.0}, {1.0, 2.0}, 1.0), InvalidInput);
    CHECK_THROWS_AS(rbf_kernel({1.0}, {1.0}, 0.0), InvalidInput);
}

TEST_CASE("single-point problem solves the 2x2 system by hand") {
    TrainingSet data;
    data.inputs = Matrix(1, 2);
    data.inputs(0, 0) = 0.3;
    data.inputs(0, 1) = -1.2;
    data.targets = {7.0};
    LssvmModel model = train(data, LssvmHyper{10.0, 1.0});
    CHECK(model.duals[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(model.bias == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(predict(model, {100.0, 100.0}) == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(predict(model, {0.3, -1.2}) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("all-zero targets give the zero solution") {
    TrainingSet data = random_problem(8, 3, 21);
    data.targets.assign(8, 0.0);
    LssvmModel model = train(data, LssvmHyper{5.0, 0.7});
    CHECK(std::fabs(model.bias) < 1e-12);
    for (double a : model.duals) CHECK(std::fabs(a) < 1e-12);
}

TEST_CASE("agrees with the dense elimination oracle") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        TrainingSet data = random_problem(20, 2, seed);
        LssvmHyper hyper{8.0, 0.5};
        LssvmModel model = train(data, hyper);
        OracleSolution oracle = oracle_solve(data, hyper);
        CHECK(model.bias == doctest::Approx(oracle.bias).epsilon(1e-9));
        for (std::size_t i = 0; i < 20; ++i)
            CHECK(model.duals[i] == doctest::Approx(oracle.duals[i]).epsilon(1e-9));
    }
}

TEST_CASE("kkt residual and dual-sum constraint hold") {
    for (std::uint64_t seed = 31; seed <= 35; ++seed) {
        TrainingSet data = random_problem(25, 3, seed);
        LssvmModel model = train(data, LssvmHyper{50.0, 1.5});
        CHECK(model.kkt_residual < 1e-8);
        double sum = 0.0, l1 = 0.0;
        for (double a : model.duals) {
            sum += a;
            l1 += std::fabs(a);
        }
        CHECK(std::fabs(sum) < 1e-8 * l1 + 1e-12);
    }
}

TEST_CASE("near-interpolation at a training point under huge gamma") {
    Rng rng(77);
    TrainingSet data;
    data.inputs = Matrix(12, 1);
    data.targets.resize(12);
    for (std::size_t i = 0; i < 12; ++i) {
        data.inputs(i, 0) = static_cast<double>(i) / 3.0;
        data.targets[i] = std::sin(data.inputs(i, 0));  // noiseless
    }
    LssvmModel model = train(data, LssvmHyper{1e9, 1.0});
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(predict(model, {data.inputs(i, 0)}) ==
              doctest::Approx(data.targets[i]).epsilon(1e-3));
}

TEST_CASE("zero-dual model predicts its bias") {
    LssvmModel model;
    model.support_inputs = Matrix(2, 1);
    model.duals = {0.0, 0.0};
    model.bias = 0.0;
    model.hyper = LssvmHyper{1.0, 1.0};
    CHECK(predict(model, {123.0}) == 0.0);
}

TEST_CASE("kernel matrix is symmetric with unit diagonal") {
    TrainingSet data = random_problem(10, 2, 5);
    Matrix k = detail::kernel_matrix(data.inputs, 0.8);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(k(i, i) == 1.0);
        for (std::size_t j = 0; j < 10; ++j) CHECK(k(i, j) == k(j, i));
    }
}

TEST_CASE("ill-conditioned system raises with an estimate") {
    TrainingSet data;
    data.inputs = Matrix(3, 1);
    data.inputs(0, 0) = data.inputs(1, 0) = data.inputs(2, 0) = 1.0;  // duplicates
    data.targets = {1.0, 1.0, 1.0};
    try {
        train(data, LssvmHyper{1e15, 1.0});
        FAIL("expected ConditioningError");
    } catch (const ConditioningError& e) {
        CHECK(e.condition_estimate > 1e12);
    }
}

TEST_CASE("prediction dimension is checked") {
    TrainingSet data = random_problem(5, 2, 9);
    LssvmModel model = train(data, LssvmHyper{10.0, 1.0});
    CHECK_THROWS_AS(predict(model, {1.0}), InvalidInput);
}
