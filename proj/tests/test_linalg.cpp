#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "seplam/error.hpp"
#include "seplam/linalg.hpp"
#include "test_support.hpp"

using namespace seplam;
using seplam::test::diag;

namespace {

bool contains(const std::vector<Complex>& ev, Complex want, double tol) {
    return std::any_of(ev.begin(), ev.end(), [&](Complex l) { return std::abs(l - want) <= tol; });
}

void check_triplet(const CMatrix& m, const SingularTriplet& t) {
    CHECK(t.sigma >= 0.0);
    CHECK(t.left.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.right.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const double scale = 1e-10 * std::max(1.0, m.norm());
    CHECK((m * t.right - t.sigma * t.left).norm() <= scale);
    CHECK((m.adjoint() * t.left - t.sigma * t.right).norm() <= scale);
}

}  // namespace

TEST_CASE("smallest singular triplet of simple matrices") {
    const CMatrix eye = CMatrix::Identity(3, 3);
    CHECK(smallest_singular_triplet(eye).sigma == doctest::Approx(1.0));

    const CMatrix d = diag({3.0, 0.5, 2.0});
    const SingularTriplet t = smallest_singular_triplet(d);
    CHECK(t.sigma == doctest::Approx(0.5));
    CHECK(std::abs(t.right(1)) == doctest::Approx(1.0));
    CHECK(std::abs(t.right(0)) < 1e-14);
    check_triplet(d, t);
}

TEST_CASE("smallest singular value agrees with a Jacobi SVD") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix m = test::random_complex(6, rng);
        const SingularTriplet t = smallest_singular_triplet(m);
        CHECK(std::abs(t.sigma - test::sigma_min_ref(m, 0.0)) <= 1e-12);
        CHECK(std::abs(smallest_singular_value(m) - t.sigma) <= 1e-12);
        check_triplet(m, t);
    }
}

TEST_CASE("eigenvalues") {
    const auto ev = eigenvalues(diag({Complex(1, 2), -3.0}));
    REQUIRE(ev.size() == 2);
    CHECK(contains(ev, Complex(1, 2), 1e-14));
    CHECK(contains(ev, -3.0, 1e-14));

    CMatrix m(2, 2);
    m << 1.0, -0.5, 0.5, -1.0;
    // det(M - lI) = l^2 - 1 + 0.25
    const auto ev2 = eigenvalues(m);
    CHECK(contains(ev2, std::sqrt(0.75), 1e-12));
    CHECK(contains(ev2, -std::sqrt(0.75), 1e-12));

    CMatrix companion = CMatrix::Zero(3, 3);  // z^3 - 1
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(0, 2) = 1.0;
    const auto roots = eigenvalues(companion);
    for (int k = 0; k < 3; ++k) CHECK(contains(roots, std::polar(1.0, 2.0 * std::numbers::pi * k / 3), 1e-12));
}

TEST_CASE("sigma_min_shifted") {
    CHECK(sigma_min_shifted(test::scalar(0.0), 0.3) == doctest::Approx(0.3));
    CHECK(sigma_min_shifted(diag({0.0, Complex(0, 4)}), 2.0) == doctest::Approx(2.0));

    std::mt19937_64 rng(5);
    const CMatrix m = test::random_complex(8, rng);
    const Complex z(1.0, 1.0);
    CHECK(sigma_min_shifted(m, z) == smallest_singular_triplet(shifted(m, z)).sigma);
    CHECK(std::abs(sigma_min_at(m, z) - sigma_min_shifted(m, z)) <= 1e-12);
}

TEST_CASE("sigma_min is 1-Lipschitz and equals the spectral distance for normal matrices") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    const CMatrix m = test::random_complex(5, rng);
    const CMatrix d = diag({Complex(1, 1), Complex(-2, 0.5), Complex(0, -3)});
    for (int k = 0; k < 50; ++k) {
        const Complex z1(g(rng), g(rng));
        const Complex z2 = z1 + Complex(0.3 * g(rng), 0.3 * g(rng));
        CHECK(std::abs(sigma_min_at(m, z1) - sigma_min_at(m, z2)) <= std::abs(z1 - z2) + 1e-13);
        const double dist = std::min({std::abs(z1 - Complex(1, 1)), std::abs(z1 - Complex(-2, 0.5)),
                                      std::abs(z1 - Complex(0, -3))});
        CHECK(std::abs(sigma_min_shifted(d, z1) - dist) <= 1e-12);
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(require_square_finite(CMatrix(2, 3), "A"), std::invalid_argument);
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 1) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(require_square_finite(bad, "A"), std::invalid_argument);
    CHECK_NOTHROW(require_square_finite(CMatrix::Identity(2, 2), "A"));
}
