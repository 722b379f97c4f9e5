#include "ldgbem/errors.hpp"
#include "ldgbem/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace ldgbem;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// ∫ ξ^p η^q over the reference triangle
double monomial_integral(int p, int q) { return factorial(p) * factorial(q) / factorial(p + q + 2); }

} // namespace

TEST_CASE("gauss segment rules")
{
    const auto& r1 = gauss_segment(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1.points[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

    const auto integrate = [](const SegmentRule& r, int deg) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            s += r.weights[i] * std::pow(r.points[i], deg);
        return s;
    };
    CHECK(integrate(gauss_segment(2), 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(integrate(gauss_segment(5), 9) - 0.1) < 1e-15);
    for (int n = 1; n <= 20; ++n)
        for (int d = 0; d <= 2 * n - 1; ++d)
            CHECK(std::abs(integrate(gauss_segment(n), d) - 1.0 / (d + 1.0)) < 1e-14);
    CHECK_THROWS_AS((void)gauss_segment(0), ConfigError);
    CHECK_THROWS_AS((void)gauss_segment(21), ConfigError);
}

TEST_CASE("triangle rules")
{
    const auto integrate = [](const TriangleRule& r, int p, int q) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            s += r.weights[i] * std::pow(r.points[i][1], p) * std::pow(r.points[i][2], q);
        return s;
    };
    CHECK(integrate(gauss_triangle(1), 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(integrate(gauss_triangle(2), 1, 1) - 1.0 / 24.0) < 1e-15);
    for (int order = 4; order <= 12; ++order)
        CHECK(std::abs(integrate(gauss_triangle(order), 2, 2) - 1.0 / 180.0) < 1e-14);
    for (int order = 1; order <= 12; ++order) {
        const auto& r = gauss_triangle(order);
        for (double w : r.weights)
            CHECK(w > 0.0);
        for (const auto& b : r.points) {
            CHECK(b[0] + b[1] + b[2] == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(b[1] >= 0.0);
            CHECK(b[2] >= 0.0);
        }
        for (int p = 0; p <= order; ++p)
            for (int q = 0; p + q <= order; ++q)
                CHECK(std::abs(integrate(r, p, q) - monomial_integral(p, q)) < 1e-15);
    }
    CHECK_THROWS_AS((void)gauss_triangle(0), ConfigError);
    CHECK_THROWS_AS((void)gauss_triangle(13), ConfigError);
}

TEST_CASE("adaptive oracle")
{
    CHECK(std::abs(adaptive_segment_oracle([](double s) { return std::log(s); }, 0.0, 1.0, 1e-12) + 1.0) < 1e-10);
    CHECK(adaptive_segment_oracle([](double) { return 1.0; }, 0.0, 1.0, 1e-14) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(adaptive_segment_oracle([](double s) { return s * std::log(s); }, 0.0, 1.0, 1e-12) + 0.25) <
          1e-10);
    // 1/s is not integrable
    CHECK_THROWS_AS((void)adaptive_segment_oracle([](double s) { return 1.0 / s; }, 0.0, 1.0, 1e-10, 200),
                    OracleError);
}
