#include "msbsde/quadrature.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace msbsde;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

double gauss_hermite_moment(int p) {
    // int q^p e^{-q^2} dq = Gamma((p+1)/2) for even p, else 0
    return p % 2 ? 0.0 : std::tgamma((p + 1) / 2.0);
}

}  // namespace

TEST_CASE("small rules") {
    const HermiteRule r1(1);
    CHECK(r1.nodes()[0] == 0.0);
    CHECK(r1.weights()[0] == doctest::Approx(kSqrtPi).epsilon(1e-15));

    const auto r2 = hermite_rule(2);
    CHECK(r2.nodes()[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(r2.nodes()[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(r2.weights()[0] == doctest::Approx(kSqrtPi / 2).epsilon(1e-15));
    CHECK(r2.weights()[1] == doctest::Approx(kSqrtPi / 2).epsilon(1e-15));

    const HermiteRule r3(3);
    CHECK(r3.nodes()[0] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-15));
    CHECK(std::abs(r3.nodes()[1]) <= 1e-16);
    CHECK(r3.nodes()[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    CHECK(r3.weights()[1] == doctest::Approx(2 * kSqrtPi / 3).epsilon(1e-15));
    CHECK(r3.weights()[0] == doctest::Approx(kSqrtPi / 6).epsilon(1e-15));
    CHECK(r3.max_abs_node() == doctest::Approx(std::sqrt(1.5)));

    CHECK_THROWS_AS(HermiteRule(0), QuadratureError);
    CHECK_THROWS_AS(HermiteRule(kMaxHermiteOrder + 1), QuadratureError);
}

TEST_CASE("rule invariants for every order") {
    for (int q = 1; q <= kMaxHermiteOrder; ++q) {
        CAPTURE(q);
        const HermiteRule rule(q);
        REQUIRE(rule.order() == q);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.weights().size(); ++i) {
            CHECK(rule.weights()[i] > 0.0);
            CHECK(rule.nodes()[i] == -rule.nodes()[rule.nodes().size() - 1 - i]);
            if (i > 0) CHECK(rule.nodes()[i] > rule.nodes()[i - 1]);
            sum += rule.weights()[i];
        }
        CHECK(std::abs(sum - kSqrtPi) <= 1e-12);

        for (int p = 0; p <= std::min(8, 2 * q - 1); ++p) {
            long double m = 0;
            for (std::size_t i = 0; i < rule.nodes().size(); ++i) {
                m += static_cast<long double>(rule.weights()[i]) * std::pow(static_cast<long double>(rule.nodes()[i]), p);
            }
            CHECK(std::abs(static_cast<double>(m) - gauss_hermite_moment(p)) <=
                  1e-12 * std::max(1.0, gauss_hermite_moment(p)));
        }
    }
}

TEST_CASE("expect examples") {
    const HermiteRule rule(4);
    CHECK(expect(rule, [](double) { return 1.0; }, 3.0, 0.7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(expect(HermiteRule(1), [](double w) { return w; }, 0.7, 0.04) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(expect(HermiteRule(2), [](double w) { return w * w; }, 0.0, 0.25) == doctest::Approx(0.25).epsilon(1e-15));

    CHECK(std::abs(expect_weighted(rule, [](double) { return 1.0; }, 0.3, 0.5)) <= 1e-16);
    CHECK(expect_weighted(HermiteRule(2), [](double w) { return w; }, 0.0, 0.09) ==
          doctest::Approx(0.09).epsilon(1e-15));
    CHECK(std::abs(expect_weighted(HermiteRule(2), [](double w) { return w * w; }, 0.0, 0.25)) <= 1e-16);

    CHECK_THROWS_AS(expect(rule, [](double) { return 1.0; }, 0.0, 0.0), QuadratureError);
    CHECK_THROWS_AS(expect(rule, [](double) { return 1.0; }, 0.0, -1.0), QuadratureError);
    CHECK_THROWS_AS(expect(rule, [](double) { return std::numeric_limits<double>::infinity(); }, 0.0, 1.0),
                    QuadratureError);
    CHECK_THROWS_AS(expect_weighted(rule, [](double) { return std::nan(""); }, 0.0, 1.0), QuadratureError);
}

TEST_CASE("Gaussian moments") {
    for (int q = 3; q <= 20; ++q) {
        const HermiteRule rule(q);
        for (double x : {-1.0, 0.0, 2.0}) {
            for (double dt : {0.01, 0.25}) {
                for (int p = 0; p <= std::min(5, 2 * q - 1); ++p) {
                    const double got = expect(rule, [p](double w) { return std::pow(w, p); }, x, dt);
                    const double ref = static_cast<double>(oracle::gaussian_moment(p, x, dt));
                    CAPTURE(q);
                    CAPTURE(x);
                    CAPTURE(dt);
                    CAPTURE(p);
                    CHECK(std::abs(got - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
                }
            }
        }
    }
    for (double dt : {0.01, 0.25, 1.0, 3.0}) {
        CHECK(expect(HermiteRule(8), [](double w) { return w * w; }, 0.0, dt) == doctest::Approx(dt).epsilon(1e-12));
    }
}

TEST_CASE("weighted expectation identity and linearity") {
    const HermiteRule rule(10);
    auto g = [](double w) { return 1.0 - 2.0 * w + 0.5 * w * w * w; };
    auto wg = [&](double w) { return w * g(w); };
    for (double x : {-1.3, 0.0, 0.4, 2.0}) {
        for (double dt : {0.01, 0.3}) {
            const double lhs = expect_weighted(rule, g, x, dt);
            const double rhs = expect(rule, wg, x, dt) - x * expect(rule, g, x, dt);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));

            auto f1 = [](double w) { return std::sin(w); };
            auto f2 = [](double w) { return std::exp(-w * w); };
            auto combo = [&](double w) { return 2.5 * f1(w) - 0.75 * f2(w); };
            CHECK(expect(rule, combo, x, dt) ==
                  doctest::Approx(2.5 * expect(rule, f1, x, dt) - 0.75 * expect(rule, f2, x, dt)).epsilon(1e-13));
            CHECK(expect_weighted(rule, combo, x, dt) ==
                  doctest::Approx(2.5 * expect_weighted(rule, f1, x, dt) -
                                  0.75 * expect_weighted(rule, f2, x, dt))
                      .epsilon(1e-12)
                      .scale(1.0));
        }
    }
}
