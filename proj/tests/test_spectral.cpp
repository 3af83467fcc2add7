// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "momlat/spectral.hpp"
#include "oracles/kernels.hpp"

using namespace momlat;

namespace
{
double closed_form_1d(double lambda)
{
    return 1 / std::sqrt(lambda * lambda + 2 * lambda);
}

std::vector<double> const kDecades{1e-3, 1e-4, 1e-5, 1e-6};
}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("lattice symbol")
{
    std::vector<double> z3{0, 0, 0};
    CHECK(zeta(z3) == 0.0);
    std::vector<double> half{0.5};
    CHECK(zeta(half) == doctest::Approx(2));
    std::vector<double> q{0.25, 0.25};
    CHECK(zeta(q) == doctest::Approx(1));
}

TEST_CASE("I_lambda, d = 1 closed form")
{
    for (double l : {0.5, 1e-2, 1e-4, 1e-6})
        CHECK(std::abs(integral_I(l, 1) / closed_form_1d(l) - 1) <= 1e-8);
    double const l = 1e-6;
    CHECK(integral_I(l, 1) * std::sqrt(2 * l) == doctest::Approx(1).epsilon(0.02));
}

TEST_CASE("I_lambda against the Bessel representation")
{
    for (int d : {1, 2, 3})
        for (double l : {1.0, 0.1, 0.01})
            CHECK(integral_I(l, d) / oracle::resolvent_bessel(l, d)
                  == doctest::Approx(1).epsilon(1e-7));
}

TEST_CASE("I_lambda, d = 2 grows like a logarithm")
{
    double lo = INFINITY;
    double hi = 0;
    for (double l : kDecades)
    {
        double const r = integral_I(l, 2) / std::log(1 / l);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(hi / lo < 1.2);
    // Increment per decade approaches log(10) / pi.
    double const step = integral_I(1e-6, 2) - integral_I(1e-5, 2);
    CHECK(step == doctest::Approx(std::log(10.0) / std::numbers::pi).epsilon(0.01));
}

TEST_CASE("I_lambda quadrature")
{
    CHECK(QuadratureSpec::required_points(1) == 256);
    CHECK(QuadratureSpec::required_points(1e-4) == 1600);
    try
    {
        integral_I(1e-4, 2, {100});
        FAIL("coarse quadrature accepted");
    }
    catch (ResolutionError const& e)
    {
        CHECK(e.required() == 1600);
        CHECK(std::string(e.what()).find("1600") != std::string::npos);
    }
    CHECK_THROWS_AS(integral_I(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(integral_I(1, 5), std::invalid_argument);

    for (double l : {1e-2, 1e-4, 1e-6})
    {
        int const n = QuadratureSpec::required_points(l);
        double const a = integral_I(l, 2, {n});
        double const b = integral_I(l, 2, {2 * n});
        CHECK(std::abs(a / b - 1) < 1e-8);
    }
    // Decreasing in lambda.
    double prev = INFINITY;
    for (double l : {1e-5, 1e-3, 0.1, 1.0, 10.0})
    {
        double const v = integral_I(l, 3);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("phi_hat_U")
{
    CHECK(phi_hat_U(0.5, 1, PhiKind::phi) == doctest::Approx(0.944272).epsilon(1e-6));
    for (int d : {1, 2, 3})
    {
        double prev = INFINITY;
        for (double l : {0.1, 1.0, 10.0})
        {
            double const v = phi_hat_U(l, d, PhiKind::phi);
            CHECK(v > 0);
            CHECK(v <= 1 / (d * l));
            CHECK(v < prev);
            CHECK(phi_hat_U(l, d, PhiKind::phi_tilde) == doctest::Approx(v / 2));
            prev = v;
        }
    }
}

TEST_CASE("sticky kernel Laplace transform")
{
    for (int d : {1, 2})
    {
        for (double l : {0.2, 1.0})
        {
            double const exact = oracle::sticky_return_laplace(d, l);
            CHECK(sticky_kernel_laplace(l, d) == doctest::Approx(exact).epsilon(1e-6));
        }
    }
    double const l = 0.3;
    double const I = integral_I(l, 1);
    CHECK(sticky_kernel_laplace_stated(l, 1)
          == doctest::Approx(2 * I / (1 + 2 * l * I)));
    CHECK(phi_hat_U_coupled(l, 1, 1, PhiKind::phi)
          == doctest::Approx(0.5 * (sticky_kernel_laplace(l, 1) + 1 / (1 + l))));
    CHECK(phi_hat_U_coupled(l, 2, 0.5, PhiKind::phi_tilde)
          == doctest::Approx(0.25 * sticky_kernel_laplace(l, 2)));
}

TEST_CASE("upper bound scaling")
{
    auto band = [](auto&& f) {
        double lo = INFINITY;
        double hi = 0;
        for (double l : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6})
        {
            double const v = f(l);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi / lo;
    };
    CHECK(band([](double l) { return msd_upper_bound(l, 1, 1) * std::pow(l, 2.5); })
          < 1.5);
    CHECK(band([](double l) {
              return msd_upper_bound(l, 2, 1) * l * l / std::log(1 / l);
          })
          < 2);
    CHECK(band([](double l) { return msd_upper_bound(l, 3, 1) * l * l; }) < 1.5);
}

TEST_CASE("H_lambda")
{
    std::vector<double> origin{0, 0};
    CHECK(h_lambda(origin, 0.3, 2, 1) == doctest::Approx(0.6));
    std::vector<double> p{0.5, 0};
    CHECK(h_lambda(p, 0.3, 2, 1) == doctest::Approx(0.6 + 4));
    // Increasing in lambda where the sine term vanishes; elsewhere the
    // I_{lambda/eps} term decreases and H need not be monotone.
    for (double p1 : {0.0, 0.5})
    {
        std::vector<double> r{p1, 0.71};
        double prev = 0;
        for (double l : {1e-4, 1e-3, 1e-2, 0.1, 1.0})
        {
            double const v = h_lambda(r, l, 2, 0.5);
            CHECK(v > prev);
            prev = v;
        }
    }
    // The sine term carries I at lambda / eps.
    std::vector<double> q{0.125};
    double const l = 0.01;
    double const eps = 0.5;
    double const expect = 2 * l + (1 + eps) * zeta(q)
                          + 0.25 / eps * integral_I(l / eps, 1) * 0.5;
    CHECK(h_lambda(q, l, 1, eps) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("variational lower bound")
{
    double prev_ratio = INFINITY;
    for (double l : kDecades)
    {
        auto b1 = variational_lower_bound(l, 1, 1);
        double const ratio = b1.correction / b1.inv_h;
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
        CHECK(b1.value * std::pow(l, 2.25) > 1.0);
        CHECK(b1.value * std::pow(l, 2.25) < 3.0);
        CHECK(b1.value
              == doctest::Approx(1 / (l * l)
                                 + 2 / (l * l) * (b1.inv_h - b1.theta * b1.theta * b1.h)));
        CHECK(b1.uncorrected >= b1.value);
    }
    prev_ratio = INFINITY;
    for (double l : kDecades)
    {
        auto b2 = variational_lower_bound(l, 2, 1);
        double const ratio = b2.correction / b2.inv_h;
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
        CHECK(b2.value * l * l / std::sqrt(std::log(1 / l)) > 0.5);
    }
    CHECK_THROWS_AS(variational_lower_bound(1e-4, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(variational_lower_bound(1e-4, 1, 1, 64), ResolutionError);
}

TEST_CASE("bounds are ordered")
{
    for (int d : {1, 2})
        for (double eps : {0.5, 1.0, 2.0})
            for (double l : {1e-1, 1e-3, 1e-5})
                CHECK(variational_lower_bound(l, d, eps).value
                      <= msd_upper_bound(l, d, eps));
}

TEST_CASE("growth integrals")
{
    auto band = [](auto&& f) {
        double lo = INFINITY;
        double hi = 0;
        for (double l : kDecades)
        {
            double const v = f(l);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi / lo;
    };
    CHECK(band([](double l) {
              return bound_integral(l, 1, BoundMode::aniso) * std::pow(l, 0.25);
          })
          < 2);
    CHECK(band([](double l) {
              return bound_integral(l, 2, BoundMode::aniso) / std::sqrt(std::log(1 / l));
          })
          < 2);
    double const base = bound_integral(1e-3, 2, BoundMode::iso_obstruction);
    for (double l : kDecades)
        CHECK(bound_integral(l, 2, BoundMode::iso_obstruction) < 2 * base);
}

TEST_CASE("Fourier identities")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> coef(-1, 1);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int trial = 0; trial < 20; ++trial)
    {
        // Even function on a small box.
        LatticeFunction u;
        for (int i = -3; i <= 3; ++i)
        {
            for (int j = 0; j <= 3; ++j)
            {
                double const c = coef(gen);
                u[{i, j, 0, 0}] = c;
                u[{-i, -j, 0, 0}] = c;
            }
        }
        std::vector<double> p{unit(gen), unit(gen)};
        auto const Fu = fourier(u, p);
        CHECK(std::abs(Fu.imag()) < 1e-12);
        std::complex<double> const I(0, 1);
        double const twopi = 2 * std::numbers::pi;
        auto const fw = fourier(forward_difference(u, 0), p);
        auto const fw_expect = (std::exp(-I * twopi * p[0]) - 1.0) * Fu;
        CHECK(std::abs(fw - fw_expect) < 1e-12);
        auto const ce = fourier(central_difference(u, 1), p);
        auto const ce_expect = -2.0 * I * std::sin(twopi * p[1]) * Fu;
        CHECK(std::abs(ce - ce_expect) < 1e-12);
    }
}

TEST_SUITE_END();
