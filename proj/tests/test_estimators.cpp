// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "momlat/estimators.hpp"
#include "momlat/parallel.hpp"
#include "momlat/spectral.hpp"
#include "oracles/kernels.hpp"

using namespace momlat;

namespace
{
SimConfig config(Model m, int d, std::vector<double> p, double eps = 0,
                 std::uint64_t seed = 1)
{
    SimConfig c;
    c.dim = d;
    c.model = ModelKind(m, eps);
    c.measure = MeasureP(std::move(p));
    c.base_seed = seed;
    return c;
}
}  // namespace

TEST_SUITE_BEGIN("estimators");

TEST_CASE("msd at t = 0 and along a U walk")
{
    auto c = config(Model::u_only, 2, {0.5, 0.5}, 0, 4);
    std::vector<double> times{0, 20};
    auto s = msd_ensemble(c, times, 20000, default_threads());
    CHECK(s.msd[0] == 0.0);
    CHECK(s.stderr[0] == 0.0);
    CHECK(std::abs(s.msd[1] - 20) < 3 * s.stderr[1]);
    CHECK(s.n_reps == 20000);
    CHECK(s.fingerprint == config_fingerprint(c));
}

TEST_CASE("msd of the environment-driven walks is at least diffusive")
{
    for (auto m : {Model::m1, Model::m2})
    {
        auto c = config(m, 2, {0.5, 0.5}, 0, 6);
        std::vector<double> times{5, 40};
        auto s = msd_ensemble(c, times, 4000, default_threads());
        for (std::size_t k = 0; k < times.size(); ++k)
            CHECK(s.msd[k] >= times[k] - 3 * s.stderr[k]);
    }
}

TEST_CASE("grids")
{
    CHECK(geometric_grid(10) == std::vector<double>{1, 2, 4, 8});
    CHECK(geometric_grid(8).back() == 8);
    auto l = linear_grid(2, 4);
    CHECK(l == std::vector<double>{0, 0.5, 1, 1.5, 2});
    std::vector<double> bad{1, 1};
    auto c = config(Model::m1, 1, {1});
    CHECK_THROWS_AS(msd_ensemble(c, bad, 10, 1), std::invalid_argument);
}

TEST_CASE("compensator decomposition, rate one")
{
    for (int d : {1, 2})
    {
        auto c = d == 1 ? config(Model::m2, 1, {1}, 0, 12)
                        : config(Model::m2, 2, {0.5, 0.5}, 0, 12);
        std::vector<double> times{4, 16};
        auto y = yaglom_decompose(c, times, 20000, default_threads());
        CHECK(y.jump_rate == 1.0);
        for (std::size_t k = 0; k < times.size(); ++k)
        {
            CHECK(std::abs(y.difference[k].value) < 3 * y.difference[k].stderr);
            CHECK(y.difference_rate[k].value == y.difference[k].value);
        }
    }
}

TEST_CASE("compensator decomposition fails for the M1 family")
{
    // Reversal maps the hand to the site arrow, so the martingale and the
    // compensator integral are correlated. Pinned as a regression.
    for (auto m : {Model::m1, Model::m1_eps})
    {
        auto c = config(m, 1, {1}, m == Model::m1 ? 0 : 1, 12);
        std::vector<double> times{4};
        auto y = yaglom_decompose(c, times, 20000, default_threads());
        CHECK(y.difference_rate[0].value < -10 * y.difference_rate[0].stderr);
    }
}

TEST_CASE("compensator decomposition at t = 0")
{
    auto c = config(Model::m2_eps, 1, {1}, 1, 12);
    std::vector<double> times{0};
    auto y = yaglom_decompose(c, times, 100, 1);
    CHECK(y.excess_over_t[0].value == 0.0);
    CHECK(y.compensator_square[0].value == 0.0);
    CHECK(y.difference_rate[0].value == 0.0);
}

TEST_CASE("compensator decomposition, elliptic walks")
{
    // The martingale part grows at the total jump rate 1 + eps.
    double const eps = 1;
    for (int d : {1, 2})
    {
        auto c = d == 1 ? config(Model::m2_eps, 1, {1}, eps, 13)
                        : config(Model::m2_eps, 2, {1, 0}, eps, 13);
        std::vector<double> times{8};
        auto y = yaglom_decompose(c, times, 20000, default_threads());
        CHECK(y.jump_rate == 1 + eps);
        CHECK(std::abs(y.difference_rate[0].value)
              < 3 * y.difference_rate[0].stderr);
        CHECK(std::abs(y.difference[0].value - eps * times[0])
              < 3 * y.difference[0].stderr);
    }
}

TEST_CASE("U autocorrelations")
{
    SUBCASE("t = 0 moments")
    {
        std::vector<double> times{0};
        auto a = autocorr_U_pair(MeasureP({1, 0}), times, 5000, 3,
                                 default_threads());
        CHECK(a.phi[0].value == 1.0);
        CHECK(std::abs(a.phi_tilde[0].value - 0.5) < 3 * a.phi_tilde[0].stderr);
    }
    SUBCASE("against the sticky kernel, d = 1")
    {
        std::vector<double> times{2};
        auto a = autocorr_U_pair(MeasureP({1}), times, 100000, 5,
                                 default_threads());
        double const P = oracle::sticky_return(1, 2);
        double const phi = 0.5 * (P + std::exp(-2.0));
        CHECK(std::abs(a.phi[0].value - phi) < 3.5 * a.phi[0].stderr);
        CHECK(std::abs(a.phi_tilde[0].value - 0.5 * P)
              < 3.5 * a.phi_tilde[0].stderr);
        double const diff = 0.5 * (std::exp(-2.0) - P);
        CHECK(std::abs(a.phi_minus_twice_tilde[0].value - diff)
              < 3.5 * a.phi_minus_twice_tilde[0].stderr);
    }
    SUBCASE("single observable matches the pair")
    {
        std::vector<double> times{0.5, 3};
        auto m = MeasureP({0.6, 0.4});
        auto a = autocorr_U_pair(m, times, 2000, 9, 2);
        auto b = autocorr_U(Observable::phi_tilde, m, times, 2000, 9, 3);
        for (std::size_t k = 0; k < times.size(); ++k)
            CHECK(a.phi_tilde[k].value == b[k].value);
    }
}

TEST_CASE("Laplace transform")
{
    auto grid = linear_grid(60, 6000);
    std::vector<double> f(grid.begin(), grid.end());
    auto r = laplace_transform(grid, f, 1.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_FALSE(r.truncated);

    auto short_grid = linear_grid(5, 500);
    std::vector<double> g(short_grid.begin(), short_grid.end());
    CHECK(laplace_transform(short_grid, g, 1.0).truncated);

    std::vector<double> late{1, 2};
    std::vector<double> v{1, 2};
    CHECK_THROWS_AS(laplace_transform(late, v, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laplace_transform(grid, f, 0.0), std::invalid_argument);

    MSDSeries s;
    s.times = {1, 2, 3};
    s.msd = {1, 2, 3};
    s.stderr = {0, 0, 0};
    // E(0) = 0 is prepended: trapezoid on [0, 3] with unit steps.
    double const l = 0.1;
    double expect = 0;
    for (int k = 1; k <= 3; ++k)
        expect += 0.5 * ((k - 1) * std::exp(-l * (k - 1)) + k * std::exp(-l * k));
    auto rs = laplace_transform(s, l);
    CHECK(rs.value - rs.tail == doctest::Approx(expect).epsilon(1e-12));
    CHECK(rs.truncated);
}

TEST_CASE("Laplace MSD stays below the upper bound")
{
    double const lambda = 0.5;
    double const eps = 1;
    auto c = config(Model::m2_eps, 1, {1}, eps, 14);
    auto grid = linear_grid(40, 160);
    auto s = msd_ensemble(c, grid, 4000, default_threads());
    auto r = laplace_transform(s, lambda);
    CHECK_FALSE(r.truncated);
    // Conservative error: trapezoid weights times per-point stderr.
    double se = 0;
    for (std::size_t k = 1; k < grid.size(); ++k)
    {
        double const h = grid[k] - grid[k - 1];
        se += 0.5 * h
              * (std::exp(-lambda * grid[k]) * s.stderr[k]
                 + std::exp(-lambda * grid[k - 1]) * s.stderr[k - 1]);
    }
    CHECK(r.value <= msd_upper_bound(lambda, 1, eps) + 3 * se);
    CHECK(r.value >= 1 / (lambda * lambda) - 3 * se);
}

TEST_CASE("exponent fit")
{
    MSDSeries s;
    s.times = geometric_grid(1024);
    for (double t : s.times)
    {
        s.msd.push_back(3 * t);
        s.stderr.push_back(0);
    }
    auto f = fit_exponent(s, 1, 1024);
    CHECK(f.slope == doctest::Approx(1).epsilon(1e-6));
    CHECK(std::exp(f.intercept) == doctest::Approx(3).epsilon(1e-6));
    CHECK(f.points == 11);
    CHECK_THROWS_AS(fit_exponent(s, 256, 1024), std::invalid_argument);
}

TEST_CASE("stationarity of the environment seen from the walker")
{
    auto c = config(Model::m2, 2, {0.7, 0.3}, 0, 15);
    ArrowProbe hand{true, {}};
    auto r = stationarity_test(c, 20, hand, 20000, default_threads());
    CHECK(r.degrees_of_freedom == 3);
    CHECK(r.p_value > 1e-4);

    auto a = config(Model::m1, 2, {1, 0}, 0, 16);
    ArrowProbe ahead{false, make_site({1, 0})};
    auto ra = stationarity_test(a, 20, ahead, 5000, default_threads());
    CHECK(ra.degrees_of_freedom == 1);
    CHECK(ra.counts[2] + ra.counts[3] == 0);
}

TEST_CASE("fingerprint covers every field")
{
    auto a = config(Model::m2_eps, 2, {0.7, 0.3}, 0.25, 3);
    auto b = a;
    b.base_seed = 4;
    auto e = a;
    e.time_mode = TimeMode::jump_chain;
    CHECK(config_fingerprint(a) != config_fingerprint(b));
    CHECK(config_fingerprint(a) != config_fingerprint(e));
    CHECK(config_fingerprint(a)
          == "model=m2eps;eps=0.25;dim=2;p=0.7,0.3;seed=3;time=continuous");
}

TEST_SUITE_END();
