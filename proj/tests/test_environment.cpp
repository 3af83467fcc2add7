// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "momlat/dynamics.hpp"
#include "momlat/environment.hpp"

using namespace momlat;

TEST_SUITE_BEGIN("environment");

TEST_CASE("direction encoding")
{
    for (int d = 1; d <= kMaxDim; ++d)
    {
        std::vector<int> seen;
        for (int k = 0; k < direction_count(d); ++k)
        {
            auto e = Direction::from_code(k);
            CHECK(-(-e) == e);
            CHECK(-e != e);
            CHECK((-e).axis() == e.axis());
            CHECK((-e).sign() == -e.sign());
            CHECK(e.axis() < d);
        }
    }
    CHECK(Direction::plus(1).component(1) == 1);
    CHECK(Direction::minus(1).component(1) == -1);
    CHECK(Direction::minus(1).component(0) == 0);
}

TEST_CASE("measure validation and sampling table")
{
    CHECK_THROWS_AS(MeasureP({0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(MeasureP({1.2, -0.2}), std::invalid_argument);
    CHECK_NOTHROW(MeasureP({0.5, 0.5 + 1e-13}));
    auto m = MeasureP::isotropic(3);
    CHECK(m.probability(Direction::minus(2)) == doctest::Approx(1.0 / 6));
    auto a = MeasureP::totally_anisotropic(2);
    for (std::uint64_t bits : {0ull, ~0ull, 0x8000000000000000ull, 12345ull})
        CHECK(a.pick(bits).axis() == 0);
    CHECK(a.pick(0) == Direction::plus(0));
    CHECK(a.pick(~0ull) == Direction::minus(0));
}

TEST_CASE("sample_arrow: forced values and determinism")
{
    auto m = MeasureP::isotropic(2);
    ArrowField f(42, m, {{Site{}, Direction::plus(0)}});
    CHECK(sample_arrow(f, Site{}) == Direction::plus(0));
    auto s = make_site({3, -7});
    CHECK(sample_arrow(f, s) == sample_arrow(f, s));
    ArrowField g(42, m);
    CHECK(sample_arrow(g, s) == sample_arrow(f, s));
}

TEST_CASE("sample_arrow: frequencies follow mu_p")
{
    // 10^6 fresh sites under p = (1, 0): P(+e_1) = 1/2.
    ArrowField f(7, MeasureP({1, 0}));
    int const n = 1000000;
    int plus = 0;
    int other_axis = 0;
    for (int i = 0; i < n; ++i)
    {
        auto e = f.at(make_site({i % 1000, i / 1000}));
        plus += e == Direction::plus(0);
        other_axis += e.axis() != 0;
    }
    CHECK(other_axis == 0);
    double const freq = static_cast<double>(plus) / n;
    CHECK(std::abs(freq - 0.5) <= 3 * std::sqrt(0.25 / n));
}

TEST_CASE("coupled fields differ exactly on forced sites")
{
    auto m = MeasureP::isotropic(2);
    auto x = make_site({2, 1});
    ArrowField f(9, m, {{x, Direction::plus(0)}, {Site{}, Direction::minus(1)}});
    ArrowField g(9, m, {{x, Direction::minus(0)}, {Site{}, Direction::plus(1)}});
    for (int i = -6; i <= 6; ++i)
    {
        for (int j = -6; j <= 6; ++j)
        {
            auto s = make_site({i, j});
            bool const forced = s == x || s.is_origin();
            CHECK((f.at(s) != g.at(s)) == forced);
        }
    }
}

TEST_CASE("overlay packing range")
{
    SiteOverlay o(2);
    CHECK_NOTHROW(o.slot(make_site({-2000000000, 2000000000}), 1));
    SiteOverlay o4(4);
    CHECK_THROWS_AS(o4.slot(make_site({40000, 0, 0, 0}), 1), std::out_of_range);
    for (int i = 0; i < 10000; ++i)
        o.slot(make_site({i, -i}), static_cast<std::uint8_t>(i % 4));
    CHECK(o.size() == 10001);
    REQUIRE(o.find(make_site({77, -77})) != nullptr);
    CHECK(*o.find(make_site({77, -77})) == 1);
}

TEST_CASE("swap_hand_site")
{
    auto m = MeasureP::isotropic(2);
    auto state = WalkerState::start(ArrowField(1, m, {{Site{}, Direction::minus(1)}}),
                                    Direction::plus(0));
    swap_hand_site(state);
    CHECK(state.hand == Direction::minus(1));
    CHECK(state.site_arrow() == Direction::plus(0));

    auto same = WalkerState::start(ArrowField(1, m, {{Site{}, Direction::plus(1)}}),
                                   Direction::plus(1));
    swap_hand_site(same);
    CHECK(same.hand == Direction::plus(1));
    CHECK(same.site_arrow() == Direction::plus(1));

    // Involution on random states.
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        auto s = WalkerState::start(ArrowField(seed, m));
        auto const hand = s.hand;
        auto const site = s.site_arrow();
        auto const other = s.field.at(make_site({1, 0}));
        swap_hand_site(s);
        swap_hand_site(s);
        CHECK(s.hand == hand);
        CHECK(s.site_arrow() == site);
        CHECK(s.field.at(make_site({1, 0})) == other);
    }
}

TEST_CASE("region_momentum")
{
    auto m = MeasureP::isotropic(2);
    auto x = make_site({4, 4});
    auto s = WalkerState::start(ArrowField(3, m, {{x, Direction::plus(0)}}),
                                Direction::plus(1));
    Site const one[] = {x};
    auto p = region_momentum(s, one, false);
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    auto h = region_momentum(s, {}, true);
    CHECK(h[0] == 0);
    CHECK(h[1] == 1);
}

TEST_CASE("momentum is conserved by every step type")
{
    // Oracle: a direct recount over a box that contains every touched site.
    auto box = [](int d, int r) {
        std::vector<Site> sites;
        for (int i = -r; i <= r; ++i)
            for (int j = (d > 1 ? -r : 0); j <= (d > 1 ? r : 0); ++j)
                sites.push_back(make_site({i, j}));
        return sites;
    };
    for (auto model : {Model::m1, Model::m2, Model::m1_eps, Model::m2_eps,
                       Model::u_only})
    {
        for (int d : {1, 2})
        {
            SimConfig c;
            c.dim = d;
            c.model = ModelKind(model, model == Model::m1_eps || model == Model::m2_eps
                                           ? 0.7
                                           : 0);
            c.measure = MeasureP::isotropic(d);
            c.base_seed = 5;
            c.time_mode = TimeMode::jump_chain;
            auto sites = box(d, 45);
            for (std::uint64_t r = 0; r < 5; ++r)
            {
                auto state = initial_state(c, r);
                Stream rng(stream_seed(c.base_seed, r));
                auto const before = region_momentum(state, sites, true);
                for (int k = 0; k < 40; ++k)
                {
                    auto const t0 = region_momentum(state, sites, true);
                    step(state, c.model, c.time_mode, rng);
                    CHECK(region_momentum(state, sites, true) == t0);
                }
                CHECK(region_momentum(state, sites, true) == before);
                // Touched sites plus hand: the initial hand plus the initial
                // arrows at every site touched so far.
                auto fresh = WalkerState::start(ArrowField(state.field.base_seed(),
                                                           state.field.measure()));
                Momentum expected{};
                expected[fresh.hand.axis()] += fresh.hand.sign();
                state.field.overrides().for_each([&](Site const& s, std::uint8_t) {
                    auto e = fresh.field.at(s);
                    expected[e.axis()] += e.sign();
                });
                CHECK(touched_momentum(state) == expected);
            }
        }
    }
}

TEST_SUITE_END();
