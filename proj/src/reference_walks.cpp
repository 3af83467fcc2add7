// SPDX-License-Identifier: Apache-2.0
#include "momlat/reference_walks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "momlat/dynamics.hpp"
#include "momlat/estimators.hpp"
#include "momlat/parallel.hpp"

namespace momlat
{
namespace
{
// Keep the auxiliary walks off the streams used by the dynamics.
constexpr std::uint64_t kStickySalt = 0x737469636b79ull;
constexpr std::uint64_t kDefectSalt = 0x646566656374ull;

void check_dim(int dim)
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("dimension out of range");
}

void check_sorted(std::span<double const> times)
{
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        if (times[i] < 0 || (i && times[i] < times[i - 1]))
            throw std::invalid_argument("times must be sorted and nonnegative");
    }
}
}  // namespace

//---------------------------------------------------------------------------//
void sticky_step(Site& w, int dim, Stream& rng)
{
    if (w.is_origin() && rng.coin())
        return;
    w += Direction::from_code(static_cast<int>(
        rng.below(static_cast<std::uint32_t>(direction_count(dim)))));
}

std::vector<Estimate> sticky_return_series(int dim,
                                           std::span<double const> times,
                                           std::uint64_t n_reps,
                                           std::uint64_t seed,
                                           unsigned threads)
{
    check_dim(dim);
    check_sorted(times);
    std::size_t const n = times.size();
    auto acc = reduce_replicas(
        n_reps, threads, MomentsArray(n), [&](std::uint64_t r, MomentsArray& m) {
            Stream rng(mix64(seed ^ kStickySalt, r));
            Site w;
            double next = rng.exponential(1);
            for (std::size_t k = 0; k < n; ++k)
            {
                while (next <= times[k])
                {
                    sticky_step(w, dim, rng);
                    next += rng.exponential(1);
                }
                m[k].add(w.is_origin() ? 1.0 : 0.0);
            }
        });
    std::vector<Estimate> out;
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(to_estimate(acc[k]));
    return out;
}

Estimate sticky_return_prob(int dim, double t, std::uint64_t n_reps,
                            std::uint64_t seed, unsigned threads)
{
    double const times[] = {t};
    return sticky_return_series(dim, times, n_reps, seed, threads).front();
}

//---------------------------------------------------------------------------//
DefectVertex::DefectVertex(Site a, Site b, int dim) : a_(a), b_(b), dim_(dim)
{
    check_dim(dim);
    if (a == b && !a.is_origin())
        throw std::invalid_argument("diagonal vertex (x, x) with x != 0");
}

int DefectVertex::degree() const
{
    int const n = direction_count(dim_);
    if (is_origin())
        return 2 * n;
    return (a_.is_origin() || b_.is_origin()) ? 2 * n : n;
}

namespace
{
// k-th incident edge: the 2d diagonal moves first, then (when one coordinate
// is zero) moves of the other coordinate alone. At the origin: (0, e) for
// every e, then (e, 0).
std::pair<Site, Site> neighbour_at(Site const& a, Site const& b, int dim,
                                   int k)
{
    int const n = direction_count(dim);
    bool const origin = a.is_origin() && b.is_origin();
    if (origin)
    {
        auto const e = Direction::from_code(k % n);
        return k < n ? std::pair{a, b + e} : std::pair{a + e, b};
    }
    auto const e = Direction::from_code(k % n);
    if (k < n)
        return {a + e, b + e};
    // Only reached when exactly one coordinate is zero.
    if (b.is_origin())
        return {a + e, b};
    return {a, b + e};
}
}  // namespace

std::vector<DefectVertex> DefectVertex::neighbours() const
{
    std::vector<DefectVertex> out;
    for (int k = 0; k < degree(); ++k)
    {
        auto [a, b] = neighbour_at(a_, b_, dim_, k);
        out.emplace_back(a, b, dim_);
    }
    return out;
}

DefectVertex defect_step(DefectVertex const& v, Stream& rng)
{
    int const k = static_cast<int>(
        rng.below(static_cast<std::uint32_t>(v.degree())));
    auto [a, b] = neighbour_at(v.first(), v.second(), v.dimension(), k);
    if (a == b && !a.is_origin())
        throw std::logic_error("defect walk reached a diagonal vertex");
    return {a, b, v.dimension()};
}

//---------------------------------------------------------------------------//
namespace
{
template<class Visit>
void run_defect(DefectVertex v, double t, Stream& rng, Visit&& visit)
{
    for (double clock = rng.exponential(1); clock <= t;
         clock += rng.exponential(1))
        v = defect_step(v, rng);
    visit(v);
}
}  // namespace

DefectEstimate correlation_defect(double t, Site x, Site y, int dim,
                                  std::uint64_t n_reps, std::uint64_t seed,
                                  unsigned threads, CorrelationNorm norm,
                                  double p1)
{
    if (x.is_origin() || y.is_origin())
        throw std::invalid_argument("x and y must both be nonzero");
    if (!(t > 0))
        throw std::invalid_argument("t must be positive");
    DefectVertex const start(x, Site{}, dim);
    double const prefactor
        = norm == CorrelationNorm::stated ? 0.25 : 2 * p1 * p1;

    auto acc = reduce_replicas(
        n_reps, threads, MomentsArray(3), [&](std::uint64_t r, MomentsArray& m) {
            Stream rng(mix64(seed ^ kDefectSalt, r));
            run_defect(start, t, rng, [&](DefectVertex const& v) {
                bool const hit
                    = (v.first() == y && v.second().is_origin())
                      || (v.first().is_origin() && v.second() == y);
                m[0].add(hit ? 1.0 : 0.0);
                m[1].add(v.first().is_origin() ? 1.0 : 0.0);
                m[2].add(v.second().is_origin() ? 1.0 : 0.0);
            });
        });

    DefectEstimate out;
    out.kernel_sum = to_estimate(acc[0]);
    out.value = {prefactor * out.kernel_sum.value,
                 prefactor * out.kernel_sum.stderr};
    out.first_at_zero = to_estimate(acc[1]);
    out.second_at_zero = to_estimate(acc[2]);
    return out;
}

DefectMarginals defect_marginals(double t, DefectVertex const& start,
                                 std::uint64_t n_reps, std::uint64_t seed,
                                 unsigned threads)
{
    auto acc = reduce_replicas(
        n_reps, threads, MomentsArray(2), [&](std::uint64_t r, MomentsArray& m) {
            Stream rng(mix64(seed ^ kDefectSalt, r));
            run_defect(start, t, rng, [&](DefectVertex const& v) {
                m[0].add(v.first().is_origin() ? 1.0 : 0.0);
                m[1].add(v.second().is_origin() ? 1.0 : 0.0);
            });
        });
    return {to_estimate(acc[0]), to_estimate(acc[1])};
}

//---------------------------------------------------------------------------//
namespace
{
// (omega(0)_1 + omega(*)_1) omega(z)_1 in the walker frame.
int gamma_product(WalkerState const& s, Site const& z)
{
    int const beta = s.site_arrow().component(0) + s.hand.component(0);
    int const alpha = s.field.at(s.position + z).component(0);
    return alpha * beta;
}
}  // namespace

Estimate correlation_direct(double t, Site x, Site y, MeasureP const& measure,
                            CorrelationMode mode, std::uint64_t n_reps,
                            std::uint64_t seed, unsigned threads)
{
    if (x.is_origin() || y.is_origin())
        throw std::invalid_argument("x and y must both be nonzero");
    if (!(t > 0))
        throw std::invalid_argument("t must be positive");
    ModelKind const u(Model::u_only);
    double const p1 = measure.weight(0);

    auto acc = reduce_replicas(
        n_reps, threads, Moments{}, [&](std::uint64_t r, Moments& m) {
            std::uint64_t const env = environment_seed(seed, r);
            if (mode == CorrelationMode::stationary)
            {
                Stream rng(stream_seed(seed, r));
                Runner run(u, TimeMode::continuous,
                           WalkerState::start(ArrowField(env, measure)), rng);
                int const g0 = gamma_product(run.state(), x);
                run.advance_to(t);
                m.add(static_cast<double>(g0 * gamma_product(run.state(), y)));
                return;
            }
            int sum = 0;
            for (int s1 : {1, -1})
            {
                for (int s2 : {1, -1})
                {
                    auto e1 = s1 > 0 ? Direction::plus(0) : Direction::minus(0);
                    auto e2 = s2 > 0 ? Direction::plus(0) : Direction::minus(0);
                    ArrowField field(env, measure, {{x, e1}, {Site{}, e2}});
                    Stream rng(stream_seed(seed, r));
                    Runner run(u, TimeMode::continuous,
                               WalkerState::start(std::move(field)), rng);
                    run.advance_to(t);
                    sum += s1 * s2 * gamma_product(run.state(), y);
                }
            }
            m.add(0.5 * p1 * p1 * sum);
        });
    return to_estimate(acc);
}

//---------------------------------------------------------------------------//
CouplingReport coupling_check_phi(MeasureP const& measure,
                                  std::span<double const> times,
                                  std::uint64_t n_reps, std::uint64_t seed,
                                  unsigned threads)
{
    int const d = measure.dimension();
    double const p1 = measure.weight(0);
    auto pair = autocorr_U_pair(measure, times, n_reps, seed, threads);
    auto sticky = sticky_return_series(d, times, n_reps, seed, threads);

    CouplingReport report;
    report.dim = d;
    report.p.assign(measure.weights().begin(), measure.weights().end());
    for (std::size_t k = 0; k < times.size(); ++k)
    {
        CouplingRow row;
        row.t = times[k];
        row.phi = pair.phi[k];
        row.phi_tilde = pair.phi_tilde[k];
        row.sticky = sticky[k];
        row.phi_minus_twice_tilde = pair.phi_minus_twice_tilde[k];

        Estimate const stated{sticky[k].value / d, sticky[k].stderr / d};
        row.sigma_phi_vs_sticky = sigma_distance(row.phi, stated);
        row.sigma_factor_two
            = sigma_distance(row.phi_minus_twice_tilde, Estimate{});

        double const decay = std::exp(-times[k]);
        Estimate const coupled{0.5 * p1 * (sticky[k].value + decay),
                               0.5 * p1 * sticky[k].stderr};
        row.sigma_phi_coupled = sigma_distance(row.phi, coupled);
        Estimate const tilde{0.5 * p1 * sticky[k].value,
                             0.5 * p1 * sticky[k].stderr};
        row.sigma_tilde_coupled = sigma_distance(row.phi_tilde, tilde);
        report.rows.push_back(row);
    }
    return report;
}

//---------------------------------------------------------------------------//
LocalTimeProfile::LocalTimeProfile(std::int64_t anchor_value)
    : values_{anchor_value}
{
}

std::int64_t LocalTimeProfile::edge(std::int32_t x) const
{
    if (x < low_ || x > highest())
        throw std::out_of_range("edge outside the local-time window");
    return values_[index(x)];
}

std::int64_t LocalTimeProfile::gradient(std::int32_t x) const
{
    return edge(x) - edge(x - 1);
}

TsawReport tsaw_check(std::uint64_t n_steps, std::uint64_t seed,
                      std::uint64_t full_check_every)
{
    SimConfig config;
    config.dim = 1;
    config.model = ModelKind(Model::m2);
    config.measure = MeasureP::isotropic(1);
    config.base_seed = seed;
    config.time_mode = TimeMode::jump_chain;

    WalkerState state = initial_state(config, 0);
    Stream rng(stream_seed(seed, 0));

    auto gamma = [&](std::int32_t x) -> std::int64_t {
        Site s;
        s.x[0] = x;
        std::int64_t g = state.field.at(s).sign();
        if (s == state.position)
            g += state.hand.sign();
        return g;
    };

    LocalTimeProfile ell(0);
    TsawReport report;
    auto fail = [&](std::uint64_t k, std::string what) {
        if (report.pass)
        {
            report.pass = false;
            report.first_failure = k;
            report.failure = std::move(what);
        }
    };
    auto check_site = [&](std::uint64_t k, std::int32_t x) {
        if (ell.gradient(x) != -gamma(x))
            fail(k, "gradient relation broken at site " + std::to_string(x));
    };

    // Before each step the window covers the edges around X - 1 .. X + 1, so
    // sites enter it while their arrows are still the initial ones.
    auto cover = [&] {
        std::int32_t const x = state.position.x[0];
        ell.extend_to(x - 1, gamma);
        ell.extend_to(x + 1, gamma);
    };

    cover();
    check_site(0, 0);
    for (std::uint64_t k = 1; k <= n_steps && report.pass; ++k)
    {
        std::int32_t const before = state.position.x[0];
        std::int64_t const grad = ell.gradient(before);
        std::int64_t const g = gamma(before);
        if (g == 0)
            ++report.zero_gamma_visits;

        step(state, config.model, config.time_mode, rng);
        std::int32_t const after = state.position.x[0];
        int const moved = after - before;

        if (grad == -2)
        {
            ++report.forced_right;
            if (moved != 1)
                fail(k, "forced right step went left");
        }
        else if (grad == 2)
        {
            ++report.forced_left;
            if (moved != -1)
                fail(k, "forced left step went right");
        }
        else if (grad == 0)
        {
            ++report.coin_steps;
        }
        else
        {
            fail(k, "gradient at the walker outside {-2, 0, 2}");
        }

        ell.cross(std::min(before, after));
        cover();
        check_site(k, before);
        check_site(k, after);
        if (full_check_every && k % full_check_every == 0)
        {
            ++report.full_checks;
            for (std::int32_t x = ell.lowest() + 1; x <= ell.highest(); ++x)
                check_site(k, x);
        }
        report.steps = k;
    }
    if (report.coin_steps != report.zero_gamma_visits && report.pass)
        fail(report.steps, "coin steps differ from zero-gamma visits");
    return report;
}

//---------------------------------------------------------------------------//
BallisticReport m1_ballistic_check(std::uint64_t n_steps,
                                   std::uint64_t n_seeds,
                                   std::uint64_t base_seed)
{
    SimConfig config;
    config.dim = 1;
    config.model = ModelKind(Model::m1);
    config.measure = MeasureP::isotropic(1);
    config.base_seed = base_seed;
    config.time_mode = TimeMode::jump_chain;

    BallisticReport report;
    report.seeds = n_seeds;
    report.steps = n_steps;
    report.bound = n_steps >= 2 ? static_cast<std::int64_t>((n_steps - 2) / 3)
                                : 0;
    report.min_final_displacement = INT64_MAX;
    report.min_slack = INT64_MAX;

    auto fail = [&](std::string what) {
        if (report.pass)
        {
            report.pass = false;
            report.failure = std::move(what);
        }
    };

    for (std::uint64_t s = 0; s < n_seeds; ++s)
    {
        WalkerState state = initial_state(config, s);
        Stream rng(stream_seed(base_seed, s));
        std::string const tag = "seed " + std::to_string(s);

        std::optional<std::uint64_t> aligned_at;
        Direction aligned_dir;
        std::int32_t aligned_pos = 0;
        auto check_alignment = [&](std::uint64_t k) {
            if (state.hand != state.site_arrow())
                return;
            if (!aligned_at)
            {
                report.max_entry_steps = std::max(report.max_entry_steps, k);
            }
            else
            {
                std::uint64_t const gap = k - *aligned_at;
                if (state.hand != aligned_dir
                    || state.position.x[0] != aligned_pos + aligned_dir.sign())
                    fail(tag + ": realignment changed direction or position");
                if (gap == 1)
                    ++report.realign_one;
                else if (gap == 3)
                    ++report.realign_three;
                else
                    fail(tag + ": realignment after " + std::to_string(gap)
                         + " steps");
            }
            aligned_at = k;
            aligned_dir = state.hand;
            aligned_pos = state.position.x[0];
        };

        check_alignment(0);
        for (std::uint64_t k = 1; k <= n_steps; ++k)
        {
            step(state, config.model, config.time_mode, rng);
            check_alignment(k);
            if (!aligned_at && k > 2)
                fail(tag + ": no alignment within two steps");
            std::int64_t const y = std::abs(std::int64_t{state.position.x[0]});
            std::int64_t const bound
                = k >= 2 ? static_cast<std::int64_t>((k - 2) / 3) : 0;
            report.min_slack = std::min(report.min_slack, y - bound);
            if (y < bound)
                fail(tag + ": |Y_" + std::to_string(k) + "| below bound");
        }
        report.min_final_displacement
            = std::min(report.min_final_displacement,
                       std::abs(std::int64_t{state.position.x[0]}));
    }
    return report;
}

}  // namespace momlat
