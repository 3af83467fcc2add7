// SPDX-License-Identifier: Apache-2.0
#include "momlat/estimators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "momlat/parallel.hpp"

namespace momlat
{
namespace
{
std::string shortest(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void check_times(std::span<double const> times)
{
    if (times.empty())
        throw std::invalid_argument("time grid is empty");
    if (times.front() < 0)
        throw std::invalid_argument("times must be nonnegative");
    for (std::size_t i = 1; i < times.size(); ++i)
    {
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("times must be strictly increasing");
    }
}
}  // namespace

std::string config_fingerprint(SimConfig const& config)
{
    std::string s = "model=" + to_string(config.model.model())
                    + ";eps=" + shortest(config.model.eps())
                    + ";dim=" + std::to_string(config.dim) + ";p=";
    for (std::size_t i = 0; i < config.measure.weights().size(); ++i)
    {
        if (i)
            s += ',';
        s += shortest(config.measure.weights()[i]);
    }
    s += ";seed=" + std::to_string(config.base_seed) + ";time="
         + (config.time_mode == TimeMode::continuous ? "continuous"
                                                     : "jumpchain");
    return s;
}

std::vector<double> geometric_grid(double horizon)
{
    std::vector<double> t;
    for (double x = 1; x <= horizon; x *= 2)
        t.push_back(x);
    return t;
}

std::vector<double> linear_grid(double horizon, std::size_t n)
{
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
    return t;
}

//---------------------------------------------------------------------------//
MSDSeries msd_ensemble(SimConfig const& config, std::span<double const> times,
                       std::uint64_t n_reps, unsigned threads)
{
    config.validate();
    check_times(times);
    if (n_reps < 2)
        throw std::invalid_argument("msd_ensemble needs at least 2 replicas");

    std::size_t const n = times.size();
    auto acc = reduce_replicas(
        n_reps, threads, MomentsArray(n),
        [&](std::uint64_t r, MomentsArray& m) {
            Stream rng(stream_seed(config.base_seed, r));
            Runner run(config.model, config.time_mode,
                       initial_state(config, r), rng);
            for (std::size_t k = 0; k < n; ++k)
            {
                run.advance_to(times[k]);
                m[k].add(static_cast<double>(run.state().position.norm2()));
            }
        });

    MSDSeries out;
    out.times.assign(times.begin(), times.end());
    out.n_reps = n_reps;
    out.fingerprint = config_fingerprint(config);
    for (std::size_t k = 0; k < n; ++k)
    {
        out.msd.push_back(acc[k].mean);
        out.stderr.push_back(acc[k].stderr_of_mean());
    }
    return out;
}

//---------------------------------------------------------------------------//
YaglomSeries yaglom_decompose(SimConfig const& config,
                              std::span<double const> times,
                              std::uint64_t n_reps, unsigned threads)
{
    config.validate();
    check_times(times);
    std::size_t const n = times.size();
    double const rate = config.model.total_rate();

    // Four moment slots per time: |X|^2, sum (int phi)^2, and both paired
    // differences.
    auto acc = reduce_replicas(
        n_reps, threads, MomentsArray(4 * n),
        [&](std::uint64_t r, MomentsArray& m) {
            auto traj = run_trajectory(config, r, times, times.back(), true);
            for (std::size_t k = 0; k < n; ++k)
            {
                double const x2
                    = static_cast<double>(traj.positions[k].norm2());
                double c2 = 0;
                for (double c : traj.compensator_integral[k])
                    c2 += c * c;
                m[4 * k].add(x2);
                m[4 * k + 1].add(c2);
                m[4 * k + 2].add(x2 - times[k] - c2);
                m[4 * k + 3].add(x2 - rate * times[k] - c2);
            }
        });

    YaglomSeries out;
    out.times.assign(times.begin(), times.end());
    out.jump_rate = rate;
    for (std::size_t k = 0; k < n; ++k)
    {
        auto e = to_estimate(acc[4 * k]);
        e.value -= times[k];
        out.excess_over_t.push_back(e);
        out.compensator_square.push_back(to_estimate(acc[4 * k + 1]));
        out.difference.push_back(to_estimate(acc[4 * k + 2]));
        out.difference_rate.push_back(to_estimate(acc[4 * k + 3]));
    }
    return out;
}

//---------------------------------------------------------------------------//
namespace
{
double observe(Observable f, WalkerState const& s)
{
    if (f == Observable::phi)
        return s.hand.component(0);
    return 0.5 * (s.hand.component(0) + s.site_arrow().component(0));
}

MomentsArray autocorr_moments(MeasureP const& measure,
                              std::span<double const> times,
                              std::uint64_t n_reps, std::uint64_t seed,
                              unsigned threads)
{
    check_times(times);
    std::size_t const n = times.size();
    SimConfig config;
    config.dim = measure.dimension();
    config.model = ModelKind(Model::u_only);
    config.measure = measure;
    config.base_seed = seed;
    return reduce_replicas(
        n_reps, threads, MomentsArray(3 * n),
        [&](std::uint64_t r, MomentsArray& m) {
            Stream rng(stream_seed(seed, r));
            Runner run(config.model, TimeMode::continuous,
                       initial_state(config, r), rng);
            double const phi0 = observe(Observable::phi, run.state());
            double const tilde0 = observe(Observable::phi_tilde, run.state());
            for (std::size_t k = 0; k < n; ++k)
            {
                run.advance_to(times[k]);
                double const a = phi0 * observe(Observable::phi, run.state());
                double const b
                    = tilde0 * observe(Observable::phi_tilde, run.state());
                m[3 * k].add(a);
                m[3 * k + 1].add(b);
                m[3 * k + 2].add(a - 2 * b);
            }
        });
}
}  // namespace

std::vector<Estimate> autocorr_U(Observable f, MeasureP const& measure,
                                 std::span<double const> times,
                                 std::uint64_t n_reps, std::uint64_t seed,
                                 unsigned threads)
{
    auto pair = autocorr_U_pair(measure, times, n_reps, seed, threads);
    return f == Observable::phi ? pair.phi : pair.phi_tilde;
}

AutocorrPair autocorr_U_pair(MeasureP const& measure,
                             std::span<double const> times,
                             std::uint64_t n_reps, std::uint64_t seed,
                             unsigned threads)
{
    auto acc = autocorr_moments(measure, times, n_reps, seed, threads);
    AutocorrPair out;
    for (std::size_t k = 0; k < times.size(); ++k)
    {
        out.phi.push_back(to_estimate(acc[3 * k]));
        out.phi_tilde.push_back(to_estimate(acc[3 * k + 1]));
        out.phi_minus_twice_tilde.push_back(to_estimate(acc[3 * k + 2]));
    }
    return out;
}

//---------------------------------------------------------------------------//
LaplaceResult laplace_transform(std::span<double const> times,
                                std::span<double const> values, double lambda)
{
    if (!(lambda > 0))
        throw std::invalid_argument("lambda must be positive");
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("need at least two matching samples");
    if (times.front() != 0)
        throw std::invalid_argument("grid must start at t = 0");
    check_times(times);

    double sum = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
    {
        double const h = times[i] - times[i - 1];
        sum += 0.5 * h
               * (values[i - 1] * std::exp(-lambda * times[i - 1])
                  + values[i] * std::exp(-lambda * times[i]));
    }

    // int_T^inf f(T) (t/T)^2 e^{-lambda t} dt.
    double const big_t = times.back();
    double const f_t = std::abs(values.back());
    double const l = lambda;
    double const tail = f_t / (big_t * big_t) * std::exp(-l * big_t)
                        * (big_t * big_t / l + 2 * big_t / (l * l)
                           + 2 / (l * l * l));

    LaplaceResult out;
    out.tail = tail;
    out.value = sum + tail;
    out.truncated = lambda * big_t < 10
                    || tail > 0.01 * std::abs(out.value);
    return out;
}

LaplaceResult laplace_transform(MSDSeries const& series, double lambda)
{
    std::vector<double> t;
    std::vector<double> v;
    if (series.times.empty() || series.times.front() > 0)
    {
        t.push_back(0);
        v.push_back(0);
    }
    t.insert(t.end(), series.times.begin(), series.times.end());
    v.insert(v.end(), series.msd.begin(), series.msd.end());
    return laplace_transform(t, v, lambda);
}

//---------------------------------------------------------------------------//
ExponentFit fit_exponent(MSDSeries const& series, double t_min, double t_max)
{
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < series.times.size(); ++i)
    {
        double const t = series.times[i];
        if (t >= t_min && t <= t_max && t > 0 && series.msd[i] > 0)
        {
            lx.push_back(std::log(t));
            ly.push_back(std::log(series.msd[i]));
        }
    }
    std::size_t const n = lx.size();
    if (n < 5)
        throw std::invalid_argument(
            "exponent fit needs at least 5 positive points in the window");

    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        double const r = ly[i] - fit.intercept - fit.slope * lx[i];
        ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    fit.r_squared = syy > 0 ? 1 - ssr / syy : 1.0;
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.points = n;
    return fit;
}

//---------------------------------------------------------------------------//
namespace
{
struct CountAcc
{
    std::vector<std::uint64_t> counts;
    void merge(CountAcc const& o)
    {
        for (std::size_t i = 0; i < counts.size(); ++i)
            counts[i] += o.counts[i];
    }
};
}  // namespace

StationarityResult stationarity_test(SimConfig const& config, double t,
                                     ArrowProbe probe, std::uint64_t n_reps,
                                     unsigned threads)
{
    config.validate();
    int const n_dir = direction_count(config.dim);
    CountAcc proto{std::vector<std::uint64_t>(n_dir, 0)};
    auto acc = reduce_replicas(
        n_reps, threads, proto, [&](std::uint64_t r, CountAcc& c) {
            Stream rng(stream_seed(config.base_seed, r));
            Runner run(config.model, config.time_mode,
                       initial_state(config, r), rng);
            run.advance_to(t);
            auto const& s = run.state();
            Direction const e
                = probe.hand ? s.hand : s.field.at(s.position + probe.offset);
            ++c.counts[e.code()];
        });

    StationarityResult out;
    out.counts = acc.counts;
    int cells = 0;
    for (int k = 0; k < n_dir; ++k)
    {
        double const prob = config.measure.probability(Direction::from_code(k));
        double const expected = prob * static_cast<double>(n_reps);
        out.expected.push_back(expected);
        if (prob > 0)
        {
            double const d = static_cast<double>(out.counts[k]) - expected;
            out.chi_square += d * d / expected;
            ++cells;
        }
        else if (out.counts[k] > 0)
        {
            out.chi_square = INFINITY;
        }
    }
    out.degrees_of_freedom = cells - 1;
    if (!std::isfinite(out.chi_square))
        out.p_value = 0;
    else if (out.degrees_of_freedom > 0)
        out.p_value = boost::math::cdf(
            boost::math::complement(boost::math::chi_squared_distribution<>(
                                        out.degrees_of_freedom),
                                    out.chi_square));
    return out;
}

}  // namespace momlat
