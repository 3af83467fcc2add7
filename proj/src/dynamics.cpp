// SPDX-License-Identifier: Apache-2.0
#include "momlat/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace momlat
{
ModelKind::ModelKind(Model model, double eps) : model_(model), eps_(eps)
{
    if (!(eps >= 0) || !std::isfinite(eps))
        throw std::invalid_argument("eps must be a finite nonnegative number");
    if (elliptic() && !(eps > 0))
        throw std::invalid_argument("eps > 0 is required for m1eps/m2eps");
}

Model parse_model(std::string const& name)
{
    if (name == "m1")
        return Model::m1;
    if (name == "m2")
        return Model::m2;
    if (name == "m1eps")
        return Model::m1_eps;
    if (name == "m2eps")
        return Model::m2_eps;
    if (name == "u")
        return Model::u_only;
    throw std::invalid_argument("unknown model '" + name + "'");
}

std::string to_string(Model model)
{
    switch (model)
    {
        case Model::m1: return "m1";
        case Model::m2: return "m2";
        case Model::m1_eps: return "m1eps";
        case Model::m2_eps: return "m2eps";
        case Model::u_only: return "u";
    }
    return "?";
}

void SimConfig::validate() const
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("dimension must be in [1, "
                                    + std::to_string(kMaxDim) + "]");
    if (measure.dimension() != dim)
        throw std::invalid_argument("measure dimension differs from dim");
}

//---------------------------------------------------------------------------//
RealVector compensator(WalkerState const& state, ModelKind const& model)
{
    RealVector drift{};
    switch (model.model())
    {
        case Model::m1:
        case Model::m1_eps:
            drift[state.hand.axis()] = state.hand.sign();
            break;
        case Model::m2:
        case Model::m2_eps: {
            auto const site = state.site_arrow();
            drift[state.hand.axis()] += 0.5 * state.hand.sign();
            drift[site.axis()] += 0.5 * site.sign();
            break;
        }
        case Model::u_only: break;
    }
    return drift;
}

void m1_move(WalkerState& state)
{
    state.position += state.hand;
    swap_hand_site(state);
}

void m2_move(WalkerState& state, bool swap_before, bool swap_after)
{
    if (swap_before)
        swap_hand_site(state);
    state.position += state.hand;
    if (swap_after)
        swap_hand_site(state);
}

void u_move(WalkerState& state, Direction e, bool swap_before, bool swap_after)
{
    if (swap_before)
        swap_hand_site(state);
    state.position += e;
    if (swap_after)
        swap_hand_site(state);
}

namespace
{
void base_move(WalkerState& state, bool m2_family, Stream& rng)
{
    if (m2_family)
    {
        bool const c1 = rng.coin();
        bool const c2 = rng.coin();
        m2_move(state, c1, c2);
    }
    else
    {
        m1_move(state);
    }
}

void blind_move(WalkerState& state, Stream& rng)
{
    auto const e = Direction::from_code(static_cast<int>(
        rng.below(static_cast<std::uint32_t>(direction_count(state.dimension())))));
    bool const c1 = rng.coin();
    bool const c2 = rng.coin();
    u_move(state, e, c1, c2);
}

// Jump without advancing the clock.
inline void jump(WalkerState& state, ModelKind const& model, Stream& rng)
{
    switch (model.model())
    {
        case Model::m1:
        case Model::m2: base_move(state, model.m2_family(), rng); break;
        case Model::m1_eps:
        case Model::m2_eps:
            if (rng.uniform() * (1 + model.eps()) < 1)
                base_move(state, model.m2_family(), rng);
            else
                blind_move(state, rng);
            break;
        case Model::u_only: blind_move(state, rng); break;
    }
    ++state.jump_count;
}
}  // namespace

void step(WalkerState& state, ModelKind const& model, TimeMode mode,
          Stream& rng)
{
    if (state.jump_count >= (std::uint64_t{1} << 63))
        throw std::overflow_error("jump counter overflow");
    state.time += mode == TimeMode::continuous
                      ? rng.exponential(model.total_rate())
                      : 1.0;
    jump(state, model, rng);
}

//---------------------------------------------------------------------------//
Runner::Runner(ModelKind model, TimeMode mode, WalkerState state, Stream& rng)
    : model_(model), mode_(mode), state_(std::move(state)), rng_(rng)
{
    next_jump_ = state_.time + draw_holding();
}

double Runner::draw_holding()
{
    return mode_ == TimeMode::continuous
               ? rng_.exponential(model_.total_rate())
               : 1.0;
}

void Runner::advance_to(double t)
{
    while (next_jump_ <= t)
    {
        if (state_.jump_count >= (std::uint64_t{1} << 63))
            throw std::overflow_error("jump counter overflow");
        state_.time = next_jump_;
        jump(state_, model_, rng_);
        next_jump_ = state_.time + draw_holding();
    }
}

//---------------------------------------------------------------------------//
WalkerState initial_state(SimConfig const& config, std::uint64_t replica)
{
    return WalkerState::start(
        ArrowField(environment_seed(config.base_seed, replica), config.measure));
}

Trajectory run_trajectory(SimConfig const& config, WalkerState state,
                          std::span<double const> record_times, double horizon,
                          Stream& rng, bool track_compensator)
{
    if (!std::is_sorted(record_times.begin(), record_times.end()))
        throw std::invalid_argument("record times must be sorted");
    if (!record_times.empty()
        && (record_times.front() < state.time || record_times.back() > horizon))
        throw std::invalid_argument("record times must lie in [0, horizon]");

    Trajectory traj;
    traj.record_times.assign(record_times.begin(), record_times.end());
    traj.positions.reserve(record_times.size());
    if (track_compensator)
        traj.compensator_integral.reserve(record_times.size());

    auto const& model = config.model;
    bool const continuous = config.time_mode == TimeMode::continuous;
    double const rate = model.total_rate();

    RealVector integral{};
    RealVector drift{};
    if (track_compensator)
        drift = compensator(state, model);

    // Holding time of the current state: the next jump happens at next_jump.
    double next_jump = state.time + (continuous ? rng.exponential(rate) : 1.0);
    std::size_t k = 0;
    while (k < record_times.size())
    {
        double const t_rec = record_times[k];
        if (next_jump <= t_rec)
        {
            if (track_compensator)
            {
                double const dt = next_jump - state.time;
                for (int i = 0; i < kMaxDim; ++i)
                    integral[i] += drift[i] * dt;
            }
            if (state.jump_count >= (std::uint64_t{1} << 63))
                throw std::overflow_error("jump counter overflow");
            state.time = next_jump;
            jump(state, model, rng);
            if (track_compensator)
                drift = compensator(state, model);
            next_jump
                = state.time + (continuous ? rng.exponential(rate) : 1.0);
            continue;
        }
        traj.positions.push_back(state.position);
        if (track_compensator)
        {
            RealVector at = integral;
            double const dt = t_rec - state.time;
            for (int i = 0; i < kMaxDim; ++i)
                at[i] += drift[i] * dt;
            traj.compensator_integral.push_back(at);
        }
        ++k;
    }
    return traj;
}

Trajectory run_trajectory(SimConfig const& config, std::uint64_t replica,
                          std::span<double const> record_times, double horizon,
                          bool track_compensator)
{
    Stream rng(stream_seed(config.base_seed, replica));
    return run_trajectory(config, initial_state(config, replica), record_times,
                          horizon, rng, track_compensator);
}

}  // namespace momlat
