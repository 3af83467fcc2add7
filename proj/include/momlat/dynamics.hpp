// SPDX-License-Identifier: Apache-2.0
//! \file momlat/dynamics.hpp
//! Jump dynamics of the stored-momentum walks M1, M2, M1_eps, M2_eps and U.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "momlat/environment.hpp"
#include "momlat/rng.hpp"

namespace momlat
{
//---------------------------------------------------------------------------//
enum class Model
{
    m1,      //!< step along the hand, then swap
    m2,      //!< fair swap, step along the hand, fair swap
    m1_eps,  //!< m1 plus rate-eps environment-blind moves
    m2_eps,  //!< m2 plus rate-eps environment-blind moves
    u_only   //!< environment-blind moves only
};

//! Model plus its ellipticity; eps > 0 is required for the *_eps kinds.
class ModelKind
{
  public:
    ModelKind(Model model, double eps = 0);

    Model model() const { return model_; }
    double eps() const { return eps_; }
    bool elliptic() const
    {
        return model_ == Model::m1_eps || model_ == Model::m2_eps;
    }
    //! Total jump rate of one walker: 1 + eps for the *_eps kinds, else 1.
    double total_rate() const { return elliptic() ? 1 + eps_ : 1; }
    //! True when the base (environment-driven) move follows the M2 rule.
    bool m2_family() const
    {
        return model_ == Model::m2 || model_ == Model::m2_eps;
    }

  private:
    Model model_;
    double eps_;
};

//! "m1", "m2", "m1eps", "m2eps", "u"; throws std::invalid_argument.
Model parse_model(std::string const& name);
std::string to_string(Model model);

enum class TimeMode
{
    continuous,  //!< exponential holding times
    jump_chain   //!< one jump per unit time
};

struct SimConfig
{
    int dim = 1;
    ModelKind model{Model::m1};
    MeasureP measure = MeasureP::isotropic(1);
    std::uint64_t base_seed = 0;
    TimeMode time_mode = TimeMode::continuous;

    //! Throws std::invalid_argument on inconsistent fields.
    void validate() const;
};

using RealVector = std::array<double, kMaxDim>;

//---------------------------------------------------------------------------//
/*!
 * Instantaneous drift of X in the given state.
 *
 * M1 kinds: the hand arrow. M2 kinds: the mean of hand and site arrows.
 * U moves have zero drift, so the *_eps kinds share the base formula (base
 * moves arrive at rate one).
 */
RealVector compensator(WalkerState const& state, ModelKind const& model);

/*!
 * Execute one jump.
 *
 * Draw order, one 64-bit output per item, items skipped when irrelevant:
 *   1. holding time Exp(total rate)       (continuous mode only)
 *   2. move type, base iff u (1 + eps) < 1 (*_eps kinds only)
 *   3. direction uniform on 2d            (U moves only)
 *   4. first fair swap                    (M2 base and U moves)
 *   5. second fair swap                   (M2 base and U moves)
 */
void step(WalkerState& state, ModelKind const& model, TimeMode mode,
          Stream& rng);

//! Base M1 move: step along the hand, then swap.
void m1_move(WalkerState& state);
//! Base M2 move with explicit coin outcomes.
void m2_move(WalkerState& state, bool swap_before, bool swap_after);
//! U move in direction e with explicit coin outcomes.
void u_move(WalkerState& state, Direction e, bool swap_before,
            bool swap_after);

//---------------------------------------------------------------------------//
struct Trajectory
{
    std::vector<double> record_times;
    std::vector<Site> positions;
    //! Integral of the compensator from 0 to each record time.
    std::vector<RealVector> compensator_integral;
};

//! Fresh state for replica `replica` of `config` (origin, sampled hand).
WalkerState initial_state(SimConfig const& config, std::uint64_t replica);

/*!
 * Run from `state` until `horizon`, sampling right-continuously at the sorted
 * `record_times` (a jump at exactly a record time is included).
 *
 * The compensator is piecewise constant between jumps and is integrated
 * exactly as drift times holding time. In jump-chain mode each jump lasts one
 * time unit. Throws std::invalid_argument for unsorted or out-of-range record
 * times and std::overflow_error if the jump counter would exceed 2^63.
 */
Trajectory run_trajectory(SimConfig const& config, WalkerState state,
                          std::span<double const> record_times, double horizon,
                          Stream& rng, bool track_compensator = true);

/*!
 * A walker with its pending jump time, advanced to successive sample times.
 *
 * Consumes the stream in the same order as repeated `step` calls.
 */
class Runner
{
  public:
    Runner(ModelKind model, TimeMode mode, WalkerState state, Stream& rng);

    //! Perform every jump scheduled at or before t.
    void advance_to(double t);
    WalkerState const& state() const { return state_; }
    WalkerState& state() { return state_; }

  private:
    double draw_holding();

    ModelKind model_;
    TimeMode mode_;
    WalkerState state_;
    Stream& rng_;
    double next_jump_;
};

//! Convenience overload seeding environment and stream from the replica id.
Trajectory run_trajectory(SimConfig const& config, std::uint64_t replica,
                          std::span<double const> record_times, double horizon,
                          bool track_compensator = true);

}  // namespace momlat
