// SPDX-License-Identifier: Apache-2.0
//! \file momlat/estimators.hpp
//! Ensemble statistics: MSD curves, the compensator decomposition,
//! U-dynamics autocorrelations, Laplace transforms and exponent fits.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "momlat/dynamics.hpp"
#include "momlat/stats.hpp"

namespace momlat
{
//! Stable text identifying every field of a simulation configuration.
std::string config_fingerprint(SimConfig const& config);

struct MSDSeries
{
    std::vector<double> times;
    std::vector<double> msd;
    std::vector<double> stderr;
    std::uint64_t n_reps = 0;
    std::string fingerprint;
};

//! Mean and standard error of |X_t|^2 at each time over replicas [0, n_reps).
MSDSeries msd_ensemble(SimConfig const& config, std::span<double const> times,
                       std::uint64_t n_reps, unsigned threads);

//! Powers of two 1, 2, 4, ... up to and including the largest <= horizon.
std::vector<double> geometric_grid(double horizon);
//! n + 1 evenly spaced points on [0, horizon].
std::vector<double> linear_grid(double horizon, std::size_t n);

//---------------------------------------------------------------------------//
/*!
 * Both sides of E|X_t|^2 = r t + sum_i E[(int_0^t phi_i)^2] on shared
 * replicas, where r is the martingale term rate.
 *
 * `excess_over_t` is E|X_t|^2 - t and `difference` is the paired estimate of
 * |X_t|^2 - t - sum_i (int phi_i)^2. The jump rate of the walk is
 * `jump_rate`; the martingale part contributes jump_rate * t, so the paired
 * `difference_rate` subtracts jump_rate * t instead of t.
 */
struct YaglomSeries
{
    std::vector<double> times;
    std::vector<Estimate> excess_over_t;
    std::vector<Estimate> compensator_square;
    std::vector<Estimate> difference;
    std::vector<Estimate> difference_rate;
    double jump_rate = 1;
};

YaglomSeries yaglom_decompose(SimConfig const& config,
                              std::span<double const> times,
                              std::uint64_t n_reps, unsigned threads);

//---------------------------------------------------------------------------//
enum class Observable
{
    phi,       //!< first component of the hand arrow
    phi_tilde  //!< first component of (hand + site arrow) / 2
};

/*!
 * E_U[f(eta_0) f(eta_t)] for f = phi_1 or phi~_1 under U-only dynamics with a
 * stationary pi_p start. Replica r uses environment and stream seeds derived
 * from (seed, r); both observables on the same seed share trajectories.
 */
std::vector<Estimate> autocorr_U(Observable f, MeasureP const& measure,
                                 std::span<double const> times,
                                 std::uint64_t n_reps, std::uint64_t seed,
                                 unsigned threads);

//! Both observables from the same replicas.
struct AutocorrPair
{
    std::vector<Estimate> phi;
    std::vector<Estimate> phi_tilde;
    //! Paired phi - 2 phi~ per time.
    std::vector<Estimate> phi_minus_twice_tilde;
};
AutocorrPair autocorr_U_pair(MeasureP const& measure,
                             std::span<double const> times,
                             std::uint64_t n_reps, std::uint64_t seed,
                             unsigned threads);

//---------------------------------------------------------------------------//
struct LaplaceResult
{
    double value = 0;  //!< trapezoid over the grid plus the tail estimate
    double tail = 0;   //!< analytic tail beyond the last grid point
    bool truncated = false;  //!< lambda t_max < 10 or tail > 1% of value
};

/*!
 * int_0^inf f(t) e^{-lambda t} dt from samples on a sorted grid starting at 0,
 * with the tail bounded by quadratic growth f(t) <= f(T) (t / T)^2.
 */
LaplaceResult laplace_transform(std::span<double const> times,
                                std::span<double const> values, double lambda);

//! MSD version; E(0) = 0 is prepended when the grid starts after zero.
LaplaceResult laplace_transform(MSDSeries const& series, double lambda);

//---------------------------------------------------------------------------//
struct ExponentFit
{
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
    double t_min = 0;
    double t_max = 0;
    double r_squared = 0;
    std::size_t points = 0;
};

/*!
 * Least squares of log msd against log t over t in [t_min, t_max].
 * Throws std::invalid_argument when fewer than 5 usable points remain.
 */
ExponentFit fit_exponent(MSDSeries const& series, double t_min, double t_max);

//---------------------------------------------------------------------------//
//! Where the stationarity test reads an arrow, relative to the walker.
struct ArrowProbe
{
    bool hand = false;
    Site offset;  //!< used when hand is false
};

struct StationarityResult
{
    std::vector<std::uint64_t> counts;  //!< per direction code
    std::vector<double> expected;
    double chi_square = 0;
    int degrees_of_freedom = 0;
    double p_value = 1;
};

/*!
 * Run every replica to time t and bin the probed arrow; chi-square test of
 * the counts against mu_p over the directions of positive weight.
 */
StationarityResult stationarity_test(SimConfig const& config, double t,
                                     ArrowProbe probe, std::uint64_t n_reps,
                                     unsigned threads);

}  // namespace momlat
