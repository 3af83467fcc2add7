// SPDX-License-Identifier: Apache-2.0
//! \file momlat/reference_walks.hpp
//! Auxiliary walks behind the coupling arguments, with their Monte Carlo
//! checks: sticky-origin walk, defect walk, four-field coupling, the TSAW
//! local-time map and the ballistic M1 certificate.
#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momlat/environment.hpp"
#include "momlat/rng.hpp"
#include "momlat/stats.hpp"

namespace momlat
{
//---------------------------------------------------------------------------//
// Sticky-origin walk

/*!
 * One ring of the sticky walk: at the origin stay with probability 1/2 (one
 * coin), otherwise move to a uniform neighbour (one draw).
 */
void sticky_step(Site& w, int dim, Stream& rng);

//! P(W_t = 0 | W_0 = 0) for each time, one sticky walk per replica.
std::vector<Estimate> sticky_return_series(int dim,
                                           std::span<double const> times,
                                           std::uint64_t n_reps,
                                           std::uint64_t seed,
                                           unsigned threads);
Estimate sticky_return_prob(int dim, double t, std::uint64_t n_reps,
                            std::uint64_t seed, unsigned threads);

//---------------------------------------------------------------------------//
// Defect walk on the graph with vertices Z^{2d} minus the diagonal, plus 0

class DefectVertex
{
  public:
    //! Throws std::invalid_argument for a = b != 0.
    DefectVertex(Site a, Site b, int dim);
    static DefectVertex origin(int dim) { return {{}, {}, dim}; }

    Site const& first() const { return a_; }
    Site const& second() const { return b_; }
    int dimension() const { return dim_; }
    bool is_origin() const { return a_.is_origin() && b_.is_origin(); }

    //! Incident edges: 2d diagonal moves, 4d when a coordinate is zero.
    std::vector<DefectVertex> neighbours() const;
    int degree() const;

    friend bool operator==(DefectVertex const&, DefectVertex const&) = default;

  private:
    Site a_;
    Site b_;
    int dim_;
};

/*!
 * Uniform neighbour over the incident edges (one draw). Throws
 * std::logic_error if the move would land on a forbidden diagonal vertex.
 */
DefectVertex defect_step(DefectVertex const& v, Stream& rng);

//! Which prefactor multiplies K_t(x,0; y,0) + K_t(x,0; 0,y).
enum class CorrelationNorm
{
    stated,  //!< 1/4
    coupling    //!< 2 p_1^2, from the four-field coupling
};

struct DefectEstimate
{
    Estimate value;           //!< prefactor times the kernel sum
    Estimate kernel_sum;      //!< K_t(x,0; y,0) + K_t(x,0; 0,y)
    Estimate first_at_zero;   //!< P(D^1_t = 0)
    Estimate second_at_zero;  //!< P(D^2_t = 0)
};

/*!
 * Defect-walk side of the correlation identity from D_0 = (x, 0).
 * Throws std::invalid_argument for x = 0, y = 0 or t <= 0.
 */
DefectEstimate correlation_defect(double t, Site x, Site y, int dim,
                                  std::uint64_t n_reps, std::uint64_t seed,
                                  unsigned threads,
                                  CorrelationNorm norm = CorrelationNorm::stated,
                                  double p1 = 1);

struct DefectMarginals
{
    Estimate first_at_zero;   //!< P(D^1_t = 0)
    Estimate second_at_zero;  //!< P(D^2_t = 0)
};

//! Coordinate projections of the defect walk from `start` at time t.
DefectMarginals defect_marginals(double t, DefectVertex const& start,
                                 std::uint64_t n_reps, std::uint64_t seed,
                                 unsigned threads);

//---------------------------------------------------------------------------//
enum class CorrelationMode
{
    stationary,  //!< plain estimate of the four-point function
    coupled      //!< four fields with forced arrows at x and 0
};

/*!
 * C(t; x, y) = E_U[(eta_0(0)_1 + eta_0(*)_1) eta_0(x)_1
 *                  (eta_t(0)_1 + eta_t(*)_1) eta_t(y)_1]
 * under U dynamics from pi_p, in the frame of the walker.
 *
 * The coupled mode runs four fields sharing seed and stream, with
 * (omega(x), omega(0)) forced to (s_1 e_1, s_2 e_1), and averages
 * (p_1^2 / 2) sum s_1 s_2 Gamma(eta^{s_1 s_2}_t).
 */
Estimate correlation_direct(double t, Site x, Site y, MeasureP const& measure,
                            CorrelationMode mode, std::uint64_t n_reps,
                            std::uint64_t seed, unsigned threads);

//---------------------------------------------------------------------------//
struct CouplingRow
{
    double t = 0;
    Estimate phi;         //!< E_U[phi(eta_0) phi(eta_t)]
    Estimate phi_tilde;   //!< E_U[phi~(eta_0) phi~(eta_t)]
    Estimate sticky;      //!< P(W_t = 0)
    Estimate phi_minus_twice_tilde;  //!< paired phi - 2 phi~

    // Stated relations.
    double sigma_phi_vs_sticky = 0;  //!< phi against sticky / d
    double sigma_factor_two = 0;     //!< phi - 2 phi~ against 0
    // Relations implied by the coupling.
    double sigma_phi_coupled = 0;    //!< phi against (p_1/2)(P + e^{-t})
    double sigma_tilde_coupled = 0;  //!< phi~ against (p_1/2) P
};

struct CouplingReport
{
    int dim = 1;
    std::vector<double> p;
    std::vector<CouplingRow> rows;
};

CouplingReport coupling_check_phi(MeasureP const& measure,
                                  std::span<double const> times,
                                  std::uint64_t n_reps, std::uint64_t seed,
                                  unsigned threads);

//---------------------------------------------------------------------------//
/*!
 * Edge local times of a 1D walk, l(x, x+1), stored on a window that grows
 * with the visited range. Initial values integrate -gamma_0 from the anchor
 * l(0, 1) = 0.
 */
class LocalTimeProfile
{
  public:
    explicit LocalTimeProfile(std::int64_t anchor_value = 0);

    //! l(x, x+1).
    std::int64_t edge(std::int32_t x) const;
    //! l(x, x+1) - l(x-1, x).
    std::int64_t gradient(std::int32_t x) const;
    //! Make l(x-1, x) and l(x, x+1) available; gamma gives the initial arrows.
    template<class Gamma>
    void extend_to(std::int32_t x, Gamma&& gamma0);
    //! Count one crossing of edge (x, x+1).
    void cross(std::int32_t x) { ++values_[index(x)]; }
    std::int32_t lowest() const { return low_; }
    std::int32_t highest() const
    {
        return low_ + static_cast<std::int32_t>(values_.size()) - 1;
    }

  private:
    std::size_t index(std::int32_t x) const
    {
        return static_cast<std::size_t>(x - low_);
    }

    // values_[k] = l(low_ + k, low_ + k + 1)
    std::int32_t low_ = 0;
    std::deque<std::int64_t> values_;
};

template<class Gamma>
void LocalTimeProfile::extend_to(std::int32_t x, Gamma&& gamma0)
{
    // l(y, y+1) = l(y-1, y) - gamma_0(y)
    while (highest() < x)
    {
        std::int32_t const y = highest() + 1;
        values_.push_back(values_.back() - gamma0(y));
    }
    while (low_ > x - 1)
    {
        // l(low-1, low) = l(low, low+1) + gamma_0(low)
        std::int64_t const v = values_.front() + gamma0(low_);
        values_.push_front(v);
        --low_;
    }
}

struct TsawReport
{
    bool pass = true;
    std::optional<std::uint64_t> first_failure;  //!< step index
    std::string failure;
    std::uint64_t steps = 0;
    std::uint64_t forced_right = 0;
    std::uint64_t forced_left = 0;
    std::uint64_t coin_steps = 0;
    std::uint64_t zero_gamma_visits = 0;  //!< times gamma(X) = 0 before a step
    std::uint64_t full_checks = 0;
};

/*!
 * Run the d = 1 M2 jump chain with p = 1. After every step the gradient
 * relation grad l = -gamma is checked at the sites whose arrows changed, and
 * on the whole visited window every `full_check_every` steps.
 */
TsawReport tsaw_check(std::uint64_t n_steps, std::uint64_t seed,
                      std::uint64_t full_check_every = 4096);

//---------------------------------------------------------------------------//
struct BallisticReport
{
    bool pass = true;
    std::string failure;
    std::uint64_t seeds = 0;
    std::uint64_t steps = 0;
    std::int64_t min_final_displacement = 0;  //!< min |Y_n| over seeds
    std::int64_t bound = 0;                   //!< floor((n - 2) / 3)
    std::int64_t min_slack = 0;  //!< min over seeds and k of |Y_k| - bound_k
    std::uint64_t realign_one = 0;    //!< aligned again after one step
    std::uint64_t realign_three = 0;  //!< aligned again after three steps
    std::uint64_t max_entry_steps = 0;  //!< steps before the first alignment
};

/*!
 * d = 1 M1 jump chain from pi_1 for each seed: checks |Y_k| >= floor((k-2)/3)
 * at every k and that an aligned state (hand = site arrow = e) recurs after
 * exactly 1 or 3 steps having moved by e.
 */
BallisticReport m1_ballistic_check(std::uint64_t n_steps,
                                   std::uint64_t n_seeds,
                                   std::uint64_t base_seed);

}  // namespace momlat
