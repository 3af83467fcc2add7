// SPDX-License-Identifier: Apache-2.0
//! \file momlat/spectral.hpp
//! Lattice symbol, resolvent integral I_lambda and the Laplace-domain bounds.
#pragma once

#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "momlat/environment.hpp"

namespace momlat
{
//! zeta_d(p) = 1 - (1/d) sum_j cos(2 pi p_j), d = p.size().
double zeta(std::span<double const> p);

//---------------------------------------------------------------------------//
enum class QuadratureRule
{
    midpoint_periodic
};

struct QuadratureSpec
{
    int points_per_axis = 0;  //!< 0 selects the minimum admissible count
    QuadratureRule rule = QuadratureRule::midpoint_periodic;

    //! max(256, ceil(16 / sqrt(lambda))).
    static int required_points(double lambda);
    //! Smallest admissible spec for lambda.
    static QuadratureSpec for_lambda(double lambda);
};

//! Quadrature too coarse; `required()` names the admissible point count.
class ResolutionError : public std::invalid_argument
{
  public:
    ResolutionError(int requested, int required);
    int requested() const { return requested_; }
    int required() const { return required_; }

  private:
    int requested_;
    int required_;
};

/*!
 * I_lambda = int_{[0,1]^d} dp / (lambda + zeta_d(p)).
 *
 * Periodic midpoint rule on d - 1 axes; the last axis is integrated in
 * closed form, int_0^1 dq / (a - b cos 2 pi q) = (a^2 - b^2)^{-1/2}. Values
 * are cached per (lambda, d, points). Throws ResolutionError when
 * quad.points_per_axis is below the minimum for lambda and
 * std::invalid_argument for lambda <= 0 or d outside [1, kMaxDim].
 */
double integral_I(double lambda, int d, QuadratureSpec quad = {});

//---------------------------------------------------------------------------//
enum class PhiKind
{
    phi,
    phi_tilde
};

//! Stated Laplace transform 2 I / (d (1 + 2 lambda I)); phi~ gets half.
double phi_hat_U(double lambda, int d, PhiKind which);

/*!
 * Laplace transform of the sticky-origin return probability,
 * int e^{-lambda t} P(W_t = 0) dt = 2 I / (1 + lambda I).
 */
double sticky_kernel_laplace(double lambda, int d);
//! The stated form 2 I / (1 + 2 lambda I), kept for comparison.
double sticky_kernel_laplace_stated(double lambda, int d);

/*!
 * Laplace transform of E_U[f(eta_0) f(eta_t)] derived from the coupling with
 * the sticky walk: (p_1/2) (k_hat + 1/(1 + lambda)) for phi and
 * (p_1/2) k_hat for phi~.
 */
double phi_hat_U_coupled(double lambda, int d, double p1, PhiKind which);

//! lambda^{-2} + d 2 eps^{-1} lambda^{-2} phi_hat_U(lambda / eps, d, phi).
double msd_upper_bound(double lambda, int d, double eps);

//---------------------------------------------------------------------------//
//! 2 lambda + (1 + eps) d zeta_d(p) + eps^{-1} I_{lambda/eps} sin^2(2 pi p_1) / 4.
double h_lambda(std::span<double const> p, double lambda, int d, double eps);

struct LowerBound
{
    double value = 0;        //!< lambda^{-2} + 2 lambda^{-2}(int 1/H - theta^2 int H)
    double uncorrected = 0;  //!< same without the theta^2 term
    double correction = 0;   //!< theta^2 int H
    double theta = 0;        //!< int (cos 2 pi p_1 - 1) / H
    double inv_h = 0;        //!< int 1/H
    double h = 0;            //!< int H
    int points = 0;          //!< quadrature points on the p_1 axis
};

/*!
 * Variational lower bound on the Laplace-transformed MSD for d = 1, 2
 * (totally anisotropic in d = 2). The p_2 integrals are done in closed form;
 * the p_1 axis uses a periodic midpoint rule whose resolution follows the
 * width of the peak of 1/H. Throws ResolutionError when `points_per_axis`
 * is positive but too coarse.
 */
LowerBound variational_lower_bound(double lambda, int d, double eps,
                                   int points_per_axis = 0);

//---------------------------------------------------------------------------//
enum class BoundMode
{
    aniso,           //!< lambda + |p|^2 + I p_1^2
    iso_obstruction  //!< lambda + |p|^2 + I |p|^2 (d = 2)
};

/*!
 * int_{[0,1]^d} dp / (lambda + |p|^2 + I_lambda q(p)) with the Euclidean |p|
 * on the unit cube and q = p_1^2 or |p|^2. The p_1 integral is closed form;
 * the p_2 integral uses adaptive Gauss-Kronrod after p_2 = sqrt(a) sinh u.
 */
double bound_integral(double lambda, int d, BoundMode mode);

//---------------------------------------------------------------------------//
//! Finitely supported real function on Z^d.
using LatticeFunction = std::map<std::array<std::int32_t, kMaxDim>, double>;

//! F u(p) = sum_x u(x) exp(2 pi i <p, x>).
std::complex<double> fourier(LatticeFunction const& u,
                             std::span<double const> p);
//! u(x + e_axis) - u(x).
LatticeFunction forward_difference(LatticeFunction const& u, int axis);
//! u(x + e_axis) - u(x - e_axis).
LatticeFunction central_difference(LatticeFunction const& u, int axis);

}  // namespace momlat
