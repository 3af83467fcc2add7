// SPDX-License-Identifier: Apache-2.0
#include "momlat/spectral.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace momlat
{
namespace
{
constexpr double kTwoPi = 2 * std::numbers::pi;

void check_lambda(double lambda)
{
    if (!(lambda > 0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be a positive finite number");
}

void check_dim(int d, int max_dim)
{
    if (d < 1 || d > max_dim)
        throw std::invalid_argument("dimension " + std::to_string(d)
                                    + " outside [1, "
                                    + std::to_string(max_dim) + "]");
}

int resolve(int requested, double width_lambda)
{
    int const need = QuadratureSpec::required_points(width_lambda);
    if (requested == 0)
        return need;
    if (requested < need)
        throw ResolutionError(requested, need);
    return requested;
}

// Midpoint nodes cos(2 pi (k + 1/2) / n), k < n.
std::vector<double> cosines(int n)
{
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k)
        c[k] = std::cos(kTwoPi * (k + 0.5) / n);
    return c;
}

// Sum over the (d-1)-dimensional midpoint grid of
// 1 / sqrt(a^2 - b^2), a = lambda + 1 - (1/d) sum cos, b = 1/d.
double resolvent_sum(double lambda, int d, int n)
{
    double const inv_d = 1.0 / d;
    if (d == 1)
        return 1 / std::sqrt(lambda * lambda + 2 * lambda);

    auto const c = cosines(n);
    // Only half of each axis is needed: cos is symmetric about 1/2.
    int const half = n / 2;
    bool const odd = n % 2 != 0;
    auto weight = [&](int k) { return (odd && k == half) ? 1.0 : 2.0; };
    int const top = odd ? half + 1 : half;

    double total = 0;
    std::array<int, kMaxDim> idx{};
    int const free_axes = d - 1;
    while (true)
    {
        double s = 0;
        double w = 1;
        for (int j = 0; j < free_axes; ++j)
        {
            s += c[idx[j]];
            w *= weight(idx[j]);
        }
        double const a = lambda + 1 - inv_d * s;
        total += w / std::sqrt((a - inv_d) * (a + inv_d));

        int j = 0;
        while (j < free_axes && ++idx[j] == top)
            idx[j++] = 0;
        if (j == free_axes)
            break;
    }
    return total / std::pow(static_cast<double>(n), free_axes);
}

struct CacheKey
{
    double lambda;
    int d;
    int n;
    friend bool operator<(CacheKey const& a, CacheKey const& b)
    {
        return std::tie(a.lambda, a.d, a.n) < std::tie(b.lambda, b.d, b.n);
    }
};

std::shared_mutex cache_mutex;
std::map<CacheKey, double>& cache()
{
    static std::map<CacheKey, double> c;
    return c;
}
}  // namespace

//---------------------------------------------------------------------------//
double zeta(std::span<double const> p)
{
    if (p.empty())
        throw std::invalid_argument("zeta needs at least one coordinate");
    double s = 0;
    for (double x : p)
        s += std::cos(kTwoPi * x);
    return 1 - s / static_cast<double>(p.size());
}

int QuadratureSpec::required_points(double lambda)
{
    check_lambda(lambda);
    double const n = std::ceil(16 / std::sqrt(lambda));
    if (n > 1e9)
        throw std::invalid_argument("lambda too small for the quadrature");
    return std::max(256, static_cast<int>(n));
}

QuadratureSpec QuadratureSpec::for_lambda(double lambda)
{
    return {required_points(lambda), QuadratureRule::midpoint_periodic};
}

ResolutionError::ResolutionError(int requested, int required)
    : std::invalid_argument("quadrature resolution " + std::to_string(requested)
                            + " too coarse; points_per_axis >= "
                            + std::to_string(required) + " required")
    , requested_(requested)
    , required_(required)
{
}

double integral_I(double lambda, int d, QuadratureSpec quad)
{
    check_lambda(lambda);
    check_dim(d, kMaxDim);
    if (quad.points_per_axis != 0 && quad.points_per_axis < 16)
        throw std::invalid_argument("points_per_axis must be at least 16");
    int const n = resolve(quad.points_per_axis, lambda);

    CacheKey const key{lambda, d, n};
    {
        std::shared_lock lock(cache_mutex);
        auto it = cache().find(key);
        if (it != cache().end())
            return it->second;
    }
    double const value = resolvent_sum(lambda, d, n);
    std::unique_lock lock(cache_mutex);
    cache().emplace(key, value);
    return value;
}

//---------------------------------------------------------------------------//
double phi_hat_U(double lambda, int d, PhiKind which)
{
    double const i = integral_I(lambda, d);
    double const v = 2 * i / (d * (1 + 2 * lambda * i));
    return which == PhiKind::phi ? v : 0.5 * v;
}

double sticky_kernel_laplace(double lambda, int d)
{
    double const i = integral_I(lambda, d);
    return 2 * i / (1 + lambda * i);
}

double sticky_kernel_laplace_stated(double lambda, int d)
{
    double const i = integral_I(lambda, d);
    return 2 * i / (1 + 2 * lambda * i);
}

double phi_hat_U_coupled(double lambda, int d, double p1, PhiKind which)
{
    double const k = sticky_kernel_laplace(lambda, d);
    if (which == PhiKind::phi_tilde)
        return 0.5 * p1 * k;
    return 0.5 * p1 * (k + 1 / (1 + lambda));
}

double msd_upper_bound(double lambda, int d, double eps)
{
    check_lambda(lambda);
    if (!(eps > 0))
        throw std::invalid_argument("eps must be positive");
    double const inv2 = 1 / (lambda * lambda);
    return inv2
           + d * 2 / eps * inv2 * phi_hat_U(lambda / eps, d, PhiKind::phi);
}

//---------------------------------------------------------------------------//
double h_lambda(std::span<double const> p, double lambda, int d, double eps)
{
    check_lambda(lambda);
    if (!(eps > 0))
        throw std::invalid_argument("eps must be positive");
    if (static_cast<int>(p.size()) != d)
        throw std::invalid_argument("point dimension differs from d");
    double const s = std::sin(kTwoPi * p[0]);
    return 2 * lambda + (1 + eps) * d * zeta(p)
           + 0.25 / eps * integral_I(lambda / eps, d) * s * s;
}

LowerBound variational_lower_bound(double lambda, int d, double eps,
                                   int points_per_axis)
{
    check_lambda(lambda);
    check_dim(d, 2);
    if (!(eps > 0))
        throw std::invalid_argument("eps must be positive");

    double const kappa = 0.25 / eps * integral_I(lambda / eps, d);
    // Near p = 0, H ~ 2 lambda + 2 pi^2 ((1 + eps) + 4 kappa) p_1^2, so the
    // peak is as narrow as that of integral_I at this effective lambda.
    double const width_lambda = 2 * lambda / ((1 + eps) + 2 * kappa);
    int const n = resolve(points_per_axis, width_lambda);

    // Along p_1 with c = cos, s = sin of 2 pi p_1:
    //   d = 1: H = a,               a = 2 lambda + (1 + eps)(1 - c) + kappa s^2
    //   d = 2: H = a - b cos(2 pi p_2), a = 2 lambda + (1 + eps)(2 - c)
    //          + kappa s^2, b = 1 + eps,
    // and int dp_2 / H = (a^2 - b^2)^{-1/2}, int H dp_2 = a.
    double inv_h = 0;
    double h = 0;
    double theta = 0;
    for (int k = 0; k < n; ++k)
    {
        double const x = kTwoPi * (k + 0.5) / n;
        double const c = std::cos(x);
        double const s = std::sin(x);
        double a = 2 * lambda + kappa * s * s;
        double inv;
        if (d == 1)
        {
            a += (1 + eps) * (1 - c);
            inv = 1 / a;
        }
        else
        {
            double const b = 1 + eps;
            a += (1 + eps) * (2 - c);
            inv = 1 / std::sqrt((a - b) * (a + b));
        }
        inv_h += inv;
        h += a;
        theta += (c - 1) * inv;
    }
    inv_h /= n;
    h /= n;
    theta /= n;

    LowerBound out;
    double const inv2 = 1 / (lambda * lambda);
    out.inv_h = inv_h;
    out.h = h;
    out.theta = theta;
    out.correction = theta * theta * h;
    out.uncorrected = inv2 + 2 * inv2 * inv_h;
    out.value = inv2 + 2 * inv2 * (inv_h - out.correction);
    out.points = n;
    return out;
}

//---------------------------------------------------------------------------//
namespace
{
// int_0^1 dq / (a + b q^2).
double inner_closed(double a, double b)
{
    return std::atan(std::sqrt(b / a)) / std::sqrt(a * b);
}
}  // namespace

double bound_integral(double lambda, int d, BoundMode mode)
{
    check_lambda(lambda);
    check_dim(d, 2);
    double const i = integral_I(lambda, d);
    if (d == 1)
        return inner_closed(lambda, 1 + i);

    double const b = 1 + i;
    double const iso = mode == BoundMode::iso_obstruction ? 1 + i : 1;
    // a(p_2) = lambda + iso p_2^2; substitute p_2 = sqrt(lambda / iso) sinh u
    // to remove the near-singular peak at p_2 = 0.
    double const scale = std::sqrt(lambda / iso);
    double const u_max = std::asinh(1 / scale);
    auto integrand = [&](double u) {
        double const p2 = scale * std::sinh(u);
        double const a = lambda + iso * p2 * p2;
        return inner_closed(a, b) * scale * std::cosh(u);
    };
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(integrand, 0.0, u_max, 15,
                                                1e-12);
}

//---------------------------------------------------------------------------//
std::complex<double> fourier(LatticeFunction const& u,
                             std::span<double const> p)
{
    std::complex<double> sum = 0;
    for (auto const& [x, v] : u)
    {
        double phase = 0;
        for (std::size_t j = 0; j < p.size(); ++j)
            phase += p[j] * x[j];
        sum += v * std::polar(1.0, kTwoPi * phase);
    }
    return sum;
}

namespace
{
LatticeFunction shifted_sum(LatticeFunction const& u, int axis, int plus,
                            int minus)
{
    // out(x) = u(x + plus e) - u(x + minus e).
    LatticeFunction out;
    for (auto const& [x, v] : u)
    {
        auto y = x;
        y[axis] -= plus;
        out[y] += v;
        auto z = x;
        z[axis] -= minus;
        out[z] -= v;
    }
    return out;
}
}  // namespace

LatticeFunction forward_difference(LatticeFunction const& u, int axis)
{
    return shifted_sum(u, axis, 1, 0);
}

LatticeFunction central_difference(LatticeFunction const& u, int axis)
{
    return shifted_sum(u, axis, 1, -1);
}

}  // namespace momlat
