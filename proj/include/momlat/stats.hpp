// SPDX-License-Identifier: Apache-2.0
//! \file momlat/stats.hpp
//! Sample moments with an order-dependent (hence reproducible) merge.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace momlat
{
//! Count, mean and centered second moment (Welford / Chan merge).
struct Moments
{
    std::uint64_t n = 0;
    double mean = 0;
    double m2 = 0;

    void add(double x)
    {
        ++n;
        double const delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(Moments const& o)
    {
        if (o.n == 0)
            return;
        if (n == 0)
        {
            *this = o;
            return;
        }
        double const na = static_cast<double>(n);
        double const nb = static_cast<double>(o.n);
        double const delta = o.mean - mean;
        double const total = na + nb;
        mean += delta * nb / total;
        m2 += o.m2 + delta * delta * na * nb / total;
        n += o.n;
    }

    double variance() const
    {
        return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    }
    double stderr_of_mean() const
    {
        return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
    }
};

//! One Moments per slot (time point, lag, ...).
struct MomentsArray
{
    std::vector<Moments> slots;

    explicit MomentsArray(std::size_t n = 0) : slots(n) {}
    void merge(MomentsArray const& o)
    {
        for (std::size_t i = 0; i < slots.size(); ++i)
            slots[i].merge(o.slots[i]);
    }
    Moments& operator[](std::size_t i) { return slots[i]; }
    Moments const& operator[](std::size_t i) const { return slots[i]; }
};

//! Estimate with its standard error.
struct Estimate
{
    double value = 0;
    double stderr = 0;
};

inline Estimate to_estimate(Moments const& m)
{
    return {m.mean, m.stderr_of_mean()};
}

//! |a - b| in units of the combined standard error (0 when both exact).
inline double sigma_distance(Estimate a, Estimate b)
{
    double const s = std::hypot(a.stderr, b.stderr);
    double const diff = std::abs(a.value - b.value);
    if (s == 0)
        return diff == 0 ? 0.0 : INFINITY;
    return diff / s;
}

}  // namespace momlat
