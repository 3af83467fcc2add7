// SPDX-License-Identifier: Apache-2.0
// Independent ground truth for the tests: exact kernels on truncated boxes
// and a Bessel-function route to I_lambda. Nothing here calls the library's
// Monte Carlo or quadrature code.
#pragma once

#include <map>
#include <utility>
#include <vector>

namespace oracle
{
// P(W_t = 0 | W_0 = 0) for the sticky walk in d = 1 or 2, by uniformization
// on the box [-R, R]^d with R >= t + 6 sqrt(t) + 4.
double sticky_return(int d, double t);

// Same walk started at x (d = 1), probability of being at 0.
double sticky_kernel_1d(int x, double t);

// int_0^inf e^{-lambda t} P(W_t = 0) dt from the jump-chain return
// probabilities a_n: sum_n a_n (1 + lambda)^{-(n+1)}.
double sticky_return_laplace(int d, double lambda);

// d = 1 defect walk: the law of D_t from (a, b) over box vertices.
std::map<std::pair<int, int>, double> defect_law_1d(int a, int b, double t);

// int_0^inf e^{-lambda s} (e^{-s/d} I_0(s/d))^d ds.
double resolvent_bessel(double lambda, int d);

// Second-order series of the sticky return probability at small t.
double sticky_series(int d, double t);
}  // namespace oracle
