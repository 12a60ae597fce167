// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace btspec {

// Airy function Ai evaluated from its Maclaurin series; accurate for
// moderate |x| (the series is used only on [-3, 0] here).
double airy_ai(double x);

// Leftmost zero of Ai, located by bisection on (-3, -2).
// airy_first_zero() returns nu_1 (negative); airy_first_zero_abs() = |nu_1|.
double airy_first_zero();
double airy_first_zero_abs();

} // namespace btspec
