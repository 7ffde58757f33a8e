// oracles.hpp
//
// Test-only reference computations, kept independent of the closed-form
// block evaluation they are used to check:
//   - adaptive interval quadrature of the step density (for f),
//   - adaptive interval quadrature of 2^f (for Phi, after the substitution
//     t = 2^u which turns integral F(t)/t dt into ln2 * integral 2^f(u) du),
//   - the closed-form Young conjugate of power functions.

#pragma once

#include <functional>
#include <map>

#include "orlz/construction.hpp"
#include "orlz/enclosure.hpp"

namespace orlz::testing {

// Enclosure of integral of phi over [0, u] by adaptive bisection. Each
// subinterval contributes len * [phi_min, phi_max]; refinement stops when
// the total width is below tol. Knows nothing about block closed forms.
Enclosure quadrature_f(const CounterexampleModel& model, const Enclosure& u,
                       double tol_log2, int bits);

// Enclosure of Phi(2^v) for v >= 0 via 16-free direct quadrature:
// Phi(2^v) = 2^min(v,4) ... handled internally; integrand values come from
// quadrature_f at dyadic nodes (memoized), not from the block table.
Enclosure quadrature_Phi(const CounterexampleModel& model, const Enclosure& v,
                         double tol_log2, int bits);

// Young conjugate of s^p / p at t, i.e. t^q / q with 1/p + 1/q = 1.
Enclosure power_conjugate_reference(double p, const Enclosure& t, int bits);

// Enclosure of base^e for base > 0 via exp2(e * log2 base).
Enclosure pow_enc(const Enclosure& base, const Enclosure& e, int bits);

}  // namespace orlz::testing
