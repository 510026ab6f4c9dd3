// Evaluation of V(q), dV/dq and d2V/dq2 for every potential variant; the only
// module that knows the functional forms. All functions are pure.
#pragma once

#include "rpkubo/model.hpp"

namespace rpkubo {

double potential_value(const PotentialSpec& p, double mass, double q);
double potential_gradient(const PotentialSpec& p, double mass, double q);
double potential_curvature(const PotentialSpec& p, double mass, double q);

// Location of a (global, for the supported variants) minimum of V. Harmonic
// and quartic minimize at 0; the double well at +sqrt(b/a); polynomials are
// located by coarse scan plus golden-section refinement.
double potential_minimum(const PotentialSpec& p, double mass);

// sqrt(max(V''(q_min), 0)/m): the local harmonic frequency at the minimum,
// floored at `floor` to keep proposal widths finite on flat potentials.
double local_harmonic_omega(const PotentialSpec& p, double mass, double floor = 1e-3);

}  // namespace rpkubo
