#pragma once

#include "simplexslice/core.hpp"

namespace sslice {

// Constructed direction families that stress the stability certificate near
// its boundaries.

// u = v with the whole delta budget in the middle coefficients: sigma^2 =
// delta (1 - delta/4), lands in the near-1 branch. Needs n >= 3.
Direction near_direction_sigma(double delta_value, int n);

// asymmetric u > v with `mids` equal middle coefficients sized so that
// sigma^2 = 2 delta / (mids + 2) < delta/2, landing in near-2. Needs mids >= 3.
Direction near_direction_flat(double delta_value, int mids = 4);

// two positive coefficients hugging 1/sqrt(2): the far-1.2 pairing branch.
// The sum-zero constraint forces thousands of small middle coefficients.
Direction far_pairing_direction(int mids = 14000);

}  // namespace sslice
