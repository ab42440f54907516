#pragma once

#include <functional>
#include <vector>

#include "parafol/assembly.hpp"

namespace parafol::detail {

// n points on [lo, hi]: lattice points when periodic, cell centres otherwise.
std::vector<double> spread(double lo, double hi, int n, bool periodic);

// tube<k> <-> torus0 on the collar rho in [0.9 eps, eps), skipping tube k
// inside crossing balls (inside_ball(k, T)).
void add_tube_interfaces(Atlas& a, const std::vector<Vec2>& vertices, double eps,
                         const std::function<bool(int, double)>& inside_ball);

}  // namespace parafol::detail
