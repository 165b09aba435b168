#pragma once

#include <span>
#include <vector>

namespace nsd {

struct OptimisticResult {
    double value = 0.0;
    std::vector<double> q;
};

// Maximizes q . values over distributions q within L1 distance `radius` of
// `p_hat`: saturate the top-value signal with half the radius, then walk up
// from the lowest-value signal removing mass until the total is 1. Ties in
// the value ordering are broken by lower signal index.
//
// p_hat may be sub-normalized (entries >= 0, sum <= 1); the returned q is a
// distribution in all cases, but the L1 feasibility guarantee only holds when
// p_hat itself is one. Throws std::invalid_argument on a negative radius or
// non-finite input.
OptimisticResult optimistic_value(std::span<const double> p_hat, double radius,
                                  std::span<const double> values);

}  // namespace nsd
