#pragma once

// Test-only helpers shared by the unit and acceptance suites. The grid
// maximizer is the independent oracle for the optimistic-value solver and
// must stay free of the solver's own logic.

#include <cmath>
#include <limits>
#include <vector>

#include "nsd/rng.hpp"

namespace nsd_test {

// Best value of q . u over a simplex grid with mesh h, restricted to the L1
// ball around p_hat of the given radius (optionally inflated by ball_slack).
// Enumerates every integer composition of 1/h into S parts.
inline double grid_maximum(const std::vector<double>& p_hat, double radius,
                           const std::vector<double>& u, double h, double ball_slack) {
    const int s = static_cast<int>(u.size());
    const int m = static_cast<int>(std::lround(1.0 / h));
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> counts(s, 0);
    std::vector<int> rest(s, 0);

    auto evaluate = [&]() {
        double l1 = 0.0, value = 0.0;
        for (int i = 0; i < s; ++i) {
            double qi = static_cast<double>(counts[i]) / m;
            l1 += std::abs(qi - p_hat[i]);
            value += qi * u[i];
        }
        if (l1 <= radius + ball_slack && value > best) best = value;
    };

    int level = 0;
    rest[0] = m;
    counts[0] = -1;
    while (level >= 0) {
        if (level == s - 1) {
            counts[level] = rest[level];
            evaluate();
            --level;
            continue;
        }
        ++counts[level];
        if (counts[level] > rest[level]) {
            counts[level] = -1;
            --level;
            continue;
        }
        rest[level + 1] = rest[level] - counts[level];
        ++level;
        counts[level] = -1;
    }
    return best;
}

inline std::vector<double> random_simplex_point(nsd::Rng& rng, int s) {
    std::vector<double> p(s);
    double sum = 0.0;
    for (double& v : p) {
        v = -std::log(1.0 - rng.uniform());
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

}  // namespace nsd_test
