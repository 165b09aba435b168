#include "nsd/optimism.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nsd {

OptimisticResult optimistic_value(std::span<const double> p_hat, double radius,
                                  std::span<const double> values) {
    const int s = static_cast<int>(p_hat.size());
    if (s == 0 || values.size() != p_hat.size()) {
        throw std::invalid_argument("optimistic_value: dimension mismatch");
    }
    if (!std::isfinite(radius) || radius < 0.0) {
        throw std::invalid_argument("optimistic_value: radius must be finite and >= 0");
    }
    double p_sum = 0.0;
    for (double p : p_hat) {
        if (!std::isfinite(p) || p < 0.0) {
            throw std::invalid_argument("optimistic_value: p_hat entries must be finite and >= 0");
        }
        p_sum += p;
    }
    if (p_sum > 1.0 + 1e-9) {
        throw std::invalid_argument("optimistic_value: p_hat must sum to at most 1");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("optimistic_value: non-finite value");
    }

    // Signals in descending value order; stable sort keeps index order on ties.
    std::vector<int> order(s);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });

    std::vector<double> q(p_hat.begin(), p_hat.end());
    const int top = order[0];
    q[top] = std::min(1.0, p_hat[top] + radius / 2.0);

    double total = std::accumulate(q.begin(), q.end(), 0.0);
    for (int j = s - 1; j >= 1 && total > 1.0 + 1e-12; --j) {
        int idx = order[j];
        double others = total - q[idx];
        q[idx] = std::max(0.0, 1.0 - others);
        total = others + q[idx];
    }

    // Sub-normalized p_hat can leave mass missing; assign the deficit to the
    // best signals so q is always a distribution.
    if (total < 1.0 - 1e-12) {
        double deficit = 1.0 - total;
        for (int idx : order) {
            double add = std::min(deficit, 1.0 - q[idx]);
            q[idx] += add;
            deficit -= add;
            if (deficit <= 0.0) break;
        }
    }

    double value = 0.0;
    for (int i = 0; i < s; ++i) value += q[i] * values[i];
    return {value, std::move(q)};
}

}  // namespace nsd
