#include "okunfit/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace okunfit {

namespace {

void extend(std::span<const int> allowed, int k, int n, int min_segment, std::size_t from, int prev,
            std::vector<int>& current, std::vector<int>& out) {
    if (static_cast<int>(current.size()) == k) {
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    const int remaining = k - static_cast<int>(current.size());
    for (std::size_t i = from; i < allowed.size(); ++i) {
        const int p = allowed[i];
        if (p - prev < min_segment) continue;
        // The rest of the breaks, and the closing segment, must still fit.
        if (n - p < remaining * min_segment) break;
        current.push_back(p);
        extend(allowed, k, n, min_segment, i + 1, p, current, out);
        current.pop_back();
    }
}

}  // namespace

Placements enumerate_placements(std::span<const int> allowed, int k, int n, int min_segment) {
    Placements result;
    result.width = k;
    if (k == 0) {
        result.n = n >= min_segment ? 1 : 0;
        return result;
    }
    std::vector<int> current;
    current.reserve(static_cast<std::size_t>(k));
    extend(allowed, k, n, min_segment, 0, 0, current, result.positions);
    result.n = result.positions.size() / static_cast<std::size_t>(k);
    return result;
}

std::size_t select_best(std::span<const double> rms, double tolerance) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : rms) {
        if (std::isfinite(v) && v < best) best = v;
    }
    if (!std::isfinite(best)) return npos;
    for (std::size_t i = 0; i < rms.size(); ++i) {
        if (std::isfinite(rms[i]) && rms[i] <= best + tolerance) return i;
    }
    return npos;
}

}  // namespace okunfit
