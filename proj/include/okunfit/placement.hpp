#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace okunfit {

/// Which implementation of an exhaustive placement search to run. The
/// reference path refits every placement from scratch, serially, and exists
/// to cross-check the parallel kernel.
enum class Backend { parallel, reference };

/// RMS values within this distance of the optimum count as ties; ties go to
/// the lexicographically smallest break set.
inline constexpr double kRmsTieTolerance = 1e-12;

/// Flat list of break placements, `width` positions per placement, in
/// lexicographic order.
struct Placements {
    int width = 0;
    std::size_t n = 0;
    std::vector<int> positions;

    std::size_t count() const noexcept { return n; }
    std::span<const int> at(std::size_t i) const noexcept {
        return std::span<const int>(positions).subspan(i * static_cast<std::size_t>(width),
                                                       static_cast<std::size_t>(width));
    }
};

/// Every strictly increasing choice of `k` positions from `allowed` (sorted,
/// each in [1, n - 1]) such that all k + 1 segments [0, p1), [p1, p2), ...,
/// [pk, n) hold at least `min_segment` points.
Placements enumerate_placements(std::span<const int> allowed, int k, int n, int min_segment);

/// Index of the lexicographically first entry whose value is within
/// `tolerance` of the minimum, or npos when no entry is finite.
std::size_t select_best(std::span<const double> rms, double tolerance = kRmsTieTolerance);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

}  // namespace okunfit
