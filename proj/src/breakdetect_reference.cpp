// Serial hinge search that builds the design matrix for every placement. Slow,
// but it shares no arithmetic with the suffix-sum kernel.

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "okunfit/breakdetect.hpp"
#include "okunfit/error.hpp"

namespace okunfit::breaks::detail {

double hinge_rms_reference(std::span<const double> y, std::span<const int> positions) {
    const int n = static_cast<int>(y.size());
    const int m = static_cast<int>(positions.size()) + 2;
    Eigen::MatrixXd x(n, m);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = i;
        for (int a = 0; a < m - 2; ++a) {
            const int p = positions[static_cast<std::size_t>(a)];
            x(i, a + 2) = i > p ? i - p : 0;
        }
        v(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < m) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd resid = v - x * qr.solve(v);
    return std::sqrt(resid.squaredNorm() / n);
}

HingeFit best_hinge_fit_reference(const ts::AnnualSeries& y, int n_breaks, int min_segment) {
    if (!y.contiguous() || y.empty()) throw GapError("best_hinge_fit: series must be contiguous");
    if (n_breaks < 0) throw ContractError("number of breaks must be >= 0");
    if (min_segment < 3) throw ConstraintError("min_segment must be >= 3");
    const int n = static_cast<int>(y.size());
    if (n < (n_breaks + 1) * min_segment) throw ConstraintError("series too short for the requested breaks");

    std::vector<int> allowed(static_cast<std::size_t>(n - 1));
    std::iota(allowed.begin(), allowed.end(), 1);
    const Placements placements = enumerate_placements(allowed, n_breaks, n, min_segment);
    const auto values = y.values();
    std::vector<double> rms;
    rms.reserve(placements.count());
    for (std::size_t j = 0; j < placements.count(); ++j) {
        rms.push_back(hinge_rms_reference(values, placements.at(j)));
    }
    const std::size_t best = select_best(rms);
    if (best == npos) throw ConstraintError("best_hinge_fit: no admissible placement");
    std::vector<int> years;
    for (int p : placements.at(best)) years.push_back(y.first_year() + p);
    return hinge_fit(y, years);
}

}  // namespace okunfit::breaks::detail
