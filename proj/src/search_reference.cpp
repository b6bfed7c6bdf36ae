// Serial break search: every placement goes through fit_segments and predict,
// and its RMS comes from the explicit residuals.

#include <cmath>
#include <limits>

#include "model_detail.hpp"
#include "okunfit/error.hpp"
#include "okunfit/model.hpp"
#include "okunfit/stats.hpp"

namespace okunfit::okun::detail {

SearchResult search_breaks_reference(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                                     const SearchOptions& options) {
    const auto setup = prepare_search(u, growth, options);
    const auto& lay = setup.layout;
    std::vector<double> rms;
    rms.reserve(setup.placements.count());
    for (std::size_t j = 0; j < setup.placements.count(); ++j) {
        std::vector<int> years;
        for (int p : setup.placements.at(j)) years.push_back(lay.first_year + p);
        try {
            const auto model = fit_segments(u, growth, years, options.anchor_mode, options.min_segment);
            const auto predicted = predict(model, growth);
            std::vector<double> resid;
            for (std::size_t i = 0; i < predicted.size(); ++i) {
                resid.push_back(lay.u[i] - predicted.points()[i].value);
            }
            rms.push_back(stats::rms(resid));
        } catch (const SingularFitError&) {
            rms.push_back(std::numeric_limits<double>::infinity());
        }
    }
    return finish_search(u, growth, options, setup, rms);
}

}  // namespace okunfit::okun::detail
