#include "hypball/stats.hpp"

#include <stdexcept>

namespace hypball::stats {

MeanAndError jackknife(const std::vector<std::vector<double>>& groups, std::span<const double> weights,
                       const std::function<double(std::span<const double>)>& functional) {
    const std::size_t g = groups.size();
    if (g < 2 || weights.size() != g) throw std::invalid_argument("jackknife: need >= 2 weighted groups");
    const std::size_t dim = groups.front().size();
    std::vector<double> total(dim, 0.0);
    double mass = 0.0;
    for (std::size_t k = 0; k < g; ++k) {
        if (groups[k].size() != dim) throw std::invalid_argument("jackknife: ragged groups");
        for (std::size_t i = 0; i < dim; ++i) total[i] += weights[k] * groups[k][i];
        mass += weights[k];
    }
    std::vector<double> pooled(dim);
    for (std::size_t i = 0; i < dim; ++i) pooled[i] = total[i] / mass;
    const double full = functional(pooled);

    std::vector<double> leave(g);
    double mean_leave = 0.0;
    for (std::size_t k = 0; k < g; ++k) {
        const double rest = mass - weights[k];
        for (std::size_t i = 0; i < dim; ++i) pooled[i] = (total[i] - weights[k] * groups[k][i]) / rest;
        leave[k] = functional(pooled);
        mean_leave += leave[k];
    }
    mean_leave /= static_cast<double>(g);
    double ss = 0.0;
    for (double v : leave) ss += (v - mean_leave) * (v - mean_leave);
    const double var = ss * static_cast<double>(g - 1) / static_cast<double>(g);
    return {full, std::sqrt(var)};
}

}  // namespace hypball::stats
