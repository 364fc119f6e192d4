#include "onematch/rng.hpp"

#include <algorithm>
#include <cmath>

namespace onematch {

ZipfTable::ZipfTable(std::size_t n, double exponent) {
    cumulative_.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
        cumulative_[i] = acc;
    }
    for (double& c : cumulative_) c /= acc;
}

std::size_t ZipfTable::sample(Rng& rng) const {
    double u = rng.real();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) return cumulative_.size() - 1;
    return static_cast<std::size_t>(it - cumulative_.begin());
}

}  // namespace onematch
