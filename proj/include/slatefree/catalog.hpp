#ifndef SLATEFREE_CATALOG_HPP
#define SLATEFREE_CATALOG_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace slatefree {

struct Catalog {
    int size_k = 0;
    std::vector<double> base_costs;   // per-step cost of viewing item s
    std::uint64_t cost_seed = 0;
    double penalty = 0.0;             // slate-rejection penalty, 0 = disabled
};

enum class CostMode { StateOnly, SlatePenalty };

// Cost of item i = (override base for i, else default_base) + z_i with
// z_i ~ Uniform(0, 4) drawn per item id in id order from cost_seed.
Catalog build_catalog(int k,
                      const std::vector<std::pair<int, double>>& low_cost_overrides,
                      std::uint64_t cost_seed,
                      double penalty = 0.0,
                      double default_base = 20.0);

} // namespace slatefree

#endif
