#include "slatefree/catalog.hpp"

#include <set>

#include "slatefree/errors.hpp"
#include "slatefree/rng.hpp"

namespace slatefree {

Catalog build_catalog(int k,
                      const std::vector<std::pair<int, double>>& low_cost_overrides,
                      std::uint64_t cost_seed,
                      double penalty,
                      double default_base) {
    if (k < 2) throw config_error("build_catalog: need k >= 2");
    if (penalty < 0) throw config_error("build_catalog: penalty must be non-negative");

    std::vector<double> base(k, default_base);
    std::set<int> seen;
    for (const auto& [id, value] : low_cost_overrides) {
        if (id < 0 || id >= k) throw config_error("build_catalog: override id out of range");
        if (!seen.insert(id).second) throw config_error("build_catalog: duplicate override id");
        if (value < 0) throw config_error("build_catalog: negative base cost");
        base[id] = value;
    }

    Rng rng(cost_seed);
    for (int i = 0; i < k; ++i) base[i] += rng.uniform(0.0, 4.0);

    return Catalog{k, std::move(base), cost_seed, penalty};
}

} // namespace slatefree
