#ifndef SLATEFREE_QTABLES_HPP
#define SLATEFREE_QTABLES_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "slatefree/slate.hpp"

namespace slatefree {

// K x K table of state-item values Q(s, j). The diagonal is invalid: the
// current item is never recommendable, so slate construction skips it.
class ItemQTable {
public:
    ItemQTable() = default;
    ItemQTable(int k, double init) : k_(k), v_(static_cast<std::size_t>(k) * k, init) {}

    int size() const { return k_; }
    double& at(int s, int j) { return v_[static_cast<std::size_t>(s) * k_ + j]; }
    double at(int s, int j) const { return v_[static_cast<std::size_t>(s) * k_ + j]; }

    // min over valid (off-diagonal) entries of row s
    double row_min(int s) const {
        double best = std::numeric_limits<double>::infinity();
        const double* row = &v_[static_cast<std::size_t>(s) * k_];
        for (int j = 0; j < k_; ++j)
            if (j != s && row[j] < best) best = row[j];
        return best;
    }

    const std::vector<double>& raw() const { return v_; }

private:
    int k_ = 0;
    std::vector<double> v_;
};

// Per state, a dense array over A(s) indexed by slate rank.
class SlateQTable {
public:
    SlateQTable() = default;
    SlateQTable(int k, std::uint64_t slates_per_state, double init)
        : k_(k), per_state_(slates_per_state),
          v_(static_cast<std::size_t>(k) * slates_per_state, init) {}

    int states() const { return k_; }
    std::uint64_t slates_per_state() const { return per_state_; }
    double& at(int s, std::uint64_t rank) { return v_[s * per_state_ + rank]; }
    double at(int s, std::uint64_t rank) const { return v_[s * per_state_ + rank]; }

    // argmin over row s; ties broken by lowest rank
    std::uint64_t argmin_rank(int s) const {
        const double* row = &v_[s * per_state_];
        std::uint64_t best = 0;
        for (std::uint64_t r = 1; r < per_state_; ++r)
            if (row[r] < row[best]) best = r;
        return best;
    }

    double row_min(int s) const {
        const double* row = &v_[s * per_state_];
        return *std::min_element(row, row + per_state_);
    }

    const std::vector<double>& raw() const { return v_; }

private:
    int k_ = 0;
    std::uint64_t per_state_ = 0;
    std::vector<double> v_;
};

// The n items (excluding s) with smallest row values; ties by lowest id.
Slate greedy_slate(const ItemQTable& table, int s, int n);

} // namespace slatefree

#endif
