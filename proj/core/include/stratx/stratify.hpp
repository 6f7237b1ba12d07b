#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stratx/dataset.hpp"

namespace stratx {

struct StratifyParams {
    // Minimum rows per leaf. A leaf of 1 can never yield a slope, so 2 is
    // the smallest accepted value.
    std::size_t min_samples_leaf = 10;
    // Fraction in (0, 1] of candidate columns tried per split. Below 1,
    // columns are sampled per node from rng_seed; useful when near-duplicate
    // features would otherwise absorb every split.
    double max_features = 1.0;
    std::uint64_t rng_seed = 0;
};

struct TreeNode {
    std::int32_t feature = -1;   // split column into the fitted matrix; -1 for leaves
    double threshold = 0.0;      // a row goes left iff x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::size_t> rows; // leaves only; ascending row indices

    bool is_leaf() const { return left < 0; }
};

// Greedy CART regression tree used purely to partition rows into regions of
// similar feature values. It is never used for prediction; the product is
// the set of leaf row-index sets, which partition {0..n-1}.
class StratTree {
public:
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t n_rows() const { return n_rows_; }

    // Leaf row sets in left-to-right tree order; disjoint, union complete.
    std::vector<const std::vector<std::size_t>*> leaves() const;

private:
    friend StratTree fit_stratification(const Dataset&, const StratifyParams&);

    std::vector<TreeNode> nodes_;
    std::size_t n_rows_ = 0;
};

// Fit the stratifying tree to a dataset whose feature of interest has
// already been dropped. At each node the (column, threshold) pair minimizing
// the summed child squared error is chosen among midpoints of consecutive
// unique column values; a split happens only when both children keep at
// least min_samples_leaf rows and the error strictly decreases. Ties break
// to the lowest column index, then the lowest threshold, so the result does
// not depend on row order.
StratTree fit_stratification(const Dataset& data, const StratifyParams& params);

} // namespace stratx
