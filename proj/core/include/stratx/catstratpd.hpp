#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "stratx/dataset.hpp"
#include "stratx/rng.hpp"
#include "stratx/stratify.hpp"

namespace stratx {

// Category-mean offsets within one leaf, relative to a randomly drawn
// reference category. delta is finite exactly where counts > 0.
struct LeafDeltas {
    std::vector<double> delta;       // length n_cats; NaN where absent
    std::vector<std::size_t> counts; // length n_cats; 0 where absent
    std::size_t refcat = 0;
};

// Merged per-category effect on y. delta is finite exactly where
// counts > 0; when centered, the count-weighted mean of the finite
// entries is zero.
struct CatEffect {
    std::vector<double> delta;
    std::vector<std::size_t> counts;
    std::size_t ignored_rows = 0; // rows of leaves that never merged
    bool centered = false;
};

struct CatStratPDParams {
    std::size_t min_samples_leaf = 10;
    std::size_t ntrials = 1;
    double max_features = 1.0;
    std::uint64_t rng_seed = 0;
};

// Rng streams for the random draws, derived from one draw seed. Exposed
// so an independent reimplementation can reproduce the same draws.
Rng refcat_rng(std::uint64_t draw_seed, std::size_t leaf_index);
Rng merge_rng(std::uint64_t draw_seed);

// Per-category mean y offsets for one leaf; the reference category is
// drawn uniformly from the categories present.
LeafDeltas leaf_deltas(const std::vector<double>& cat_vals, const std::vector<double>& y_vals,
                       std::size_t n_cats, Rng& rng);

// Fold all leaves into one delta vector: repeated passes re-base each
// still-unmerged leaf through a random common category and fold it in by
// count-weighted averaging (mean(z, NaN) = z). Stops when a pass merges
// nothing; rows of unmerged leaves are reported as ignored. The result
// is centered to count-weighted zero mean.
CatEffect merge_deltas(const std::vector<LeafDeltas>& leaves, std::size_t n_cats, Rng& rng);

// One CatStratPD pass over a pre-fit stratification of data without
// feature j. draw_seed feeds refcat_rng/merge_rng.
CatEffect catstratpd_from_tree(const Dataset& data, std::size_t feature, const StratTree& tree,
                               std::uint64_t draw_seed);

// Full estimator: stratify on the other features, difference category
// means within leaves, merge across leaves. ntrials > 1 averages centered
// deltas entry-wise (NaN-skipping), sums counts, and re-centers.
CatEffect catstratpd(const Dataset& data, std::size_t feature,
                     const CatStratPDParams& params = {});

// CSV with header "category_label,delta,count". Unsupported categories
// (NaN delta) are written with an empty delta field and count 0.
void write_effect_csv(const CatEffect& effect, const std::vector<std::string>& labels,
                      std::ostream& out);

} // namespace stratx
