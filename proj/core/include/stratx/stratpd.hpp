#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "stratx/dataset.hpp"
#include "stratx/stratify.hpp"

namespace stratx {

// One within-leaf forward difference: the observed slope of the leaf-local
// mean response between two consecutive unique x values.
struct SlopeSegment {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double slope = 0.0;
};

// Partial dependence of y on one numeric feature, anchored at pd_y[0] == 0.
struct PDCurve {
    std::vector<double> x;          // ascending unique x values kept
    std::vector<double> pd_y;       // same length; pd_y[0] == 0
    std::vector<std::size_t> counts; // slope samples supporting each x
    std::size_t ignored_rows = 0;   // rows in leaves that produced no slopes
};

struct StratPDParams {
    std::size_t min_samples_leaf = 10;
    std::size_t min_slopes_per_x = 5;
    std::size_t ntrials = 1;
    double max_features = 1.0;
    std::uint64_t rng_seed = 0;
};

// Per-x slope statistics over the global unique-value grid.
struct SlopeStats {
    std::vector<std::size_t> counts; // segments covering each unique x
    std::vector<double> delta;       // mean slope at each x; NaN when count 0
};

// Forward-difference slopes of the mean response within one leaf.
// xj/y are the leaf's rows in leaf order. Empty when the leaf has
// fewer than two unique x values.
std::vector<SlopeSegment> leaf_slopes(const std::vector<double>& xj,
                                      const std::vector<double>& y);

// Mean slope per unique x. A segment (lo, hi) covers the half-open
// interval [lo, hi), so the largest unique x is never covered.
SlopeStats aggregate_slopes(const std::vector<SlopeSegment>& segments,
                            const std::vector<double>& unique_x);

// Drop x values supported by fewer than min_slopes_per_x segments, then
// integrate the remaining mean slopes left to right. Throws
// InsufficientSupportError when fewer than two values survive.
PDCurve filter_and_integrate(const std::vector<double>& unique_x, const SlopeStats& stats,
                             std::size_t min_slopes_per_x);

// One StratPD pass over a pre-fit stratification of data without feature j.
PDCurve stratpd_from_tree(const Dataset& data, std::size_t feature, const StratTree& tree,
                          std::size_t min_slopes_per_x);

// Full estimator: stratify on the other features, pool within-leaf slopes,
// integrate. ntrials > 1 averages bootstrap repetitions.
PDCurve stratpd(const Dataset& data, std::size_t feature, const StratPDParams& params = {});

// Pointwise mean of several curves on the union of their x grids. Each
// curve contributes its piecewise-linear interpolant where it has support;
// counts are summed over the contributing curves.
PDCurve average_curves(const std::vector<PDCurve>& curves);

// CSV with header "x,pd_y,count".
void write_curve_csv(const PDCurve& curve, std::ostream& out);

} // namespace stratx
