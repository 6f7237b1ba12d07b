#include "stratx/stratpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stratx/errors.hpp"
#include "stratx/format.hpp"
#include "stratx/parallel.hpp"
#include "stratx/rng.hpp"

namespace stratx {

namespace {

constexpr std::uint64_t kTreeSalt = 1;
constexpr std::uint64_t kBootstrapSalt = 2;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> sorted_unique(const std::vector<double>& values) {
    std::vector<double> ux = values;
    std::sort(ux.begin(), ux.end());
    ux.erase(std::unique(ux.begin(), ux.end()), ux.end());
    return ux;
}

} // namespace

std::vector<SlopeSegment> leaf_slopes(const std::vector<double>& xj,
                                      const std::vector<double>& y) {
    const std::size_t m = xj.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Stable: rows with equal x accumulate in their original order.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xj[a] < xj[b]; });

    std::vector<double> ux, mean;
    std::size_t k = 0;
    while (k < m) {
        const double v = xj[order[k]];
        double sum = 0.0;
        std::size_t count = 0;
        while (k < m && xj[order[k]] == v) {
            sum += y[order[k]];
            ++count;
            ++k;
        }
        ux.push_back(v);
        mean.push_back(sum / static_cast<double>(count));
    }

    std::vector<SlopeSegment> segments;
    if (ux.size() < 2) return segments;
    segments.reserve(ux.size() - 1);
    for (std::size_t i = 0; i + 1 < ux.size(); ++i) {
        const double slope = (mean[i + 1] - mean[i]) / (ux[i + 1] - ux[i]);
        segments.push_back({ux[i], ux[i + 1], slope});
    }
    return segments;
}

SlopeStats aggregate_slopes(const std::vector<SlopeSegment>& segments,
                            const std::vector<double>& unique_x) {
    SlopeStats stats;
    stats.counts.assign(unique_x.size(), 0);
    std::vector<double> sums(unique_x.size(), 0.0);
    // Segments stream in list order, so for any fixed x the slopes are
    // added in exactly that order.
    for (const SlopeSegment& seg : segments) {
        const auto lo = std::lower_bound(unique_x.begin(), unique_x.end(), seg.x_lo);
        const auto hi = std::lower_bound(unique_x.begin(), unique_x.end(), seg.x_hi);
        for (auto it = lo; it != hi; ++it) {
            const auto idx = static_cast<std::size_t>(it - unique_x.begin());
            sums[idx] += seg.slope;
            stats.counts[idx] += 1;
        }
    }
    stats.delta.assign(unique_x.size(), kNaN);
    for (std::size_t i = 0; i < unique_x.size(); ++i) {
        if (stats.counts[i] > 0) {
            stats.delta[i] = sums[i] / static_cast<double>(stats.counts[i]);
        }
    }
    return stats;
}

PDCurve filter_and_integrate(const std::vector<double>& unique_x, const SlopeStats& stats,
                             std::size_t min_slopes_per_x) {
    if (min_slopes_per_x < 1) throw DataError("min_slopes_per_x must be at least 1");
    if (unique_x.size() != stats.counts.size() || unique_x.size() != stats.delta.size()) {
        throw DataError("filter_and_integrate: mismatched grid and statistics");
    }
    PDCurve curve;
    for (std::size_t i = 0; i < unique_x.size(); ++i) {
        if (stats.counts[i] >= min_slopes_per_x) {
            curve.x.push_back(unique_x[i]);
            curve.counts.push_back(stats.counts[i]);
        }
    }
    if (curve.x.size() < 2) throw InsufficientSupportError();

    curve.pd_y.resize(curve.x.size());
    curve.pd_y[0] = 0.0;
    std::size_t kept = 0;
    double acc = 0.0;
    double prev_x = 0.0;
    double prev_delta = 0.0;
    for (std::size_t i = 0; i < unique_x.size(); ++i) {
        if (stats.counts[i] < min_slopes_per_x) continue;
        if (kept > 0) {
            acc = acc + prev_delta * (unique_x[i] - prev_x);
            curve.pd_y[kept] = acc;
        }
        prev_x = unique_x[i];
        prev_delta = stats.delta[i];
        ++kept;
    }
    return curve;
}

PDCurve stratpd_from_tree(const Dataset& data, std::size_t feature, const StratTree& tree,
                          std::size_t min_slopes_per_x) {
    const std::vector<double>& xj = data.column(feature);
    const std::vector<double>& y = data.response();
    const std::vector<double> ux = sorted_unique(xj);

    const auto leaves = tree.leaves();
    std::vector<std::vector<SlopeSegment>> per_leaf(leaves.size());
    parallel_for(leaves.size(), [&](std::size_t li) {
        const std::vector<std::size_t>& rows = *leaves[li];
        std::vector<double> lx, ly;
        lx.reserve(rows.size());
        ly.reserve(rows.size());
        for (std::size_t i : rows) {
            lx.push_back(xj[i]);
            ly.push_back(y[i]);
        }
        per_leaf[li] = leaf_slopes(lx, ly);
    });

    std::vector<SlopeSegment> segments;
    std::size_t ignored = 0;
    for (std::size_t li = 0; li < leaves.size(); ++li) {
        if (per_leaf[li].empty()) {
            ignored += leaves[li]->size();
        } else {
            segments.insert(segments.end(), per_leaf[li].begin(), per_leaf[li].end());
        }
    }

    const SlopeStats stats = aggregate_slopes(segments, ux);
    PDCurve curve = filter_and_integrate(ux, stats, min_slopes_per_x);
    curve.ignored_rows = ignored;
    return curve;
}

PDCurve average_curves(const std::vector<PDCurve>& curves) {
    if (curves.empty()) throw DataError("average_curves: no curves");
    if (curves.size() == 1) return curves.front();

    std::vector<double> grid;
    for (const PDCurve& c : curves) grid.insert(grid.end(), c.x.begin(), c.x.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    PDCurve out;
    out.x = grid;
    out.pd_y.assign(grid.size(), 0.0);
    out.counts.assign(grid.size(), 0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double u = grid[g];
        double sum = 0.0;
        std::size_t covering = 0;
        for (const PDCurve& c : curves) {
            if (u < c.x.front() || u > c.x.back()) continue;
            const auto it = std::lower_bound(c.x.begin(), c.x.end(), u);
            const auto idx = static_cast<std::size_t>(it - c.x.begin());
            if (idx < c.x.size() && c.x[idx] == u) {
                sum += c.pd_y[idx];
                out.counts[g] += c.counts[idx];
            } else {
                // Strictly between two kept points: linear interpolation,
                // supported by the segment's left endpoint.
                const double x0 = c.x[idx - 1], x1 = c.x[idx];
                const double y0 = c.pd_y[idx - 1], y1 = c.pd_y[idx];
                sum += y0 + (y1 - y0) * (u - x0) / (x1 - x0);
                out.counts[g] += c.counts[idx - 1];
            }
            ++covering;
        }
        out.pd_y[g] = sum / static_cast<double>(covering);
    }

    // Summed across trials, like counts; the per-trial average is the
    // sum divided by the number of curves.
    for (const PDCurve& c : curves) out.ignored_rows += c.ignored_rows;
    return out;
}

PDCurve stratpd(const Dataset& data, std::size_t feature, const StratPDParams& params) {
    if (feature >= data.n_features()) {
        throw DataError("stratpd: feature index " + std::to_string(feature) + " out of range");
    }
    if (data.is_categorical(feature)) {
        throw DataError("stratpd: feature '" + data.meta(feature).name +
                        "' is categorical; use catstratpd");
    }
    if (params.ntrials < 1) throw DataError("ntrials must be at least 1");
    if (params.min_slopes_per_x < 1) throw DataError("min_slopes_per_x must be at least 1");

    if (params.ntrials == 1) {
        const Dataset rest = drop_column(data, feature);
        StratifyParams sp{params.min_samples_leaf, params.max_features,
                          mix_seed(params.rng_seed, kTreeSalt)};
        const StratTree tree = fit_stratification(rest, sp);
        return stratpd_from_tree(data, feature, tree, params.min_slopes_per_x);
    }

    Rng boot(mix_seed(params.rng_seed, kBootstrapSalt));
    std::vector<PDCurve> trials;
    trials.reserve(params.ntrials);
    for (std::size_t t = 0; t < params.ntrials; ++t) {
        std::vector<std::size_t> rows(data.n_rows());
        for (std::size_t& r : rows) r = boot.below(data.n_rows());
        const Dataset sample = resample_rows(data, rows);
        StratifyParams sp{params.min_samples_leaf, params.max_features,
                          mix_seed(mix_seed(params.rng_seed, kTreeSalt), t + 1)};
        const StratTree tree = fit_stratification(drop_column(sample, feature), sp);
        trials.push_back(stratpd_from_tree(sample, feature, tree, params.min_slopes_per_x));
    }
    return average_curves(trials);
}

void write_curve_csv(const PDCurve& curve, std::ostream& out) {
    out << "x,pd_y,count\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << format_double(curve.x[i]) << ',' << format_double(curve.pd_y[i]) << ','
            << curve.counts[i] << '\n';
    }
}

} // namespace stratx
