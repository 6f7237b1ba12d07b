#include "stratx/catstratpd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stratx/errors.hpp"
#include "stratx/format.hpp"
#include "stratx/parallel.hpp"

namespace stratx {

namespace {

constexpr std::uint64_t kTreeSalt = 1;
constexpr std::uint64_t kBootstrapSalt = 2;
constexpr std::uint64_t kRefcatSalt = 3;
constexpr std::uint64_t kMergeSalt = 4;
constexpr std::uint64_t kTrialDrawSalt = 5;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::size_t kMaxMergePasses = 10;

} // namespace

Rng refcat_rng(std::uint64_t draw_seed, std::size_t leaf_index) {
    return Rng(mix_seed(mix_seed(draw_seed, kRefcatSalt), leaf_index));
}

Rng merge_rng(std::uint64_t draw_seed) {
    return Rng(mix_seed(draw_seed, kMergeSalt));
}

LeafDeltas leaf_deltas(const std::vector<double>& cat_vals, const std::vector<double>& y_vals,
                       std::size_t n_cats, Rng& rng) {
    if (cat_vals.empty() || cat_vals.size() != y_vals.size()) {
        throw DataError("leaf_deltas: mismatched or empty inputs");
    }
    LeafDeltas out;
    out.counts.assign(n_cats, 0);
    std::vector<double> sums(n_cats, 0.0);
    for (std::size_t i = 0; i < cat_vals.size(); ++i) {
        const auto c = static_cast<std::size_t>(cat_vals[i]);
        sums[c] += y_vals[i];
        out.counts[c] += 1;
    }

    std::vector<std::size_t> present;
    for (std::size_t k = 0; k < n_cats; ++k) {
        if (out.counts[k] > 0) present.push_back(k);
    }
    out.refcat = present[rng.below(present.size())];
    const double ref_mean = sums[out.refcat] / static_cast<double>(out.counts[out.refcat]);

    out.delta.assign(n_cats, kNaN);
    for (std::size_t k = 0; k < n_cats; ++k) {
        if (out.counts[k] > 0) {
            out.delta[k] = sums[k] / static_cast<double>(out.counts[k]) - ref_mean;
        }
    }
    return out;
}

CatEffect merge_deltas(const std::vector<LeafDeltas>& leaves, std::size_t n_cats, Rng& rng) {
    if (leaves.empty()) throw DataError("merge_deltas: no leaves");

    CatEffect out;
    out.delta = leaves.front().delta;
    out.counts = leaves.front().counts;
    if (out.delta.size() != n_cats) throw DataError("merge_deltas: n_cats mismatch");

    std::vector<bool> merged(leaves.size(), false);
    merged[0] = true;
    std::size_t unmerged = leaves.size() - 1;
    std::size_t passes = 0;

    while (unmerged > 0) {
        bool progressed = false;
        for (std::size_t li = 1; li < leaves.size(); ++li) {
            if (merged[li]) continue;
            const LeafDeltas& leaf = leaves[li];

            std::vector<std::size_t> common;
            for (std::size_t k = 0; k < n_cats; ++k) {
                if (std::isfinite(out.delta[k]) && std::isfinite(leaf.delta[k])) {
                    common.push_back(k);
                }
            }
            if (common.empty()) continue;

            // Re-base the leaf so the drawn common category lines up with
            // the running vector, then fold it in at its row counts.
            const std::size_t cat = common[rng.below(common.size())];
            const double t = leaf.delta[cat];
            const double u = out.delta[cat];
            for (std::size_t k = 0; k < n_cats; ++k) {
                const double lv = leaf.delta[k];
                const double adj = std::isfinite(lv) ? (lv - t) + u : kNaN;
                const double dv = out.delta[k];
                if (std::isfinite(dv) && std::isfinite(adj)) {
                    const auto c = static_cast<double>(out.counts[k]);
                    const auto cl = static_cast<double>(leaf.counts[k]);
                    out.delta[k] = (c * dv + cl * adj) / (c + cl);
                } else if (std::isfinite(adj)) {
                    out.delta[k] = adj;
                } // one-sided or doubly-absent: keep dv (mean(z, NaN) = z)
                out.counts[k] += leaf.counts[k];
            }
            merged[li] = true;
            --unmerged;
            progressed = true;
        }
        ++passes;
        if (!progressed) break;
        if (unmerged > 0 && passes >= kMaxMergePasses) {
            throw std::runtime_error("category merge did not settle within " +
                                     std::to_string(kMaxMergePasses) + " passes");
        }
    }

    for (std::size_t li = 1; li < leaves.size(); ++li) {
        if (merged[li]) continue;
        for (std::size_t c : leaves[li].counts) out.ignored_rows += c;
    }

    double weighted = 0.0, weight = 0.0;
    for (std::size_t k = 0; k < n_cats; ++k) {
        if (std::isfinite(out.delta[k])) {
            weighted += static_cast<double>(out.counts[k]) * out.delta[k];
            weight += static_cast<double>(out.counts[k]);
        }
    }
    const double center = weighted / weight;
    for (std::size_t k = 0; k < n_cats; ++k) {
        if (std::isfinite(out.delta[k])) out.delta[k] -= center;
    }
    out.centered = true;
    return out;
}

CatEffect catstratpd_from_tree(const Dataset& data, std::size_t feature, const StratTree& tree,
                               std::uint64_t draw_seed) {
    const std::vector<double>& xj = data.column(feature);
    const std::vector<double>& y = data.response();
    const std::size_t n_cats = data.meta(feature).category_labels.size();

    const auto leaves = tree.leaves();
    std::vector<LeafDeltas> per_leaf(leaves.size());
    parallel_for(leaves.size(), [&](std::size_t li) {
        const std::vector<std::size_t>& rows = *leaves[li];
        std::vector<double> lc, ly;
        lc.reserve(rows.size());
        ly.reserve(rows.size());
        for (std::size_t i : rows) {
            lc.push_back(xj[i]);
            ly.push_back(y[i]);
        }
        Rng rng = refcat_rng(draw_seed, li);
        per_leaf[li] = leaf_deltas(lc, ly, n_cats, rng);
    });

    Rng rng = merge_rng(draw_seed);
    return merge_deltas(per_leaf, n_cats, rng);
}

CatEffect catstratpd(const Dataset& data, std::size_t feature, const CatStratPDParams& params) {
    if (feature >= data.n_features()) {
        throw DataError("catstratpd: feature index " + std::to_string(feature) +
                        " out of range");
    }
    if (!data.is_categorical(feature)) {
        throw DataError("catstratpd: feature '" + data.meta(feature).name +
                        "' is numeric; use stratpd");
    }
    if (params.ntrials < 1) throw DataError("ntrials must be at least 1");

    if (params.ntrials == 1) {
        StratifyParams sp{params.min_samples_leaf, params.max_features,
                          mix_seed(params.rng_seed, kTreeSalt)};
        const StratTree tree = fit_stratification(drop_column(data, feature), sp);
        return catstratpd_from_tree(data, feature, tree, params.rng_seed);
    }

    const std::size_t n_cats = data.meta(feature).category_labels.size();
    Rng boot(mix_seed(params.rng_seed, kBootstrapSalt));
    std::vector<CatEffect> trials;
    trials.reserve(params.ntrials);
    for (std::size_t t = 0; t < params.ntrials; ++t) {
        std::vector<std::size_t> rows(data.n_rows());
        for (std::size_t& r : rows) r = boot.below(data.n_rows());
        const Dataset sample = resample_rows(data, rows);
        StratifyParams sp{params.min_samples_leaf, params.max_features,
                          mix_seed(mix_seed(params.rng_seed, kTreeSalt), t + 1)};
        const StratTree tree = fit_stratification(drop_column(sample, feature), sp);
        trials.push_back(catstratpd_from_tree(
            sample, feature, tree, mix_seed(mix_seed(params.rng_seed, kTrialDrawSalt), t + 1)));
    }

    // Entry-wise NaN-skipping mean of the centered trial vectors; counts
    // and ignored rows are summed. Re-center so the invariant holds for
    // the combined counts.
    CatEffect out;
    out.delta.assign(n_cats, kNaN);
    out.counts.assign(n_cats, 0);
    for (std::size_t k = 0; k < n_cats; ++k) {
        double sum = 0.0;
        std::size_t supported = 0;
        for (const CatEffect& trial : trials) {
            out.counts[k] += trial.counts[k];
            if (std::isfinite(trial.delta[k])) {
                sum += trial.delta[k];
                ++supported;
            }
        }
        if (supported > 0) out.delta[k] = sum / static_cast<double>(supported);
    }
    for (const CatEffect& trial : trials) out.ignored_rows += trial.ignored_rows;

    double weighted = 0.0, weight = 0.0;
    for (std::size_t k = 0; k < n_cats; ++k) {
        if (std::isfinite(out.delta[k])) {
            weighted += static_cast<double>(out.counts[k]) * out.delta[k];
            weight += static_cast<double>(out.counts[k]);
        }
    }
    if (weight > 0.0) {
        const double center = weighted / weight;
        for (std::size_t k = 0; k < n_cats; ++k) {
            if (std::isfinite(out.delta[k])) out.delta[k] -= center;
        }
    }
    out.centered = true;
    return out;
}

void write_effect_csv(const CatEffect& effect, const std::vector<std::string>& labels,
                      std::ostream& out) {
    if (labels.size() != effect.delta.size()) {
        throw DataError("write_effect_csv: label count does not match delta length");
    }
    out << "category_label,delta,count\n";
    for (std::size_t k = 0; k < labels.size(); ++k) {
        out << csv_field(labels[k]) << ',';
        if (std::isfinite(effect.delta[k])) out << format_double(effect.delta[k]);
        out << ',' << effect.counts[k] << '\n';
    }
}

} // namespace stratx
