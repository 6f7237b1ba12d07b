#include "stratx/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stratx/errors.hpp"
#include "stratx/format.hpp"
#include "stratx/rng.hpp"

namespace stratx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> unique_ordered(const std::vector<double>& values) {
    std::vector<double> u = values;
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

} // namespace

PDCurve oracle_stratpd(const Dataset& data, std::size_t feature, const StratTree& tree,
                       std::size_t min_slopes_per_x) {
    const std::vector<double>& xj = data.column(feature);
    const std::vector<double>& y = data.response();

    // Collect (lo, hi, slope) tuples leaf by leaf.
    std::vector<std::array<double, 3>> tuples;
    std::size_t ignored = 0;
    for (const std::vector<std::size_t>* leaf : tree.leaves()) {
        std::vector<double> in_leaf;
        for (std::size_t i : *leaf) in_leaf.push_back(xj[i]);
        const std::vector<double> xl = unique_ordered(in_leaf);
        if (xl.size() < 2) {
            ignored += leaf->size();
            continue;
        }
        std::vector<double> ybar(xl.size());
        for (std::size_t k = 0; k < xl.size(); ++k) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i : *leaf) {
                if (xj[i] == xl[k]) {
                    sum += y[i];
                    ++count;
                }
            }
            ybar[k] = sum / static_cast<double>(count);
        }
        for (std::size_t k = 0; k + 1 < xl.size(); ++k) {
            const double slope = (ybar[k + 1] - ybar[k]) / (xl[k + 1] - xl[k]);
            tuples.push_back({xl[k], xl[k + 1], slope});
        }
    }

    const std::vector<double> ux = unique_ordered(xj);
    std::vector<std::size_t> counts(ux.size(), 0);
    std::vector<double> delta(ux.size(), kNaN);
    for (std::size_t g = 0; g < ux.size(); ++g) {
        const double x = ux[g];
        std::vector<double> slopes;
        for (const auto& t : tuples) {
            if (x >= t[0] && x < t[1]) slopes.push_back(t[2]);
        }
        counts[g] = slopes.size();
        if (!slopes.empty()) {
            double sum = 0.0;
            for (double s : slopes) sum += s;
            delta[g] = sum / static_cast<double>(slopes.size());
        }
    }

    PDCurve curve;
    std::vector<double> kept_delta;
    for (std::size_t g = 0; g < ux.size(); ++g) {
        if (counts[g] >= min_slopes_per_x) {
            curve.x.push_back(ux[g]);
            kept_delta.push_back(delta[g]);
            curve.counts.push_back(counts[g]);
        }
    }
    if (curve.x.size() < 2) throw InsufficientSupportError();
    curve.pd_y.resize(curve.x.size());
    curve.pd_y[0] = 0.0;
    for (std::size_t k = 1; k < curve.x.size(); ++k) {
        curve.pd_y[k] = curve.pd_y[k - 1] + kept_delta[k - 1] * (curve.x[k] - curve.x[k - 1]);
    }
    curve.ignored_rows = ignored;
    return curve;
}

CatEffect oracle_catstratpd(const Dataset& data, std::size_t feature, const StratTree& tree,
                            std::uint64_t draw_seed) {
    const std::vector<double>& xj = data.column(feature);
    const std::vector<double>& y = data.response();
    const std::size_t n_cats = data.meta(feature).category_labels.size();

    const auto leaves = tree.leaves();
    const std::size_t n_leaves = leaves.size();

    // Dense per-leaf delta and count matrices, one column per leaf.
    std::vector<std::vector<double>> delta_y(n_leaves, std::vector<double>(n_cats, kNaN));
    std::vector<std::vector<std::size_t>> cat_counts(n_leaves,
                                                     std::vector<std::size_t>(n_cats, 0));
    for (std::size_t li = 0; li < n_leaves; ++li) {
        std::vector<double> sums(n_cats, 0.0);
        for (std::size_t i : *leaves[li]) {
            const auto c = static_cast<std::size_t>(xj[i]);
            sums[c] += y[i];
            cat_counts[li][c] += 1;
        }
        std::vector<std::size_t> present;
        for (std::size_t k = 0; k < n_cats; ++k) {
            if (cat_counts[li][k] > 0) present.push_back(k);
        }
        Rng rng = refcat_rng(draw_seed, li);
        const std::size_t refcat = present[rng.below(present.size())];
        const double ref_mean =
            sums[refcat] / static_cast<double>(cat_counts[li][refcat]);
        for (std::size_t k = 0; k < n_cats; ++k) {
            if (cat_counts[li][k] > 0) {
                delta_y[li][k] = sums[k] / static_cast<double>(cat_counts[li][k]) - ref_mean;
            }
        }
    }

    CatEffect out;
    out.delta = delta_y[0];
    out.counts = cat_counts[0];

    std::vector<std::size_t> work;
    for (std::size_t li = 1; li < n_leaves; ++li) work.push_back(li);
    Rng rng = merge_rng(draw_seed);
    bool made_progress = true;
    std::size_t passes = 0;
    while (!work.empty() && made_progress) {
        std::vector<std::size_t> completed;
        for (std::size_t li : work) {
            std::vector<std::size_t> common;
            for (std::size_t k = 0; k < n_cats; ++k) {
                if (std::isfinite(out.delta[k]) && std::isfinite(delta_y[li][k])) {
                    common.push_back(k);
                }
            }
            if (common.empty()) continue;
            completed.push_back(li);
            const std::size_t cat = common[rng.below(common.size())];
            const double t = delta_y[li][cat];
            const double u = out.delta[cat];
            for (std::size_t k = 0; k < n_cats; ++k) {
                if (std::isfinite(delta_y[li][k])) delta_y[li][k] = (delta_y[li][k] - t) + u;
            }
            for (std::size_t k = 0; k < n_cats; ++k) {
                const double dv = out.delta[k];
                const double lv = delta_y[li][k];
                if (std::isfinite(dv) && std::isfinite(lv)) {
                    const auto c = static_cast<double>(out.counts[k]);
                    const auto cl = static_cast<double>(cat_counts[li][k]);
                    out.delta[k] = (c * dv + cl * lv) / (c + cl);
                } else if (std::isfinite(lv)) {
                    out.delta[k] = lv;
                }
                out.counts[k] += cat_counts[li][k];
            }
        }
        made_progress = !completed.empty();
        std::vector<std::size_t> next;
        for (std::size_t li : work) {
            if (std::find(completed.begin(), completed.end(), li) == completed.end()) {
                next.push_back(li);
            }
        }
        work = std::move(next);
        ++passes;
        if (!work.empty() && made_progress && passes >= 10) {
            throw std::runtime_error("category merge did not settle within 10 passes");
        }
    }

    for (std::size_t li : work) {
        for (std::size_t k = 0; k < n_cats; ++k) out.ignored_rows += cat_counts[li][k];
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

namespace {

bool same_value(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::string describe_diff(const char* what, std::size_t index, double a, double b) {
    return std::string(what) + "[" + std::to_string(index) + "]: " + format_double(a) +
           " vs " + format_double(b);
}

bool compare_curves(const PDCurve& fast, const PDCurve& ref, std::string& note) {
    if (fast.x.size() != ref.x.size()) {
        note = "kept grid size: " + std::to_string(fast.x.size()) + " vs " +
               std::to_string(ref.x.size());
        return false;
    }
    for (std::size_t i = 0; i < fast.x.size(); ++i) {
        if (!same_value(fast.x[i], ref.x[i])) {
            note = describe_diff("x", i, fast.x[i], ref.x[i]);
            return false;
        }
        if (!same_value(fast.pd_y[i], ref.pd_y[i])) {
            note = describe_diff("pd_y", i, fast.pd_y[i], ref.pd_y[i]);
            return false;
        }
        if (fast.counts[i] != ref.counts[i]) {
            note = "count[" + std::to_string(i) + "]: " + std::to_string(fast.counts[i]) +
                   " vs " + std::to_string(ref.counts[i]);
            return false;
        }
    }
    if (fast.ignored_rows != ref.ignored_rows) {
        note = "ignored_rows: " + std::to_string(fast.ignored_rows) + " vs " +
               std::to_string(ref.ignored_rows);
        return false;
    }
    return true;
}

bool compare_effects(const CatEffect& fast, const CatEffect& ref, std::string& note) {
    if (fast.delta.size() != ref.delta.size()) {
        note = "delta size: " + std::to_string(fast.delta.size()) + " vs " +
               std::to_string(ref.delta.size());
        return false;
    }
    for (std::size_t k = 0; k < fast.delta.size(); ++k) {
        if (!same_value(fast.delta[k], ref.delta[k])) {
            note = describe_diff("delta", k, fast.delta[k], ref.delta[k]);
            return false;
        }
        if (fast.counts[k] != ref.counts[k]) {
            note = "count[" + std::to_string(k) + "]: " + std::to_string(fast.counts[k]) +
                   " vs " + std::to_string(ref.counts[k]);
            return false;
        }
    }
    if (fast.ignored_rows != ref.ignored_rows) {
        note = "ignored_rows: " + std::to_string(fast.ignored_rows) + " vs " +
               std::to_string(ref.ignored_rows);
        return false;
    }
    if (fast.centered != ref.centered) {
        note = "centered flags differ";
        return false;
    }
    return true;
}

struct RandomDataset {
    Dataset data;
    std::vector<std::size_t> numeric_cols;
    std::vector<std::size_t> categorical_cols;
};

// Small random table with heavy duplication in the numeric columns (so
// leaves see repeated values) and a response mixing linear, quadratic,
// and per-category effects plus noise.
RandomDataset random_dataset(Rng& rng) {
    const std::size_t n = 30 + rng.below(171);  // 30..200
    const std::size_t p = 2 + rng.below(3);     // 2..4
    const std::size_t n_categorical = 1 + rng.below(p - 1);

    std::vector<ColKind> kinds(p, ColKind::numeric);
    for (std::size_t k = 0; k < n_categorical; ++k) kinds[k] = ColKind::categorical;
    for (std::size_t k = p; k-- > 1;) std::swap(kinds[k], kinds[rng.below(k + 1)]);

    std::vector<ColMeta> meta;
    std::vector<std::vector<double>> cols;
    std::vector<double> y(n, 0.0);

    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> col(n);
        if (kinds[j] == ColKind::categorical) {
            const std::size_t n_levels = 2 + rng.below(5); // 2..6
            std::vector<std::string> labels;
            for (std::size_t k = 0; k < n_levels; ++k) {
                labels.push_back(std::string(1, static_cast<char>('a' + k)));
            }
            std::vector<double> base(n_levels);
            for (double& b : base) b = rng.uniform(-10.0, 10.0);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t level = rng.below(n_levels);
                col[i] = static_cast<double>(level);
                y[i] += base[level];
            }
            meta.push_back({"c" + std::to_string(j), ColKind::categorical, labels});
        } else {
            const std::size_t n_levels = 3 + rng.below(10); // 3..12 distinct values
            const double coef = rng.uniform(-3.0, 3.0);
            const bool squared = rng.below(2) == 1;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = 0.5 * static_cast<double>(rng.below(n_levels));
                col[i] = v;
                y[i] += coef * (squared ? v * v : v);
            }
            meta.push_back({"x" + std::to_string(j), ColKind::numeric, {}});
        }
        cols.push_back(std::move(col));
    }
    for (std::size_t i = 0; i < n; ++i) y[i] += rng.normal(0.0, 0.5);

    RandomDataset out{Dataset(std::move(meta), std::move(cols), std::move(y), "y"), {}, {}};
    for (std::size_t j = 0; j < p; ++j) {
        (kinds[j] == ColKind::categorical ? out.categorical_cols : out.numeric_cols).push_back(j);
    }
    return out;
}

} // namespace

OracleCheckReport oracle_check(std::size_t n_datasets, std::uint64_t seed, std::ostream* log) {
    OracleCheckReport report;
    Rng rng(mix_seed(seed, 7));

    for (std::size_t d = 0; d < n_datasets; ++d) {
        RandomDataset rd = random_dataset(rng);
        const std::size_t msl = 2 + rng.below(11);        // 2..12
        const std::size_t min_slopes = 1 + rng.below(3);  // 1..3
        const double mf = rng.below(2) == 0 ? 1.0 : 0.6;
        ++report.datasets;

        std::string note = "ok";
        bool failed = false;

        {
            const std::size_t j = rd.numeric_cols[rng.below(rd.numeric_cols.size())];
            const StratifyParams sp{msl, mf, rng.next()};
            const StratTree tree = fit_stratification(drop_column(rd.data, j), sp);
            bool fast_threw = false, ref_threw = false;
            PDCurve fast, ref;
            try {
                fast = stratpd_from_tree(rd.data, j, tree, min_slopes);
            } catch (const InsufficientSupportError&) {
                fast_threw = true;
            }
            try {
                ref = oracle_stratpd(rd.data, j, tree, min_slopes);
            } catch (const InsufficientSupportError&) {
                ref_threw = true;
            }
            if (fast_threw != ref_threw) {
                failed = true;
                note = "numeric: one path reported insufficient support";
            } else if (fast_threw) {
                ++report.agreed_errors;
            } else {
                ++report.numeric_compared;
                std::string diff;
                if (!compare_curves(fast, ref, diff)) {
                    failed = true;
                    note = "numeric: " + diff;
                }
            }
        }

        if (!failed) {
            const std::size_t j = rd.categorical_cols[rng.below(rd.categorical_cols.size())];
            const StratifyParams sp{msl, mf, rng.next()};
            const StratTree tree = fit_stratification(drop_column(rd.data, j), sp);
            const std::uint64_t draw_seed = rng.next();
            const CatEffect fast = catstratpd_from_tree(rd.data, j, tree, draw_seed);
            const CatEffect ref = oracle_catstratpd(rd.data, j, tree, draw_seed);
            ++report.categorical_compared;
            std::string diff;
            if (!compare_effects(fast, ref, diff)) {
                failed = true;
                note = "categorical: " + diff;
            }
        }

        if (failed) {
            ++report.mismatches;
            if (report.first_mismatch.empty()) {
                report.first_mismatch = "dataset " + std::to_string(d) + ": " + note;
            }
        }
        if (log) {
            *log << "dataset " << d << ": n=" << rd.data.n_rows() << " p="
                 << rd.data.n_features() << " min_samples_leaf=" << msl
                 << " min_slopes_per_x=" << min_slopes << " max_features=" << mf << " -> "
                 << note << '\n';
        }
    }
    return report;
}

} // namespace stratx
