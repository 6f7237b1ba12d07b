#include "stratx/stratify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stratx/errors.hpp"
#include "stratx/rng.hpp"

namespace stratx {

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t column = 0;
    double threshold = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

struct NodeBuilder {
    const std::vector<std::vector<double>>& cols;
    const std::vector<double>& y;
    std::size_t min_samples_leaf;
    double max_features;
    Rng rng;
    std::vector<TreeNode> nodes;

    std::size_t candidate_count() const {
        const auto p = static_cast<double>(cols.size());
        auto k = static_cast<std::size_t>(std::ceil(max_features * p));
        return std::clamp<std::size_t>(k, 1, cols.size());
    }

    // Columns tried at this node, ascending. Sampling without replacement
    // keeps the fraction exact; sorting keeps tie-breaking by column index.
    std::vector<std::size_t> pick_columns() {
        std::vector<std::size_t> all(cols.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        const std::size_t k = candidate_count();
        if (k == cols.size()) return all;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t pick = i + rng.below(all.size() - i);
            std::swap(all[i], all[pick]);
        }
        all.resize(k);
        std::sort(all.begin(), all.end());
        return all;
    }

    // Evaluate all midpoint thresholds of one column via prefix sums over
    // (value, centered y) pairs sorted lexicographically. The lexicographic
    // order fixes the summation order independently of row order; centering
    // by the node mean keeps the squared-error sums well conditioned.
    void scan_column(std::size_t c, const std::vector<std::size_t>& rows, double y_mean,
                     double parent_sse, SplitChoice& best) const {
        const std::size_t m = rows.size();
        std::vector<std::pair<double, double>> pairs;
        pairs.reserve(m);
        const auto& col = cols[c];
        for (std::size_t i : rows) pairs.emplace_back(col[i], y[i] - y_mean);
        std::sort(pairs.begin(), pairs.end());
        if (pairs.front().first == pairs.back().first) return;

        double total_sum = 0.0, total_sq = 0.0;
        for (const auto& [v, cy] : pairs) {
            (void)v;
            total_sum += cy;
            total_sq += cy * cy;
        }

        double left_sum = 0.0, left_sq = 0.0;
        for (std::size_t k = 0; k + 1 < m; ++k) {
            const double cy = pairs[k].second;
            left_sum += cy;
            left_sq += cy * cy;
            if (pairs[k].first == pairs[k + 1].first) continue;
            const std::size_t n_left = k + 1;
            const std::size_t n_right = m - n_left;
            if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;

            const double right_sum = total_sum - left_sum;
            const double right_sq = total_sq - left_sq;
            const double sse = (left_sq - left_sum * left_sum / static_cast<double>(n_left)) +
                               (right_sq - right_sum * right_sum / static_cast<double>(n_right));
            if (sse < best.sse && sse < parent_sse) {
                const double a = pairs[k].first;
                const double b = pairs[k + 1].first;
                double threshold = a + (b - a) / 2.0;
                if (!(threshold < b)) threshold = a; // adjacent doubles round up
                best = {true, c, threshold, sse};
            }
        }
    }

    SplitChoice choose_split(const std::vector<std::size_t>& rows) {
        SplitChoice best;
        if (rows.size() < 2 * min_samples_leaf) return best;

        double y_sum = 0.0;
        for (std::size_t i : rows) y_sum += y[i];
        const double y_mean = y_sum / static_cast<double>(rows.size());
        double parent_sse = 0.0;
        for (std::size_t i : rows) {
            const double d = y[i] - y_mean;
            parent_sse += d * d;
        }
        if (!(parent_sse > 0.0)) return best;

        for (std::size_t c : pick_columns()) {
            scan_column(c, rows, y_mean, parent_sse, best);
        }
        return best;
    }

    // Iterative preorder expansion (left child first). Explicit stack so
    // deep trees at small min_samples_leaf cannot exhaust the call stack.
    void build(std::vector<std::size_t>&& all_rows) {
        struct Work {
            std::vector<std::size_t> rows;
            std::int32_t parent;
            bool is_left;
        };
        std::vector<Work> stack;
        stack.push_back({std::move(all_rows), -1, false});
        while (!stack.empty()) {
            Work w = std::move(stack.back());
            stack.pop_back();
            const auto id = static_cast<std::int32_t>(nodes.size());
            nodes.emplace_back();
            if (w.parent >= 0) {
                auto& p = nodes[static_cast<std::size_t>(w.parent)];
                (w.is_left ? p.left : p.right) = id;
            }

            const SplitChoice best = choose_split(w.rows);
            if (!best.found) {
                nodes[static_cast<std::size_t>(id)].rows = std::move(w.rows);
                continue;
            }
            std::vector<std::size_t> left_rows, right_rows;
            const auto& col = cols[best.column];
            for (std::size_t i : w.rows) {
                (col[i] <= best.threshold ? left_rows : right_rows).push_back(i);
            }
            nodes[static_cast<std::size_t>(id)].feature = static_cast<std::int32_t>(best.column);
            nodes[static_cast<std::size_t>(id)].threshold = best.threshold;
            // LIFO: push right first so the left child is expanded next.
            stack.push_back({std::move(right_rows), id, false});
            stack.push_back({std::move(left_rows), id, true});
        }
    }
};

} // namespace

std::vector<const std::vector<std::size_t>*> StratTree::leaves() const {
    std::vector<const std::vector<std::size_t>*> out;
    if (nodes_.empty()) return out;
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
        const std::int32_t id = stack.back();
        stack.pop_back();
        const TreeNode& node = nodes_[static_cast<std::size_t>(id)];
        if (node.is_leaf()) {
            out.push_back(&node.rows);
        } else {
            stack.push_back(node.right);
            stack.push_back(node.left);
        }
    }
    return out;
}

StratTree fit_stratification(const Dataset& data, const StratifyParams& params) {
    if (data.n_features() == 0) throw DataError("fit_stratification: empty feature matrix");
    if (params.min_samples_leaf < 2) {
        throw DataError("min_samples_leaf must be at least 2");
    }
    if (!(params.max_features > 0.0 && params.max_features <= 1.0)) {
        throw DataError("max_features must lie in (0, 1]");
    }

    NodeBuilder builder{data.columns(), data.response(), params.min_samples_leaf,
                        params.max_features, Rng(params.rng_seed), {}};
    std::vector<std::size_t> all(data.n_rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    builder.build(std::move(all));

    StratTree tree;
    tree.nodes_ = std::move(builder.nodes);
    tree.n_rows_ = data.n_rows();
    return tree;
}

} // namespace stratx
