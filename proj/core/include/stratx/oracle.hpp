#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

#include "stratx/catstratpd.hpp"
#include "stratx/dataset.hpp"
#include "stratx/stratify.hpp"
#include "stratx/stratpd.hpp"

namespace stratx {

// Brute-force reference implementations. These trade all the shortcuts of
// the optimized path (shared grouping, binary-searched interval cover,
// parallel leaves) for direct quadratic-time scans, and exist solely to
// cross-check the optimized results bit for bit on small inputs. They
// share the fitted tree and the random-draw streams with the optimized
// path so outputs are comparable exactly.
PDCurve oracle_stratpd(const Dataset& data, std::size_t feature, const StratTree& tree,
                       std::size_t min_slopes_per_x);

CatEffect oracle_catstratpd(const Dataset& data, std::size_t feature, const StratTree& tree,
                            std::uint64_t draw_seed);

struct OracleCheckReport {
    std::size_t datasets = 0;
    std::size_t numeric_compared = 0;
    std::size_t categorical_compared = 0;
    std::size_t agreed_errors = 0; // both paths raised the same condition
    std::size_t mismatches = 0;
    std::string first_mismatch;
    bool ok() const { return mismatches == 0; }
};

// Generate random small datasets (numeric + categorical features, heavy
// value duplication) and compare the optimized estimators against the
// references on each. One line per dataset goes to log when given.
OracleCheckReport oracle_check(std::size_t n_datasets, std::uint64_t seed,
                               std::ostream* log = nullptr);

} // namespace stratx
