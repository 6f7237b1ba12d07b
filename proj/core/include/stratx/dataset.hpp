#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace stratx {

enum class ColKind { numeric, categorical };

struct ColMeta {
    std::string name;
    ColKind kind = ColKind::numeric;
    // Categorical only: code k decodes to category_labels[k].
    std::vector<std::string> category_labels;
};

// Immutable column-typed table: an n x p feature matrix of doubles plus a
// numeric response vector. Categorical columns hold integer codes stored as
// doubles. Safe to share read-only across threads after construction.
class Dataset {
public:
    Dataset(std::vector<ColMeta> meta,
            std::vector<std::vector<double>> feature_cols,
            std::vector<double> response,
            std::string response_name = "y");

    std::size_t n_rows() const { return response_.size(); }
    std::size_t n_features() const { return feature_cols_.size(); }

    const std::vector<double>& column(std::size_t j) const;
    const std::vector<std::vector<double>>& columns() const { return feature_cols_; }
    const std::vector<double>& response() const { return response_; }
    const std::string& response_name() const { return response_name_; }

    const ColMeta& meta(std::size_t j) const;
    const std::vector<ColMeta>& all_meta() const { return meta_; }
    bool is_categorical(std::size_t j) const;

    // Index of a feature column by name; throws DataError if absent.
    std::size_t column_index(const std::string& name) const;

    // Label for a categorical code; throws DataError on numeric columns or
    // out-of-range codes.
    const std::string& decode(std::size_t j, double code) const;

private:
    void check_column(std::size_t j) const;

    std::vector<ColMeta> meta_;
    std::vector<std::vector<double>> feature_cols_;
    std::vector<double> response_;
    std::string response_name_;
};

// Label-encode a string column: observed labels are sorted lexicographically
// and assigned codes 0..K-1. Returns the code vector and the label table.
std::pair<std::vector<double>, std::vector<std::string>>
encode_labels(const std::vector<std::string>& values);

// Load an RFC 4180 style CSV (header row required, UTF-8, '.' decimal
// separator). response_col is extracted as the response; every column named
// in categorical_cols is label-encoded; remaining columns must be numeric.
// Missing cells and non-numeric values in numeric columns are rejected.
Dataset load_csv(const std::string& path,
                 const std::string& response_col,
                 const std::set<std::string>& categorical_cols);

// Same rows, feature column j removed, response unchanged.
Dataset drop_column(const Dataset& ds, std::size_t j);

// Write the dataset as CSV (categorical cells as labels, response last).
// Loading the output with the same categorical column set reproduces the
// dataset exactly.
void write_csv(const Dataset& ds, std::ostream& out);

// Bootstrap resample: rows drawn from ds by index, in draw order. Category
// label tables are carried over unchanged so codes keep their meaning even
// when a resample misses some level.
Dataset resample_rows(const Dataset& ds, const std::vector<std::size_t>& rows);

} // namespace stratx
