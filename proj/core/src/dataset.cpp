#include "stratx/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "stratx/errors.hpp"
#include "stratx/format.hpp"

namespace stratx {

Dataset::Dataset(std::vector<ColMeta> meta,
                 std::vector<std::vector<double>> feature_cols,
                 std::vector<double> response,
                 std::string response_name)
    : meta_(std::move(meta)),
      feature_cols_(std::move(feature_cols)),
      response_(std::move(response)),
      response_name_(std::move(response_name)) {
    if (response_.empty()) throw DataError("dataset needs at least one row");
    if (feature_cols_.empty()) throw DataError("dataset needs at least one feature column");
    if (meta_.size() != feature_cols_.size()) {
        throw DataError("column metadata count does not match feature column count");
    }
    const std::size_t n = response_.size();
    for (std::size_t j = 0; j < feature_cols_.size(); ++j) {
        if (feature_cols_[j].size() != n) {
            throw DataError("feature column \"" + meta_[j].name + "\" length does not match response");
        }
        if (meta_[j].kind == ColKind::categorical) {
            const auto n_cats = static_cast<double>(meta_[j].category_labels.size());
            if (meta_[j].category_labels.empty()) {
                throw DataError("categorical column \"" + meta_[j].name + "\" has no label table");
            }
            for (double v : feature_cols_[j]) {
                if (!(v >= 0.0 && v < n_cats) || v != std::floor(v)) {
                    throw DataError("categorical column \"" + meta_[j].name +
                                    "\" holds a code outside its label table");
                }
            }
        } else {
            for (double v : feature_cols_[j]) {
                if (!std::isfinite(v)) {
                    throw DataError("non-finite value in numeric column \"" + meta_[j].name + "\"");
                }
            }
        }
    }
    for (double v : response_) {
        if (!std::isfinite(v)) throw DataError("non-finite value in response column");
    }
}

void Dataset::check_column(std::size_t j) const {
    if (j >= feature_cols_.size()) {
        throw DataError("column index " + std::to_string(j) + " out of range (p=" +
                        std::to_string(feature_cols_.size()) + ")");
    }
}

const std::vector<double>& Dataset::column(std::size_t j) const {
    check_column(j);
    return feature_cols_[j];
}

const ColMeta& Dataset::meta(std::size_t j) const {
    check_column(j);
    return meta_[j];
}

bool Dataset::is_categorical(std::size_t j) const {
    return meta(j).kind == ColKind::categorical;
}

std::size_t Dataset::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < meta_.size(); ++j) {
        if (meta_[j].name == name) return j;
    }
    throw DataError("no feature column named \"" + name + "\"");
}

const std::string& Dataset::decode(std::size_t j, double code) const {
    const ColMeta& m = meta(j);
    if (m.kind != ColKind::categorical) {
        throw DataError("column \"" + m.name + "\" is not categorical");
    }
    if (code < 0 || code != std::floor(code) ||
        static_cast<std::size_t>(code) >= m.category_labels.size()) {
        throw DataError("code out of range for column \"" + m.name + "\"");
    }
    return m.category_labels[static_cast<std::size_t>(code)];
}

std::pair<std::vector<double>, std::vector<std::string>>
encode_labels(const std::vector<std::string>& values) {
    std::vector<std::string> labels(values);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::map<std::string, double> code;
    for (std::size_t k = 0; k < labels.size(); ++k) code[labels[k]] = static_cast<double>(k);
    std::vector<double> codes;
    codes.reserve(values.size());
    for (const auto& v : values) codes.push_back(code[v]);
    return {std::move(codes), std::move(labels)};
}

namespace {

// One CSV record, quotes and CRLFs resolved. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    int c;
    while ((c = in.get()) != EOF) {
        saw_any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
    }
    if (!saw_any) return false;
    fields.push_back(std::move(field));
    return true;
}

double parse_numeric(const std::string& field, std::size_t row, const std::string& col) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw DataError("non-numeric value \"" + field + "\" at row " + std::to_string(row) +
                        ", col " + col);
    }
    return v;
}

} // namespace

Dataset load_csv(const std::string& path,
                 const std::string& response_col,
                 const std::set<std::string>& categorical_cols) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);

    std::vector<std::string> header;
    if (!read_record(in, header) || header.empty()) {
        throw DataError("empty CSV: " + path);
    }

    std::size_t response_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == response_col) response_idx = j;
    }
    if (response_idx == header.size()) {
        throw DataError("response column \"" + response_col + "\" not found in " + path);
    }
    for (const auto& name : categorical_cols) {
        if (std::find(header.begin(), header.end(), name) == header.end()) {
            throw DataError("categorical column \"" + name + "\" not found in " + path);
        }
    }
    if (categorical_cols.count(response_col)) {
        throw DataError("response column \"" + response_col + "\" cannot be categorical");
    }
    if (header.size() < 3) {
        throw DataError("need at least two feature columns besides the response");
    }

    std::vector<std::vector<std::string>> raw(header.size());
    std::vector<std::string> fields;
    std::size_t row = 0;
    while (read_record(in, fields)) {
        // A lone trailing newline produces one empty field; skip it.
        if (fields.size() == 1 && fields[0].empty()) continue;
        ++row;
        if (fields.size() != header.size()) {
            throw DataError("row " + std::to_string(row) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (fields[j].empty()) {
                throw DataError("missing value at row " + std::to_string(row) + ", col " +
                                header[j]);
            }
            raw[j].push_back(std::move(fields[j]));
        }
    }
    if (row == 0) throw DataError("CSV has a header but no data rows: " + path);

    std::vector<double> response;
    response.reserve(row);
    for (std::size_t i = 0; i < row; ++i) {
        response.push_back(parse_numeric(raw[response_idx][i], i + 1, response_col));
    }

    std::vector<ColMeta> meta;
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j == response_idx) continue;
        ColMeta m;
        m.name = header[j];
        if (categorical_cols.count(header[j])) {
            m.kind = ColKind::categorical;
            auto [codes, labels] = encode_labels(raw[j]);
            m.category_labels = std::move(labels);
            cols.push_back(std::move(codes));
        } else {
            m.kind = ColKind::numeric;
            std::vector<double> col;
            col.reserve(row);
            for (std::size_t i = 0; i < row; ++i) {
                col.push_back(parse_numeric(raw[j][i], i + 1, header[j]));
            }
            cols.push_back(std::move(col));
        }
        meta.push_back(std::move(m));
    }
    return Dataset(std::move(meta), std::move(cols), std::move(response), response_col);
}

Dataset drop_column(const Dataset& ds, std::size_t j) {
    if (j >= ds.n_features()) {
        throw DataError("drop_column: index " + std::to_string(j) + " out of range (p=" +
                        std::to_string(ds.n_features()) + ")");
    }
    std::vector<ColMeta> meta;
    std::vector<std::vector<double>> cols;
    for (std::size_t k = 0; k < ds.n_features(); ++k) {
        if (k == j) continue;
        meta.push_back(ds.meta(k));
        cols.push_back(ds.column(k));
    }
    return Dataset(std::move(meta), std::move(cols), ds.response(), ds.response_name());
}

void write_csv(const Dataset& ds, std::ostream& out) {
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
        out << csv_field(ds.meta(j).name) << ',';
    }
    out << csv_field(ds.response_name()) << '\n';
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
        for (std::size_t j = 0; j < ds.n_features(); ++j) {
            if (ds.is_categorical(j)) {
                out << csv_field(ds.decode(j, ds.column(j)[i]));
            } else {
                out << format_double(ds.column(j)[i]);
            }
            out << ',';
        }
        out << format_double(ds.response()[i]) << '\n';
    }
}

Dataset resample_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw DataError("resample_rows: empty row selection");
    std::vector<std::vector<double>> cols(ds.n_features());
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
        cols[j].reserve(rows.size());
        const auto& src = ds.column(j);
        for (std::size_t i : rows) cols[j].push_back(src.at(i));
    }
    std::vector<double> response;
    response.reserve(rows.size());
    for (std::size_t i : rows) response.push_back(ds.response().at(i));
    return Dataset(ds.all_meta(), std::move(cols), std::move(response), ds.response_name());
}

} // namespace stratx
