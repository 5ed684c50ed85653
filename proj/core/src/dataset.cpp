#include "brt/dataset.hpp"

#include "brt/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace brt {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_cell(const std::string& cell, long row, const std::string& col) {
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0' || errno == ERANGE) {
        throw CsvError("unparseable numeric cell '" + cell + "' at row " + std::to_string(row) +
                       ", column '" + col + "'");
    }
    return v;
}

}  // namespace

bool Table::has_column(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return cols_[i];
    }
    throw CsvError("column '" + name + "' not present in table");
}

const std::vector<long>& Table::time() const {
    if (!time_) throw InvalidStateError("table has no designated time column");
    return *time_;
}

const std::vector<std::string>& Table::cluster_labels() const {
    if (!cluster_) throw InvalidStateError("table has no designated cluster column");
    return *cluster_;
}

void Table::add_column(const std::string& name, std::vector<double> values) {
    if (has_column(name)) throw CsvError("duplicate column name '" + name + "'");
    if (static_cast<long>(values.size()) != n_rows_) {
        throw InvalidInputError("add_column: wrong length for '" + name + "'");
    }
    names_.push_back(name);
    cols_.push_back(std::move(values));
}

void Table::sort_by_time() {
    if (!time_) throw InvalidStateError("sort_by_time: no designated time column");
    std::vector<long> order(n_rows_);
    std::iota(order.begin(), order.end(), 0L);
    std::stable_sort(order.begin(), order.end(),
                     [&](long a, long b) { return (*time_)[a] < (*time_)[b]; });
    for (long i = 0; i + 1 < n_rows_; ++i) {
        if ((*time_)[order[i]] == (*time_)[order[i + 1]]) {
            throw CsvError("duplicate time value " + std::to_string((*time_)[order[i]]));
        }
    }
    auto permute = [&](auto& v) {
        auto copy = v;
        for (long i = 0; i < n_rows_; ++i) v[i] = copy[order[i]];
    };
    for (auto& c : cols_) permute(c);
    if (cluster_) permute(*cluster_);
    permute(*time_);
}

Table load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw CsvError("'" + path + "': no data rows");
    auto header = split_csv_line(line);
    if (header.empty()) throw CsvError("'" + path + "': empty header row");

    {
        std::set<std::string> seen;
        for (const auto& h : header) {
            if (!seen.insert(h).second) {
                throw CsvError("'" + path + "': duplicate column name '" + h + "'");
            }
        }
    }

    auto col_index = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw CsvError("'" + path + "': missing column '" + name + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    };

    std::vector<std::string> numeric = schema.numeric_columns;
    if (schema.time_column &&
        std::find(numeric.begin(), numeric.end(), *schema.time_column) == numeric.end()) {
        numeric.push_back(*schema.time_column);
    }
    std::vector<std::size_t> numeric_idx;
    numeric_idx.reserve(numeric.size());
    for (const auto& name : numeric) numeric_idx.push_back(col_index(name));
    std::optional<std::size_t> cluster_idx;
    if (schema.cluster_column) cluster_idx = col_index(*schema.cluster_column);

    Table t;
    t.names_ = numeric;
    t.cols_.assign(numeric.size(), {});
    if (schema.cluster_column) t.cluster_.emplace();

    long row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw CsvError("'" + path + "': row " + std::to_string(row) + " has " +
                           std::to_string(cells.size()) + " fields, expected " +
                           std::to_string(header.size()));
        }
        for (std::size_t j = 0; j < numeric.size(); ++j) {
            t.cols_[j].push_back(parse_cell(cells[numeric_idx[j]], row, numeric[j]));
        }
        if (cluster_idx) t.cluster_->push_back(cells[*cluster_idx]);
    }
    if (row == 0) throw CsvError("'" + path + "': no data rows");
    t.n_rows_ = row;

    if (schema.time_column) {
        const auto& tc = t.column(*schema.time_column);
        std::vector<long> ticks(t.n_rows_);
        for (long i = 0; i < t.n_rows_; ++i) {
            double v = tc[i];
            if (std::isnan(v)) {
                throw CsvError("'" + path + "': missing time value at row " + std::to_string(i + 1));
            }
            double r = std::round(v);
            if (std::fabs(v - r) > 1e-9) {
                throw CsvError("'" + path + "': non-integer time value at row " +
                               std::to_string(i + 1));
            }
            ticks[i] = static_cast<long>(r);
        }
        t.time_ = std::move(ticks);
    }
    return t;
}

void lag(Table& table, const std::string& column, int order) {
    if (order < 1) throw InvalidInputError("lag: order must be positive");
    if (order >= table.rows()) {
        throw InvalidInputError("lag: order " + std::to_string(order) +
                                " >= sample size " + std::to_string(table.rows()));
    }
    if (!table.has_time()) {
        throw InvalidStateError("lag: a time column must be designated");
    }
    const auto& ticks = table.time();
    for (std::size_t i = 1; i < ticks.size(); ++i) {
        if (ticks[i] != ticks[i - 1] + 1) {
            throw CsvError("lag: non-contiguous time index (" + std::to_string(ticks[i - 1]) +
                           " -> " + std::to_string(ticks[i]) + ")");
        }
    }
    const auto& src = table.column(column);
    std::vector<double> shifted(src.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = static_cast<std::size_t>(order); i < src.size(); ++i) {
        shifted[i] = src[i - order];
    }
    table.add_column(column + "_L" + std::to_string(order), std::move(shifted));
}

Dataset assemble(const Table& table, const std::vector<std::string>& endogenous,
                 const std::vector<std::string>& instruments,
                 const std::vector<std::string>& partial, bool noconstant,
                 const std::optional<std::string>& cluster) {
    if (endogenous.empty()) throw InvalidInputError("assemble: no endogenous variables");
    if (instruments.empty()) throw InvalidInputError("assemble: no instruments");

    {
        std::set<std::string> seen;
        for (const auto* list : {&endogenous, &instruments, &partial}) {
            for (const auto& name : *list) {
                if (!seen.insert(name).second) {
                    throw InvalidInputError("assemble: variable '" + name +
                                            "' appears in more than one list");
                }
            }
        }
    }

    std::vector<std::string> referenced;
    referenced.insert(referenced.end(), endogenous.begin(), endogenous.end());
    referenced.insert(referenced.end(), instruments.begin(), instruments.end());
    referenced.insert(referenced.end(), partial.begin(), partial.end());
    for (const auto& name : referenced) {
        if (!table.has_column(name)) {
            throw CsvError("assemble: column '" + name + "' not present");
        }
    }

    const long n_src = table.rows();
    std::vector<long> keep;
    keep.reserve(n_src);
    for (long i = 0; i < n_src; ++i) {
        bool ok = true;
        for (const auto& name : referenced) {
            if (std::isnan(table.column(name)[i])) {
                ok = false;
                break;
            }
        }
        if (ok && cluster && table.cluster_labels()[i].empty()) ok = false;
        if (ok) keep.push_back(i);
    }
    const long n = static_cast<long>(keep.size());

    const int k = static_cast<int>(endogenous.size());
    const int m = static_cast<int>(instruments.size());
    const int l = static_cast<int>(partial.size()) + (noconstant ? 0 : 1);
    if (n <= m + l) {
        throw InvalidInputError("assemble: insufficient observations (n = " + std::to_string(n) +
                                " <= m + l = " + std::to_string(m + l) + ")");
    }

    Dataset d;
    d.n = n;
    d.n_source = n_src;
    d.X.resize(n, k);
    d.Z.resize(n, m);
    d.W.resize(n, l);
    d.x_names = endogenous;
    d.z_names = instruments;
    d.w_names = partial;
    d.has_constant = !noconstant;

    for (int j = 0; j < k; ++j) {
        const auto& col = table.column(endogenous[j]);
        for (long i = 0; i < n; ++i) d.X(i, j) = col[keep[i]];
    }
    for (int j = 0; j < m; ++j) {
        const auto& col = table.column(instruments[j]);
        for (long i = 0; i < n; ++i) d.Z(i, j) = col[keep[i]];
    }
    int wj = 0;
    if (!noconstant) {
        d.W.col(wj++).setOnes();
        d.w_names.insert(d.w_names.begin(), "_cons");
    }
    for (const auto& name : partial) {
        const auto& col = table.column(name);
        for (long i = 0; i < n; ++i) d.W(i, wj) = col[keep[i]];
        ++wj;
    }

    for (int j = 0; j < m; ++j) {
        if (d.Z.col(j).maxCoeff() == d.Z.col(j).minCoeff()) {
            throw InvalidInputError("assemble: instrument '" + instruments[j] +
                                    "' is constant; instruments must be nonconstant");
        }
    }

    if (cluster) {
        const auto& labels = table.cluster_labels();
        std::vector<int> group(n);
        std::unordered_map<std::string, int> ids;
        for (long i = 0; i < n; ++i) {
            const auto& lab = labels[keep[i]];
            auto [it, inserted] = ids.emplace(lab, static_cast<int>(d.cluster_names.size()));
            if (inserted) d.cluster_names.push_back(lab);
            group[i] = it->second;
        }
        d.n_clusters = static_cast<int>(d.cluster_names.size());
        if (d.n_clusters < 2) {
            throw InvalidInputError("assemble: need at least 2 clusters, found " +
                                    std::to_string(d.n_clusters));
        }
        d.cluster_group = std::move(group);
    }

    if (table.has_time()) {
        const auto& ticks = table.time();
        std::vector<long> eff(n);
        for (long i = 0; i < n; ++i) eff[i] = ticks[keep[i]];
        d.time = std::move(eff);
    }
    return d;
}

}  // namespace brt
