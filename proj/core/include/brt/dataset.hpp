#pragma once

#include "brt/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace brt {

/// Which columns of a CSV file the pipeline needs, and in what role.
struct CsvSchema {
    std::vector<std::string> numeric_columns;   ///< parsed as decimal reals
    std::optional<std::string> cluster_column;  ///< kept as string labels
    std::optional<std::string> time_column;     ///< integer-valued, defines row order
};

/// In-memory observation table: named numeric columns plus the optional
/// cluster-label and time columns. Empty cells are carried as NaN and dropped
/// by assemble; any other unparseable cell is a load error.
class Table {
  public:
    long rows() const { return n_rows_; }
    bool has_column(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
    const std::vector<std::string>& column_names() const { return names_; }

    bool has_time() const { return time_.has_value(); }
    const std::vector<long>& time() const;
    bool has_cluster() const { return cluster_.has_value(); }
    const std::vector<std::string>& cluster_labels() const;

    void add_column(const std::string& name, std::vector<double> values);

    /// Stable sort of all rows by the time column; duplicate stamps error.
    void sort_by_time();

  private:
    friend Table load_csv(const std::string& path, const CsvSchema& schema);

    long n_rows_ = 0;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> cols_;
    std::optional<std::vector<std::string>> cluster_;
    std::optional<std::vector<long>> time_;
};

/// Assembled observation blocks of the first-stage regression.
struct Dataset {
    long n = 0;        ///< effective sample size (rows with complete data)
    long n_source = 0; ///< parsed data rows before missing-row deletion;
                       ///< the scaling count for the test statistic
    Matrix X;          ///< n x k endogenous block
    Matrix Z;          ///< n x m instrument block
    Matrix W;          ///< n x l control block (leading constant unless suppressed)
    std::vector<std::string> x_names, z_names, w_names;
    bool has_constant = false;

    /// Cluster structure: group index per row (0-based) and the labels in
    /// first-appearance order. Present only when a cluster column was given.
    std::optional<std::vector<int>> cluster_group;
    std::vector<std::string> cluster_names;
    int n_clusters = 0;

    std::optional<std::vector<long>> time;  ///< per effective row, sorted

    int m() const { return static_cast<int>(Z.cols()); }
    int k() const { return static_cast<int>(X.cols()); }
    int l() const { return static_cast<int>(W.cols()); }
};

/// Reads a UTF-8, comma-delimited CSV with a header row. Only the columns
/// named in the schema are parsed; errors name the offending row and column.
Table load_csv(const std::string& path, const CsvSchema& schema);

/// Adds column `<name>_L<order>` shifted by `order` time steps; the first
/// `order` rows become missing. The table must be sorted by a designated
/// time column with unit gaps.
void lag(Table& table, const std::string& column, int order);

/// Builds the (X, Z, W) blocks from named columns, dropping every row with a
/// missing value in any referenced column. W gains a leading constant column
/// unless noconstant.
Dataset assemble(const Table& table, const std::vector<std::string>& endogenous,
                 const std::vector<std::string>& instruments,
                 const std::vector<std::string>& partial, bool noconstant,
                 const std::optional<std::string>& cluster);

}  // namespace brt
