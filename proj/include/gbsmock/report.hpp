#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbsmock/types.hpp"

namespace gbsmock {

/// One subset's metric values, in the report's column order.
struct ReportRow {
    std::string group;
    ModeList modes;
    std::vector<double> values;
};

struct ReportAggregate {
    std::string group;
    std::string column;
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double stderr_mean = 0.0;
    std::optional<double> lower;
    std::optional<double> upper;
};

/// A free-form numeric table (histograms, moment tables, fitted curves).
struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Per-subset metric values grouped (typically by subset size), with
/// aggregates that can always be recomputed from the rows.
struct MetricReport {
    std::string metric;
    std::vector<std::string> columns;
    std::vector<ReportRow> rows;
    std::vector<ReportAggregate> aggregates;
    std::vector<ReportTable> tables;
    std::map<std::string, std::string> metadata;

    void add_row(std::string group, ModeList modes, std::vector<double> values);
    /// Mean, sample standard deviation and standard error per (group, column),
    /// groups in first-appearance order. Existing bounds are kept.
    void compute_aggregates();
    /// Aggregate entry for (group, column); throws IndexError when missing.
    ReportAggregate& aggregate(const std::string& group, const std::string& column);
    const ReportAggregate& aggregate(const std::string& group, const std::string& column) const;
    std::size_t column_index(const std::string& column) const;
};

}  // namespace gbsmock
