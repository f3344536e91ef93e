#include "gbsmock/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"

namespace gbsmock {

void MetricReport::add_row(std::string group, ModeList modes, std::vector<double> values) {
    if (values.size() != columns.size()) {
        throw DimensionError(fmt::format("row has {} values for {} columns", values.size(), columns.size()));
    }
    rows.push_back({std::move(group), std::move(modes), std::move(values)});
}

void MetricReport::compute_aggregates() {
    std::vector<std::string> groups;
    for (const auto& r : rows)
        if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) groups.push_back(r.group);

    std::vector<ReportAggregate> out;
    for (const auto& g : groups) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            ReportAggregate a;
            a.group = g;
            a.column = columns[c];
            double sum = 0.0;
            for (const auto& r : rows)
                if (r.group == g && std::isfinite(r.values[c])) {
                    sum += r.values[c];
                    ++a.count;
                }
            if (a.count > 0) a.mean = sum / static_cast<double>(a.count);
            if (a.count > 1) {
                double ss = 0.0;
                for (const auto& r : rows)
                    if (r.group == g && std::isfinite(r.values[c])) ss += (r.values[c] - a.mean) * (r.values[c] - a.mean);
                a.stddev = std::sqrt(ss / static_cast<double>(a.count - 1));
                a.stderr_mean = a.stddev / std::sqrt(static_cast<double>(a.count));
            }
            for (const auto& old : aggregates) {
                if (old.group == g && old.column == a.column) {
                    a.lower = old.lower;
                    a.upper = old.upper;
                }
            }
            out.push_back(std::move(a));
        }
    }
    aggregates = std::move(out);
}

ReportAggregate& MetricReport::aggregate(const std::string& group, const std::string& column) {
    for (auto& a : aggregates)
        if (a.group == group && a.column == column) return a;
    throw IndexError(fmt::format("no aggregate for group '{}' column '{}'", group, column));
}

const ReportAggregate& MetricReport::aggregate(const std::string& group, const std::string& column) const {
    return const_cast<MetricReport*>(this)->aggregate(group, column);
}

std::size_t MetricReport::column_index(const std::string& column) const {
    auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end()) throw IndexError(fmt::format("no column '{}'", column));
    return static_cast<std::size_t>(it - columns.begin());
}

}  // namespace gbsmock
