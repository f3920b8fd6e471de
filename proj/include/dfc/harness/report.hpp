#ifndef DFC_HARNESS_REPORT_HPP
#define DFC_HARNESS_REPORT_HPP

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dfc::harness {

struct Aggregate {
    double mean = 0;
    double stddev = 0;  // sample standard deviation, 0 for a single value
    double min = 0;
    double max = 0;
    double p50 = 0;
    double p99 = 0;
};

/// Nearest-rank percentiles; mean by left-to-right summation.
Aggregate summarize(std::span<const double> values);

struct Record {
    std::string group;
    std::vector<double> values;  // one per report field
};

/**
 * Per-trial records of one experiment plus aggregates over each group.
 * Aggregates are never stored; they are recomputed from the records, so a
 * reader holding the trial rows can reproduce them exactly.
 *
 * CSV layout: header `kind,group,<fields>`, then one `trial` row per record,
 * then per group the rows `mean`, `stddev`, `min`, `max`, `p50`, `p99`.
 * JSON layout: {"experiment", "params", "trials": [...], "aggregate": {group: {field: {...}}}}.
 * Numbers are written in shortest round-trip form.
 */
class ExperimentReport {
public:
    ExperimentReport(std::string name, std::vector<std::string> fields);

    void set_param(std::string key, std::string value);
    void add(std::string group, std::vector<double> values);
    void append(std::vector<Record> records);

    const std::string& name() const { return name_; }
    const std::vector<std::pair<std::string, std::string>>& params() const { return params_; }
    const std::vector<std::string>& fields() const { return fields_; }
    const std::vector<Record>& records() const { return records_; }
    /// Groups in order of first appearance.
    std::vector<std::string> groups() const;
    std::size_t field_index(std::string_view field) const;
    std::vector<double> column(std::string_view group, std::string_view field) const;
    Aggregate aggregate(std::string_view group, std::string_view field) const;

    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;

private:
    std::string name_;
    std::vector<std::string> fields_;
    std::vector<std::pair<std::string, std::string>> params_;
    std::vector<Record> records_;
};

}  // namespace dfc::harness

#endif
