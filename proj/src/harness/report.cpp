#include "dfc/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace dfc::harness {

Aggregate summarize(std::span<const double> values) {
    Aggregate a;
    if (values.empty()) return a;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(values.size());
    double sum = 0;
    for (double v : values) sum += v;
    a.mean = sum / n;
    if (values.size() > 1) {
        double ss = 0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / (n - 1));
    }
    a.min = sorted.front();
    a.max = sorted.back();
    const auto rank = [&](double q) {
        const auto r = static_cast<std::size_t>(std::ceil(q * n));
        return sorted[std::clamp<std::size_t>(r, 1, sorted.size()) - 1];
    };
    a.p50 = rank(0.50);
    a.p99 = rank(0.99);
    return a;
}

ExperimentReport::ExperimentReport(std::string name, std::vector<std::string> fields)
    : name_(std::move(name)), fields_(std::move(fields)) {}

void ExperimentReport::set_param(std::string key, std::string value) {
    for (auto& [k, v] : params_)
        if (k == key) {
            v = std::move(value);
            return;
        }
    params_.emplace_back(std::move(key), std::move(value));
}

void ExperimentReport::add(std::string group, std::vector<double> values) {
    if (values.size() != fields_.size())
        throw std::invalid_argument(fmt::format("record has {} values, report has {} fields", values.size(),
                                                fields_.size()));
    records_.push_back({std::move(group), std::move(values)});
}

void ExperimentReport::append(std::vector<Record> records) {
    for (auto& r : records) add(std::move(r.group), std::move(r.values));
}

std::vector<std::string> ExperimentReport::groups() const {
    std::vector<std::string> out;
    for (const auto& r : records_)
        if (std::find(out.begin(), out.end(), r.group) == out.end()) out.push_back(r.group);
    return out;
}

std::size_t ExperimentReport::field_index(std::string_view field) const {
    auto it = std::find(fields_.begin(), fields_.end(), field);
    if (it == fields_.end()) throw std::out_of_range(fmt::format("no field '{}' in report", field));
    return static_cast<std::size_t>(it - fields_.begin());
}

std::vector<double> ExperimentReport::column(std::string_view group, std::string_view field) const {
    const std::size_t f = field_index(field);
    std::vector<double> out;
    for (const auto& r : records_)
        if (r.group == group) out.push_back(r.values[f]);
    return out;
}

Aggregate ExperimentReport::aggregate(std::string_view group, std::string_view field) const {
    return summarize(column(group, field));
}

void ExperimentReport::write_csv(std::ostream& out) const {
    out << "kind,group";
    for (const auto& f : fields_) out << ',' << f;
    out << '\n';
    for (const auto& r : records_) {
        out << "trial," << r.group;
        for (double v : r.values) out << fmt::format(",{}", v);
        out << '\n';
    }
    for (const auto& g : groups()) {
        std::vector<Aggregate> aggs;
        for (const auto& f : fields_) aggs.push_back(aggregate(g, f));
        const std::pair<const char*, double Aggregate::*> rows[] = {
            {"mean", &Aggregate::mean}, {"stddev", &Aggregate::stddev}, {"min", &Aggregate::min},
            {"max", &Aggregate::max},   {"p50", &Aggregate::p50},       {"p99", &Aggregate::p99}};
        for (const auto& [label, member] : rows) {
            out << label << ',' << g;
            for (const auto& a : aggs) out << fmt::format(",{}", a.*member);
            out << '\n';
        }
    }
}

void ExperimentReport::write_json(std::ostream& out) const {
    using json = nlohmann::ordered_json;
    json doc;
    doc["experiment"] = name_;
    json params = json::object();
    for (const auto& [k, v] : params_) params[k] = v;
    doc["params"] = params;
    json trials = json::array();
    for (const auto& r : records_) {
        json t;
        t["group"] = r.group;
        for (std::size_t i = 0; i < fields_.size(); ++i) t[fields_[i]] = r.values[i];
        trials.push_back(std::move(t));
    }
    doc["trials"] = std::move(trials);
    json agg = json::object();
    for (const auto& g : groups()) {
        json per = json::object();
        for (const auto& f : fields_) {
            const Aggregate a = aggregate(g, f);
            per[f] = {{"mean", a.mean}, {"stddev", a.stddev}, {"min", a.min},
                      {"max", a.max},   {"p50", a.p50},       {"p99", a.p99}};
        }
        agg[g] = std::move(per);
    }
    doc["aggregate"] = std::move(agg);
    out << doc.dump(2) << '\n';
}

}  // namespace dfc::harness
