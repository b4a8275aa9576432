#include "pwadv/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <sys/utsname.h>

namespace pwadv {

Format parse_format(std::string_view name)
{
    if (name == "csv")
        return Format::Csv;
    if (name == "json")
        return Format::Json;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

double RunReport::min_seconds() const
{
    return wall_seconds.empty() ? 0.0 : *std::min_element(wall_seconds.begin(), wall_seconds.end());
}

double RunReport::mean_seconds() const
{
    if (wall_seconds.empty())
        return 0.0;
    return std::accumulate(wall_seconds.begin(), wall_seconds.end(), 0.0) / static_cast<double>(wall_seconds.size());
}

std::string format_number(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string_view to_string(CheckKind kind)
{
    switch (kind) {
    case CheckKind::Exact: return "exact";
    case CheckKind::Absolute: return "absolute";
    case CheckKind::Relative: return "relative";
    case CheckKind::AtLeast: return "at_least";
    case CheckKind::Holds: return "holds";
    }
    return "?";
}

namespace {

std::string hex64(std::uint64_t v)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string csv_cell(const nlohmann::ordered_json& v)
{
    if (v.is_null())
        return {};
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"')
                quoted += '"';
            quoted += c;
        }
        return quoted + '"';
    }
    if (v.is_boolean())
        return v.get<bool>() ? "1" : "0";
    if (v.is_number_float())
        return format_number(v.get<double>());
    if (v.is_array()) {
        std::string joined;
        for (const auto& e : v) {
            if (!joined.empty())
                joined += ';';
            joined += csv_cell(e);
        }
        return joined;
    }
    return v.dump();
}

} // namespace

std::vector<std::string> run_columns()
{
    return {"schedule",       "nx",          "ny",           "nz",          "engines",        "y_batch",
            "generator",      "reps",        "min_seconds",  "mean_seconds", "wall_seconds",  "checksum",
            "external_reads", "external_writes", "local_reads", "local_writes", "scratch_bytes_peak",
            "scratch_bytes_per_engine", "bottom_level_zero", "host"};
}

Record to_record(const RunReport& r)
{
    Record j;
    j["schedule"] = std::string(to_string(r.spec.variant));
    j["nx"] = r.dims.nx;
    j["ny"] = r.dims.ny;
    j["nz"] = r.dims.nz;
    j["engines"] = r.spec.engines;
    j["y_batch"] = r.spec.y_batch;
    j["generator"] = r.generator;
    j["reps"] = r.wall_seconds.size();
    j["min_seconds"] = r.min_seconds();
    j["mean_seconds"] = r.mean_seconds();
    j["wall_seconds"] = r.wall_seconds;
    j["checksum"] = hex64(r.checksum);
    j["external_reads"] = r.traffic.external_reads;
    j["external_writes"] = r.traffic.external_writes;
    j["local_reads"] = r.traffic.local_reads;
    j["local_writes"] = r.traffic.local_writes;
    j["scratch_bytes_peak"] = r.traffic.scratch_bytes_peak;
    j["scratch_bytes_per_engine"] = r.traffic.scratch_bytes_per_engine;
    j["bottom_level_zero"] = r.bottom_level_zero;
    j["host"] = r.host;
    return j;
}

std::vector<std::string> sweep_columns()
{
    return {"nx",           "ny",          "nz",           "cells",         "engines",
            "kernel_seconds", "dma_seconds", "total_seconds", "gflops_kernel", "gflops_total",
            "dma_fraction", "measured_seconds"};
}

Record to_record(const SweepRow& r)
{
    const auto& m = r.model;
    Record j;
    j["nx"] = m.grid.nx;
    j["ny"] = m.grid.ny;
    j["nz"] = m.grid.nz;
    j["cells"] = m.cells;
    j["engines"] = m.engines;
    j["kernel_seconds"] = m.kernel_seconds;
    j["dma_seconds"] = m.dma_seconds;
    j["total_seconds"] = m.total_seconds;
    j["gflops_kernel"] = m.gflops_kernel;
    j["gflops_total"] = m.gflops_total;
    j["dma_fraction"] = m.dma_fraction;
    j["measured_seconds"] = r.measured_seconds ? Record(*r.measured_seconds) : Record(nullptr);
    return j;
}

std::vector<std::string> ladder_columns()
{
    return {"step", "label", "modeled_seconds", "published_seconds", "citation"};
}

Record to_record(const LadderRow& r)
{
    Record j;
    j["step"] = r.step;
    j["label"] = r.label;
    j["modeled_seconds"] = r.modeled_seconds;
    j["published_seconds"] = r.published_seconds;
    j["citation"] = r.citation;
    return j;
}

std::vector<std::string> check_columns()
{
    return {"id", "name", "kind", "expected", "actual", "tolerance", "status", "citation"};
}

Record to_record(const Check& c)
{
    Record j;
    j["id"] = c.id;
    j["name"] = c.name;
    j["kind"] = std::string(to_string(c.kind));
    j["expected"] = c.expected;
    j["actual"] = c.actual;
    j["tolerance"] = c.tolerance;
    j["status"] = c.passed ? "PASS" : "FAIL";
    j["citation"] = c.citation;
    return j;
}

void write_table(std::ostream& out, const std::vector<std::string>& columns, const std::vector<Record>& rows,
                 Format format)
{
    if (format == Format::Json) {
        Record array = Record::array();
        for (const auto& r : rows) {
            Record ordered;
            for (const auto& c : columns)
                ordered[c] = r.at(c);
            array.push_back(std::move(ordered));
        }
        out << array.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << csv_cell(r.at(columns[i]));
        out << '\n';
    }
}

std::string host_description()
{
    std::string desc;
    utsname u{};
    if (uname(&u) == 0)
        desc = std::string(u.sysname) + " " + u.release + " " + u.machine;
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                auto name = line.substr(colon + 1);
                name.erase(0, name.find_first_not_of(' '));
                desc += "; " + name;
            }
            break;
        }
    }
    desc += "; " + std::to_string(std::thread::hardware_concurrency()) + " hw threads";
    return desc;
}

} // namespace pwadv
