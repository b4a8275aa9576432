#pragma once

#include "pwadv/grid.hpp"
#include "pwadv/schedules.hpp"
#include "pwadv/transfer_model.hpp"
#include "pwadv/validation.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pwadv {

// Tabular output. Every table is written either as CSV (header row, one row
// per record, fixed column order) or as a JSON array of objects carrying the
// same keys in the same order. Column orders are listed in README.md and are
// frozen; plot scripts index by name.

enum class Format { Csv, Json };

Format parse_format(std::string_view name);

/// Host benchmark of one schedule.
struct RunReport {
    ScheduleSpec spec;
    GridDims dims;
    std::string generator;
    std::vector<double> wall_seconds; // one per repetition
    std::uint64_t checksum = 0;
    TrafficReport traffic;
    bool bottom_level_zero = true;
    std::string host;

    [[nodiscard]] double min_seconds() const;
    [[nodiscard]] double mean_seconds() const;
};

/// Modelled point, optionally paired with a host measurement.
struct SweepRow {
    ModelReport model;
    std::optional<double> measured_seconds;
};

/// One optimisation step: modelled time beside the published one.
struct LadderRow {
    std::size_t step = 0;
    std::string label;
    double modeled_seconds = 0;
    double published_seconds = 0;
    std::string citation;
};

/// Column-ordered record; values are already formatted strings or numbers.
using Record = nlohmann::ordered_json;

Record to_record(const RunReport& r);
Record to_record(const SweepRow& r);
Record to_record(const LadderRow& r);
Record to_record(const Check& c);

std::vector<std::string> run_columns();
std::vector<std::string> sweep_columns();
std::vector<std::string> ladder_columns();
std::vector<std::string> check_columns();

/// Writes records whose keys follow `columns` exactly.
void write_table(std::ostream& out, const std::vector<std::string>& columns, const std::vector<Record>& rows,
                 Format format);

/// Short description of the machine running the benchmark.
std::string host_description();

/// Shortest decimal rendering used in every table (12 significant digits).
std::string format_number(double value);

std::string_view to_string(CheckKind kind);

} // namespace pwadv
