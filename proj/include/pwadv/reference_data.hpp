#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace pwadv::reference {

// Published measurements of the FPGA port, kept verbatim for comparison
// output and validation. Every row carries a citation string.

struct KernelStep {
    std::string_view label;
    double runtime_ms;
    std::optional<int> luts;
    std::optional<int> dsp48e;
    std::optional<int> bram18k;
    std::string_view citation;
};

/// Kernel-only runtime of each optimisation step, x=512 y=512 z=64.
std::span<const KernelStep> kernel_ladder();

struct DmaRow {
    std::string_view label;
    std::string_view topology; // matches to_string(Topology)
    double milliseconds;
    std::string_view citation;
};

/// Host-to-card DMA time for 1.6 GB under four board designs.
std::span<const DmaRow> dma_table();

struct Headline {
    std::string_view key;
    double value;
    std::string_view unit;
    std::string_view citation;
};

/// Scalar figures quoted in the text (pipeline arithmetic, volumes, rates).
std::span<const Headline> headlines();

/// Lookup by key; throws std::out_of_range for unknown keys.
const Headline& headline(std::string_view key);

} // namespace pwadv::reference
