#include "pwadv/reference_data.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace pwadv::reference {

namespace {

constexpr std::string_view kLadderCite = "published kernel optimisation table, x=512 y=512 z=64";
constexpr std::string_view kDmaCite = "published DMA configuration table, 1.6GB host-to-card";
constexpr std::string_view kPipelineCite = "published HLS pipeline analysis";
constexpr std::string_view kRetimeCite = "published clock retiming of the double precision cores";
constexpr std::string_view kScalingCite = "published 12-kernel results, 268 million cells";
constexpr std::string_view kBreakdownCite = "published runtime breakdown, x=1012 y=1024 z=64";
constexpr std::string_view kVolumeCite = "published data volume discussion";

const std::array<KernelStep, 10> kLadder{{
    {"Reference on CPU", 676.4, std::nullopt, std::nullopt, std::nullopt, kLadderCite},
    {"Initial port", 51498, 9743, 85, 0, kLadderCite},
    {"Pipeline directive on inner loop", 14130, 11356, 58, 64, kLadderCite},
    {"Local BRAM for column data", 3213.2, 27598, 267, 130, kLadderCite},
    {"Local BRAM batches columns in Y", 1513.2, 37474, 393, 453, kLadderCite},
    {"Extract all variables", 1301.6, 38393, 469, 312, kLadderCite},
    {"Burst mode on port", 1097.2, 40913, 469, 324, kLadderCite},
    {"Re-order X and Y loops", 621.3, 41151, 469, 324, kLadderCite},
    {"Replace memcpy with explicit loops", 568.1, 40638, 466, 324, kLadderCite},
    {"Tune double precision cores and clock to 310Mhz", 514.9, 27601, 406, 324, kLadderCite},
}};

const std::array<DmaRow, 4> kDma{{
    {"Design described here", "split_banks", 232, kDmaCite},
    {"One memory controller only", "one_controller", 280, kDmaCite},
    {"Two memory controllers connected", "connected_controllers", 239, kDmaCite},
    {"One DMA channel per memory controller", "one_channel_per_controller", 342, kDmaCite},
}};

const std::array<Headline, 27> kHeadlines{{
    {"pipeline.column.depth", 71, "cycles", kPipelineCite},
    {"pipeline.column.ii", 2, "cycles", kPipelineCite},
    {"pipeline.column.elements", 64, "elements", kPipelineCite},
    {"pipeline.column.total_cycles", 199, "cycles", kPipelineCite},
    {"pipeline.column.full_cycles", 57, "cycles", kPipelineCite},
    {"pipeline.column.utilization", 0.28, "fraction", kPipelineCite},
    {"pipeline.batched.total_cycles", 4167, "cycles", kPipelineCite},
    {"pipeline.batched.utilization", 0.97, "fraction", kPipelineCite},
    {"pipeline.extracted.depth", 65, "cycles", kPipelineCite},
    {"pipeline.retimed.depth", 72, "cycles", kRetimeCite},
    {"clock.default_hz", 250e6, "Hz", kRetimeCite},
    {"clock.retimed_hz", 310e6, "Hz", kRetimeCite},
    {"clock.retimed_period_s", 3.2e-9, "s", kRetimeCite},
    {"latency.extracted_s", 2.6e-7, "s", kRetimeCite},
    {"latency.retimed_s", 2.3e-7, "s", kRetimeCite},
    {"burst.max_length", 256, "elements", "published burst interface configuration"},
    {"burst.outstanding", 8, "bursts", "published burst interface configuration"},
    {"flops.per_cell", 53, "flop", "published operation count of the kernel"},
    {"volume.fields_bytes", 6.44e9, "B", kVolumeCite},
    {"volume.total_bytes", 12.88e9, "B", kVolumeCite},
    {"dma.total_seconds", 2.2, "s", kVolumeCite},
    {"dma.rate_bytes_per_s", 5.85e9, "B/s", kVolumeCite},
    {"gflops.kernel", 14.36, "GFLOP/s", kScalingCite},
    {"gflops.total", 4.2, "GFLOP/s", kScalingCite},
    {"gflops.broadwell_12_cores", 17.75, "GFLOP/s", kScalingCite},
    {"dma.fraction_12_kernels", 0.70, "fraction", kBreakdownCite},
    {"volume.breakdown_bytes", 3.32e9, "B", kBreakdownCite},
}};

} // namespace

std::span<const KernelStep> kernel_ladder() { return kLadder; }
std::span<const DmaRow> dma_table() { return kDma; }
std::span<const Headline> headlines() { return kHeadlines; }

const Headline& headline(std::string_view key)
{
    for (const auto& h : kHeadlines)
        if (h.key == key)
            return h;
    throw std::out_of_range("no published figure named '" + std::string(key) + "'");
}

} // namespace pwadv::reference
