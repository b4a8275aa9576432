#pragma once

#include "pwadv/dataflow_model.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace pwadv {

// All byte quantities use decimal units (1 GB = 1e9 B).

/// Host-to-card DMA wiring variants.
enum class Topology {
    SplitBanks4Ch,           // two separate banks, two DMA channels each
    OneController4Ch,        // four channels into a single controller
    ConnectedControllers4Ch, // two controllers sharing one address space
    OneChPerController,      // separate banks, one channel each
};

inline constexpr std::array<Topology, 4> kTopologies{
    Topology::SplitBanks4Ch, Topology::OneController4Ch, Topology::ConnectedControllers4Ch,
    Topology::OneChPerController};

std::string_view to_string(Topology t);
Topology parse_topology(std::string_view name);

/// One measured transfer: `seconds` to move `bytes` host-to-card.
struct DmaCalibration {
    double bytes = 1.6e9;
    double seconds = 0.0;

    [[nodiscard]] double bandwidth() const { return bytes / seconds; }
};

struct DmaConfig {
    std::array<DmaCalibration, 4> calibration{{
        {1.6e9, 0.232},
        {1.6e9, 0.280},
        {1.6e9, 0.239},
        {1.6e9, 0.342},
    }};
    /// Effective rate for a whole to-and-from transfer.
    double end_to_end_bandwidth = 5.85e9;

    [[nodiscard]] const DmaCalibration& at(Topology t) const { return calibration[static_cast<std::size_t>(t)]; }
    DmaCalibration& at(Topology t) { return calibration[static_cast<std::size_t>(t)]; }
};

void check_dma(const DmaConfig& config);

enum class Direction { ToCard, FromCard, Both };

/// Three double-precision fields per interior cell in each direction.
double transfer_volume(const ModelGrid& grid, Direction direction);
double transfer_volume(double cells, Direction direction);

double dma_time(double bytes, const DmaConfig& config, Topology topology);

struct ModelReport {
    ModelGrid grid;
    double cells = 0;
    std::uint64_t engines = 1;
    double kernel_seconds = 0;
    double dma_seconds = 0;
    double total_seconds = 0;
    double gflops_kernel = 0;
    double gflops_total = 0;
    double dma_fraction = 0;
};

struct SystemModel {
    KernelConfig kernel;
    DmaConfig dma;
    FlopProfile flops;
};

/// Serialized DMA in, kernel, DMA out. Rates are zero for an empty grid.
ModelReport end_to_end(const ModelGrid& grid, std::uint64_t engines, const SystemModel& model);

/// One report per engine count.
std::vector<ModelReport> scaling_table(const ModelGrid& grid, const std::vector<std::uint64_t>& engine_list,
                                       const SystemModel& model);

/// One report per grid at a fixed engine count.
std::vector<ModelReport> grid_sweep(const std::vector<ModelGrid>& grids, std::uint64_t engines,
                                    const SystemModel& model);

} // namespace pwadv
