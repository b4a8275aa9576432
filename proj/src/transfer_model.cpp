#include "pwadv/transfer_model.hpp"

#include <stdexcept>
#include <string>

namespace pwadv {

std::string_view to_string(Topology t)
{
    switch (t) {
    case Topology::SplitBanks4Ch: return "split_banks";
    case Topology::OneController4Ch: return "one_controller";
    case Topology::ConnectedControllers4Ch: return "connected_controllers";
    case Topology::OneChPerController: return "one_channel_per_controller";
    }
    return "unknown";
}

Topology parse_topology(std::string_view name)
{
    for (Topology t : kTopologies)
        if (name == to_string(t))
            return t;
    throw std::invalid_argument("unknown DMA topology '" + std::string(name) + "'");
}

void check_dma(const DmaConfig& config)
{
    for (const auto& c : config.calibration)
        if (!(c.bytes > 0.0) || !(c.seconds > 0.0))
            throw std::invalid_argument("DMA calibration needs positive bytes and seconds");
    if (!(config.end_to_end_bandwidth > 0.0))
        throw std::invalid_argument("end-to-end bandwidth must be positive");
}

double transfer_volume(double cells, Direction direction)
{
    const double one_way = 3.0 * cells * sizeof(double);
    return direction == Direction::Both ? 2.0 * one_way : one_way;
}

double transfer_volume(const ModelGrid& grid, Direction direction)
{
    return transfer_volume(grid.cells(), direction);
}

double dma_time(double bytes, const DmaConfig& config, Topology topology)
{
    if (bytes < 0.0)
        throw std::invalid_argument("negative transfer size");
    const auto index = static_cast<std::size_t>(topology);
    if (index >= config.calibration.size())
        throw std::invalid_argument("unknown DMA topology");
    return bytes / config.calibration[index].bandwidth();
}

ModelReport end_to_end(const ModelGrid& grid, std::uint64_t engines, const SystemModel& model)
{
    check_dma(model.dma);
    ModelReport r;
    r.grid = grid;
    r.cells = grid.cells();
    r.engines = engines;
    r.kernel_seconds = kernel_time(grid, model.kernel, engines);
    r.dma_seconds = transfer_volume(grid, Direction::Both) / model.dma.end_to_end_bandwidth;
    r.total_seconds = r.kernel_seconds + r.dma_seconds;
    if (r.kernel_seconds > 0.0)
        r.gflops_kernel = gflops(r.cells, model.flops, r.kernel_seconds);
    if (r.total_seconds > 0.0) {
        r.gflops_total = gflops(r.cells, model.flops, r.total_seconds);
        r.dma_fraction = r.dma_seconds / r.total_seconds;
    }
    return r;
}

std::vector<ModelReport> scaling_table(const ModelGrid& grid, const std::vector<std::uint64_t>& engine_list,
                                       const SystemModel& model)
{
    if (engine_list.empty())
        throw std::invalid_argument("scaling_table needs at least one engine count");
    std::vector<ModelReport> rows;
    rows.reserve(engine_list.size());
    for (auto engines : engine_list)
        rows.push_back(end_to_end(grid, engines, model));
    return rows;
}

std::vector<ModelReport> grid_sweep(const std::vector<ModelGrid>& grids, std::uint64_t engines,
                                    const SystemModel& model)
{
    if (grids.empty())
        throw std::invalid_argument("grid_sweep needs at least one grid");
    std::vector<ModelReport> rows;
    rows.reserve(grids.size());
    for (const auto& g : grids)
        rows.push_back(end_to_end(g, engines, model));
    return rows;
}

} // namespace pwadv
