#include "pwadv/params.hpp"
#include "pwadv/transfer_model.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace pwadv;

TEST_CASE("topology names round-trip")
{
    for (Topology t : kTopologies)
        CHECK(parse_topology(to_string(t)) == t);
    CHECK_THROWS_AS(parse_topology("pcie"), std::invalid_argument);
}

TEST_CASE("transfer volume is three doubles per cell each way")
{
    CHECK(transfer_volume(1.0, Direction::ToCard) == 24.0);
    CHECK(transfer_volume(1.0, Direction::FromCard) == 24.0);
    CHECK(transfer_volume(1.0, Direction::Both) == 48.0);
    CHECK(transfer_volume(ModelGrid{}, Direction::Both) == 0.0);

    const ModelGrid big = ModelGrid::factor_cells(268.3e6);
    CHECK(transfer_volume(big, Direction::Both) == 268'304'384.0 * 48);
    CHECK(std::fabs(transfer_volume(big, Direction::Both) / 12.88e9 - 1) <= 0.01);
    CHECK(std::fabs(transfer_volume(big, Direction::ToCard) / 6.44e9 - 1) <= 0.01);
}

TEST_CASE("DMA table is reproduced exactly")
{
    const DmaConfig cfg;
    CHECK(dma_time(1.6e9, cfg, Topology::SplitBanks4Ch) == 0.232);
    CHECK(dma_time(1.6e9, cfg, Topology::OneController4Ch) == 0.280);
    CHECK(dma_time(1.6e9, cfg, Topology::ConnectedControllers4Ch) == 0.239);
    CHECK(dma_time(1.6e9, cfg, Topology::OneChPerController) == 0.342);
    CHECK(dma_time(0.0, cfg, Topology::SplitBanks4Ch) == 0.0);
    CHECK_THROWS_AS(dma_time(-1.0, cfg, Topology::SplitBanks4Ch), std::invalid_argument);
}

TEST_CASE("DMA time scales linearly with bytes")
{
    const DmaConfig cfg;
    for (Topology t : kTopologies)
        CHECK(dma_time(3.2e9, cfg, t) == doctest::Approx(2 * dma_time(1.6e9, cfg, t)).epsilon(1e-15));
}

TEST_CASE("check_dma rejects non-positive calibration")
{
    DmaConfig cfg;
    CHECK_NOTHROW(check_dma(cfg));
    cfg.at(Topology::OneController4Ch).seconds = 0;
    CHECK_THROWS_AS(check_dma(cfg), std::invalid_argument);
    DmaConfig bad_rate;
    bad_rate.end_to_end_bandwidth = -1;
    CHECK_THROWS_AS(check_dma(bad_rate), std::invalid_argument);
}

TEST_CASE("end_to_end composes kernel and DMA time")
{
    const ModelParams p;
    const ModelGrid g{1012, 1024, 64};
    const auto r = end_to_end(g, 12, p.system);
    CHECK(r.cells == 66'322'432.0);
    CHECK(r.kernel_seconds == kernel_time(g, p.system.kernel, 12));
    CHECK(r.dma_seconds == 66'322'432.0 * 48 / 5.85e9);
    CHECK(r.total_seconds == r.kernel_seconds + r.dma_seconds);
    CHECK(r.gflops_kernel == doctest::Approx(66'322'432.0 * 53 / r.kernel_seconds / 1e9));
    CHECK(r.gflops_total == doctest::Approx(66'322'432.0 * 53 / r.total_seconds / 1e9));
    CHECK(r.dma_fraction == r.dma_seconds / r.total_seconds);
    CHECK(r.dma_fraction >= 0.65);
}

TEST_CASE("empty grid gives an all-zero report")
{
    const ModelParams p;
    const auto r = end_to_end(ModelGrid::factor_cells(0), 12, p.system);
    CHECK(r.cells == 0.0);
    CHECK(r.kernel_seconds == 0.0);
    CHECK(r.dma_seconds == 0.0);
    CHECK(r.total_seconds == 0.0);
    CHECK(r.gflops_kernel == 0.0);
    CHECK(r.gflops_total == 0.0);
    CHECK(r.dma_fraction == 0.0);
}

TEST_CASE("DMA share grows with engines and total time with cells")
{
    const ModelParams p;
    std::vector<std::uint64_t> engines;
    for (std::uint64_t e = 1; e <= 12; ++e)
        engines.push_back(e);
    const auto rows = scaling_table({1012, 1024, 64}, engines, p.system);
    REQUIRE(rows.size() == 12);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].dma_fraction >= rows[i - 1].dma_fraction);
        CHECK(rows[i].dma_seconds == rows[0].dma_seconds);
    }
    // Crossing of the half-way mark with the shipped parameters.
    CHECK(rows[3].dma_fraction < 0.5);
    CHECK(rows[4].dma_fraction > 0.5);

    std::vector<ModelGrid> grids;
    for (double cells : {1e6, 4e6, 16e6, 67e6, 268e6})
        grids.push_back(ModelGrid::factor_cells(cells));
    const auto sweep = grid_sweep(grids, 12, p.system);
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        CHECK(sweep[i].total_seconds > sweep[i - 1].total_seconds);
        CHECK(sweep[i].kernel_seconds > sweep[i - 1].kernel_seconds);
        CHECK(sweep[i].dma_seconds > sweep[i - 1].dma_seconds);
    }
    CHECK_THROWS_AS(scaling_table({4, 4, 4}, {}, p.system), std::invalid_argument);
    CHECK_THROWS_AS(grid_sweep({}, 1, p.system), std::invalid_argument);
}

TEST_CASE("single-point sweep equals the direct model")
{
    const ModelParams p;
    const ModelGrid g{512, 512, 64};
    const auto direct = end_to_end(g, 3, p.system);
    const auto table = scaling_table(g, {3}, p.system);
    CHECK(table.front().total_seconds == direct.total_seconds);
    CHECK(table.front().dma_fraction == direct.dma_fraction);
}

TEST_CASE("headline numbers at 268.3 million cells")
{
    const ModelParams p;
    const auto r = end_to_end(ModelGrid::factor_cells(268.3e6), 12, p.system);
    CHECK(std::fabs(r.gflops_kernel / 14.36 - 1) <= 0.05);
    CHECK(std::fabs(r.gflops_total / 4.2 - 1) <= 0.10);
    CHECK(std::fabs(r.dma_seconds / 2.2 - 1) <= 0.02);
}
