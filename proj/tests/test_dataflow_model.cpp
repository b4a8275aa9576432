#include "pwadv/dataflow_model.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <tuple>
#include <utility>

using namespace pwadv;

TEST_CASE("pipeline cycle arithmetic")
{
    const auto column = pipeline_cycles({71, 2, 250e6}, 64);
    CHECK(column.total_cycles == 199);
    CHECK(column.fill_cycles == 71);
    CHECK(column.drain_cycles == 71);
    CHECK(column.full_cycles == 57);
    CHECK(column.utilization == doctest::Approx(57.0 / 199.0));
    CHECK(std::fabs(column.utilization - 0.286) <= 0.005);

    const auto batched = pipeline_cycles({71, 1, 250e6}, 4096);
    CHECK(batched.total_cycles == 4167);
    CHECK(batched.full_cycles == 4025);
    CHECK(std::fabs(batched.utilization - 0.966) <= 0.005);

    const auto tiny = pipeline_cycles({10, 1, 1e6}, 1);
    CHECK(tiny.total_cycles == 11);
    CHECK(tiny.full_cycles == 0);
    CHECK(tiny.utilization == 0.0);

    CHECK_THROWS_AS(pipeline_cycles({0, 1, 1e6}, 4), std::invalid_argument);
    CHECK_THROWS_AS(pipeline_cycles({4, 0, 1e6}, 4), std::invalid_argument);
    CHECK_THROWS_AS(pipeline_cycles({4, 1, 1e6}, 0), std::invalid_argument);
}

TEST_CASE("utilization grows with batch size")
{
    double previous = -1;
    for (std::int64_t n : {1, 8, 64, 512, 4096, 65536}) {
        const double u = pipeline_cycles({71, 1, 250e6}, n).utilization;
        CHECK(u >= previous);
        CHECK(u < 1.0);
        previous = u;
    }
}

TEST_CASE("pipeline latency")
{
    CHECK(pipeline_latency({65, 1, 250e6}) == 2.6e-7);
    CHECK(pipeline_latency({72, 1, 312.5e6}) == 2.304e-7);
    CHECK_THROWS_AS(pipeline_latency({72, 1, 0.0}), std::invalid_argument);
}

TEST_CASE("factor_cells picks near-square X and Y with 64 levels")
{
    CHECK(ModelGrid::factor_cells(268.3e6) == ModelGrid{2047, 2048, 64});
    CHECK(ModelGrid::factor_cells(66.3e6) == ModelGrid{1018, 1018, 64});
    CHECK(ModelGrid::factor_cells(0) == ModelGrid{});
    CHECK(ModelGrid::factor_cells(10) == ModelGrid{1, 1, 10});
    CHECK(ModelGrid::factor_cells(0).empty());
}

TEST_CASE("kernel cycle and byte counts")
{
    const ModelGrid g{512, 512, 64};
    // 512 planes * 8 batches, each a pipeline run of 64*64 elements.
    CHECK(kernel_compute_cycles(g, {71, 1, 250e6}, 64) == 512 * 8 * (71 + 4096));
    CHECK(kernel_compute_cycles(g, {71, 1, 250e6}, 64) == 17'068'032);
    MemoryModel mem;
    CHECK(kernel_memory_bytes(g, mem, 64) == 805'306'368.0);
    CHECK(kernel_compute_cycles({}, {71, 1, 250e6}, 64) == 0);
    CHECK(kernel_memory_bytes({}, mem, 64) == 0.0);
}

TEST_CASE("kernel_time composes compute and memory phases")
{
    KernelConfig cfg;
    cfg.memory.eff_bandwidth_1 = 2e9;
    cfg.memory.contention = 0.9;
    const ModelGrid g{512, 512, 64};
    const double compute = 512.0 * 8 * (72 + 4096) / 310e6;
    const double memory = 805'306'368.0 / 2e9;
    CHECK(kernel_time(g, cfg, 1) == doctest::Approx(compute + memory).epsilon(1e-12));

    // Four engines: 128 planes each, two engines per controller.
    const double c4 = 128.0 * 8 * (72 + 4096) / 310e6;
    const double m4 = 805'306'368.0 / 4 / (2e9 * 0.9);
    CHECK(kernel_time(g, cfg, 4) == doctest::Approx(c4 + m4).epsilon(1e-12));

    CHECK(kernel_time({}, cfg, 3) == 0.0);
    CHECK_THROWS_AS(kernel_time(g, cfg, 0), std::invalid_argument);
}

TEST_CASE("kernel_time is monotone in grid size and engines")
{
    KernelConfig cfg;
    cfg.memory.eff_bandwidth_1 = 1.75e9;
    cfg.memory.contention = 0.92;
    double previous = 0;
    for (std::uint64_t nx : {1, 16, 256, 1024}) {
        const double t = kernel_time({nx, 1024, 64}, cfg, 4);
        CHECK(t > previous);
        previous = t;
    }
    previous = INFINITY;
    for (std::uint64_t e = 1; e <= 12; ++e) {
        const double t = kernel_time({1024, 1024, 64}, cfg, e);
        CHECK(t <= previous);
        previous = t;
    }
}

TEST_CASE("batch larger than the grid is clamped")
{
    KernelConfig cfg;
    cfg.memory.eff_bandwidth_1 = 1e9;
    const ModelGrid narrow{8, 4, 64};
    KernelConfig exact = cfg;
    exact.y_batch = 4;
    CHECK(kernel_time(narrow, cfg, 1) == kernel_time(narrow, exact, 1));
}

TEST_CASE("gflops")
{
    CHECK(gflops(1e9, FlopProfile{}, 53.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(gflops(1e9, FlopProfile{}, 0.0), std::invalid_argument);
}

TEST_CASE("calibration recovers the generating parameters")
{
    KernelConfig truth;
    truth.memory.eff_bandwidth_1 = 2.3e9;
    truth.memory.contention = 0.87;
    std::vector<Observation> obs;
    for (auto [g, e] : {std::pair{ModelGrid{512, 512, 64}, 1ULL}, {ModelGrid{1012, 1024, 64}, 4ULL},
                       {ModelGrid{2047, 2048, 64}, 12ULL}, {ModelGrid{300, 200, 32}, 7ULL}})
        obs.push_back({g, e, kernel_time(g, truth, e)});

    KernelConfig start = truth;
    start.memory.eff_bandwidth_1 = 1.0;
    start.memory.contention = 0.5;
    const auto fit = calibrate(obs, start);
    CHECK(std::fabs(fit.memory.eff_bandwidth_1 / 2.3e9 - 1) <= 1e-6);
    CHECK(std::fabs(fit.memory.contention / 0.87 - 1) <= 1e-6);
    for (double r : fit.relative_residuals)
        CHECK(std::fabs(r) <= 1e-9);
}

TEST_CASE("calibration rejects unusable observations")
{
    KernelConfig cfg;
    const Observation a{{512, 512, 64}, 1, 0.5};
    const Observation b{{1024, 512, 64}, 2, 0.6}; // still one engine per controller
    CHECK_THROWS_AS(calibrate({a}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(calibrate({a, b}, cfg), std::invalid_argument);
    const Observation too_fast{{512, 512, 64}, 1, 1e-3};
    const Observation c{{512, 512, 64}, 12, 0.2};
    CHECK_THROWS_AS(calibrate({too_fast, c}, cfg), std::invalid_argument);
    // More engines per controller running faster per byte means contention > 1.
    KernelConfig fast = cfg;
    fast.memory.eff_bandwidth_1 = 1e9;
    fast.memory.contention = 1.0;
    const ModelGrid g{512, 512, 64};
    const Observation one{g, 1, kernel_time(g, fast, 1)};
    const Observation twelve{g, 12, kernel_time(g, fast, 12) * 0.5};
    CHECK_THROWS_AS(calibrate({one, twelve}, cfg), std::invalid_argument);
}

TEST_CASE("ladder rungs get faster at every step")
{
    KernelConfig cfg;
    cfg.memory.eff_bandwidth_1 = 1.75e9;
    cfg.memory.contention = 0.92;
    const auto rungs = ladder_rungs(cfg);
    REQUIRE(rungs.size() == 8);
    double previous = INFINITY;
    for (const auto& r : rungs) {
        const double t = ladder_kernel_time({512, 512, 64}, r, cfg);
        CHECK(t < previous);
        previous = t;
    }
    CHECK(ladder_kernel_time({512, 512, 64}, rungs.back(), cfg) == kernel_time({512, 512, 64}, cfg, 1));
}
