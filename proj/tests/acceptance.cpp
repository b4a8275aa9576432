// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).
//
// usage: acceptance PATH_TO_PWBENCH

#include "pwadv/advection.hpp"
#include "pwadv/params.hpp"
#include "pwadv/schedules.hpp"
#include "pwadv/transfer_model.hpp"
#include "pwadv/validation.hpp"

#include "oracle/naive_pw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace pwadv;

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok && passed)
            detail << "first failure: " << what << "; ";
        passed = passed && ok;
    }
};

bool within_rel(double actual, double expected, double tol)
{
    return std::fabs(actual - expected) <= tol * std::fabs(expected);
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body)
{
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.passed = false;
        o.detail << "exception: " << e.what();
    }
    failures += o.passed ? 0 : 1;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << id << ": " << title;
    const std::string d = o.detail.str();
    if (!d.empty())
        std::cout << " (" << d << ")";
    std::cout << std::endl;
}

// Randomised schedule cases shared by criteria 7 and 9.
struct Case {
    GridDims dims;
    std::uint64_t seed;
    std::size_t y_batch;
};

std::vector<Case> random_cases(std::size_t count)
{
    std::mt19937_64 rng(20190101);
    std::vector<Case> cases;
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    for (std::size_t n = 0; n < count; ++n) {
        // Every fourth case may be narrower in X than the largest engine count.
        const std::size_t nx = n % 4 == 3 ? pick(1, 32) : pick(8, 32);
        const auto dims = make_grid(nx, pick(1, 32), pick(2, 32));
        cases.push_back({dims, rng(), pick(1, dims.ny)});
    }
    return cases;
}

AdvectionCoefficients random_coefficients(std::size_t nz, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    AdvectionCoefficients c;
    c.tcx = dist(rng);
    c.tcy = dist(rng);
    for (std::size_t k = 0; k < nz; ++k) {
        c.tzc1.push_back(dist(rng));
        c.tzc2.push_back(dist(rng));
    }
    return c;
}

int run_command(const std::string& cmd)
{
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance PATH_TO_PWBENCH\n";
        return 2;
    }
    const std::string pwbench = argv[1];
    const auto cases = random_cases(120);

    criterion(1, "pipeline arithmetic 199/57/28.6% and 4167/96.6%", [](Outcome& o) {
        const auto column = pipeline_cycles({71, 2, 250e6}, 64);
        const auto batched = pipeline_cycles({71, 1, 250e6}, 4096);
        o.require(column.total_cycles == 199, "column total");
        o.require(column.full_cycles == 57, "column full");
        o.require(std::fabs(column.utilization - 0.286) <= 0.005, "column utilization");
        o.require(batched.total_cycles == 4167, "batched total");
        o.require(std::fabs(batched.utilization - 0.966) <= 0.005, "batched utilization");
        o.detail << "column " << column.total_cycles << "/" << column.full_cycles << "/" << num(column.utilization)
                 << ", batched " << batched.total_cycles << "/" << num(batched.utilization);
    });

    criterion(2, "latency 65 cycles @ 250 MHz (4 ns) = 2.6e-7 s, 72 cycles @ 312.5 MHz (3.2 ns) = 2.304e-7 s", [](Outcome& o) {
        const double extracted = pipeline_latency({65, 1, 250e6});
        const double retimed = pipeline_latency({72, 1, 312.5e6});
        o.require(extracted == 2.6e-7, "extracted latency");
        o.require(retimed == 2.304e-7, "retimed latency");
        o.detail << num(extracted) << " s, " << num(retimed) << " s";
    });

    criterion(3, "volume 12.88 GB both ways, 6.44 GB one way, 2.2 s at 5.85 GB/s", [](Outcome& o) {
        const ModelGrid g = ModelGrid::factor_cells(268.3e6);
        const double both = transfer_volume(g, Direction::Both);
        const double one = transfer_volume(g, Direction::ToCard);
        const double seconds = both / 5.85e9;
        o.require(within_rel(both, 12.88e9, 0.01), "both-way volume");
        o.require(within_rel(one, 6.44e9, 0.01), "one-way volume");
        o.require(within_rel(seconds, 2.2, 0.02), "transfer time");
        o.detail << num(both) << " B, " << num(one) << " B, " << num(seconds) << " s";
    });

    const ModelParams shipped = resolve_params(std::nullopt);

    criterion(4, "DMA table 232/280/239/342 ms with shipped calibration", [&](Outcome& o) {
        const double expected[] = {0.232, 0.280, 0.239, 0.342};
        for (std::size_t t = 0; t < kTopologies.size(); ++t) {
            const double s = dma_time(1.6e9, shipped.system.dma, kTopologies[t]);
            o.require(s == expected[t], std::string(to_string(kTopologies[t])));
            o.detail << num(s * 1e3) << (t + 1 < kTopologies.size() ? "/" : " ms");
        }
    });

    criterion(5, "two-point calibration: 514.9 ms +-5%, 14.36 GFLOP/s +-5%, 4.2 GFLOP/s +-10%", [&](Outcome& o) {
        SystemModel model = shipped.system;
        model.kernel.memory = calibrate(published_anchors(shipped), shipped.system.kernel).memory;
        const double t = kernel_time({512, 512, 64}, model.kernel, 1);
        const auto big = end_to_end(ModelGrid::factor_cells(268.3e6), 12, model);
        o.require(within_rel(t, 0.5149, 0.05), "kernel time");
        o.require(within_rel(big.gflops_kernel, 14.36, 0.05), "kernel GFLOP/s");
        o.require(within_rel(big.gflops_total, 4.2, 0.10), "total GFLOP/s");
        o.detail << num(t * 1e3) << " ms, " << num(big.gflops_kernel) << " / " << num(big.gflops_total)
                 << " GFLOP/s (total residual " << num(100 * (big.gflops_total / 4.2 - 1)) << "%)";
    });

    criterion(6, "DMA share >= 0.65 at 66.3e6 cells, 12 kernels; non-decreasing over 1..12", [&](Outcome& o) {
        const ModelGrid g = ModelGrid::factor_cells(66.3e6);
        double previous = -1;
        for (std::uint64_t e = 1; e <= 12; ++e) {
            const double f = end_to_end(g, e, shipped.system).dma_fraction;
            o.require(f >= previous, "monotone at " + std::to_string(e) + " engines");
            previous = f;
        }
        o.require(previous >= 0.65, "share at 12 engines");
        o.detail << "share at 12 kernels " << num(previous);
    });

    criterion(7, "schedules x engines {1,2,4,8} bitwise equal to reference on >=100 random grids", [&](Outcome& o) {
        std::mt19937_64 rng(7);
        std::size_t runs = 0;
        for (const auto& c : cases) {
            const auto fs = fill_fields(c.dims, RandomFill{c.seed});
            const auto coeffs = random_coefficients(c.dims.nz, rng);
            const auto ref = run_reference(fs, coeffs);
            o.require(compare_outputs(ref, oracle::naive_sources(fs, coeffs)).bitwise_equal, "reference vs oracle");
            for (std::size_t i = 1; i <= c.dims.nx; ++i)
                for (std::size_t j = 1; j <= c.dims.ny; ++j)
                    o.require(ref.su(i, j, 1) == 0.0 && ref.sv(i, j, 1) == 0.0 && ref.sw(i, j, 1) == 0.0,
                              "bottom level zero");
            for (Variant v : {Variant::Reference, Variant::ColumnBuffered, Variant::YBatched, Variant::XReordered})
                for (std::size_t e : {1u, 2u, 4u, 8u}) {
                    if (e > c.dims.nx)
                        continue;
                    const auto r = run_schedule(fs, coeffs, {v, c.y_batch, e});
                    ++runs;
                    o.require(compare_outputs(r.sources, ref).bitwise_equal,
                              std::string(to_string(v)) + " engines=" + std::to_string(e));
                }
            const long sx = static_cast<long>(c.seed % c.dims.nx);
            const long sy = static_cast<long>((c.seed >> 8) % c.dims.ny);
            const auto moved = run_reference(oracle::shifted(fs, sx, sy), coeffs);
            o.require(compare_outputs(moved, oracle::shifted(ref, sx, sy)).bitwise_equal, "shift equivariance");
        }
        o.detail << cases.size() << " grids, " << runs << " schedule runs";
    });

    criterion(8, "uniform fields, tzc1 == tzc2: zero below the top, closed form at the top within 2 ULP",
              [&](Outcome& o) {
                  std::mt19937_64 rng(8);
                  std::uniform_real_distribution<double> dist(-2.0, 2.0);
                  std::uint64_t worst = 0;
                  for (std::size_t n = 0; n < 50; ++n) {
                      const auto& c = cases[n];
                      const double a = dist(rng), b = dist(rng), w = dist(rng);
                      auto coeffs = random_coefficients(c.dims.nz, rng);
                      coeffs.tzc2 = coeffs.tzc1;
                      const auto fs = fill_fields(c.dims, UniformFill{a, b, w});
                      const auto out = run_schedule(fs, coeffs, {Variant::XReordered, c.y_batch, 1}).sources;
                      const double t = coeffs.tzc1[c.dims.nz - 1];
                      const std::size_t top = c.dims.nz;
                      for (std::size_t i = 1; i <= c.dims.nx; ++i)
                          for (std::size_t j = 1; j <= c.dims.ny; ++j) {
                              for (std::size_t k = 1; k < top; ++k)
                                  o.require(out.su(i, j, k) == 0.0 && out.sv(i, j, k) == 0.0 &&
                                                out.sw(i, j, k) == 0.0,
                                            "zero below the top");
                              const std::uint64_t d = std::max({ulp_distance(out.su(i, j, top), 2.0 * t * a * w),
                                                                ulp_distance(out.sv(i, j, top), 2.0 * t * b * w),
                                                                ulp_distance(out.sw(i, j, top), 2.0 * t * w * w)});
                              worst = std::max(worst, d);
                          }
                  }
                  o.require(worst <= 2, "top-level closed form");
                  o.detail << "worst top-level distance " << worst << " ULP";
              });

    criterion(9, "X-reordered reads less than Y-batched for nx >= 2; traffic deterministic", [&](Outcome& o) {
        std::size_t grids = 0;
        for (const auto& c : cases) {
            const auto fs = fill_fields(c.dims, RandomFill{c.seed});
            const auto coeffs = AdvectionCoefficients::uniform(c.dims.nz);
            if (c.dims.nx >= 2) {
                ++grids;
                const auto yb = run_schedule(fs, coeffs, {Variant::YBatched, c.y_batch, 1}).traffic;
                const auto xr = run_schedule(fs, coeffs, {Variant::XReordered, c.y_batch, 1}).traffic;
                o.require(xr.external_reads < yb.external_reads, "read ordering");
            }
            for (Variant v : {Variant::Reference, Variant::ColumnBuffered, Variant::YBatched, Variant::XReordered}) {
                TrafficReport first;
                for (std::size_t e : {1u, 2u, 4u, 8u}) {
                    if (e > c.dims.nx)
                        continue;
                    const auto a = run_schedule(fs, coeffs, {v, c.y_batch, e}).traffic;
                    const auto b = run_schedule(fs, coeffs, {v, c.y_batch, e}).traffic;
                    o.require(a == b, "repeatable traffic");
                    if (e == 1)
                        first = a;
                    else if (v != Variant::XReordered)
                        o.require(a.external_reads == first.external_reads && a.local_reads == first.local_reads &&
                                      a.external_writes == first.external_writes &&
                                      a.local_writes == first.local_writes,
                                  "thread-count independence");
                }
            }
        }
        o.detail << grids << " grids with nx >= 2";
    });

    criterion(10, "calibration round-trip recovers generating memory model to 1e-6", [&](Outcome& o) {
        std::mt19937_64 rng(10);
        std::uniform_real_distribution<double> bw(0.5e9, 8e9), cont(0.6, 1.0);
        double worst = 0;
        for (int trial = 0; trial < 25; ++trial) {
            KernelConfig truth = shipped.system.kernel;
            truth.memory.eff_bandwidth_1 = bw(rng);
            truth.memory.contention = cont(rng);
            std::vector<Observation> obs;
            for (auto [g, e] : {std::pair{ModelGrid{512, 512, 64}, 1ULL}, {ModelGrid{1012, 1024, 64}, 5ULL},
                               {ModelGrid::factor_cells(268.3e6), 12ULL}})
                obs.push_back({g, e, kernel_time(g, truth, e)});
            const auto fit = calibrate(obs, shipped.system.kernel).memory;
            worst = std::max({worst, std::fabs(fit.eff_bandwidth_1 / truth.memory.eff_bandwidth_1 - 1),
                              std::fabs(fit.contention / truth.memory.contention - 1)});
        }
        o.require(worst <= 1e-6, "relative error");
        o.detail << "worst relative error " << num(worst);
    });

    criterion(11, "pwbench validate exits 0 with shipped defaults", [&](Outcome& o) {
        const int rc = run_command("\"" + pwbench + "\" validate > /dev/null 2>&1");
        o.require(rc == 0, "exit status");
        o.detail << "exit " << rc;
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures;
}
