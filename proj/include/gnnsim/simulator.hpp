#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gnnsim/graph.hpp"
#include "gnnsim/partition.hpp"
#include "gnnsim/perf_model.hpp"
#include "gnnsim/scheduler.hpp"
#include "gnnsim/types.hpp"

namespace gnnsim {

// Graph preprocessing recipe: which partitioner and feature-storing strategy
// the run uses.
enum class Algorithm {
    DistDgl,  // edge-balanced partitions, partition-resident features
    PaGraph,  // train-balanced partitions, replicated out-degree cache
    P3,       // full topology everywhere, feature columns sliced
};

struct SimConfig {
    Algorithm algorithm = Algorithm::DistDgl;
    bool workload_balance = true;
    bool direct_cpu_fetch = true;
    std::uint32_t epochs = 1;
    std::uint64_t seed = 0;
    std::optional<std::uint32_t> fpga_count_override;
    // Out-degree cache budget; 0 means 20% of all feature vectors.
    std::uint64_t cache_capacity_bytes = 0;
    // Divide the host sampling rate across FPGAs active in an iteration.
    bool shared_sampler = false;
    bool extras_consume_quota = true;
};

struct IterationTrace {
    std::uint32_t epoch = 0;
    std::uint32_t iteration = 0;  // within the epoch, 1-based
    double t_parallel = 0.0;
    std::uint64_t vertices = 0;
    std::uint64_t batches = 0;
    double pcie_occupancy = 0.0;  // granted PCIe rate over cpu_mem_bw
};

struct SimReport {
    std::uint32_t fpga_count = 0;
    std::uint32_t epochs = 0;
    std::uint64_t total_batches = 0;
    std::uint64_t total_vertices_traversed = 0;
    double total_time = 0.0;
    double epoch_time = 0.0;  // total_time / epochs
    double nvtps = 0.0;       // total vertices / total time
    double gradient_sync_time = 0.0;        // per iteration
    std::vector<double> fpga_busy_fraction;  // execution time / total time
    double peak_pcie_occupancy = 0.0;
    std::vector<IterationTrace> iterations;
    std::vector<std::uint64_t> quotas;
};

// Max-min fair PCIe allocation: each demand is capped by its own link and
// the sum of grants by the CPU memory bandwidth, with no grant slack left
// while any demand is unmet.
std::vector<double> effective_pcie_bandwidth(const std::vector<double>& demands,
                                             double link_bw, double cpu_bw);

// Device-to-device transfers bounce through CPU memory, so each byte crosses
// PCIe twice.
double fpga_to_fpga_bandwidth(double link_bw);

// Simulates synchronous training at iteration granularity: preprocessing per
// the configured algorithm, two-stage (or unbalanced) scheduling, per-batch
// analytical costs, and bandwidth contention for remote feature traffic.
SimReport run_epoch(const Graph& g, const GnnModel& model,
                    const PlatformMeta& platform, const AcceleratorConfig& cfg,
                    const SimConfig& sim, const ResourceCoeffs& coeffs);

struct SpeedupPoint {
    std::uint32_t fpgas = 0;
    double nvtps = 0.0;
    double speedup = 0.0;  // vs the single-FPGA run
};

// Re-runs the simulation for each FPGA count (re-partitioning every time)
// and normalizes throughput against p = 1.
std::vector<SpeedupPoint> scalability_sweep(
    const Graph& g, const GnnModel& model, const PlatformMeta& platform,
    const AcceleratorConfig& cfg, const SimConfig& sim,
    const ResourceCoeffs& coeffs, const std::vector<std::uint32_t>& p_values);

}  // namespace gnnsim
