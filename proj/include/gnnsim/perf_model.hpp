#pragma once

#include <cstdint>
#include <vector>

#include "gnnsim/graph.hpp"
#include "gnnsim/sampler.hpp"
#include "gnnsim/types.hpp"

namespace gnnsim {

// One accelerator die: its resource budget and the DDR channel feeding it.
struct DieMeta {
    double n_dsp = 3072;
    double n_lut = 423000;
    double ddr_bw = 19.25e9;  // bytes/s
};

// CPU + multi-FPGA platform metadata. Dies are identical; n/m parallelism is
// per die and layer work splits evenly across dies.
struct PlatformMeta {
    std::uint32_t fpga_count = 4;
    std::uint32_t dies_per_fpga = 4;
    DieMeta die;
    double freq_hz = 300e6;
    double pcie_link_bw = 16e9;   // bytes/s, per FPGA
    double cpu_mem_bw = 205e9;    // bytes/s, shared by all links
    double sampler_rate = 25e6;   // edges/s the host sampler sustains
    double s_feat = 4.0;          // bytes per feature element

    // Each scatter-gather PE consumes 512 bits per cycle.
    std::uint32_t pe_simd() const {
        return static_cast<std::uint32_t>(512.0 / (8.0 * s_feat));
    }
    double ddr_bw_total() const { return die.ddr_bw * dies_per_fpga; }

    void validate() const;
};

// Per-die parallelism pair: n scatter-gather PEs, m update PEs.
struct AcceleratorConfig {
    std::uint32_t n = 1;
    std::uint32_t m = 1;
};

// Per-PE resource cost constants of the two kernels. The n*log2(n) term
// models the routing network of the scatter-gather kernel.
struct ResourceCoeffs {
    double lambda1 = 0.0;  // DSPs per update PE
    double lambda2 = 0.0;  // DSPs per scatter-gather PE
    double rho1 = 0.0;     // LUTs per update PE
    double rho2 = 0.0;     // LUTs per scatter-gather PE
    double rho3 = 0.0;     // LUTs per unit of n*log2(n)

    // Defaults calibrated against a Xilinx U250-class part (4 dies).
    static ResourceCoeffs u250_defaults();
};

struct ResourceCheck {
    bool feasible = false;
    double dsp_util = 0.0;
    double lut_util = 0.0;
};

// DSP and LUT constraints for one die:
//   lambda1*m + lambda2*n <= N_DSP
//   rho1*m + rho2*n + rho3*n*log2(n) <= N_LUT
ResourceCheck resource_check(const AcceleratorConfig& cfg,
                             const ResourceCoeffs& coeffs, const DieMeta& die);

// Vertex feature loading time for one layer: the beta fraction streams from
// local DDR, the rest crosses PCIe.
double t_load(std::uint64_t v_prev, double beta, std::size_t f, double s_feat,
              double bw_ddr, double bw_pcie_eff);

// Aggregate kernel compute time: |A^l| * f edge-feature operations across
// n PEs with pe_simd lanes each.
double t_compute_aggregate(std::uint64_t edges, std::size_t f, std::uint64_t n,
                           std::uint32_t pe_simd, double freq);

// Update kernel (MLP) time: |V^l| * f_in * f_out MACs across m PEs.
double t_update(std::uint64_t v, std::size_t f_in, std::size_t f_out,
                std::uint64_t m, double freq);

// Per-batch stage times on one FPGA. Per-layer vectors are indexed l-1 for
// layers 1..L.
struct CostBreakdown {
    std::vector<double> load;       // t_load^l
    std::vector<double> compute;    // t_compute^l
    std::vector<double> aggregate;  // max(load, compute)
    std::vector<double> update;     // t_update^l
    double t_fp = 0.0;
    double t_bp = 0.0;
    double t_lc = 0.0;
    double t_gnn = 0.0;
    double t_sampling = 0.0;
    double t_execution = 0.0;      // max(sampling, gnn)
    double t_gradient_sync = 0.0;
    double t_parallel = 0.0;       // execution + gradient sync
};

// Evaluates the analytical model for one mini-batch on one FPGA.
//
// Layer l (1-based) loads |V^{l-1}| vectors of f^{l-1} elements; only layer 1
// reads input features, so deeper layers hit local DDR (beta = 1). Aggregate
// and update stages are pipelined, so a layer costs max(aggregate, update).
// Column-sliced stores load just their local slice at layer 1; the exchange
// of partial results is priced separately by the simulator.
CostBreakdown evaluate_batch(const BatchStats& stats, const GnnModel& model,
                             const AcceleratorConfig& cfg,
                             const PlatformMeta& platform,
                             double bw_pcie_eff);

// Gather plus broadcast of the full weight set over each FPGA's own PCIe
// link, links in parallel; CPU-side reduction is free.
double gradient_sync_time(const GnnModel& model, const PlatformMeta& platform);

// NVTPS: vertices traversed per iteration over the iteration's parallel time.
double throughput_nvtps(std::uint64_t total_vertices_traversed,
                        double t_parallel);

}  // namespace gnnsim
