#include "gnnsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "gnnsim/sampler.hpp"

namespace gnnsim {

std::vector<double> effective_pcie_bandwidth(const std::vector<double>& demands,
                                             double link_bw, double cpu_bw) {
    if (link_bw <= 0 || cpu_bw <= 0)
        throw ConfigError("pcie allocation: bandwidths must be positive");
    std::vector<double> grants(demands.size(), 0.0);
    std::vector<double> caps(demands.size());
    double cap_sum = 0.0;
    for (std::size_t i = 0; i < demands.size(); ++i) {
        if (demands[i] < 0)
            throw ConfigError("pcie allocation: negative demand");
        caps[i] = std::min(demands[i], link_bw);
        cap_sum += caps[i];
    }
    if (cap_sum <= cpu_bw) return caps;  // everyone gets their capped demand

    // Water-filling: raise a common level, freezing demands that saturate
    // below it, until the CPU budget is spent.
    std::vector<std::size_t> order(demands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return caps[a] < caps[b];
    });
    double remaining = cpu_bw;
    std::size_t active = 0;
    for (std::size_t i : order)
        if (caps[i] > 0) ++active;
    for (std::size_t i : order) {
        if (caps[i] <= 0) continue;
        const double level = remaining / static_cast<double>(active);
        if (caps[i] <= level) {
            grants[i] = caps[i];
            remaining -= caps[i];
        } else {
            grants[i] = level;
            remaining -= level;
        }
        --active;
    }
    return grants;
}

double fpga_to_fpga_bandwidth(double link_bw) {
    if (link_bw <= 0) throw ConfigError("fpga-to-fpga: link bandwidth must be positive");
    return link_bw / 2.0;
}

namespace {

struct Preprocessing {
    PartitionPlan plan;
    FeatureStore store;
};

Preprocessing preprocess(const Graph& g, const PlatformMeta& platform,
                         const SimConfig& sim) {
    const PartId p = platform.fpga_count;
    switch (sim.algorithm) {
        case Algorithm::DistDgl: {
            PartitionPlan plan =
                partition_balanced(g, p, BalanceObjective::Edges, sim.seed);
            FeatureStore store = feature_store_from_partition(plan, g);
            return {std::move(plan), std::move(store)};
        }
        case Algorithm::PaGraph: {
            PartitionPlan plan = partition_balanced(
                g, p, BalanceObjective::TrainVertices, sim.seed);
            std::uint64_t cap = sim.cache_capacity_bytes;
            if (cap == 0) {
                const std::uint64_t vec =
                    static_cast<std::uint64_t>(g.feature_dim) * 4;
                cap = std::max<std::uint64_t>(vec,
                                              g.num_vertices * vec / 5);
            }
            FeatureStore store = feature_store_outdegree_cache(g, p, cap);
            return {std::move(plan), std::move(store)};
        }
        case Algorithm::P3: {
            auto [plan, store] = feature_store_feature_dim(g, p);
            return {std::move(plan), std::move(store)};
        }
    }
    throw ConfigError("unknown algorithm");
}

}  // namespace

SimReport run_epoch(const Graph& g, const GnnModel& model,
                    const PlatformMeta& platform, const AcceleratorConfig& cfg,
                    const SimConfig& sim, const ResourceCoeffs& coeffs) {
    model.validate();
    PlatformMeta plat = platform;
    if (sim.fpga_count_override) plat.fpga_count = *sim.fpga_count_override;
    plat.validate();
    const PartId p = plat.fpga_count;

    if (!resource_check(cfg, coeffs, plat.die).feasible)
        throw ConfigError("accelerator configuration is not DSE-feasible");

    Preprocessing prep = preprocess(g, plat, sim);

    std::vector<std::uint64_t> quotas(p);
    for (PartId i = 0; i < p; ++i)
        quotas[i] = partition_batch_quota(g, prep.plan, model, i);

    ScheduleOptions sched;
    sched.policy = sim.workload_balance ? SchedPolicy::TwoStage
                                        : SchedPolicy::Unbalanced;
    sched.extras_consume_quota = sim.extras_consume_quota;
    const std::vector<IterationPlan> plans = schedule_epoch(quotas, p, sched);

    SimReport report;
    report.fpga_count = p;
    report.epochs = sim.epochs;
    report.quotas = quotas;
    report.fpga_busy_fraction.assign(p, 0.0);
    std::vector<double> busy(p, 0.0);

    for (std::uint32_t epoch = 0; epoch < sim.epochs; ++epoch) {
        std::vector<PartitionSampler> samplers;
        samplers.reserve(p);
        for (PartId i = 0; i < p; ++i)
            samplers.emplace_back(g, prep.plan, i, model, sim.seed, epoch);

        for (const IterationPlan& iter : plans) {
            // Materialize this iteration's batches in per-partition
            // production order.
            std::vector<SlotAssignment> slots = iter.assignments;
            std::stable_sort(slots.begin(), slots.end(),
                             [](const SlotAssignment& a, const SlotAssignment& b) {
                                 if (a.source != b.source) return a.source < b.source;
                                 return a.seq_no < b.seq_no;
                             });

            std::vector<std::vector<BatchStats>> per_fpga(p);
            std::vector<double> remote_bytes(p, 0.0);
            std::uint64_t vertices = 0;
            std::uint64_t batches = 0;
            for (const SlotAssignment& slot : slots) {
                auto batch = samplers[slot.source].next();
                if (!batch || batch->seq_no != slot.seq_no)
                    throw InvariantError(
                        "simulator: scheduler slot does not match sampler output");
                BatchStats stats =
                    batch_stats(*batch, prep.store, slot.fpga, model);
                vertices += stats.total_vertices();
                ++batches;
                // Column-sliced stores never fetch the missing columns per
                // vertex; the broadcast term below covers them.
                if (!stats.feature_dim_mode)
                    remote_bytes[slot.fpga] +=
                        static_cast<double>(stats.bytes_remote);
                per_fpga[slot.fpga].push_back(std::move(stats));
            }

            std::uint32_t active = 0;
            for (PartId i = 0; i < p; ++i)
                if (!per_fpga[i].empty()) ++active;

            // Remote feature traffic pricing.
            std::vector<double> pcie_rate(p, 0.0);
            double occupancy_rate = 0.0;
            if (sim.direct_cpu_fetch) {
                std::vector<double> demands(p, 0.0);
                for (PartId i = 0; i < p; ++i)
                    if (remote_bytes[i] > 0) demands[i] = plat.pcie_link_bw;
                pcie_rate = effective_pcie_bandwidth(demands, plat.pcie_link_bw,
                                                     plat.cpu_mem_bw);
                for (double r : pcie_rate) occupancy_rate += r;
            } else {
                const double two_hop = fpga_to_fpga_bandwidth(plat.pcie_link_bw);
                for (PartId i = 0; i < p; ++i)
                    if (remote_bytes[i] > 0) {
                        pcie_rate[i] = two_hop;
                        occupancy_rate += two_hop;
                    }
            }

            PlatformMeta iter_plat = plat;
            if (sim.shared_sampler && active > 0)
                iter_plat.sampler_rate = plat.sampler_rate / active;

            // Column-sliced runs reconcile layer-1 partial results across
            // all devices after the first layer.
            double bcast_rate = 0.0;
            if (sim.algorithm == Algorithm::P3) {
                bcast_rate = sim.direct_cpu_fetch
                                 ? std::min(plat.pcie_link_bw,
                                            plat.cpu_mem_bw / p)
                                 : fpga_to_fpga_bandwidth(plat.pcie_link_bw);
            }

            const double sync = gradient_sync_time(model, plat);
            double t_max = 0.0;
            for (PartId i = 0; i < p; ++i) {
                double t_exec = 0.0;
                for (const BatchStats& stats : per_fpga[i]) {
                    CostBreakdown cost = evaluate_batch(stats, model, cfg,
                                                        iter_plat, pcie_rate[i]);
                    t_exec += cost.t_execution;
                    if (sim.algorithm == Algorithm::P3) {
                        // Partial results of GNN layer 1 (vertex set V^1).
                        const double bytes =
                            static_cast<double>(stats.sizes[1]) *
                            static_cast<double>(model.dims[1]) * plat.s_feat *
                            (static_cast<double>(p) - 1.0) /
                            static_cast<double>(p);
                        t_exec += bytes / bcast_rate;
                    }
                }
                busy[i] += t_exec;
                t_max = std::max(t_max, t_exec);
            }
            const double t_parallel = t_max + sync;

            IterationTrace trace;
            trace.epoch = epoch;
            trace.iteration = iter.iteration;
            trace.t_parallel = t_parallel;
            trace.vertices = vertices;
            trace.batches = batches;
            trace.pcie_occupancy = occupancy_rate / plat.cpu_mem_bw;
            report.iterations.push_back(trace);

            report.total_time += t_parallel;
            report.total_vertices_traversed += vertices;
            report.total_batches += batches;
            report.gradient_sync_time = sync;
            report.peak_pcie_occupancy =
                std::max(report.peak_pcie_occupancy, trace.pcie_occupancy);
        }
    }

    if (report.total_time > 0) {
        report.nvtps = static_cast<double>(report.total_vertices_traversed) /
                       report.total_time;
        for (PartId i = 0; i < p; ++i)
            report.fpga_busy_fraction[i] = busy[i] / report.total_time;
    }
    report.epoch_time = sim.epochs > 0
                            ? report.total_time / sim.epochs
                            : 0.0;
    return report;
}

std::vector<SpeedupPoint> scalability_sweep(
    const Graph& g, const GnnModel& model, const PlatformMeta& platform,
    const AcceleratorConfig& cfg, const SimConfig& sim,
    const ResourceCoeffs& coeffs, const std::vector<std::uint32_t>& p_values) {
    SimConfig base = sim;
    base.fpga_count_override = 1;
    const double nvtps1 =
        run_epoch(g, model, platform, cfg, base, coeffs).nvtps;

    std::vector<SpeedupPoint> curve;
    for (std::uint32_t p : p_values) {
        SpeedupPoint pt;
        pt.fpgas = p;
        if (p == 1) {
            pt.nvtps = nvtps1;
            pt.speedup = 1.0;
        } else {
            SimConfig c = sim;
            c.fpga_count_override = p;
            pt.nvtps = run_epoch(g, model, platform, cfg, c, coeffs).nvtps;
            pt.speedup = pt.nvtps / nvtps1;
        }
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace gnnsim
