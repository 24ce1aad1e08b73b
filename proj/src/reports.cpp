#include "gnnsim/reports.hpp"

#include <fstream>
#include <sstream>

namespace gnnsim {

Json partition_report(const PartitionPlan& plan) {
    Json parts = Json::array();
    std::uint64_t min_v = ~0ull, max_v = 0, min_t = ~0ull, max_t = 0;
    for (PartId i = 0; i < plan.num_parts; ++i) {
        const auto& c = plan.per_part[i];
        parts.push_back({{"partition", i},
                         {"vertices", c.vertex_count},
                         {"edges", c.edge_count},
                         {"train_vertices", c.train_vertex_count}});
        min_v = std::min(min_v, c.vertex_count);
        max_v = std::max(max_v, c.vertex_count);
        min_t = std::min(min_t, c.train_vertex_count);
        max_t = std::max(max_t, c.train_vertex_count);
    }
    Json j;
    j["num_parts"] = plan.num_parts;
    j["mode"] = plan.mode == PartitionMode::VertexResident ? "vertex_resident"
                                                           : "feature_dim";
    j["per_partition"] = parts;
    j["vertex_imbalance"] =
        min_v == 0 ? 0.0 : static_cast<double>(max_v) / static_cast<double>(min_v);
    j["train_imbalance"] =
        min_t == 0 ? 0.0 : static_cast<double>(max_t) / static_cast<double>(min_t);
    return j;
}

Json sim_report_json(const SimReport& report) {
    Json j;
    j["fpga_count"] = report.fpga_count;
    j["epochs"] = report.epochs;
    j["total_batches"] = report.total_batches;
    j["total_vertices_traversed"] = report.total_vertices_traversed;
    j["total_time_s"] = report.total_time;
    j["epoch_time_s"] = report.epoch_time;
    j["nvtps"] = report.nvtps;
    j["gradient_sync_time_s"] = report.gradient_sync_time;
    j["peak_pcie_occupancy"] = report.peak_pcie_occupancy;
    j["quotas"] = report.quotas;
    j["fpga_busy_fraction"] = report.fpga_busy_fraction;
    j["iterations"] = report.iterations.size();
    return j;
}

Json dse_report_json(const std::vector<DsePoint>& ranked,
                     std::uint32_t dies_per_fpga) {
    Json j;
    j["evaluated_points"] = ranked.size();
    if (!ranked.empty() && ranked.front().feasible) {
        const DsePoint& best = ranked.front();
        j["optimum"] = {{"n_per_die", best.cfg.n},
                        {"m_per_die", best.cfg.m},
                        {"n_total", best.cfg.n * dies_per_fpga},
                        {"m_total", best.cfg.m * dies_per_fpga},
                        {"dsp_util", best.dsp_util},
                        {"lut_util", best.lut_util},
                        {"nvtps", best.nvtps}};
    }
    Json top = Json::array();
    for (std::size_t i = 0; i < ranked.size() && i < 10; ++i) {
        const DsePoint& pt = ranked[i];
        if (!pt.feasible) break;
        top.push_back({{"n_per_die", pt.cfg.n},
                       {"m_per_die", pt.cfg.m},
                       {"nvtps", pt.nvtps},
                       {"dsp_util", pt.dsp_util},
                       {"lut_util", pt.lut_util}});
    }
    j["top"] = top;
    return j;
}

Json speedup_report_json(const std::vector<SpeedupPoint>& curve) {
    Json arr = Json::array();
    for (const SpeedupPoint& pt : curve)
        arr.push_back({{"fpgas", pt.fpgas},
                       {"nvtps", pt.nvtps},
                       {"speedup", pt.speedup}});
    Json j;
    j["curve"] = arr;
    return j;
}

std::string iteration_trace_csv(const SimReport& report) {
    std::ostringstream out;
    out << "epoch,iteration,t_parallel_s,vertices,batches,pcie_occupancy\n";
    for (const IterationTrace& t : report.iterations)
        out << t.epoch << ',' << t.iteration << ',' << t.t_parallel << ','
            << t.vertices << ',' << t.batches << ',' << t.pcie_occupancy
            << '\n';
    return out.str();
}

std::string dse_grid_csv(const std::vector<DsePoint>& points) {
    std::ostringstream out;
    out << "n_per_die,m_per_die,feasible,dsp_util,lut_util,nvtps\n";
    for (const DsePoint& pt : points)
        out << pt.cfg.n << ',' << pt.cfg.m << ',' << (pt.feasible ? 1 : 0)
            << ',' << pt.dsp_util << ',' << pt.lut_util << ',' << pt.nvtps
            << '\n';
    return out.str();
}

std::string speedup_curve_csv(const std::vector<SpeedupPoint>& curve) {
    std::ostringstream out;
    out << "fpgas,nvtps,speedup\n";
    for (const SpeedupPoint& pt : curve)
        out << pt.fpgas << ',' << pt.nvtps << ',' << pt.speedup << '\n';
    return out.str();
}

std::string schedule_trace_csv(const std::vector<IterationPlan>& plans) {
    std::ostringstream out;
    out << "iteration,fpga,partition,seq_no,stage,extra\n";
    for (const IterationPlan& plan : plans)
        for (const SlotAssignment& slot : plan.assignments)
            out << plan.iteration << ',' << slot.fpga << ',' << slot.source
                << ',' << slot.seq_no << ','
                << (slot.stage == SchedStage::Stage1 ? 1 : 2) << ','
                << (slot.extra ? 1 : 0) << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write report file: " + path);
    out << content;
}

}  // namespace gnnsim
