#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gnnsim/dse.hpp"
#include "gnnsim/partition.hpp"
#include "gnnsim/scheduler.hpp"
#include "gnnsim/simulator.hpp"

namespace gnnsim {

// Reports use ordered JSON so reruns are byte-identical.
using Json = nlohmann::ordered_json;

Json partition_report(const PartitionPlan& plan);
Json sim_report_json(const SimReport& report);
Json dse_report_json(const std::vector<DsePoint>& ranked,
                     std::uint32_t dies_per_fpga);
Json speedup_report_json(const std::vector<SpeedupPoint>& curve);

std::string iteration_trace_csv(const SimReport& report);
std::string dse_grid_csv(const std::vector<DsePoint>& points);
std::string speedup_curve_csv(const std::vector<SpeedupPoint>& curve);
std::string schedule_trace_csv(const std::vector<IterationPlan>& plans);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gnnsim
