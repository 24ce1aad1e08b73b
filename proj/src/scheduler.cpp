#include "gnnsim/scheduler.hpp"

#include <algorithm>
#include <numeric>

namespace gnnsim {

std::vector<IterationPlan> schedule_epoch(
    const std::vector<std::uint64_t>& quotas, PartId num_fpgas,
    const ScheduleOptions& options) {
    if (num_fpgas < 1) throw ConfigError("scheduler: need at least one FPGA");
    if (quotas.size() != num_fpgas)
        throw ConfigError("scheduler: one quota per FPGA-owned partition");

    const PartId p = num_fpgas;
    std::vector<std::uint64_t> rem = quotas;
    std::vector<std::uint64_t> next_seq(p, 0);
    std::vector<IterationPlan> plans;
    std::uint32_t iteration = 0;

    auto draw = [&](PartId donor) -> std::uint64_t { return next_seq[donor]++; };
    auto all_positive = [&]() {
        return std::all_of(rem.begin(), rem.end(),
                           [](std::uint64_t r) { return r > 0; });
    };
    auto any_positive = [&]() {
        return std::any_of(rem.begin(), rem.end(),
                           [](std::uint64_t r) { return r > 0; });
    };

    // Stage 1: every partition still has work; batch i goes to FPGA i.
    while (all_positive()) {
        IterationPlan plan;
        plan.iteration = ++iteration;
        for (PartId i = 0; i < p; ++i) {
            plan.assignments.push_back(
                {i, draw(i), i, SchedStage::Stage1, false});
            --rem[i];
        }
        plans.push_back(std::move(plan));
    }

    // Stage 2: some partitions are exhausted; fill their idle FPGAs with
    // extras sampled round-robin from the rest.
    std::uint64_t cnt = 0;
    while (any_positive()) {
        IterationPlan plan;
        plan.iteration = ++iteration;
        std::vector<PartId> avail, idle;
        for (PartId i = 0; i < p; ++i)
            (rem[i] > 0 ? avail : idle).push_back(i);

        for (PartId i : avail) {
            plan.assignments.push_back(
                {i, draw(i), i, SchedStage::Stage2, false});
            --rem[i];
        }

        for (PartId f : idle) {
            // Scan from the round-robin counter for a donor with work left.
            std::uint64_t probe = cnt;
            PartId donor = p;
            for (std::size_t tries = 0; tries < avail.size(); ++tries) {
                PartId cand = avail[probe % avail.size()];
                bool has_work = options.extras_consume_quota ? rem[cand] > 0
                                                             : true;
                if (has_work) {
                    donor = cand;
                    break;
                }
                ++probe;
            }
            if (donor == p) break;  // nothing left to hand out this iteration

            PartId target = options.policy == SchedPolicy::TwoStage
                                ? f
                                : donor;  // "stays home" baseline
            plan.assignments.push_back(
                {donor, draw(donor), target, SchedStage::Stage2, true});
            if (options.extras_consume_quota) --rem[donor];
            cnt = probe + 1;
        }

        std::sort(plan.assignments.begin(), plan.assignments.end(),
                  [](const SlotAssignment& a, const SlotAssignment& b) {
                      if (a.fpga != b.fpga) return a.fpga < b.fpga;
                      if (a.source != b.source) return a.source < b.source;
                      return a.seq_no < b.seq_no;
                  });
        plans.push_back(std::move(plan));
    }

    return plans;
}

EpochTotals epoch_totals(const std::vector<IterationPlan>& plans,
                         PartId num_fpgas, PartId num_parts) {
    EpochTotals totals;
    totals.per_fpga.assign(num_fpgas, 0);
    totals.per_partition.assign(num_parts, 0);
    for (const auto& plan : plans) {
        for (const auto& slot : plan.assignments) {
            ++totals.per_fpga.at(slot.fpga);
            ++totals.per_partition.at(slot.source);
            ++totals.total;
        }
    }
    return totals;
}

}  // namespace gnnsim
