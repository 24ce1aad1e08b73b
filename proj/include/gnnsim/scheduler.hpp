#pragma once

#include <cstdint>
#include <vector>

#include "gnnsim/types.hpp"

namespace gnnsim {

enum class SchedPolicy {
    TwoStage,    // extras go to idle FPGAs
    Unbalanced,  // extras stay on the FPGA owning the donor partition
};

enum class SchedStage { Stage1, Stage2 };

// One mini-batch slot: partition `source` contributes its batch number
// `seq_no`, executed on FPGA `fpga`. Batches are bound lazily: the simulator
// materializes slot (source, seq_no) through the partition's sampler.
struct SlotAssignment {
    PartId source = 0;
    std::uint64_t seq_no = 0;
    PartId fpga = 0;
    SchedStage stage = SchedStage::Stage1;
    bool extra = false;  // stage-2 fill drawn round-robin from a donor
};

struct IterationPlan {
    std::uint32_t iteration = 0;  // 1-based
    std::vector<SlotAssignment> assignments;
};

struct ScheduleOptions {
    SchedPolicy policy = SchedPolicy::TwoStage;
    // Extras consume the donor partition's remaining quota (default), so an
    // epoch executes each quota batch exactly once. When false, extras
    // oversample beyond the donor's quota instead.
    bool extras_consume_quota = true;
};

// Builds the epoch schedule for per-partition batch quotas on p FPGAs.
// Stage 1 runs while every partition has batches left, sending partition i's
// next batch to FPGA i. Stage 2 keeps feeding each non-exhausted partition's
// FPGA, then fills each idle FPGA with one extra batch drawn round-robin
// (global counter) from the remaining partitions. Under the unbalanced
// policy the extras are produced in the identical order but stay on the
// donor's own FPGA.
std::vector<IterationPlan> schedule_epoch(
    const std::vector<std::uint64_t>& quotas, PartId num_fpgas,
    const ScheduleOptions& options = {});

struct EpochTotals {
    std::vector<std::uint64_t> per_fpga;
    std::vector<std::uint64_t> per_partition;
    std::uint64_t total = 0;
};

EpochTotals epoch_totals(const std::vector<IterationPlan>& plans,
                         PartId num_fpgas, PartId num_parts);

}  // namespace gnnsim
