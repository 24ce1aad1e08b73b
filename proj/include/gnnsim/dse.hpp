#pragma once

#include <cstdint>
#include <vector>

#include "gnnsim/perf_model.hpp"
#include "gnnsim/sampler.hpp"
#include "gnnsim/types.hpp"

namespace gnnsim {

struct SearchSpace {
    std::uint32_t n_max = 0;  // largest feasible n with m = 1
    std::uint32_t m_max = 0;  // largest feasible m with n = 1
};

// Derives the per-die search bounds from the resource constraints. Throws
// EmptySpaceError when no configuration fits.
SearchSpace construct_search_space(const ResourceCoeffs& coeffs,
                                   const DieMeta& die);

struct DsePoint {
    AcceleratorConfig cfg;  // per die
    bool feasible = false;
    double dsp_util = 0.0;
    double lut_util = 0.0;
    double nvtps = 0.0;  // mean over the batch profile, 0 when infeasible
};

struct SweepOptions {
    // Exhaustive sweeps every (n, m); otherwise m advances in powers of two
    // plus the per-n feasibility frontier, then a +/-25% linear scan refines
    // around the best point.
    bool exhaustive = false;
    // Testing caps on the space (0 = derive from resources).
    std::uint32_t n_limit = 0;
    std::uint32_t m_limit = 0;
};

// Sweeps the per-die design space, scoring each feasible configuration by
// mean NVTPS over the batch profile with all FPGAs active. Result is ranked
// by NVTPS descending; ties break toward smaller n, then smaller m.
std::vector<DsePoint> sweep(const GnnModel& model,
                            const std::vector<BatchStats>& profile,
                            const PlatformMeta& platform,
                            const ResourceCoeffs& coeffs,
                            const SweepOptions& options = {});

// Mean per-batch NVTPS of one configuration over the profile (the sweep's
// scoring function, exposed for oracle re-evaluation).
double profile_nvtps(const GnnModel& model,
                     const std::vector<BatchStats>& profile,
                     const PlatformMeta& platform,
                     const AcceleratorConfig& cfg);

struct UtilizationPoint {
    AcceleratorConfig cfg;  // same scale (per-die or whole-chip) as n_dsp
    double utilization = 0.0;
};

// Inverts the DSP constraint from two measured utilization points:
//   lambda1*m + lambda2*n = util * n_dsp.
// Throws CalibrationError when the points are linearly dependent or the
// solved costs are not positive.
std::pair<double, double> calibrate_dsp_coeffs(const UtilizationPoint& a,
                                               const UtilizationPoint& b,
                                               double n_dsp);

// Same inversion for the LUT constraint, holding rho3 = rho3_ratio * rho2:
//   rho1*m + rho2*(n + rho3_ratio*n*log2(n)) = util * n_lut.
// Returns (rho1, rho2, rho3).
std::tuple<double, double, double> calibrate_lut_coeffs(
    const UtilizationPoint& a, const UtilizationPoint& b, double n_lut,
    double rho3_ratio = 0.25);

}  // namespace gnnsim
