#include "gnnsim/dse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>

namespace gnnsim {

namespace {

bool feasible(const ResourceCoeffs& coeffs, const DieMeta& die,
              std::uint32_t n, std::uint32_t m) {
    return resource_check({n, m}, coeffs, die).feasible;
}

// Largest v in [1, hi] with pred(v) true under a monotone predicate, or 0.
std::uint32_t last_true(std::uint32_t hi,
                        const std::function<bool(std::uint32_t)>& pred) {
    if (!pred(1)) return 0;
    std::uint32_t lo = 1;
    while (lo < hi) {
        std::uint32_t mid = lo + (hi - lo + 1) / 2;
        if (pred(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

}  // namespace

SearchSpace construct_search_space(const ResourceCoeffs& coeffs,
                                   const DieMeta& die) {
    if (coeffs.lambda1 <= 0 || coeffs.lambda2 <= 0 || coeffs.rho1 <= 0 ||
        coeffs.rho2 <= 0 || coeffs.rho3 < 0)
        throw ConfigError("search space: coefficients must be positive");

    // Generous upper bounds from the DSP constraint alone; the binary search
    // then applies both constraints.
    const auto hi_n = static_cast<std::uint32_t>(
        std::max(1.0, die.n_dsp / coeffs.lambda2) + 1);
    const auto hi_m = static_cast<std::uint32_t>(
        std::max(1.0, die.n_dsp / coeffs.lambda1) + 1);

    SearchSpace space;
    space.n_max = last_true(
        hi_n, [&](std::uint32_t n) { return feasible(coeffs, die, n, 1); });
    space.m_max = last_true(
        hi_m, [&](std::uint32_t m) { return feasible(coeffs, die, 1, m); });

    if (space.n_max == 0)
        throw EmptySpaceError(
            "empty design space: no scatter-gather PE fits the die");
    if (space.m_max == 0)
        throw EmptySpaceError("empty design space: no update PE fits the die");
    return space;
}

double profile_nvtps(const GnnModel& model,
                     const std::vector<BatchStats>& profile,
                     const PlatformMeta& platform,
                     const AcceleratorConfig& cfg) {
    // Every FPGA runs one profile batch per iteration; the effective PCIe
    // rate is the fair share under full symmetric demand.
    const double bw_pcie_eff =
        std::min(platform.pcie_link_bw,
                 platform.cpu_mem_bw / platform.fpga_count);
    double acc = 0.0;
    for (const BatchStats& stats : profile) {
        const CostBreakdown cost =
            evaluate_batch(stats, model, cfg, platform, bw_pcie_eff);
        const std::uint64_t traversed =
            stats.total_vertices() * platform.fpga_count;
        acc += throughput_nvtps(traversed, cost.t_parallel);
    }
    return acc / static_cast<double>(profile.size());
}

std::vector<DsePoint> sweep(const GnnModel& model,
                            const std::vector<BatchStats>& profile,
                            const PlatformMeta& platform,
                            const ResourceCoeffs& coeffs,
                            const SweepOptions& options) {
    if (profile.empty()) throw ConfigError("sweep: empty batch profile");
    SearchSpace space = construct_search_space(coeffs, platform.die);
    const std::uint32_t n_hi = options.n_limit
                                   ? std::min(options.n_limit, space.n_max)
                                   : space.n_max;
    const std::uint32_t m_hi = options.m_limit
                                   ? std::min(options.m_limit, space.m_max)
                                   : space.m_max;

    auto max_m_for = [&](std::uint32_t n) {
        return last_true(m_hi, [&](std::uint32_t m) {
            return feasible(coeffs, platform.die, n, m);
        });
    };

    std::vector<DsePoint> points;
    auto eval_point = [&](std::uint32_t n, std::uint32_t m) {
        DsePoint pt;
        pt.cfg = {n, m};
        ResourceCheck rc = resource_check(pt.cfg, coeffs, platform.die);
        pt.feasible = rc.feasible;
        pt.dsp_util = rc.dsp_util;
        pt.lut_util = rc.lut_util;
        if (pt.feasible)
            pt.nvtps = profile_nvtps(model, profile, platform, pt.cfg);
        points.push_back(pt);
    };

    if (options.exhaustive) {
        for (std::uint32_t n = 1; n <= n_hi; ++n)
            for (std::uint32_t m = 1; m <= m_hi; ++m) eval_point(n, m);
    } else {
        for (std::uint32_t n = 1; n <= n_hi; ++n) {
            const std::uint32_t m_top = max_m_for(n);
            if (m_top == 0) continue;
            std::set<std::uint32_t> ms;
            for (std::uint32_t m = 1; m <= m_top; m *= 2) ms.insert(m);
            ms.insert(m_top);
            for (std::uint32_t m : ms) eval_point(n, m);
        }
        // Linear rescan around the incumbent.
        auto best = std::max_element(
            points.begin(), points.end(), [](const DsePoint& a, const DsePoint& b) {
                return a.nvtps < b.nvtps;
            });
        if (best != points.end() && best->feasible) {
            const std::uint32_t n = best->cfg.n;
            const std::uint32_t m_top = max_m_for(n);
            const auto lo = static_cast<std::uint32_t>(
                std::max(1.0, std::floor(best->cfg.m * 0.75)));
            const auto hi = std::min<std::uint32_t>(
                m_top, static_cast<std::uint32_t>(std::ceil(best->cfg.m * 1.25)));
            std::set<std::uint32_t> have;
            for (const DsePoint& pt : points)
                if (pt.cfg.n == n) have.insert(pt.cfg.m);
            for (std::uint32_t m = lo; m <= hi; ++m)
                if (!have.count(m)) eval_point(n, m);
        }
    }

    std::sort(points.begin(), points.end(),
              [](const DsePoint& a, const DsePoint& b) {
                  if (a.feasible != b.feasible) return a.feasible;
                  if (a.nvtps != b.nvtps) return a.nvtps > b.nvtps;
                  if (a.cfg.n != b.cfg.n) return a.cfg.n < b.cfg.n;
                  return a.cfg.m < b.cfg.m;
              });
    return points;
}

std::pair<double, double> calibrate_dsp_coeffs(const UtilizationPoint& a,
                                               const UtilizationPoint& b,
                                               double n_dsp) {
    // lambda1*m + lambda2*n = util*n_dsp, one equation per point.
    const double det = static_cast<double>(a.cfg.m) * b.cfg.n -
                       static_cast<double>(b.cfg.m) * a.cfg.n;
    if (std::abs(det) < 1e-12)
        throw CalibrationError("DSP calibration: points are linearly dependent");
    const double ra = a.utilization * n_dsp;
    const double rb = b.utilization * n_dsp;
    const double lambda1 = (ra * b.cfg.n - rb * a.cfg.n) / det;
    const double lambda2 = (rb * a.cfg.m - ra * b.cfg.m) / det;
    if (lambda1 <= 0 || lambda2 <= 0)
        throw CalibrationError("DSP calibration: solved costs are not positive");
    return {lambda1, lambda2};
}

std::tuple<double, double, double> calibrate_lut_coeffs(
    const UtilizationPoint& a, const UtilizationPoint& b, double n_lut,
    double rho3_ratio) {
    // rho1*m + rho2*q = util*n_lut with q = n + ratio*n*log2(n).
    auto q = [&](const AcceleratorConfig& cfg) {
        const double n = cfg.n;
        return n + rho3_ratio * n * std::log2(n);
    };
    const double qa = q(a.cfg);
    const double qb = q(b.cfg);
    const double det = static_cast<double>(a.cfg.m) * qb -
                       static_cast<double>(b.cfg.m) * qa;
    if (std::abs(det) < 1e-12)
        throw CalibrationError("LUT calibration: points are linearly dependent");
    const double ra = a.utilization * n_lut;
    const double rb = b.utilization * n_lut;
    const double rho1 = (ra * qb - rb * qa) / det;
    const double rho2 = (rb * a.cfg.m - ra * b.cfg.m) / det;
    if (rho1 <= 0 || rho2 <= 0)
        throw CalibrationError("LUT calibration: solved costs are not positive");
    return {rho1, rho2, rho3_ratio * rho2};
}

}  // namespace gnnsim
