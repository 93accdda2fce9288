#include "zonalsim/calibration.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "zonalsim/lp.hpp"

namespace zonalsim {

namespace {

class VolumeProbe {
public:
    VolumeProbe(const ClearingResult& national, const DayScenario& s, const NetworkTopology& topo,
                const CalibrationConfig& cfg, CalibrationResult& out)
        : national_(national),
          model_(national, s, topo, cfg.redispatch),
          groups_(default_groups(s, topo)),
          out_(out) {}

    // Infeasible redispatch counts as unbounded volume: capacity is too small.
    double operator()(double tau) {
        double v = std::numeric_limits<double>::infinity();
        try {
            const auto nodal = model_.solve(tau);
            v = balancing_volume(national_, nodal, groups_).congestion_volume();
        } catch (const InfeasibleError&) {
        }
        ++out_.iterations;
        out_.trace.emplace_back(tau, v);
        return v;
    }

private:
    const ClearingResult& national_;
    RedispatchModel model_;
    GroupMap groups_;
    CalibrationResult& out_;
};

}  // namespace

CalibrationResult calibrate(const DayScenario& s, const NetworkTopology& topo,
                            double target_volume, const CalibrationConfig& cfg,
                            const ClearingResult* national) {
    if (!(target_volume >= 0.0)) throw std::invalid_argument("target volume must be >= 0");
    std::optional<ClearingResult> own;
    if (!national) {
        own = clear(s, topo, Design::National, 1.0, cfg.redispatch.clearing);
        national = &*own;
    }
    CalibrationResult res;
    res.target_volume = target_volume;
    const double tol = std::max(cfg.tol_abs, cfg.tol_rel * target_volume);
    VolumeProbe volume(*national, s, topo, cfg, res);
    auto within = [&](double v) { return std::abs(v - target_volume) <= tol; };
    auto finish = [&](double tau, double v, bool ok) {
        res.tau = tau;
        res.achieved_volume = v;
        res.converged = ok;
        return res;
    };

    double hi = cfg.tau_max;
    double v_hi = volume(hi);
    if (within(v_hi)) return finish(hi, v_hi, true);
    if (v_hi > target_volume) return finish(hi, v_hi, false);

    double lo = cfg.tau_min;
    double v_lo = volume(lo);
    if (within(v_lo)) return finish(lo, v_lo, true);
    if (v_lo < target_volume) return finish(lo, v_lo, false);

    while (res.iterations < cfg.max_iterations) {
        const double mid = std::sqrt(lo * hi);
        const double v = volume(mid);
        if (within(v)) return finish(mid, v, true);
        if (v > v_lo + tol || v < v_hi - tol) {
            res.non_monotone = true;
            break;
        }
        if (v > target_volume) {
            lo = mid;
            v_lo = v;
        } else {
            hi = mid;
            v_hi = v;
        }
    }
    if (!res.non_monotone) {
        const bool lo_closer = std::abs(v_lo - target_volume) < std::abs(v_hi - target_volume);
        return lo_closer ? finish(lo, v_lo, false) : finish(hi, v_hi, false);
    }

    // Grid scan over log-spaced tau, keeping the closest match.
    double best_tau = hi, best_v = v_hi;
    const int n = cfg.grid_points;
    for (int i = 0; i < n && res.iterations < cfg.max_iterations; ++i) {
        const double tau = cfg.tau_min *
                           std::pow(cfg.tau_max / cfg.tau_min, static_cast<double>(i) / (n - 1));
        const double v = volume(tau);
        if (within(v)) return finish(tau, v, true);
        if (std::abs(v - target_volume) < std::abs(best_v - target_volume)) {
            best_tau = tau;
            best_v = v;
        }
    }
    return finish(best_tau, best_v, false);
}

}  // namespace zonalsim
