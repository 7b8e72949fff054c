#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rotsym {

using State = std::vector<double>;

/// First-order system dy/dr = rhs(r, y) of fixed dimension.
struct OdeSystem {
    std::size_t dimension = 0;
    std::function<void(double r, std::span<const double> y, std::span<double> dydr)> rhs;
    /// Optional. Returns an empty string when (r, y) is admissible, otherwise
    /// the reason the system breaks down there.
    std::function<std::string(double r, std::span<const double> y)> defined;
};

struct IntegratorControls {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 1e-3;
    double min_step = 1e-12;
    long max_steps = 100000;
    double max_step = std::numeric_limits<double>::infinity();
    /// Take every step with size initial_step and skip error control.
    bool fixed_step = false;

    void validate() const;
};

struct StopCondition {
    std::string reason;
    std::function<bool(double r, std::span<const double> y)> triggered;
};

enum class Termination { ReachedEnd, StoppedByPredicate, Breakdown };

/// Samples of a backward integration, ordered by strictly decreasing r,
/// with a cubic Hermite dense output built from stored states and slopes.
class Trajectory {
public:
    struct Sample {
        double r;
        State y;
        State dydr;
    };

    std::span<const Sample> samples() const { return samples_; }
    std::size_t dimension() const { return samples_.front().y.size(); }

    Termination status() const { return status_; }
    /// Why integration stopped early; empty for ReachedEnd.
    const std::string& reason() const { return reason_; }
    /// Smallest r reached (the last sample).
    double r_end() const { return samples_.back().r; }
    double r_terminal() const { return samples_.front().r; }

    /// Throws OutOfRange outside [r_end(), r_terminal()].
    State dense_eval(double r) const;

    /// Dense value of one component and its r-derivative.
    std::pair<double, double> dense_component(std::size_t component, double r) const;

private:
    friend Trajectory integrate_terminal(const OdeSystem&, double, const State&, double, const IntegratorControls&,
                                         const std::optional<StopCondition>&);

    std::size_t segment(double r) const;

    std::vector<Sample> samples_;
    Termination status_ = Termination::ReachedEnd;
    std::string reason_;
};

/// Integrates from the terminal point r_terminal toward r_min (< r_terminal)
/// with the Dormand–Prince 5(4) pair under mixed rtol/atol control.
///
/// Stops at r_min, when `stop` first becomes true (located by bisection), or
/// at breakdown: a stage state rejected by the definedness predicate that
/// cannot be avoided above min_step, or error-control step underflow. The
/// last sample is always an admissible state. Throws MaxStepsExceeded.
Trajectory integrate_terminal(const OdeSystem& sys, double r_terminal, const State& terminal_state, double r_min,
                              const IntegratorControls& controls = {},
                              const std::optional<StopCondition>& stop = std::nullopt);

inline State dense_eval(const Trajectory& traj, double r) { return traj.dense_eval(r); }

/// r at which the strictly monotone component equals target, to
/// 1e-12·(1 + |target|). Throws NotMonotone or TargetOutOfRange.
double invert_monotone(const Trajectory& traj, std::size_t component, double target);

}  // namespace rotsym
