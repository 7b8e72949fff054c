#include "rotsym/ode.hpp"

#include <algorithm>
#include <cmath>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// The stepper runs forward in t = r_terminal - r.
class Stepper {
public:
    Stepper(const OdeSystem& sys, double r_terminal) : sys_(sys), rT_(r_terminal), n_(sys.dimension) {
        for (auto* k : {&k2_, &k3_, &k4_, &k5_, &k6_, &tmp_}) {
            k->resize(n_);
        }
    }

    // dy/dt at (t, y); returns the breakdown reason, empty when admissible.
    std::string eval(double t, std::span<const double> y, std::span<double> dydt) const {
        const double r = rT_ - t;
        if (sys_.defined) {
            if (std::string why = sys_.defined(r, y); !why.empty()) {
                return why;
            }
        }
        try {
            sys_.rhs(r, y, dydt);
        } catch (const DomainError& e) {
            return e.what();
        } catch (const NonFiniteResult& e) {
            return e.what();
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (!std::isfinite(dydt[i])) {
                return "non-finite right-hand side";
            }
            dydt[i] = -dydt[i];
        }
        return {};
    }

    struct Attempt {
        std::string breakdown;
        double error = 0.0;
    };

    // One step of size h from (t, y) with slope k1; fills y_new and k7 (slope at y_new).
    Attempt step(double t, const State& y, const State& k1, double h, const IntegratorControls& ctl, State& y_new,
                 State& k7) {
        Attempt out;
        auto stage = [&](double ct, auto&& combine, State& k) -> bool {
            for (std::size_t i = 0; i < n_; ++i) {
                tmp_[i] = y[i] + h * combine(i);
            }
            out.breakdown = eval(t + ct * h, tmp_, k);
            return out.breakdown.empty();
        };
        if (!stage(c2, [&](std::size_t i) { return a21 * k1[i]; }, k2_)) return out;
        if (!stage(c3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2_[i]; }, k3_)) return out;
        if (!stage(c4, [&](std::size_t i) { return a41 * k1[i] + a42 * k2_[i] + a43 * k3_[i]; }, k4_)) return out;
        if (!stage(c5, [&](std::size_t i) { return a51 * k1[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]; },
                   k5_))
            return out;
        if (!stage(1.0,
                   [&](std::size_t i) {
                       return a61 * k1[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i];
                   },
                   k6_))
            return out;
        y_new.resize(n_);
        k7.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
        }
        out.breakdown = eval(t + h, y_new, k7);
        if (!out.breakdown.empty()) {
            return out;
        }
        double err = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double est =
                h * (e1 * k1[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7[i]);
            const double scale = ctl.atol + ctl.rtol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
            err = std::max(err, std::fabs(est) / scale);
        }
        out.error = err;
        return out;
    }

private:
    const OdeSystem& sys_;
    double rT_;
    std::size_t n_;
    State k2_, k3_, k4_, k5_, k6_, tmp_;
};

State negated(const State& v) {
    State out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return -x; });
    return out;
}

}  // namespace

void IntegratorControls::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) {
        throw InvalidArgument("integrator tolerances must be positive");
    }
    if (!(min_step > 0.0) || !(min_step <= initial_step)) {
        throw InvalidArgument("integrator needs 0 < min_step <= initial_step");
    }
    if (!(max_step >= min_step)) {
        throw InvalidArgument("integrator max_step must be at least min_step");
    }
    if (max_steps <= 0) {
        throw InvalidArgument("integrator max_steps must be positive");
    }
}

Trajectory integrate_terminal(const OdeSystem& sys, double r_terminal, const State& terminal_state, double r_min,
                              const IntegratorControls& controls, const std::optional<StopCondition>& stop) {
    controls.validate();
    if (!(r_min < r_terminal)) {
        throw InvalidArgument("backward integration needs r_min < r_terminal");
    }
    if (sys.dimension == 0 || terminal_state.size() != sys.dimension) {
        throw InvalidArgument("terminal state does not match the system dimension");
    }

    Stepper stepper(sys, r_terminal);
    const double t_end = r_terminal - r_min;

    State y = terminal_state;
    State k1(sys.dimension);
    if (std::string why = stepper.eval(0.0, y, k1); !why.empty()) {
        throw InvalidArgument("terminal state is not admissible: " + why);
    }

    Trajectory traj;
    traj.samples_.push_back({r_terminal, y, negated(k1)});

    State y_new, k7, y_probe, k_probe;
    double t = 0.0;
    double h = std::min(controls.initial_step, controls.max_step);
    long steps = 0;

    auto finish = [&](Termination status, std::string why) {
        traj.status_ = status;
        traj.reason_ = std::move(why);
        return traj;
    };

    while (t < t_end) {
        if (steps >= controls.max_steps) {
            throw MaxStepsExceeded("integration exceeded " + std::to_string(controls.max_steps) + " steps at r=" +
                                   std::to_string(r_terminal - t));
        }
        bool last = false;
        if (t + h >= t_end || t_end - (t + h) < controls.min_step) {
            h = t_end - t;
            last = true;
        }
        const auto attempt = stepper.step(t, y, k1, h, controls, y_new, k7);
        if (!attempt.breakdown.empty()) {
            h *= 0.5;
            if (h < controls.min_step) {
                return finish(Termination::Breakdown, attempt.breakdown);
            }
            continue;
        }
        if (!controls.fixed_step && attempt.error > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(attempt.error, -0.2));
            if (h < controls.min_step) {
                return finish(Termination::Breakdown, "step underflow");
            }
            continue;
        }

        const double t_new = last ? t_end : t + h;
        const double r_new = last ? r_min : r_terminal - t_new;

        if (stop && stop->triggered(r_new, y_new)) {
            // Bisect on the step size with real steps from the last accepted state.
            double lo = 0.0, hi = h;
            State y_hi = y_new, k_hi = k7;
            while (hi - lo > std::max(controls.min_step, 1e-15 * std::max(1.0, std::fabs(r_terminal)))) {
                const double mid = 0.5 * (lo + hi);
                const auto probe = stepper.step(t, y, k1, mid, controls, y_probe, k_probe);
                if (probe.breakdown.empty() && !stop->triggered(r_terminal - (t + mid), y_probe)) {
                    lo = mid;
                } else if (probe.breakdown.empty()) {
                    hi = mid;
                    y_hi = y_probe;
                    k_hi = k_probe;
                } else {
                    break;
                }
            }
            traj.samples_.push_back({r_terminal - (t + hi), y_hi, negated(k_hi)});
            return finish(Termination::StoppedByPredicate, stop->reason);
        }

        traj.samples_.push_back({r_new, y_new, negated(k7)});
        t = t_new;
        std::swap(y, y_new);
        std::swap(k1, k7);
        ++steps;

        if (!controls.fixed_step) {
            const double grow = attempt.error == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(attempt.error, -0.2)));
            h = std::min(h * grow, controls.max_step);
        } else {
            h = controls.initial_step;
        }
    }
    return finish(Termination::ReachedEnd, {});
}

std::size_t Trajectory::segment(double r) const {
    if (!(r <= samples_.front().r && r >= samples_.back().r)) {
        throw OutOfRange("dense output requested at r=" + std::to_string(r) + " outside [" +
                         std::to_string(samples_.back().r) + ", " + std::to_string(samples_.front().r) + "]");
    }
    // First sample with sample.r <= r; the segment is [that - 1, that].
    auto it = std::lower_bound(samples_.begin(), samples_.end(), r,
                               [](const Sample& s, double x) { return s.r > x; });
    const auto idx = static_cast<std::size_t>(it - samples_.begin());
    return idx == 0 ? 0 : idx - 1;
}

State Trajectory::dense_eval(double r) const {
    State out(dimension());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = dense_component(i, r).first;
    }
    return out;
}

std::pair<double, double> Trajectory::dense_component(std::size_t component, double r) const {
    if (component >= dimension()) {
        throw InvalidArgument("trajectory component index out of range");
    }
    const std::size_t k = segment(r);
    const Sample& hi = samples_[k];
    if (r == hi.r || samples_.size() == 1) {
        return {hi.y[component], hi.dydr[component]};
    }
    const Sample& lo = samples_[k + 1];
    if (r == lo.r) {
        return {lo.y[component], lo.dydr[component]};
    }
    const double h = hi.r - lo.r;
    const double s = (r - lo.r) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double y0 = lo.y[component], d0 = lo.dydr[component];
    const double y1 = hi.y[component], d1 = hi.dydr[component];
    const double value = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
                         (s3 - s2) * h * d1;
    const double slope = ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * h * d0 + (-6 * s2 + 6 * s) * y1 +
                          (3 * s2 - 2 * s) * h * d1) /
                         h;
    return {value, slope};
}

double invert_monotone(const Trajectory& traj, std::size_t component, double target) {
    const auto samples = traj.samples();
    if (component >= traj.dimension()) {
        throw InvalidArgument("trajectory component index out of range");
    }
    if (samples.size() < 2) {
        throw NotMonotone("a single sample does not define a monotone component");
    }
    const bool decreasing_in_index = samples[1].y[component] < samples[0].y[component];
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const double d = samples[k].y[component] - samples[k - 1].y[component];
        if (decreasing_in_index ? !(d < 0.0) : !(d > 0.0)) {
            throw NotMonotone("component " + std::to_string(component) + " is not strictly monotone near r=" +
                              std::to_string(samples[k].r));
        }
    }
    const double first = samples.front().y[component];
    const double last = samples.back().y[component];
    if (!(target >= std::min(first, last) && target <= std::max(first, last))) {
        throw TargetOutOfRange("target " + std::to_string(target) + " outside [" +
                               std::to_string(std::min(first, last)) + ", " + std::to_string(std::max(first, last)) +
                               "]");
    }
    // Bracketing sample pair.
    std::size_t k = 0;
    while (k + 1 < samples.size()) {
        const double a = samples[k].y[component];
        const double b = samples[k + 1].y[component];
        if (a == target) return samples[k].r;
        if (b == target) return samples[k + 1].r;
        if ((a - target) * (b - target) < 0.0) break;
        ++k;
    }
    double r_hi = samples[k].r, r_lo = samples[k + 1].r;
    const double f_hi = samples[k].y[component] - target;
    const double tol = 1e-12 * (1.0 + std::fabs(target));

    double r = 0.5 * (r_lo + r_hi);
    double best_r = r, best_f = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
        const auto [v, slope] = traj.dense_component(component, r);
        const double fr = v - target;
        if (std::fabs(fr) < std::fabs(best_f)) {
            best_f = fr;
            best_r = r;
        }
        if (std::fabs(fr) <= tol) {
            return r;
        }
        if ((fr > 0.0) == (f_hi > 0.0)) {
            r_hi = r;
        } else {
            r_lo = r;
        }
        double next = (slope != 0.0) ? r - fr / slope : r_lo;
        if (!(next > r_lo && next < r_hi)) {
            next = 0.5 * (r_lo + r_hi);
        }
        if (next == r || r_hi - r_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(r)) {
            break;
        }
        r = next;
    }
    return best_r;
}

}  // namespace rotsym
