#pragma once

#include <utility>
#include <variant>

#include "rotsym/profile.hpp"

namespace rotsym {

/// Einstein constant τ, metric constant c > 0 and arc-length depth s0 > 0.
struct EinsteinSpec {
    double tau = 0.0;
    double c = 1.0;
    double s0 = 1.0;

    /// κ = √(2|τ|).
    double kappa() const;
};

/// Profiles f̄, ḡ of G = f̄² dλ² + ḡ² dμ² + ds² on [0, s0].
struct SProfiles {
    Profile fbar;
    Profile gbar;
    double s0;
};

/// Closed-form rotationally symmetric solution of Ric(G) = τG on the solid
/// torus, in the arc-length coordinate:
///   τ > 0: f̄ = (4π/κ) sin(κs/2),  ḡ = √(2c) cos(κs/2)
///          (f̄² = (8π²/κ²)(1 − cos κs), ḡ² = c(1 + cos κs))
///   τ < 0: f̄ = (4π/κ) sinh(κs/2), ḡ = √c cosh(κs/2)
///   τ = 0: f̄ = 2πs,               ḡ = √c
/// Throws InvalidS0 (s0 <= 0, or s0 >= π/κ for τ > 0) and InvalidConstant (c <= 0).
SProfiles einstein_profiles(const EinsteinSpec& spec);

struct CoreRegularity {
    double f0 = 0.0;
    double fs0 = 0.0;
    double gs0 = 0.0;
    bool f_vanishes = false;
    bool f_slope_is_2pi = false;
    bool g_flat = false;

    bool pass() const { return f_vanishes && f_slope_is_2pi && g_flat; }
};

/// Smoothness conditions at the core circle, f̄(0)=0, f̄_s(0)=2π, ḡ_s(0)=0, to 1e-9.
CoreRegularity core_regularity(const SProfiles& p);

struct ArcLength {
    double s0;
    /// s(r) on [0, 1] as a Hermite grid (slope h).
    Profile s;
};

/// s(r) = ∫₀ʳ h. Throws NonPositiveMetric if h <= 0 inside (0, 1] or h(0) < 0.
ArcLength arc_length(const Profile& h);

struct Obstruction {
    /// α must stay below 4π/κ.
    double threshold;
};

/// Einstein data (s0, c) whose boundary torus has the metric α²dλ² + β²dμ².
std::variant<EinsteinSpec, Obstruction> boundary_match(double tau, double alpha, double beta);

/// max over samples in (lo, hi] of the componentwise |Ric(G) − τG|.
double einstein_residual(const SProfiles& p, double tau, double lo, double hi, int n_samples);
inline double einstein_residual(const SProfiles& p, double tau, int n_samples) {
    return einstein_residual(p, tau, 0.0, p.s0, n_samples);
}

/// (f̄ḡ)_ss + 2τ f̄ḡ at s.
double product_identity_residual(const SProfiles& p, double tau, double s);

/// Residuals of f̄_s ḡ = πḡ(0)(C + 1) and f̄ ḡ_s = πḡ(0)(C − 1), with
/// C = cos κs, cosh κs or 1 for τ > 0, τ < 0, τ = 0.
std::pair<double, double> first_order_identity_residuals(const SProfiles& p, double tau, double s);

}  // namespace rotsym
