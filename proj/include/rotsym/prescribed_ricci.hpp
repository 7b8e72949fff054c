#pragma once

#include <string>

#include "rotsym/geometry.hpp"
#include "rotsym/ode.hpp"

namespace rotsym {

enum class Verdict { Feasible, Infeasible, DegenerateSigmaConsistent, DegenerateSigmaInconsistent };

std::string to_string(Verdict v);

/// Necessary-and-sufficient test for collar solvability from boundary data.
struct FeasibilityReport {
    /// 2ηθ + β²φ(1) + α²ψ(1).
    double numerator = 0.0;
    /// numerator / σ(1); NaN when σ(1) = 0.
    double q = 0.0;
    /// Boundary value of h, αβ/√Q; NaN unless Feasible.
    double h1 = 0.0;
    /// Coefficient of ∂r in the outward unit normal, 1/h1; NaN unless Feasible.
    double normal_coefficient = 0.0;
    Verdict verdict = Verdict::Infeasible;
};

FeasibilityReport feasibility(double phi1, double psi1, double sigma1, const BoundaryData& bd);

/// Maxima of |Ric(G) − T| per component and of the first-integral residual
/// over Chebyshev samples of the common collar, with argmax locations.
struct ResidualReport {
    int samples = 0;
    double max_ll = 0.0, at_ll = 1.0;
    double max_mm = 0.0, at_mm = 1.0;
    double max_rr = 0.0, at_rr = 1.0;
    double max_constraint = 0.0, at_constraint = 1.0;
    /// max |constraint| / (1 + |σ|).
    double max_constraint_scaled = 0.0;

    double max_ricci() const;
};

ResidualReport verify_ricci(const RotSymMetric& g, const RotSymTensor& t, int n_samples = 200);

/// Component indices of the hatted state (f̂, ĝ, ĥ, f̂_r, ĝ_r, ĥ_r).
namespace hatted {
inline constexpr std::size_t F = 0, G = 1, H = 2, FR = 3, GR = 4, HR = 5;
}

/// Breakdown margin used by every solver guard.
inline constexpr double kGuard = 1e-10;

struct CollarSolution {
    FeasibilityReport feasibility;
    /// Solution of the hatted system on [1 − epsilon, 1].
    Trajectory hatted;
    double epsilon = 0.0;
    /// Width of the collar the reconstructed metric lives on, 1 − ĥ_r(1 − epsilon).
    double epsilon0 = 0.0;
    /// Hermite-grid metric on [1 − epsilon0, 1], nodes at the images ĥ_r(t_i).
    RotSymMetric metric;
    ResidualReport residuals;
};

/// Builds the rotationally symmetric metric with Ric(G) = T on a collar and
/// the given boundary metric and second fundamental form.
///
/// Integrates the hatted system backward from r = 1 until a guard fails or
/// r reaches the collar end, then pulls the hatted metric back through
/// r ↦ ĥ_r(r). Throws InfeasibleBoundaryData, ImmediateBreakdown, or
/// IntegrationFailure.
CollarSolution solve_collar(const RotSymTensor& t, const BoundaryData& bd, const IntegratorControls& controls = {},
                            int verify_samples = 200);

/// Canonical form of a metric: the solution ĥ of ĥ_rr = ĥ/(h∘ĥ_r) with
/// ĥ(1−y0) = 1, ĥ_r(1−y0) = 1−y0, together with f∘ĥ_r and g∘ĥ_r.
struct GaugeTriple {
    Trajectory gauge;  // state (ĥ, ĥ_r)
    double y0 = 0.0;
    Profile fhat;
    Profile ghat;
    Profile hhat;
    /// Interval [lower, 1 − y0] covered by the canonical profiles.
    double lower = 0.0;
    double upper = 1.0;
};

GaugeTriple canonical_gauge(const RotSymMetric& g, double y0, const IntegratorControls& controls = {});

struct MatchResult {
    bool match = false;
    double deviation = 0.0;
    double at = 0.0;
};

/// Componentwise comparison of (f, g, h) over n_samples points of the common collar.
MatchResult metrics_match(const RotSymMetric& a, const RotSymMetric& b, double tol, int n_samples = 200);

/// Componentwise comparison of (f̂, ĝ, ĥ) over the common gauge interval.
MatchResult gauge_triples_match(const GaugeTriple& a, const GaugeTriple& b, double tol, int n_samples = 200);

}  // namespace rotsym
