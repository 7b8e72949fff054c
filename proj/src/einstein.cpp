#include "rotsym/einstein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotsym/errors.hpp"
#include "rotsym/geometry.hpp"
#include "rotsym/quadrature.hpp"

namespace rotsym {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCoreTol = 1e-9;

}  // namespace

double EinsteinSpec::kappa() const { return std::sqrt(2.0 * std::fabs(tau)); }

SProfiles einstein_profiles(const EinsteinSpec& spec) {
    if (!(spec.c > 0.0) || !std::isfinite(spec.c)) {
        throw InvalidConstant("Einstein metric constant must be positive");
    }
    if (!(spec.s0 > 0.0) || !std::isfinite(spec.s0)) {
        throw InvalidS0("arc-length depth s0 must be positive");
    }
    const double kappa = spec.kappa();
    const double half = 0.5 * kappa;
    const double c = spec.c;
    if (spec.tau > 0.0) {
        if (!(spec.s0 < kPi / kappa)) {
            throw InvalidS0("for positive tau s0 must lie in (0, pi/kappa)");
        }
        const double amp = 4.0 * kPi / kappa;
        const double gamp = std::sqrt(2.0 * c);
        return SProfiles{Profile([amp, half](double s) { return amp * sin(half * Jet2::variable(s)); }),
                         Profile([gamp, half](double s) { return gamp * cos(half * Jet2::variable(s)); }), spec.s0};
    }
    if (spec.tau < 0.0) {
        const double amp = 4.0 * kPi / kappa;
        const double gamp = std::sqrt(c);
        return SProfiles{Profile([amp, half](double s) { return amp * sinh(half * Jet2::variable(s)); }),
                         Profile([gamp, half](double s) { return gamp * cosh(half * Jet2::variable(s)); }), spec.s0};
    }
    const double gamp = std::sqrt(c);
    return SProfiles{Profile([](double s) { return 2.0 * kPi * Jet2::variable(s); }),
                     Profile([gamp](double) { return Jet2::constant(gamp); }), spec.s0};
}

CoreRegularity core_regularity(const SProfiles& p) {
    const Jet2 f = p.fbar.jet(0.0);
    const Jet2 g = p.gbar.jet(0.0);
    CoreRegularity out;
    out.f0 = f.v0;
    out.fs0 = f.v1;
    out.gs0 = g.v1;
    out.f_vanishes = std::fabs(f.v0) <= kCoreTol;
    out.f_slope_is_2pi = std::fabs(f.v1 - 2.0 * kPi) <= kCoreTol;
    out.g_flat = std::fabs(g.v1) <= kCoreTol;
    return out;
}

ArcLength arc_length(const Profile& h) {
    auto integrand = [&h](double rho) {
        const double v = h.value(rho);
        if (v < 0.0 || (rho > 0.0 && !(v > 0.0))) {
            throw NonPositiveMetric("h is not positive at r=" + std::to_string(rho));
        }
        return v;
    };
    constexpr int kPanels = 64;
    std::vector<double> r(kPanels + 1), s(kPanels + 1), slope(kPanels + 1);
    for (int i = 0; i <= kPanels; ++i) {
        r[i] = static_cast<double>(i) / kPanels;
        slope[i] = h.value(r[i]);
        if (slope[i] < 0.0 || (i > 0 && !(slope[i] > 0.0))) {
            throw NonPositiveMetric("h is not positive at r=" + std::to_string(r[i]));
        }
        s[i] = i == 0 ? 0.0 : s[i - 1] + quadrature(integrand, r[i - 1], r[i]);
    }
    const double s0 = s.back();
    return ArcLength{s0, Profile(HermiteGrid(std::move(r), std::move(s), std::move(slope)))};
}

std::variant<EinsteinSpec, Obstruction> boundary_match(double tau, double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw InvalidArgument("boundary match needs alpha, beta > 0");
    }
    const double kappa = std::sqrt(2.0 * std::fabs(tau));
    if (tau > 0.0) {
        const double threshold = 4.0 * kPi / kappa;
        if (alpha >= threshold) {
            return Obstruction{threshold};
        }
        const double w = alpha * alpha * kappa * kappa / (8.0 * kPi * kPi);  // 1 − cos κs0, in (0, 2)
        const double s0 = std::acos(1.0 - w) / kappa;
        return EinsteinSpec{tau, beta * beta / (2.0 - w), s0};
    }
    if (tau < 0.0) {
        const double x = alpha * kappa / (4.0 * kPi);  // sinh(κs0/2)
        const double s0 = 2.0 * std::asinh(x) / kappa;
        return EinsteinSpec{tau, beta * beta / (1.0 + x * x), s0};
    }
    return EinsteinSpec{0.0, beta * beta, alpha / (2.0 * kPi)};
}

double einstein_residual(const SProfiles& p, double tau, double lo, double hi, int n_samples) {
    const Jet2 unit = Jet2::constant(1.0);
    double worst = 0.0;
    for (double s : collar_samples(lo, hi, n_samples)) {
        const Jet2 f = p.fbar.jet(s), g = p.gbar.jet(s);
        const RicciValue ric = ricci_components(f, g, unit);
        worst = std::max({worst, std::fabs(ric.ll - tau * f.v0 * f.v0), std::fabs(ric.mm - tau * g.v0 * g.v0),
                          std::fabs(ric.rr - tau)});
    }
    return worst;
}

double product_identity_residual(const SProfiles& p, double tau, double s) {
    const Jet2 fg = p.fbar.jet(s) * p.gbar.jet(s);
    return fg.v2 + 2.0 * tau * fg.v0;
}

std::pair<double, double> first_order_identity_residuals(const SProfiles& p, double tau, double s) {
    const double kappa = std::sqrt(2.0 * std::fabs(tau));
    const double c = tau > 0.0 ? std::cos(kappa * s) : tau < 0.0 ? std::cosh(kappa * s) : 1.0;
    const double g0 = p.gbar.value(0.0);
    const Jet2 f = p.fbar.jet(s), g = p.gbar.jet(s);
    return {f.v1 * g.v0 - kPi * g0 * (c + 1.0), f.v0 * g.v1 - kPi * g0 * (c - 1.0)};
}

}  // namespace rotsym
