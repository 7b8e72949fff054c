#include "rotsym/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace {

void require_positive(const Jet2& fj, const Jet2& gj, const Jet2& hj) {
    if (!(fj.v0 > 0.0) || !(gj.v0 > 0.0) || !(hj.v0 > 0.0)) {
        throw NonPositiveMetric("metric component is not positive (f=" + std::to_string(fj.v0) +
                                ", g=" + std::to_string(gj.v0) + ", h=" + std::to_string(hj.v0) + ")");
    }
}

}  // namespace

CollarSpec::CollarSpec(double x) : width(x) {
    if (!(x > 0.0 && x <= 1.0)) {
        throw InvalidArgument("collar width must lie in (0, 1], got " + std::to_string(x));
    }
}

BoundaryData::BoundaryData(double a, double b, double e, double t) : alpha(a), beta(b), eta(e), theta(t) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(e) ||
        !std::isfinite(t)) {
        throw InvalidArgument("boundary data needs finite alpha > 0, beta > 0");
    }
}

RotSymMetric RotSymMetric::from_grids(HermiteGrid f, HermiteGrid g, HermiteGrid h) {
    const double lo = std::max({f.front(), g.front(), h.front()});
    if (f.back() != 1.0 || g.back() != 1.0 || h.back() != 1.0) {
        throw InvalidArgument("grid metric profiles must end at r = 1");
    }
    return RotSymMetric{CollarSpec(1.0 - lo), Profile(std::move(f)), Profile(std::move(g)), Profile(std::move(h))};
}

RicciValue ricci_components(const Jet2& fj, const Jet2& gj, const Jet2& hj) {
    require_positive(fj, gj, hj);
    const double f = fj.v0, fr = fj.v1, frr = fj.v2;
    const double g = gj.v0, gr = gj.v1, grr = gj.v2;
    const double h = hj.v0, hr = hj.v1;
    const double h2 = h * h, h3 = h2 * h;
    return RicciValue{
        -f * frr / h2 + f * fr * hr / h3 - f * fr * gr / (g * h2),
        -g * grr / h2 + g * gr * hr / h3 - g * gr * fr / (f * h2),
        -frr / f + fr * hr / (f * h) - grr / g + gr * hr / (g * h),
    };
}

BoundaryData boundary_data_of(const RotSymMetric& g) {
    const Jet2 fj = g.f.jet(1.0);
    const Jet2 gj = g.g.jet(1.0);
    const Jet2 hj = g.h.jet(1.0);
    require_positive(fj, gj, hj);
    return BoundaryData(fj.v0, gj.v0, fj.v0 * fj.v1 / hj.v0, gj.v0 * gj.v1 / hj.v0);
}

double constraint_residual(const Jet2& fj, const Jet2& gj, const Jet2& hj, double phi, double psi, double sigma) {
    require_positive(fj, gj, hj);
    const double f = fj.v0, g = gj.v0, h2 = hj.v0 * hj.v0;
    return 2.0 * fj.v1 * gj.v1 / (f * g) + h2 * phi / (f * f) + h2 * psi / (g * g) - sigma;
}

std::vector<double> collar_samples(double lo, double hi, int n) {
    if (n < 1 || !(hi > lo)) {
        throw InvalidArgument("collar sampling needs n >= 1 and a nonempty interval");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    // θ_k = kπ/n for k = n-1 .. 0 gives increasing points, k = n (the open end) omitted.
    for (int k = n - 1; k >= 0; --k) {
        const double t = 0.5 * (1.0 + std::cos(std::numbers::pi * k / n));
        out.push_back(k == 0 ? hi : lo + (hi - lo) * t);
    }
    return out;
}

}  // namespace rotsym
