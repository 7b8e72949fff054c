#include "rotsym/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace {

constexpr int kNodes = 10;

struct GaussLegendre {
    std::array<double, kNodes> x{};
    std::array<double, kNodes> w{};

    GaussLegendre() {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        for (int i = 0; i < kNodes; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (kNodes + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= kNodes; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = kNodes * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre& rule() {
    static const GaussLegendre gl;
    return gl;
}

struct Panel {
    double integral;
    double max_abs;
};

Panel gauss_panel(const std::function<double(double)>& p, double a, double b) {
    const auto& gl = rule();
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    Panel out{0.0, 0.0};
    for (int i = 0; i < kNodes; ++i) {
        const double v = p(mid + half * gl.x[i]);
        if (!std::isfinite(v)) {
            throw NonFiniteResult("quadrature integrand is not finite");
        }
        out.integral += gl.w[i] * v;
        out.max_abs = std::max(out.max_abs, std::fabs(v));
    }
    out.integral *= half;
    return out;
}

double refine(const std::function<double(double)>& p, double a, double b, double whole, double density, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss_panel(p, a, mid).integral;
    const double right = gauss_panel(p, mid, b).integral;
    const double tol = density * (b - a);
    if (std::fabs(left + right - whole) <= tol || depth >= 40) {
        return left + right;
    }
    return refine(p, a, mid, left, density, depth + 1) + refine(p, mid, b, right, density, depth + 1);
}

}  // namespace

double quadrature(const std::function<double(double)>& p, double a, double b) {
    if (!(a <= b)) {
        throw InvalidArgument("quadrature needs a <= b");
    }
    if (a == b) {
        return 0.0;
    }
    const Panel whole = gauss_panel(p, a, b);
    const double max_abs = std::max({whole.max_abs, std::fabs(p(a)), std::fabs(p(b))});
    const double density = std::max(1e-12 * max_abs, 1e-15 * std::fabs(whole.integral) / (b - a));
    return refine(p, a, b, whole.integral, density, 0);
}

}  // namespace rotsym
