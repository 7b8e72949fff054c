#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "rotsym/geometry.hpp"

namespace manufactured {

// G = (a e^{k1 r}, b e^{k2 r}, c e^{k3 r}) and its Ricci tensor, written out by hand:
//   ll = a² e^{2k1 r} (k1 k3 − k1² − k1 k2) / (c² e^{2k3 r}), mm likewise,
//   rr = k1 k3 + k2 k3 − k1² − k2².
struct Family {
    double a = 1, k1 = 1, b = 1, k2 = 2, c = 1, k3 = 0;

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "(%.17g)", v);
        return buf;
    }
    static std::string exponential(double amp, double k) { return num(amp) + "*exp(" + num(k) + "*r)"; }

    double sigma() const { return k1 * k3 + k2 * k3 - k1 * k1 - k2 * k2; }

    rotsym::RotSymMetric metric(double x = 1.0) const {
        return {rotsym::CollarSpec(x), rotsym::Profile::parse(exponential(a, k1)),
                rotsym::Profile::parse(exponential(b, k2)), rotsym::Profile::parse(exponential(c, k3))};
    }

    rotsym::RotSymTensor ricci(double x = 1.0) const {
        const double cl = a * a * (k1 * k3 - k1 * k1 - k1 * k2) / (c * c);
        const double cm = b * b * (k2 * k3 - k2 * k2 - k1 * k2) / (c * c);
        return {rotsym::CollarSpec(x), rotsym::Profile::parse(exponential(cl, 2 * (k1 - k3))),
                rotsym::Profile::parse(exponential(cm, 2 * (k2 - k3))), rotsym::Profile::constant(sigma())};
    }

    // A random member with |σ| bounded away from zero.
    static Family random(std::mt19937_64& rng) {
        std::uniform_real_distribution<double> amp(0.5, 3.0), rate(-1.5, 2.5), hrate(-0.7, 0.7);
        for (;;) {
            Family m{amp(rng), rate(rng), amp(rng), rate(rng), amp(rng), hrate(rng)};
            if (std::fabs(m.sigma()) > 0.2) return m;
        }
    }
};

}  // namespace manufactured
