#pragma once

#include <vector>

#include "rotsym/jet.hpp"
#include "rotsym/profile.hpp"

namespace rotsym {

/// Collar r in (1 - width, 1] next to the boundary torus, 0 < width <= 1.
struct CollarSpec {
    double width = 1.0;

    explicit CollarSpec(double x);
    double lower() const { return 1.0 - width; }
    bool contains(double r) const { return r > lower() && r <= 1.0; }
};

/// G = f^2 dλ⊗dλ + g^2 dμ⊗dμ + h^2 dr⊗dr on a collar.
struct RotSymMetric {
    CollarSpec collar;
    Profile f;
    Profile g;
    Profile h;

    /// Metric whose three profiles are Hermite grids; the collar is taken from
    /// the common grid span, which must end at r = 1.
    static RotSymMetric from_grids(HermiteGrid f, HermiteGrid g, HermiteGrid h);
};

/// T = φ dλ⊗dλ + ψ dμ⊗dμ + σ dr⊗dr on a collar.
struct RotSymTensor {
    CollarSpec collar;
    Profile phi;
    Profile psi;
    Profile sigma;
};

/// Induced boundary metric α²dλ²+β²dμ² and second fundamental form ηdλ²+θdμ².
struct BoundaryData {
    double alpha;
    double beta;
    double eta;
    double theta;

    BoundaryData(double alpha, double beta, double eta, double theta);
};

struct RicciValue {
    double ll;
    double mm;
    double rr;
};

RicciValue ricci_components(const Jet2& fj, const Jet2& gj, const Jet2& hj);

/// Boundary data read off at r = 1, second fundamental form taken with
/// respect to the outward unit normal (1/h) ∂r.
BoundaryData boundary_data_of(const RotSymMetric& g);

/// 2 f_r g_r/(f g) + h²φ/f² + h²ψ/g² − σ; zero along every exact solution of Ric(G) = T.
double constraint_residual(const Jet2& fj, const Jet2& gj, const Jet2& hj, double phi, double psi, double sigma);

/// n Chebyshev–Lobatto points on (lo, hi] with the open endpoint lo removed,
/// returned in increasing order; the last point is hi.
std::vector<double> collar_samples(double lo, double hi, int n);

}  // namespace rotsym
