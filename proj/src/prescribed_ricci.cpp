#include "rotsym/prescribed_ricci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Right-hand side of the hatted system. S is double, or Jet2 carrying
// first r-derivatives in v1 (used for ĥ_rrr during reconstruction).
template <class S>
struct HattedTerms {
    S frr;
    S grr;
    S radicand;
};

template <class S>
HattedTerms<S> hatted_terms(const S& f, const S& g, const S& h, const S& fr, const S& gr, const S& hr, const S& phi,
                            const S& psi, const S& sigma) {
    const S h2 = h * h;
    HattedTerms<S> out{
        fr * hr / h - fr * gr / g - h2 * phi / f,
        gr * hr / h - fr * gr / f - h2 * psi / g,
        (2.0 * fr * gr / (f * g) + h2 * phi / (f * f) + h2 * psi / (g * g)) / sigma,
    };
    return out;
}

struct TensorAt {
    double phi, psi, sigma;
};

TensorAt tensor_at(const RotSymTensor& t, double u) { return {t.phi.value(u), t.psi.value(u), t.sigma.value(u)}; }

class HattedSystem {
public:
    HattedSystem(const RotSymTensor& t) : t_(t), floor_(t.collar.lower() + 1e-12) {}

    std::string guard(std::span<const double> y) const {
        if (y[hatted::F] < kGuard) return "f-hat below guard";
        if (y[hatted::G] < kGuard) return "g-hat below guard";
        if (y[hatted::H] < kGuard) return "h-hat below guard";
        if (y[hatted::HR] <= floor_) return "h-hat_r left the collar";
        try {
            const TensorAt at = tensor_at(t_, y[hatted::HR]);
            if (std::fabs(at.sigma) < kGuard) return "sigma vanishes at h-hat_r";
            const double k = terms(y, at).radicand;
            if (!(k >= kGuard)) return "radicand below guard";
        } catch (const Error& e) {
            return std::string("tensor evaluation failed: ") + e.what();
        }
        return {};
    }

    void rhs(std::span<const double> y, std::span<double> dy) const {
        const TensorAt at = tensor_at(t_, y[hatted::HR]);
        const auto tm = terms(y, at);
        dy[hatted::F] = y[hatted::FR];
        dy[hatted::G] = y[hatted::GR];
        dy[hatted::H] = y[hatted::HR];
        dy[hatted::FR] = tm.frr;
        dy[hatted::GR] = tm.grr;
        dy[hatted::HR] = std::sqrt(tm.radicand);
    }

    static HattedTerms<double> terms(std::span<const double> y, const TensorAt& at) {
        return hatted_terms<double>(y[hatted::F], y[hatted::G], y[hatted::H], y[hatted::FR], y[hatted::GR],
                                    y[hatted::HR], at.phi, at.psi, at.sigma);
    }

    // d/dr of ĥ_rr along the trajectory, from the sample's state and slope.
    double hrrr(std::span<const double> y, std::span<const double> dy) const {
        const double u = y[hatted::HR], du = dy[hatted::HR];
        auto seed = [](double v, double d) { return Jet2{v, d, 0.0}; };
        auto along = [&](const Profile& p) {
            const Jet2 j = p.jet(u);
            return Jet2{j.v0, j.v1 * du, 0.0};
        };
        const auto tm = hatted_terms<Jet2>(seed(y[hatted::F], dy[hatted::F]), seed(y[hatted::G], dy[hatted::G]),
                                           seed(y[hatted::H], dy[hatted::H]), seed(y[hatted::FR], dy[hatted::FR]),
                                           seed(y[hatted::GR], dy[hatted::GR]), seed(u, du), along(t_.phi),
                                           along(t_.psi), along(t_.sigma));
        return tm.radicand.v1 / (2.0 * du);
    }

private:
    const RotSymTensor& t_;
    double floor_;
};

void track(double value, double r, double& max, double& at) {
    if (value > max) {
        max = value;
        at = r;
    }
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Feasible: return "Feasible";
        case Verdict::Infeasible: return "Infeasible";
        case Verdict::DegenerateSigmaConsistent: return "DegenerateSigmaConsistent";
        case Verdict::DegenerateSigmaInconsistent: return "DegenerateSigmaInconsistent";
    }
    return "?";
}

FeasibilityReport feasibility(double phi1, double psi1, double sigma1, const BoundaryData& bd) {
    const double a2 = bd.alpha * bd.alpha, b2 = bd.beta * bd.beta;
    FeasibilityReport rep;
    rep.numerator = 2.0 * bd.eta * bd.theta + b2 * phi1 + a2 * psi1;
    rep.q = rep.h1 = rep.normal_coefficient = kNaN;
    if (sigma1 == 0.0) {
        const double scale = std::fabs(2.0 * bd.eta * bd.theta) + std::fabs(b2 * phi1) + std::fabs(a2 * psi1);
        rep.verdict = std::fabs(rep.numerator) <= 1e-12 * scale ? Verdict::DegenerateSigmaConsistent
                                                                 : Verdict::DegenerateSigmaInconsistent;
        return rep;
    }
    rep.q = rep.numerator / sigma1;
    if (rep.q > 0.0) {
        rep.verdict = Verdict::Feasible;
        rep.h1 = bd.alpha * bd.beta / std::sqrt(rep.q);
        rep.normal_coefficient = 1.0 / rep.h1;
    } else {
        rep.verdict = Verdict::Infeasible;
    }
    return rep;
}

double ResidualReport::max_ricci() const { return std::max({max_ll, max_mm, max_rr}); }

ResidualReport verify_ricci(const RotSymMetric& g, const RotSymTensor& t, int n_samples) {
    if (n_samples < 2) {
        throw InvalidArgument("verification needs at least two samples");
    }
    const double lo = std::max(g.collar.lower(), t.collar.lower());
    ResidualReport rep;
    rep.samples = n_samples;
    for (double r : collar_samples(lo, 1.0, n_samples)) {
        const Jet2 fj = g.f.jet(r), gj = g.g.jet(r), hj = g.h.jet(r);
        const RicciValue ric = ricci_components(fj, gj, hj);
        const TensorAt at = tensor_at(t, r);
        track(std::fabs(ric.ll - at.phi), r, rep.max_ll, rep.at_ll);
        track(std::fabs(ric.mm - at.psi), r, rep.max_mm, rep.at_mm);
        track(std::fabs(ric.rr - at.sigma), r, rep.max_rr, rep.at_rr);
        const double c = std::fabs(constraint_residual(fj, gj, hj, at.phi, at.psi, at.sigma));
        track(c, r, rep.max_constraint, rep.at_constraint);
        rep.max_constraint_scaled = std::max(rep.max_constraint_scaled, c / (1.0 + std::fabs(at.sigma)));
    }
    return rep;
}

// Lower bound on the node count of the reconstructed grids.
constexpr double kReconstructionNodes = 200.0;

CollarSolution solve_collar(const RotSymTensor& t, const BoundaryData& bd, const IntegratorControls& controls,
                            int verify_samples) {
    const TensorAt at1 = tensor_at(t, 1.0);
    const FeasibilityReport feas = feasibility(at1.phi, at1.psi, at1.sigma, bd);
    if (feas.verdict != Verdict::Feasible) {
        throw InfeasibleBoundaryData("boundary data infeasible (" + to_string(feas.verdict) +
                                     "), Q = " + std::to_string(feas.q));
    }

    HattedSystem system(t);
    const State terminal{bd.alpha, bd.beta, 1.0, bd.eta / bd.alpha, bd.theta / bd.beta, 1.0};
    if (std::string why = system.guard(terminal); !why.empty()) {
        throw ImmediateBreakdown("hatted system undefined at r = 1: " + why);
    }

    OdeSystem ode;
    ode.dimension = 6;
    ode.rhs = [&system](double, std::span<const double> y, std::span<double> dy) { system.rhs(y, dy); };
    ode.defined = [&system](double, std::span<const double> y) { return system.guard(y); };

    Trajectory traj;
    try {
        IntegratorControls c = controls;
        if (std::isinf(c.max_step)) {
            c.max_step = t.collar.width / kReconstructionNodes;
            c.initial_step = std::min(c.initial_step, c.max_step);
        }
        traj = integrate_terminal(ode, 1.0, terminal, t.collar.lower(), c);
    } catch (const Error& e) {
        throw IntegrationFailure(std::string("hatted system: ") + e.what());
    }

    // Pull back through u = ĥ_r(t). Walk from r = 1 inward, dropping nodes that
    // crowd closer than a tenth of the previous spacing (breakdown clustering).
    const auto samples = traj.samples();
    std::vector<std::size_t> keep{0};
    double last_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const double gap = samples[keep.back()].y[hatted::HR] - samples[k].y[hatted::HR];
        if (gap > 1e-9 && (std::isinf(last_gap) || gap >= 0.1 * last_gap)) {
            keep.push_back(k);
            last_gap = gap;
        }
    }
    if (keep.size() < 2) {
        throw ImmediateBreakdown("hatted system broke down before a usable collar formed (" + traj.reason() + ")");
    }

    const std::size_t n = keep.size();
    std::vector<double> r(n), f(n), fr(n), g(n), gr(n), h(n), hr(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = samples[keep[n - 1 - i]];
        const double hrr = s.dydr[hatted::HR];
        const double hrrr = system.hrrr(s.y, s.dydr);
        r[i] = s.y[hatted::HR];
        f[i] = s.y[hatted::F];
        fr[i] = s.y[hatted::FR] / hrr;
        g[i] = s.y[hatted::G];
        gr[i] = s.y[hatted::GR] / hrr;
        h[i] = s.y[hatted::H] / hrr;
        hr[i] = (s.y[hatted::HR] * hrr - s.y[hatted::H] * hrrr) / (hrr * hrr * hrr);
    }
    const double deepest_t = samples[keep.back()].r;
    const double deepest_u = r.front();

    RotSymMetric metric = RotSymMetric::from_grids(HermiteGrid(r, std::move(f), std::move(fr)),
                                                   HermiteGrid(r, std::move(g), std::move(gr)),
                                                   HermiteGrid(r, std::move(h), std::move(hr)));
    ResidualReport residuals = verify_ricci(metric, t, verify_samples);
    return CollarSolution{feas, std::move(traj), 1.0 - deepest_t, 1.0 - deepest_u, std::move(metric), residuals};
}

GaugeTriple canonical_gauge(const RotSymMetric& g, double y0, const IntegratorControls& controls) {
    const double x = g.collar.width;
    if (!(y0 >= 0.0 && y0 < x)) {
        throw InvalidArgument("canonical gauge needs 0 <= y0 < collar width");
    }
    const double top = 1.0 - y0;
    const double floor = g.collar.lower() + 1e-12;

    OdeSystem ode;
    ode.dimension = 2;
    ode.rhs = [&g](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = y[0] / g.h.value(y[1]);
    };
    ode.defined = [&g, floor](double, std::span<const double> y) -> std::string {
        if (y[0] <= kGuard) return "h-hat below guard";
        if (y[1] <= floor) return "h-hat_r left the collar";
        try {
            const double hv = g.h.value(y[1]);
            if (!(hv > 0.0)) return "metric h not positive";
            if (!(y[0] / hv > kGuard)) return "h-hat_rr below guard";
        } catch (const Error& e) {
            return std::string("metric evaluation failed: ") + e.what();
        }
        return {};
    };

    Trajectory traj;
    try {
        traj = integrate_terminal(ode, top, State{1.0, top}, g.collar.lower(), controls);
    } catch (const Error& e) {
        throw IntegrationFailure(std::string("gauge equation: ") + e.what());
    }
    const auto samples = traj.samples();
    if (samples.size() < 2) {
        throw IntegrationFailure("gauge equation broke down immediately: " + traj.reason());
    }

    const std::size_t n = samples.size();
    std::vector<double> t(n), fh(n), fhr(n), gh(n), ghr(n), hh(n), hhr(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = samples[n - 1 - i];
        const double u = s.y[1], du = s.dydr[1];
        const Jet2 fj = g.f.jet(u), gj = g.g.jet(u);
        t[i] = s.r;
        fh[i] = fj.v0;
        fhr[i] = fj.v1 * du;
        gh[i] = gj.v0;
        ghr[i] = gj.v1 * du;
        hh[i] = s.y[0];
        hhr[i] = s.y[1];
    }
    const double lower = t.front();
    return GaugeTriple{std::move(traj),
                       y0,
                       Profile(HermiteGrid(t, std::move(fh), std::move(fhr))),
                       Profile(HermiteGrid(t, std::move(gh), std::move(ghr))),
                       Profile(HermiteGrid(t, std::move(hh), std::move(hhr))),
                       lower,
                       top};
}

MatchResult metrics_match(const RotSymMetric& a, const RotSymMetric& b, double tol, int n_samples) {
    const double lo = std::max(a.collar.lower(), b.collar.lower());
    MatchResult out;
    for (double r : collar_samples(lo, 1.0, n_samples)) {
        const double d = std::max({std::fabs(a.f.value(r) - b.f.value(r)), std::fabs(a.g.value(r) - b.g.value(r)),
                                   std::fabs(a.h.value(r) - b.h.value(r))});
        track(d, r, out.deviation, out.at);
    }
    out.match = out.deviation <= tol;
    return out;
}

MatchResult gauge_triples_match(const GaugeTriple& a, const GaugeTriple& b, double tol, int n_samples) {
    const double lo = std::max(a.lower, b.lower);
    const double hi = std::min(a.upper, b.upper);
    if (!(hi > lo)) {
        throw InvalidArgument("gauge triples share no interval");
    }
    MatchResult out;
    for (int k = 0; k < n_samples; ++k) {
        const double t = (k + 1 == n_samples) ? hi : lo + (hi - lo) * (0.5 - 0.5 * std::cos(std::numbers::pi * k / (n_samples - 1)));
        const double d = std::max({std::fabs(a.fhat.value(t) - b.fhat.value(t)),
                                   std::fabs(a.ghat.value(t) - b.ghat.value(t)),
                                   std::fabs(a.hhat.value(t) - b.hhat.value(t))});
        track(d, t, out.deviation, out.at);
    }
    out.match = out.deviation <= tol;
    return out;
}

}  // namespace rotsym
