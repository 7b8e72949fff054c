#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "rotsym/cli.hpp"
#include "rotsym/einstein.hpp"
#include "rotsym/prescribed_ricci.hpp"
#include "rotsym/radial_expr.hpp"

namespace rotsym::cli {

namespace {

struct Options {
    std::string command;
    std::vector<std::string> configs;
    std::string out;
    int samples = 0;
    double rtol = 0.0;
    int jobs = 1;
};

using Fields = std::vector<std::pair<std::string, std::string>>;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_row(std::ostream& os, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) os << ',';
        os << num(v);
        first = false;
    }
    os << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw ConfigError("cannot write " + path);
    }
    return os;
}

struct Case {
    const Options& opts;
    const CaseConfig& cfg;
    std::string prefix;
    std::ostream& out;
    std::ostream& err;
    Fields& status;

    int samples() const {
        const long n = opts.samples > 0 ? opts.samples : cfg.integer_or("samples", 200);
        if (n < 2) throw ConfigError(cfg.source() + ": samples must be at least 2");
        return static_cast<int>(n);
    }

    IntegratorControls controls() const {
        IntegratorControls c = cfg.controls();
        if (opts.rtol > 0.0) c.rtol = opts.rtol;
        return c;
    }

    void field(const std::string& key, const std::string& value) { status.emplace_back(key, value); }
    void field(const std::string& key, double value) { field(key, num(value)); }

    void print(const std::string& key, const std::string& value) { out << key << " = " << value << '\n'; }
    void print(const std::string& key, double value) { print(key, num(value)); }
};

FeasibilityReport report_feasibility(Case& c, const RotSymTensor& t, const BoundaryData& bd) {
    const FeasibilityReport f = feasibility(t.phi.value(1.0), t.psi.value(1.0), t.sigma.value(1.0), bd);
    c.print("verdict", to_string(f.verdict));
    c.print("numerator", f.numerator);
    c.print("Q", f.q);
    c.print("h1", f.h1);
    c.print("normal_coefficient", f.normal_coefficient);
    c.field("verdict", to_string(f.verdict));
    c.field("Q", f.q);
    switch (f.verdict) {
        case Verdict::Infeasible:
            c.err << "infeasible boundary data: Q = " << num(f.q) << " is " << (f.q < 0 ? "negative" : "zero")
                  << ", a collar solution needs Q > 0\n";
            break;
        case Verdict::DegenerateSigmaInconsistent:
            c.err << "infeasible boundary data: sigma(1) = 0 but 2*eta*theta + beta^2*phi(1) + alpha^2*psi(1) = "
                  << num(f.numerator) << " is not zero\n";
            break;
        case Verdict::DegenerateSigmaConsistent:
            c.err << "sigma(1) = 0: boundary data consistent, but Q is undefined and the collar system is singular\n";
            break;
        case Verdict::Feasible:
            break;
    }
    return f;
}

int cmd_feasibility(Case& c) {
    const FeasibilityReport f = report_feasibility(c, c.cfg.tensor(), c.cfg.boundary());
    return f.verdict == Verdict::Infeasible || f.verdict == Verdict::DegenerateSigmaInconsistent ? kInfeasible
                                                                                                 : kSuccess;
}

std::string termination_name(Termination t) {
    switch (t) {
        case Termination::ReachedEnd: return "ReachedEnd";
        case Termination::StoppedByPredicate: return "StoppedByPredicate";
        case Termination::Breakdown: return "Breakdown";
    }
    return "?";
}

void print_residuals(Case& c, std::ostream& os, const ResidualReport& r) {
    os << "samples = " << r.samples << '\n';
    const std::pair<const char*, double> rows[] = {
        {"max_ric_ll", r.max_ll},
        {"at_ric_ll", r.at_ll},
        {"max_ric_mm", r.max_mm},
        {"at_ric_mm", r.at_mm},
        {"max_ric_rr", r.max_rr},
        {"at_ric_rr", r.at_rr},
        {"max_residual", r.max_ricci()},
        {"max_constraint", r.max_constraint},
        {"at_constraint", r.at_constraint},
        {"max_constraint_scaled", r.max_constraint_scaled},
    };
    for (const auto& [k, v] : rows) os << k << " = " << num(v) << '\n';
    c.field("max_residual", r.max_ricci());
    c.field("max_constraint", r.max_constraint);
}

int cmd_solve(Case& c) {
    const RotSymTensor t = c.cfg.tensor();
    const BoundaryData bd = c.cfg.boundary();
    const double depth = c.cfg.real_or("depth", 0.0);
    if (!(depth >= 0.0 && depth <= t.collar.width)) {
        throw ConfigError(c.cfg.source() + ": depth must lie in [0, x]");
    }
    const FeasibilityReport f = report_feasibility(c, t, bd);
    if (f.verdict != Verdict::Feasible) {
        return kInfeasible;
    }
    const CollarSolution sol = solve_collar(t, bd, c.controls(), c.samples());
    const RotSymMetric& g = sol.metric;
    const HermiteGrid& fg = *g.f.grid();

    const std::string csv_path = c.prefix + ".profiles.csv";
    {
        std::ofstream os = open_output(csv_path);
        os << kProfilesHeader << '\n';
        for (double r : fg.abscissae()) {
            const Jet2 fj = g.f.jet(r), gj = g.g.jet(r), hj = g.h.jet(r);
            const RicciValue ric = ricci_components(fj, gj, hj);
            const double phi = t.phi.value(r), psi = t.psi.value(r), sigma = t.sigma.value(r);
            write_row(os, {r, fj.v0, gj.v0, hj.v0, fj.v1, gj.v1, hj.v1, ric.ll, ric.mm, ric.rr, phi, psi, sigma,
                           constraint_residual(fj, gj, hj, phi, psi, sigma)});
        }
    }

    const std::string report_path = c.prefix + ".report.txt";
    {
        std::ofstream os = open_output(report_path);
        os << "verdict = " << to_string(f.verdict) << '\n'
           << "Q = " << num(f.q) << '\n'
           << "h1 = " << num(f.h1) << '\n'
           << "normal_coefficient = " << num(f.normal_coefficient) << '\n'
           << "termination = " << termination_name(sol.hatted.status()) << '\n'
           << "reason = " << sol.hatted.reason() << '\n'
           << "epsilon = " << num(sol.epsilon) << '\n'
           << "epsilon0 = " << num(sol.epsilon0) << '\n'
           << "nodes = " << fg.size() << '\n';
        print_residuals(c, os, sol.residuals);
    }
    c.print("termination", termination_name(sol.hatted.status()));
    if (!sol.hatted.reason().empty()) c.print("reason", sol.hatted.reason());
    c.print("epsilon", sol.epsilon);
    c.print("epsilon0", sol.epsilon0);
    c.print("max_residual", sol.residuals.max_ricci());
    c.print("max_constraint", sol.residuals.max_constraint);
    c.print("profiles", csv_path);
    c.print("report", report_path);
    c.field("epsilon", sol.epsilon);
    c.field("epsilon0", sol.epsilon0);

    if (sol.hatted.status() == Termination::Breakdown && sol.epsilon0 < depth) {
        c.err << "breakdown at r = " << num(sol.hatted.r_end()) << " (" << sol.hatted.reason()
              << "): reconstructed collar width " << num(sol.epsilon0) << " is below the requested depth "
              << num(depth) << '\n';
        return kBreakdown;
    }
    return kSuccess;
}

int cmd_verify(Case& c) {
    const ResidualReport r = verify_ricci(c.cfg.metric(), c.cfg.tensor(), c.samples());
    print_residuals(c, c.out, r);
    return kSuccess;
}

int cmd_canonical(Case& c) {
    const RotSymMetric g = c.cfg.metric();
    const double y0 = c.cfg.real_or("y0", 0.0);
    const GaugeTriple gt = canonical_gauge(g, y0, c.controls());
    const std::string path = c.prefix + ".gauge.csv";
    {
        std::ofstream os = open_output(path);
        os << kGaugeHeader << '\n';
        const auto s = gt.gauge.samples();
        for (auto it = s.rbegin(); it != s.rend(); ++it) {
            write_row(os, {it->r, gt.fhat.value(it->r), gt.ghat.value(it->r), it->y[0], it->y[1]});
        }
    }
    c.print("y0", y0);
    c.print("lower", gt.lower);
    c.print("upper", gt.upper);
    c.print("termination", termination_name(gt.gauge.status()));
    if (!gt.gauge.reason().empty()) c.print("reason", gt.gauge.reason());
    c.print("gauge", path);
    c.field("lower", gt.lower);
    c.field("upper", gt.upper);
    return kSuccess;
}

int cmd_einstein(Case& c) {
    const double tau = c.cfg.real("tau");
    EinsteinSpec spec;
    if (c.cfg.has("c") || c.cfg.has("s0")) {
        spec = EinsteinSpec{tau, c.cfg.real("c"), c.cfg.real("s0")};
    } else if (c.cfg.has("alpha") || c.cfg.has("beta")) {
        const double alpha = c.cfg.real("alpha"), beta = c.cfg.real("beta");
        if (!(alpha > 0.0 && beta > 0.0)) {
            throw ConfigError(c.cfg.source() + ": alpha and beta must be positive");
        }
        const auto m = boundary_match(tau, alpha, beta);
        if (const auto* o = std::get_if<Obstruction>(&m)) {
            c.err << "obstruction: alpha = " << num(alpha) << " is not below 4*pi/kappa = " << num(o->threshold)
                  << "; no Einstein metric with tau = " << num(tau) << " has this boundary torus\n";
            c.print("obstruction", o->threshold);
            c.field("obstruction", o->threshold);
            return kInfeasible;
        }
        spec = std::get<EinsteinSpec>(m);
    } else {
        throw ConfigError(c.cfg.source() + ": einstein needs c and s0, or alpha and beta");
    }
    const SProfiles p = einstein_profiles(spec);
    const CoreRegularity core = core_regularity(p);
    const int n = c.samples();

    const std::string path = c.prefix + ".einstein.csv";
    double worst = 0.0;
    {
        std::ofstream os = open_output(path);
        os << kEinsteinHeader << '\n';
        for (double s : collar_samples(0.0, spec.s0, n)) {
            const Jet2 fj = p.fbar.jet(s), gj = p.gbar.jet(s);
            const RicciValue ric = ricci_components(fj, gj, Jet2{1.0, 0.0, 0.0});
            const double res = std::max({std::fabs(ric.ll - tau * fj.v0 * fj.v0),
                                         std::fabs(ric.mm - tau * gj.v0 * gj.v0), std::fabs(ric.rr - tau)});
            worst = std::max(worst, res);
            write_row(os, {s, fj.v0, gj.v0, ric.ll, ric.mm, ric.rr, res});
        }
    }
    c.print("tau", tau);
    c.print("kappa", spec.kappa());
    c.print("c", spec.c);
    c.print("s0", spec.s0);
    c.print("fbar(s0)", p.fbar.value(spec.s0));
    c.print("gbar(s0)", p.gbar.value(spec.s0));
    c.print("core_f0", core.f0);
    c.print("core_fs0", core.fs0);
    c.print("core_gs0", core.gs0);
    c.print("core_regular", core.pass() ? "yes" : "no");
    c.print("max_residual", worst);
    c.print("profiles", path);
    c.field("s0", spec.s0);
    c.field("c", spec.c);
    c.field("max_residual", worst);
    return kSuccess;
}

struct CaseResult {
    int code = kSuccess;
    std::string out;
    std::string err;
    Fields status;
};

CaseResult run_case(const Options& opts, const std::string& config_path) {
    CaseResult res;
    std::ostringstream out, err;
    try {
        const CaseConfig cfg = CaseConfig::load(config_path);
        std::string prefix = opts.out;
        if (prefix.empty()) {
            prefix = cfg.has("out") ? cfg.text("out") : std::filesystem::path(config_path).replace_extension().string();
        }
        Case c{opts, cfg, prefix, out, err, res.status};
        if (opts.command == "feasibility") res.code = cmd_feasibility(c);
        else if (opts.command == "solve") res.code = cmd_solve(c);
        else if (opts.command == "verify") res.code = cmd_verify(c);
        else if (opts.command == "canonical") res.code = cmd_canonical(c);
        else res.code = cmd_einstein(c);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        res.code = kConfigError;
    } catch (const ParseError& e) {
        err << "config error: " << e.what() << '\n';
        res.code = kConfigError;
    } catch (const InvalidS0& e) {
        err << "config error: " << e.what() << '\n';
        res.code = kConfigError;
    } catch (const InvalidConstant& e) {
        err << "config error: " << e.what() << '\n';
        res.code = kConfigError;
    } catch (const InfeasibleBoundaryData& e) {
        err << "infeasible: " << e.what() << '\n';
        res.code = kInfeasible;
    } catch (const ImmediateBreakdown& e) {
        err << "breakdown: " << e.what() << '\n';
        res.code = kBreakdown;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        res.code = kNumericalFailure;
    }
    res.out = out.str();
    res.err = err.str();
    return res;
}

std::string status_line(const std::string& head, const Fields& fields) {
    std::string s = head;
    for (const auto& [k, v] : fields) s += " " + k + "=" + v;
    return s;
}

int execute(const Options& opts, std::ostream& out, std::ostream& err) {
    const std::size_t n = opts.configs.size();
    if (n > 1 && !opts.out.empty()) {
        err << "config error: --out needs exactly one --config\n";
        out << "STATUS command=" << opts.command << " exit=" << kConfigError << '\n';
        return kConfigError;
    }
    std::vector<CaseResult> results(n);
    const std::size_t workers = std::min<std::size_t>(std::max(opts.jobs, 1), n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < n;) results[i] = run_case(opts, opts.configs[i]);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    int worst = kSuccess;
    for (std::size_t i = 0; i < n; ++i) {
        const CaseResult& r = results[i];
        out << r.out;
        if (n > 1) {
            std::istringstream lines(r.err);
            for (std::string line; std::getline(lines, line);) err << opts.configs[i] << ": " << line << '\n';
            out << status_line("RESULT config=" + opts.configs[i] + " exit=" + std::to_string(r.code), r.status) << '\n';
        } else {
            err << r.err;
        }
        worst = std::max(worst, r.code);
    }
    std::string head = "STATUS command=" + opts.command + " exit=" + std::to_string(worst);
    if (n == 1) {
        out << status_line(head, results.front().status) << '\n';
    } else {
        const auto failed = std::count_if(results.begin(), results.end(), [](const CaseResult& r) { return r.code != 0; });
        out << head << " cases=" << n << " failed=" << failed << '\n';
    }
    out.flush();
    return worst;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Prescribed Ricci curvature and Einstein metrics on the solid torus", "rotsym"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Options opts;
    app.add_option("--config", opts.configs, "case description (repeatable)")->required()->take_all();
    app.add_option("--out", opts.out, "output path prefix");
    app.add_option("--samples", opts.samples, "verification / output sample count")->check(CLI::Range(2, 1000000));
    app.add_option("--rtol", opts.rtol, "integrator relative tolerance")->check(CLI::PositiveNumber);
    app.add_option("--jobs", opts.jobs, "cases to run concurrently")->check(CLI::Range(1, 1024));

    const std::pair<const char*, const char*> commands[] = {
        {"feasibility", "check the boundary data against the prescribed tensor"},
        {"solve", "construct the metric on a collar and write profiles and report"},
        {"verify", "residuals of a given metric against the prescribed tensor"},
        {"canonical", "canonical gauge form of a metric"},
        {"einstein", "closed-form Einstein metric, from (c, s0) or matched to (alpha, beta)"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->callback([&opts, n = std::string(name)] { opts.command = n; });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kSuccess;
        out << "STATUS command=" << (opts.command.empty() ? "none" : opts.command) << " exit=" << kConfigError << '\n';
        return kConfigError;
    }
    return execute(opts, out, err);
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace rotsym::cli
