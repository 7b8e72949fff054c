#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rotsym/cli.hpp"
#include "rotsym/prescribed_ricci.hpp"

using namespace rotsym;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("rotsym_cli_" + std::to_string(std::rand()) + "_" +
                                           std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;

    std::string last_line() const {
        std::istringstream is(out);
        std::string line, last;
        while (std::getline(is, line)) last = line;
        return last;
    }
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> report(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::istringstream is(slurp(path));
    for (std::string line; std::getline(is, line);) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

const char* kM1 = R"(# manufactured case
x = 1
phi = -3*exp(2*r)
psi = -6*exp(4*r)
sigma = -5
alpha = e
beta = e^2
eta = e^2
theta = 2*e^4
rtol = 1e-10
)";

const char* kInfeasible = "phi = 1\npsi = 1\nsigma = -1\nalpha = 1\nbeta = 1\neta = 0\ntheta = 0\n";
const char* kBadExpr = "phi = 2+*r\npsi = 1\nsigma = -1\nalpha = 1\nbeta = 1\neta = 0\ntheta = 0\n";

}  // namespace

TEST_CASE("config parsing") {
    const cli::CaseConfig c = cli::CaseConfig::parse("x = 0.5 # comment\n\n  alpha=exp(1)\nsamples = 50\n");
    CHECK(c.collar_width() == 0.5);
    CHECK(c.real("alpha") == doctest::Approx(2.718281828459045));
    CHECK(c.integer_or("samples", 0) == 50);
    CHECK(c.real_or("beta", 3.0) == 3.0);
    CHECK_THROWS_AS(cli::CaseConfig::parse("bogus = 1\n"), cli::ConfigError);
    CHECK_THROWS_AS(cli::CaseConfig::parse("x = 1\nx = 2\n"), cli::ConfigError);
    CHECK_THROWS_AS(cli::CaseConfig::parse("x 1\n"), cli::ConfigError);
    CHECK_THROWS_AS(cli::CaseConfig::parse("x =\n"), cli::ConfigError);
    CHECK_THROWS_AS(cli::CaseConfig::parse("alpha = r\n").real("alpha"), cli::ConfigError);
    CHECK_THROWS_AS(cli::CaseConfig::parse("samples = 1.5\n").integer_or("samples", 0), cli::ConfigError);
    CHECK_THROWS_AS(cli::CaseConfig::parse("").real("tau"), cli::ConfigError);
}

TEST_CASE("solve on the manufactured case") {
    Scratch s;
    const std::string cfg = s.write("m1.cfg", kM1);
    const Outcome o = invoke({"solve", "--config", cfg, "--out", s.path("m1")});
    CHECK(o.code == 0);
    CHECK(o.last_line().rfind("STATUS command=solve exit=0", 0) == 0);

    auto kv = report(s.path("m1.report.txt"));
    const double max_res = std::stod(kv.at("max_residual"));
    CHECK(max_res <= 1e-6);
    CHECK(kv.at("verdict") == "Feasible");

    // The CSV is a complete description of the reconstructed metric.
    const RotSymMetric back = cli::read_profiles_csv(s.path("m1.profiles.csv"));
    const RotSymTensor t = cli::CaseConfig::parse(kM1).tensor();
    const ResidualReport again = verify_ricci(back, t, std::stoi(kv.at("samples")));
    CHECK(std::fabs(again.max_ricci() - max_res) <= 1e-8);
    CHECK(std::fabs(again.max_constraint - std::stod(kv.at("max_constraint"))) <= 1e-8);

    std::istringstream csv(slurp(s.path("m1.profiles.csv")));
    std::string line;
    std::getline(csv, line);
    CHECK(line == cli::kProfilesHeader);
    double prev = -1.0, last = 0.0;
    while (std::getline(csv, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 13);
        last = std::stod(line.substr(0, line.find(',')));
        CHECK(last > prev);
        prev = last;
    }
    CHECK(last == 1.0);

    // Byte-identical reruns.
    CHECK(invoke({"solve", "--config", cfg, "--out", s.path("again")}).code == 0);
    CHECK(slurp(s.path("m1.profiles.csv")) == slurp(s.path("again.profiles.csv")));
    CHECK(slurp(s.path("m1.report.txt")) == slurp(s.path("again.report.txt")));

    // verify and canonical on the written profiles.
    const std::string vcfg = s.write("v.cfg", std::string(kM1) + "profiles = m1.profiles.csv\n");
    const Outcome v = invoke({"verify", "--config", vcfg});
    CHECK(v.code == 0);
    CHECK(v.last_line().find("max_residual=") != std::string::npos);
    const Outcome c = invoke({"canonical", "--config", s.write("c.cfg", "profiles = m1.profiles.csv\ny0 = 0.1\n")});
    CHECK(c.code == 0);
    CHECK(slurp(s.path("c.gauge.csv")).rfind(std::string(cli::kGaugeHeader), 0) == 0);
}

TEST_CASE("infeasible and malformed cases") {
    Scratch s;
    const Outcome f = invoke({"feasibility", "--config", s.write("inf.cfg", kInfeasible)});
    CHECK(f.code == 2);
    CHECK(f.err.find("Q = -2") != std::string::npos);
    CHECK(f.err.find("negative") != std::string::npos);
    CHECK(f.last_line() == "STATUS command=feasibility exit=2 verdict=Infeasible Q=-2");

    CHECK(invoke({"solve", "--config", s.path("inf.cfg")}).code == 2);

    const Outcome b = invoke({"solve", "--config", s.write("bad.cfg", kBadExpr)});
    CHECK(b.code == 4);
    CHECK(b.err.find("offset 2") != std::string::npos);
    CHECK(b.last_line() == "STATUS command=solve exit=4");

    CHECK(invoke({"solve", "--config", s.path("missing.cfg")}).code == 4);
    CHECK(invoke({"solve"}).code == 4);
    CHECK(invoke({"frobnicate", "--config", s.path("inf.cfg")}).code == 4);
    CHECK(invoke({"solve", "--config", s.path("inf.cfg"), "--rtol", "-1"}).code == 4);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("breakdown before the requested depth") {
    Scratch s;
    // σ vanishes at r = 1/2, where the collar construction degenerates.
    std::string text = kM1;
    text.replace(text.find("sigma = -5"), 10, "sigma = -5+10*(1-r)");
    const std::string shallow = s.write("shallow.cfg", text + "depth = 0.3\n");
    const std::string deep = s.write("deep.cfg", text + "depth = 0.9\n");
    CHECK(invoke({"solve", "--config", shallow}).code == 0);
    const Outcome o = invoke({"solve", "--config", deep});
    CHECK(o.code == 3);
    CHECK(o.err.find("breakdown") != std::string::npos);
}

TEST_CASE("einstein subcommand") {
    Scratch s;
    const Outcome a = invoke({"einstein", "--config", s.write("a.cfg", "tau = 1/2\nc = 1\ns0 = pi/2\n"), "--samples", "100"});
    CHECK(a.code == 0);
    std::istringstream csv(slurp(s.path("a.einstein.csv")));
    std::string line;
    std::getline(csv, line);
    CHECK(line == cli::kEinsteinHeader);
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        CHECK(std::stod(line.substr(line.rfind(',') + 1)) <= 1e-9);
    }
    CHECK(rows == 100);

    const Outcome m = invoke({"einstein", "--config", s.write("m.cfg", "tau = -2\nalpha = pi\nbeta = 2\n")});
    CHECK(m.code == 0);
    CHECK(m.last_line().find("c=3.2000000000000002") != std::string::npos);

    const Outcome o = invoke({"einstein", "--config", s.write("o.cfg", "tau = 1/2\nalpha = 4*pi\nbeta = 1\n")});
    CHECK(o.code == 2);
    CHECK(o.err.find("obstruction") != std::string::npos);

    CHECK(invoke({"einstein", "--config", s.write("bad.cfg", "tau = 1/2\nc = 1\ns0 = 4\n")}).code == 4);
    CHECK(invoke({"einstein", "--config", s.write("none.cfg", "tau = 1/2\n")}).code == 4);
}

TEST_CASE("several configs") {
    Scratch s;
    const std::string good = s.write("good.cfg", kM1);
    const std::string inf = s.write("inf.cfg", kInfeasible);
    const std::string bad = s.write("bad.cfg", kBadExpr);
    const Outcome o = invoke({"solve", "--config", good, "--config", inf, "--config", bad, "--jobs", "3"});
    CHECK(o.code == 4);
    CHECK(o.last_line() == "STATUS command=solve exit=4 cases=3 failed=2");
    CHECK(o.out.find("RESULT config=" + good + " exit=0") != std::string::npos);
    CHECK(o.out.find("RESULT config=" + inf + " exit=2") != std::string::npos);
    CHECK(fs::exists(s.path("good.profiles.csv")));

    const Outcome seq = invoke({"solve", "--config", good, "--config", inf});
    CHECK(seq.code == 2);
    CHECK(invoke({"solve", "--config", good, "--config", inf, "--out", s.path("x")}).code == 4);
}

TEST_CASE("installed binary") {
    Scratch s;
    const std::string cfg = s.write("m1.cfg", kM1);
    const std::string cmd = std::string("\"") + ROTSYM_CLI_PATH + "\" solve --config \"" + cfg + "\" --out \"" +
                            s.path("bin") + "\" > \"" + s.path("stdout.txt") + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(s.path("bin.profiles.csv")));
    const std::string bad = std::string("\"") + ROTSYM_CLI_PATH + "\" solve --config \"" + s.write("b.cfg", kBadExpr) +
                            "\" > /dev/null 2>&1";
    const int bstatus = std::system(bad.c_str());
    CHECK(WEXITSTATUS(bstatus) == 4);
}
