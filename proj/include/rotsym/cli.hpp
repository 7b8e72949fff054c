#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotsym/errors.hpp"
#include "rotsym/geometry.hpp"
#include "rotsym/ode.hpp"

namespace rotsym::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInfeasible = 2,
    kBreakdown = 3,
    kConfigError = 4,
    kNumericalFailure = 5,
};

/// Bad or missing configuration; maps to exit code 4.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Flat `key = value` case description. Blank lines and text after `#` are
/// ignored; keys must be known and may appear once.
class CaseConfig {
public:
    static CaseConfig parse(std::string_view text, const std::string& source = "<config>");
    static CaseConfig load(const std::filesystem::path& path);

    const std::string& source() const { return source_; }
    /// Directory of the config file; relative paths inside it resolve against this.
    const std::filesystem::path& base_dir() const { return base_; }

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& text(const std::string& key) const;
    /// Real-valued key; constant expressions such as `exp(2)` are accepted.
    double real(const std::string& key) const;
    double real_or(const std::string& key, double fallback) const;
    long integer_or(const std::string& key, long fallback) const;
    Profile profile(const std::string& key) const;

    double collar_width() const { return real_or("x", 1.0); }
    IntegratorControls controls() const;
    RotSymTensor tensor() const;
    BoundaryData boundary() const;
    /// From f, g, h expressions, or from a `profiles` CSV written by `solve`.
    RotSymMetric metric() const;

    static const std::vector<std::string>& known_keys();

private:
    std::string source_;
    std::filesystem::path base_;
    std::map<std::string, std::string> values_;
};

inline constexpr std::string_view kProfilesHeader =
    "r,f,g,h,f_r,g_r,h_r,ric_ll,ric_mm,ric_rr,phi,psi,sigma,constraint_residual";
inline constexpr std::string_view kEinsteinHeader = "s,fbar,gbar,ric_ll,ric_mm,ric_ss,residual";
inline constexpr std::string_view kGaugeHeader = "t,fhat,ghat,hhat,hhat_r";

/// Rebuilds the sampled metric from a profiles CSV (columns r..h_r).
RotSymMetric read_profiles_csv(const std::filesystem::path& path);

/// Executes one command line (without the program name). Diagnostics go to
/// err; the last line written to out is `STATUS key=value ...`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace rotsym::cli
