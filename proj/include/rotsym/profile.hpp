#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rotsym/jet.hpp"
#include "rotsym/radial_expr.hpp"

namespace rotsym {

/// Radial profile sampled on strictly increasing abscissae, each node
/// carrying a value and a first derivative.
///
/// Between nodes the profile is the Hermite polynomial matching value and
/// slope at the (up to) four nodes surrounding the segment, i.e. degree 7
/// in the interior. Values and slopes are reproduced exactly at nodes; the
/// second derivative is that of the local polynomial.
class HermiteGrid {
public:
    HermiteGrid(std::vector<double> abscissae, std::vector<double> values, std::vector<double> slopes);

    /// Throws OutOfRange outside [front(), back()].
    Jet2 jet(double r) const;

    double front() const { return r_.front(); }
    double back() const { return r_.back(); }
    std::size_t size() const { return r_.size(); }

    std::span<const double> abscissae() const { return r_; }
    std::span<const double> values() const { return v_; }
    std::span<const double> slopes() const { return d_; }

private:
    std::vector<double> r_;
    std::vector<double> v_;
    std::vector<double> d_;
};

/// A function of r with exact jets, from one of three sources: a parsed
/// closed form, a Hermite grid, or a native callable.
class Profile {
public:
    using Callable = std::function<Jet2(double)>;

    Profile(RadialExpr expr) : rep_(std::move(expr)) {}
    Profile(HermiteGrid grid) : rep_(std::move(grid)) {}
    Profile(Callable fn) : rep_(std::move(fn)) {}

    static Profile parse(std::string_view text) { return Profile(RadialExpr::parse(text)); }
    static Profile constant(double c) { return Profile(RadialExpr::literal(c)); }

    Jet2 jet(double r) const;
    double value(double r) const { return jet(r).v0; }

    const HermiteGrid* grid() const { return std::get_if<HermiteGrid>(&rep_); }
    const RadialExpr* expr() const { return std::get_if<RadialExpr>(&rep_); }

private:
    std::variant<RadialExpr, HermiteGrid, Callable> rep_;
};

}  // namespace rotsym
