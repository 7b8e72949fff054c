#pragma once

#include <functional>

#include "rotsym/profile.hpp"

namespace rotsym {

/// Adaptive composite Gauss–Legendre (10 nodes per panel). Panels are split
/// until two-level refinement agrees to 1e-12·(panel width)·max|p|, so the
/// total absolute error target is 1e-12·(b − a)·max|p|.
double quadrature(const std::function<double(double)>& p, double a, double b);

inline double quadrature(const Profile& p, double a, double b) {
    return quadrature([&p](double x) { return p.value(x); }, a, b);
}

}  // namespace rotsym
