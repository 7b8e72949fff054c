#include "rotsym/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rotsym/errors.hpp"

namespace rotsym {

HermiteGrid::HermiteGrid(std::vector<double> abscissae, std::vector<double> values, std::vector<double> slopes)
    : r_(std::move(abscissae)), v_(std::move(values)), d_(std::move(slopes)) {
    if (r_.size() < 2 || v_.size() != r_.size() || d_.size() != r_.size()) {
        throw InvalidArgument("Hermite grid needs at least two nodes with matching value and slope arrays");
    }
    for (std::size_t i = 0; i < r_.size(); ++i) {
        if (!std::isfinite(r_[i]) || !std::isfinite(v_[i]) || !std::isfinite(d_[i])) {
            throw InvalidArgument("Hermite grid contains a non-finite entry");
        }
        if (i > 0 && !(r_[i] > r_[i - 1])) {
            throw InvalidArgument("Hermite grid abscissae must be strictly increasing");
        }
    }
}

Jet2 HermiteGrid::jet(double r) const {
    if (!(r >= r_.front() && r <= r_.back())) {
        throw OutOfRange("grid profile evaluated at r=" + std::to_string(r) + " outside [" +
                         std::to_string(r_.front()) + ", " + std::to_string(r_.back()) + "]");
    }
    const std::size_t n = r_.size();
    // Segment [r_[seg], r_[seg + 1]] containing r.
    std::size_t seg = static_cast<std::size_t>(std::upper_bound(r_.begin(), r_.end(), r) - r_.begin());
    seg = std::clamp<std::size_t>(seg == 0 ? 0 : seg - 1, 0, n - 2);

    const std::size_t width = std::min<std::size_t>(4, n);
    std::size_t lo = seg > 0 ? seg - 1 : 0;
    lo = std::min(lo, n - width);

    // Confluent divided differences on doubled nodes z = (x0,x0,x1,x1,...).
    std::array<double, 8> z{};
    std::array<double, 8> c{};
    const std::size_t m = 2 * width;
    for (std::size_t k = 0; k < width; ++k) {
        z[2 * k] = z[2 * k + 1] = r_[lo + k];
        c[2 * k] = c[2 * k + 1] = v_[lo + k];
    }
    for (std::size_t order = 1; order < m; ++order) {
        for (std::size_t j = m - 1; j >= order; --j) {
            if (order == 1 && z[j] == z[j - 1]) {
                c[j] = d_[lo + j / 2];
            } else {
                c[j] = (c[j] - c[j - 1]) / (z[j] - z[j - order]);
            }
        }
    }
    const Jet2 x = Jet2::variable(r);
    Jet2 p = Jet2::constant(c[m - 1]);
    for (std::size_t k = m - 1; k-- > 0;) {
        p = p * (x - z[k]) + c[k];
    }
    for (std::size_t k = lo; k < lo + width; ++k) {
        if (r == r_[k]) {
            p.v0 = v_[k];
            p.v1 = d_[k];
        }
    }
    return p;
}

Jet2 Profile::jet(double r) const {
    return std::visit(
        [r](const auto& rep) -> Jet2 {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, RadialExpr>) {
                return rep.eval_jet2(r);
            } else if constexpr (std::is_same_v<T, HermiteGrid>) {
                return rep.jet(r);
            } else {
                const Jet2 j = rep(r);
                if (!j.finite()) {
                    throw NonFiniteResult("profile callable returned a non-finite jet");
                }
                return j;
            }
        },
        rep_);
}

}  // namespace rotsym
