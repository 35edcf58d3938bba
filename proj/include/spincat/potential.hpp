#pragma once

// Double-well external potential acting on the center-of-total-spin coordinate.
//
//   V(x) = A (x - width)^2 (x + width)^2,   A = height / width^4
//
// Wells sit at x = +-width with V = 0; the hill between them has V(0) = height.
// A "piecewise" variant keeps the outer walls fixed at height 10 and makes only
// the inner hill adjustable.

#include <cmath>
#include <stdexcept>
#include <string>

namespace spincat {

enum class PotentialVariant { standard, piecewise };

struct PotentialParams {
    double height = 10.0;  // hill height, energy units
    double width = 4.0;    // well half-separation, spin units
    PotentialVariant variant = PotentialVariant::standard;

    void validate() const {
        if (!(width > 0.0))
            throw std::invalid_argument("width: must be > 0 (got " + std::to_string(width) + ")");
        if (!(height >= 0.0))
            throw std::invalid_argument("height: must be >= 0 (got " + std::to_string(height) + ")");
        if (variant == PotentialVariant::piecewise && width != 4.0)
            throw std::invalid_argument("width: piecewise potential is defined with width = 4.0");
    }
};

inline double potential_eval(double x, const PotentialParams& pot) {
    pot.validate();
    const double a = pot.height / (pot.width * pot.width * pot.width * pot.width);
    const double lo = x - pot.width;
    const double hi = x + pot.width;
    return a * lo * lo * hi * hi;
}

// Two-part hill: outer walls pinned to the height-10 quartic, inner section
// uses the requested height. Both branches vanish at |x| = 4, so V1 is
// continuous there.
inline double potential_piecewise(double x, double height) {
    PotentialParams branch{height, 4.0, PotentialVariant::standard};
    if (std::abs(x) > 4.0) branch.height = 10.0;
    return potential_eval(x, branch);
}

inline double potential_value(double x, const PotentialParams& pot) {
    if (pot.variant == PotentialVariant::piecewise) {
        pot.validate();
        return potential_piecewise(x, pot.height);
    }
    return potential_eval(x, pot);
}

}  // namespace spincat
