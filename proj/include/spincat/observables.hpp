#pragma once

// Expectations, center-of-total-spin dispersion, density histograms over the
// jz spectrum, windowed peak dispersion, and the cat criterion.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spincat/model.hpp"

namespace spincat {

inline double expectation(const StateVector& psi, const Matrix& a) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw std::invalid_argument("expectation: zero state");
    return std::real(psi.dot(a * psi)) / n2;  // imaginary residue discarded
}

// sqrt(<Jz^2> - <Jz>^2), clamped at zero against negative roundoff.
inline double dispersion(const StateVector& psi, const CollectiveOps& ops) {
    const double mean = expectation(psi, ops.jz);
    const double mean_sq = expectation(psi, ops.jz_sq);
    return std::sqrt(std::max(0.0, mean_sq - mean * mean));
}

struct DensityHistogram {
    Eigen::VectorXd m_values;  // jz eigenvalues, ascending
    Eigen::VectorXd mass;      // probability per m, micro index summed out
};

inline DensityHistogram density_histogram(const StateVector& psi, const CollectiveOps& ops) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw std::invalid_argument("density_histogram: zero state");
    DensityHistogram h;
    h.m_values = ops.m_levels;
    h.mass = Eigen::VectorXd::Zero(ops.m_levels.size());
    const int md = static_cast<int>(ops.level_of_macro.size());
    for (int k = 0; k < md; ++k) {
        const double p = std::norm(psi[2 * k]) + std::norm(psi[2 * k + 1]);
        h.mass[ops.level_of_macro[k]] += p / n2;
    }
    return h;
}

struct TrajectorySample {
    double t = 0.0;
    double norm = 0.0;
    double energy = 0.0;
    double mean_jz = 0.0;
    double dispersion = 0.0;
    Eigen::VectorXd density;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

struct PeakDispersion {
    double peak = 0.0;
    double t_peak = 0.0;
};

// Maximum recorded dispersion among samples with window_lo <= t <= window_hi;
// ties resolve to the earliest time. Recorded samples only, no interpolation.
inline PeakDispersion peak_dispersion(const Trajectory& traj, double window_lo, double window_hi) {
    PeakDispersion best;
    bool found = false;
    for (const auto& s : traj.samples) {
        if (s.t < window_lo || s.t > window_hi) continue;
        if (!found || s.dispersion > best.peak) {
            best.peak = s.dispersion;
            best.t_peak = s.t;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("peak_dispersion: no samples in window");
    return best;
}

// A cat is a state whose dispersion exceeds the device's physical size
// (default: one jz step). Strict inequality.
inline bool is_cat(const StateVector& psi, const CollectiveOps& ops, double size_threshold = 1.0) {
    if (!(size_threshold > 0.0)) throw std::invalid_argument("is_cat: threshold must be > 0");
    return dispersion(psi, ops) > size_threshold;
}

}  // namespace spincat
