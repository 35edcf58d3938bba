#pragma once

// Model construction for the micro+macro qubit system.
//
// One "micro" qubit is coupled to n_macro spin-1/2 "macro" qubits. The macro
// collective coordinate is the total spin projection Jz, whose eigenvalues m
// run from -n_macro/2 to +n_macro/2 and play the role of the needle position
// in the double-well potential. Two Hilbert-space sectors are supported:
//
//   symmetric  - the permutation-symmetric (Dicke) manifold, macro dimension
//                n_macro + 1. The collective Hamiltonian preserves it, so it
//                is the default working space.
//   full       - all 2^n_macro product states; kept for cross-validation.
//
// Joint basis ordering: index = macro_index * 2 + micro_index, micro 0 = up.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spincat/potential.hpp"

namespace spincat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

enum class Sector { symmetric, full };

struct ModelParams {
    int n_macro = 8;        // macro qubit count
    double w = 2.2;         // nonlinear (dispersion) coupling
    double alpha = 1.0;     // micro-macro coupling
    double b = 1.0;         // macro kinetic coefficient on Jx
    double micro_sx = 0.0;  // optional micro self-term, off by default
    PotentialParams potential{};
    Sector sector = Sector::symmetric;
    double disp_epsilon = 1e-8;      // dispersion regularizer
    int initial_band_halfwidth = 0;  // |m| <= halfwidth band in the initial state
    int full_sector_max_n = 12;      // dimension guard for the full sector

    int macro_dim() const {
        return sector == Sector::symmetric ? n_macro + 1 : (1 << n_macro);
    }
    int dim() const { return 2 * macro_dim(); }
    double total_spin() const { return 0.5 * n_macro; }

    void validate() const {
        if (n_macro < 1)
            throw std::invalid_argument("n_macro: must be >= 1 (got " + std::to_string(n_macro) + ")");
        if (!(w >= 0.0))
            throw std::invalid_argument("w: must be >= 0 (got " + std::to_string(w) + ")");
        if (!(disp_epsilon > 0.0))
            throw std::invalid_argument("disp_epsilon: must be > 0");
        if (initial_band_halfwidth < 0)
            throw std::invalid_argument("band_halfwidth: must be >= 0");
        if (2 * initial_band_halfwidth > n_macro)
            throw std::invalid_argument("band_halfwidth: exceeds total spin J = n_macro/2");
        if (sector == Sector::full && n_macro > full_sector_max_n)
            throw std::invalid_argument("n_macro: full sector refused above n_macro = " +
                                        std::to_string(full_sector_max_n) +
                                        " (raise full_sector_max_n to override)");
        potential.validate();
    }
};

// Collective operators on the joint (macro x micro) space.
struct CollectiveOps {
    Matrix jz;       // total spin z
    Matrix jx;       // total spin x
    Matrix jz_sq;    // jz * jz
    Matrix v_of_jz;  // V applied to the jz spectrum
    Matrix sigma_z_micro;
    Matrix sigma_x_micro;
    Eigen::VectorXd m_levels;            // distinct jz eigenvalues, ascending
    std::vector<int> level_of_macro;     // macro basis index -> m_levels index
    std::vector<double> m_of_macro;      // macro basis index -> m value
    int dim = 0;
};

namespace detail {

// Spin-J matrices in the |J,m> basis, m ascending from -J to +J.
inline void dicke_jz_jx(int n, Eigen::MatrixXd& jz, Eigen::MatrixXd& jx) {
    const int d = n + 1;
    const double j = 0.5 * n;
    jz = Eigen::MatrixXd::Zero(d, d);
    jx = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) jz(k, k) = k - j;
    for (int k = 0; k + 1 < d; ++k) {
        const double m = k - j;
        const double c = 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));  // <m+1|J+|m>/2
        jx(k + 1, k) = c;
        jx(k, k + 1) = c;
    }
}

// Sums of single-site Pauli/2 over all 2^n product states.
inline void product_jz_jx(int n, Eigen::MatrixXd& jz, Eigen::MatrixXd& jx) {
    const int d = 1 << n;
    jz = Eigen::MatrixXd::Zero(d, d);
    jx = Eigen::MatrixXd::Zero(d, d);
    for (int s = 0; s < d; ++s) {
        const int ups = __builtin_popcount(static_cast<unsigned>(s));
        jz(s, s) = ups - 0.5 * n;
        for (int site = 0; site < n; ++site) jx(s ^ (1 << site), s) += 0.5;
    }
}

// Lift a macro operator to the joint space (identity on the micro qubit).
inline Matrix lift_macro(const Eigen::MatrixXd& op) {
    const int md = static_cast<int>(op.rows());
    Matrix out = Matrix::Zero(2 * md, 2 * md);
    for (int a = 0; a < md; ++a)
        for (int c = 0; c < md; ++c) {
            if (op(a, c) == 0.0) continue;
            out(2 * a, 2 * c) = op(a, c);
            out(2 * a + 1, 2 * c + 1) = op(a, c);
        }
    return out;
}

inline Matrix lift_micro(const Matrix& sigma, int macro_dim) {
    Matrix out = Matrix::Zero(2 * macro_dim, 2 * macro_dim);
    for (int k = 0; k < macro_dim; ++k)
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) out(2 * k + s, 2 * k + t) = sigma(s, t);
    return out;
}

}  // namespace detail

inline CollectiveOps build_collective_operators(const ModelParams& params) {
    params.validate();
    CollectiveOps ops;
    const int n = params.n_macro;

    Eigen::MatrixXd jz_macro, jx_macro;
    if (params.sector == Sector::symmetric) {
        detail::dicke_jz_jx(n, jz_macro, jx_macro);
    } else {
        detail::product_jz_jx(n, jz_macro, jx_macro);
    }
    const int md = static_cast<int>(jz_macro.rows());

    ops.dim = 2 * md;
    ops.jz = detail::lift_macro(jz_macro);
    ops.jx = detail::lift_macro(jx_macro);
    ops.jz_sq = ops.jz * ops.jz;

    // V acts on the jz spectrum; jz is diagonal in both sector bases.
    Eigen::MatrixXd v_macro = Eigen::MatrixXd::Zero(md, md);
    for (int k = 0; k < md; ++k) v_macro(k, k) = potential_value(jz_macro(k, k), params.potential);
    ops.v_of_jz = detail::lift_macro(v_macro);

    Matrix sz(2, 2), sx(2, 2);
    sz << 1, 0, 0, -1;
    sx << 0, 1, 1, 0;
    ops.sigma_z_micro = detail::lift_micro(sz, md);
    ops.sigma_x_micro = detail::lift_micro(sx, md);

    // Level bookkeeping for histograms: distinct m values ascending.
    const double j = params.total_spin();
    ops.m_levels.resize(n + 1);
    for (int k = 0; k <= n; ++k) ops.m_levels[k] = k - j;
    ops.level_of_macro.resize(md);
    ops.m_of_macro.resize(md);
    for (int k = 0; k < md; ++k) {
        const double m = jz_macro(k, k);
        ops.m_of_macro[k] = m;
        ops.level_of_macro[k] = static_cast<int>(std::lround(m + j));
    }
    return ops;
}

// H_lin = b Jx + V(Jz) + alpha (sigma_z_micro Jx) [+ micro_sx sigma_x_micro]
inline Matrix build_linear_hamiltonian(const ModelParams& params, const CollectiveOps& ops) {
    Matrix h = params.b * ops.jx + ops.v_of_jz + params.alpha * (ops.sigma_z_micro * ops.jx);
    if (params.micro_sx != 0.0) h += params.micro_sx * ops.sigma_x_micro;
    return h;
}

inline Matrix build_linear_hamiltonian(const ModelParams& params) {
    return build_linear_hamiltonian(params, build_collective_operators(params));
}

// Uniform-amplitude band over jz eigenstates with |m| <= halfwidth, tensored
// with the equal-weight micro superposition (|up> + |down>)/sqrt(2).
inline StateVector make_initial_state(const ModelParams& params, const CollectiveOps& ops) {
    params.validate();
    const int hw = params.initial_band_halfwidth;
    if (params.n_macro % 2 != 0 && hw == 0)
        throw std::invalid_argument("band_halfwidth: odd n_macro has no m = 0 state; use halfwidth >= 1");

    std::vector<int> band;
    for (int k = 0; k < static_cast<int>(ops.m_of_macro.size()); ++k)
        if (std::abs(ops.m_of_macro[k]) <= hw + 1e-12) band.push_back(k);
    if (band.empty()) throw std::invalid_argument("band_halfwidth: selects no jz eigenstates");

    StateVector psi = StateVector::Zero(ops.dim);
    const double amp = 1.0 / std::sqrt(2.0 * band.size());
    for (int k : band) {
        psi[2 * k] = amp;
        psi[2 * k + 1] = amp;
    }
    return psi;
}

inline StateVector make_initial_state(const ModelParams& params) {
    return make_initial_state(params, build_collective_operators(params));
}

struct GroundState {
    double energy = 0.0;
    StateVector state;
    bool degenerate = false;  // another eigenvalue within tolerance of the minimum
};

inline void require_hermitian(const Matrix& h, double tol = 1e-12) {
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (defect > tol * scale)
        throw std::invalid_argument("operator is not Hermitian (defect " + std::to_string(defect) + ")");
}

inline GroundState ground_state(const Matrix& h, double degeneracy_tol = 1e-8) {
    if (h.rows() != h.cols() || h.rows() == 0)
        throw std::invalid_argument("ground_state: matrix must be square and nonempty");
    require_hermitian(h);

    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("ground_state: eigensolver failed to converge");

    GroundState gs;
    gs.energy = solver.eigenvalues()[0];
    gs.state = solver.eigenvectors().col(0);
    gs.state.normalize();
    if (h.rows() > 1) {
        const double gap = solver.eigenvalues()[1] - solver.eigenvalues()[0];
        gs.degenerate = gap <= degeneracy_tol * std::max(1.0, std::abs(gs.energy));
    }
    return gs;
}

// Convenience bundle: parameters plus the operators and Hamiltonian built
// from them. Dynamics routines take this to avoid rebuilding per call.
// jz_diag caches the (diagonal) jz over joint indices for the gradient loop.
struct ModelSystem {
    ModelParams params;
    CollectiveOps ops;
    Matrix h_lin;
    Eigen::VectorXd jz_diag;
};

inline ModelSystem make_system(const ModelParams& params) {
    ModelSystem sys;
    sys.params = params;
    sys.ops = build_collective_operators(params);
    sys.h_lin = build_linear_hamiltonian(params, sys.ops);
    sys.jz_diag = sys.ops.jz.diagonal().real();
    return sys;
}

}  // namespace spincat
