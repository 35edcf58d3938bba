#pragma once

// Nonlinear Hamiltonian dynamics.
//
// The evolution functional is
//
//   F(psi) = <psi|H_lin|psi> + w * (sqrt(Var(Jz) + eps^2) - eps)
//
// with Var taken with normalized expectations, so the dispersion term is
// insensitive to residual norm drift and eigenstates stay exact stationary
// points (D_eps(0) = 0). The equation of motion is i dpsi/dt = dF/dpsi-bar;
// at w = 0 it reduces to the plain Schroedinger flow exp(-i H_lin t).
//
// The reported energy observable (hamiltonian_functional) additionally
// normalizes the linear term; on the unit sphere, where all trajectories
// live, the two functionals coincide.
//
// Integration uses the explicit symplectic scheme for nonseparable
// Hamiltonians on two bound copies of phase space: with psi = q + i p and
// a second copy (x, y), the extended Hamiltonian
//
//   H(q,y) + H(x,p) + omega/2 (|q - x|^2 + |p - y|^2),   H(q,p) = F(q+ip)/2
//
// is split into two exactly solvable shears and an exact rotation of the
// copy difference, composed palindromically:
//
//   phi_A(dt/2) . phi_B(dt/2) . phi_omega(dt) . phi_B(dt/2) . phi_A(dt/2)
//
// The map is symplectic on the extended space and exactly time-symmetric.

#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <iostream>
#include <stdexcept>
#include <string>

#include "spincat/model.hpp"
#include "spincat/observables.hpp"

namespace spincat {

struct IntegratorConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    double omega_binding = 20.0;
    int sample_every = 100;
    double copy_divergence_bound = 1e-2;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("dt: must be > 0");
        if (!(t_end > 0.0)) throw std::invalid_argument("t_end: must be > 0");
        if (!(omega_binding > 0.0)) throw std::invalid_argument("omega_binding: must be > 0");
        if (sample_every < 1) throw std::invalid_argument("sample_every: must be >= 1");
        if (!(copy_divergence_bound > 0.0)) throw std::invalid_argument("divergence_bound: must be > 0");
        if (dt * omega_binding >= 2.0) {
            static std::once_flag warned;
            std::call_once(warned, [&] {
                std::cerr << "warning: dt * omega_binding = " << dt * omega_binding
                          << " >= 2; binding rotation is under-resolved\n";
            });
        }
    }
};

struct StepFailure : std::runtime_error {
    double t_fail;
    explicit StepFailure(const std::string& what, double t = 0.0)
        : std::runtime_error(what), t_fail(t) {}
};

// Two copies of phase space; psi's real/imag parts are (q, p) and (x, y).
struct ExtendedState {
    Eigen::VectorXd q, p, x, y;

    static ExtendedState from_state(const StateVector& psi) {
        ExtendedState s;
        s.q = psi.real();
        s.p = psi.imag();
        s.x = s.q;
        s.y = s.p;
        return s;
    }
    StateVector psi_qp() const { return q.cast<Complex>() + Complex(0, 1) * p.cast<Complex>(); }
    StateVector psi_xy() const { return x.cast<Complex>() + Complex(0, 1) * y.cast<Complex>(); }
    StateVector psi_qy() const { return q.cast<Complex>() + Complex(0, 1) * y.cast<Complex>(); }
    StateVector psi_xp() const { return x.cast<Complex>() + Complex(0, 1) * p.cast<Complex>(); }
    double copy_distance() const {
        return std::sqrt((q - x).squaredNorm() + (p - y).squaredNorm());
    }
};

namespace detail {

struct Moments {
    double norm_sq = 0.0;
    double mean = 0.0;     // <Jz>, normalized
    double mean_sq = 0.0;  // <Jz^2>, normalized
    double var = 0.0;
};

inline Moments jz_moments(const StateVector& psi, const ModelSystem& sys) {
    Moments mo;
    const auto& m = sys.jz_diag;
    for (int i = 0; i < psi.size(); ++i) {
        const double p = std::norm(psi[i]);
        mo.norm_sq += p;
        mo.mean += m[i] * p;
        mo.mean_sq += m[i] * m[i] * p;
    }
    if (mo.norm_sq > 0.0) {
        mo.mean /= mo.norm_sq;
        mo.mean_sq /= mo.norm_sq;
        mo.var = std::max(0.0, mo.mean_sq - mo.mean * mo.mean);
    }
    return mo;
}

}  // namespace detail

// Regularized dispersion D_eps = sqrt(Var + eps^2) - eps; D_eps(0) = 0 exactly.
inline double regularized_dispersion(double var, double eps) {
    return std::sqrt(var + eps * eps) - eps;
}

// Generator of the flow: linear term unnormalized, dispersion term with
// normalized expectations. Equals hamiltonian_functional on the unit sphere.
inline double evolution_functional(const StateVector& psi, const ModelSystem& sys) {
    const auto mo = detail::jz_moments(psi, sys);
    if (!(mo.norm_sq > 0.0)) throw std::invalid_argument("evolution_functional: zero state");
    double e = std::real(psi.dot(sys.h_lin * psi));
    if (sys.params.w != 0.0)
        e += sys.params.w * regularized_dispersion(mo.var, sys.params.disp_epsilon);
    return e;
}

// Energy observable: <H_lin> with normalized expectations plus the
// regularized dispersion term. At w = 0 this is the linear energy.
inline double hamiltonian_functional(const StateVector& psi, const ModelSystem& sys) {
    const auto mo = detail::jz_moments(psi, sys);
    if (!(mo.norm_sq > 0.0)) throw std::invalid_argument("hamiltonian_functional: zero state");
    double e = std::real(psi.dot(sys.h_lin * psi)) / mo.norm_sq;
    if (sys.params.w != 0.0)
        e += sys.params.w * regularized_dispersion(mo.var, sys.params.disp_epsilon);
    return e;
}

inline double hamiltonian_functional(const StateVector& psi, const ModelParams& params) {
    return hamiltonian_functional(psi, make_system(params));
}

// dF/dpsi-bar. The dispersion part carries the projection terms dictated by
// its normalized expectations:
//
//   g = H_lin psi + w [ (Jz - <Jz>)^2 - Var ] psi / (2 n sqrt(Var + eps^2))
//
// with n = <psi|psi>. Eigenstates of Jz make the bracket vanish identically.
inline StateVector effective_gradient(const StateVector& psi, const ModelSystem& sys) {
    StateVector g = sys.h_lin * psi;
    const double w = sys.params.w;
    if (w != 0.0) {
        const auto mo = detail::jz_moments(psi, sys);
        if (mo.norm_sq > 0.0) {
            const double eps = sys.params.disp_epsilon;
            const double denom = 2.0 * mo.norm_sq * std::sqrt(mo.var + eps * eps);
            const double scale = w / denom;
            const auto& m = sys.jz_diag;
            for (int i = 0; i < psi.size(); ++i) {
                const double dm = m[i] - mo.mean;
                g[i] += scale * (dm * dm - mo.var) * psi[i];
            }
        }
    }
    return g;
}

inline StateVector effective_gradient(const StateVector& psi, const ModelParams& params) {
    return effective_gradient(psi, make_system(params));
}

namespace detail {

// Shear generated by H(q, y): kicks p and x, leaves (q, y) fixed.
inline void tao_shear_a(ExtendedState& s, double delta, const ModelSystem& sys) {
    const StateVector g = effective_gradient(s.psi_qy(), sys);
    s.p -= delta * g.real();
    s.x += delta * g.imag();
}

// Shear generated by H(x, p): kicks q and y, leaves (x, p) fixed.
inline void tao_shear_b(ExtendedState& s, double delta, const ModelSystem& sys) {
    const StateVector g = effective_gradient(s.psi_xp(), sys);
    s.q += delta * g.imag();
    s.y -= delta * g.real();
}

// Exact rotation of the copy difference (q - x, p - y) by angle 2 omega delta.
inline void tao_rotation(ExtendedState& s, double delta, double omega) {
    const double c = std::cos(2.0 * omega * delta);
    const double sn = std::sin(2.0 * omega * delta);
    Eigen::VectorXd u = s.q - s.x;
    Eigen::VectorXd v = s.p - s.y;
    Eigen::VectorXd qc = 0.5 * (s.q + s.x);
    Eigen::VectorXd pc = 0.5 * (s.p + s.y);
    Eigen::VectorXd ur = c * u + sn * v;
    Eigen::VectorXd vr = -sn * u + c * v;
    s.q = qc + 0.5 * ur;
    s.x = qc - 0.5 * ur;
    s.p = pc + 0.5 * vr;
    s.y = pc - 0.5 * vr;
}

}  // namespace detail

// One palindromic step of the extended-phase-space scheme. dt may be
// negative (exact inverse of the forward step, up to roundoff).
inline void tao_step_inplace(ExtendedState& s, double dt, const ModelSystem& sys,
                             const IntegratorConfig& cfg) {
    detail::tao_shear_a(s, 0.5 * dt, sys);
    detail::tao_shear_b(s, 0.5 * dt, sys);
    detail::tao_rotation(s, dt, cfg.omega_binding);
    detail::tao_shear_b(s, 0.5 * dt, sys);
    detail::tao_shear_a(s, 0.5 * dt, sys);
    if (s.copy_distance() > cfg.copy_divergence_bound)
        throw StepFailure("phase-space copies diverged (distance " +
                          std::to_string(s.copy_distance()) + "); reduce dt");
}

inline ExtendedState tao_step(const ExtendedState& s, double dt, const ModelSystem& sys,
                              const IntegratorConfig& cfg) {
    ExtendedState out = s;
    tao_step_inplace(out, dt, sys, cfg);
    return out;
}

namespace detail {

inline TrajectorySample make_sample(double t, const StateVector& psi, const ModelSystem& sys) {
    TrajectorySample smp;
    smp.t = t;
    smp.norm = psi.norm();
    smp.energy = hamiltonian_functional(psi, sys);
    const auto mo = jz_moments(psi, sys);
    smp.mean_jz = mo.mean;
    smp.dispersion = std::sqrt(mo.var);
    smp.density = density_histogram(psi, sys.ops).mass;
    return smp;
}

}  // namespace detail

// Evolve to t_end recording observables every sample_every steps (and at the
// final step). The recorded norm is NOT renormalized; its drift is a
// diagnostic of the integrator.
inline Trajectory integrate(const StateVector& psi0, const ModelSystem& sys,
                            const IntegratorConfig& cfg) {
    cfg.validate();
    const long steps = std::lround(cfg.t_end / cfg.dt);
    ExtendedState s = ExtendedState::from_state(psi0);

    Trajectory traj;
    traj.samples.reserve(static_cast<size_t>(steps / cfg.sample_every) + 2);
    traj.samples.push_back(detail::make_sample(0.0, psi0, sys));
    for (long i = 1; i <= steps; ++i) {
        try {
            tao_step_inplace(s, cfg.dt, sys, cfg);
        } catch (const StepFailure& f) {
            throw StepFailure(std::string(f.what()) + " at t = " + std::to_string(i * cfg.dt),
                              i * cfg.dt);
        }
        if (i % cfg.sample_every == 0 || i == steps)
            traj.samples.push_back(detail::make_sample(i * cfg.dt, s.psi_qp(), sys));
    }
    return traj;
}

inline Trajectory integrate(const StateVector& psi0, const ModelParams& params,
                            const IntegratorConfig& cfg) {
    return integrate(psi0, make_system(params), cfg);
}

// Final state only (copy 1), for oracle comparisons.
inline StateVector evolve_tao(const StateVector& psi0, const ModelSystem& sys,
                              const IntegratorConfig& cfg, double t) {
    const long steps = std::lround(t / cfg.dt);
    ExtendedState s = ExtendedState::from_state(psi0);
    for (long i = 0; i < steps; ++i) tao_step_inplace(s, cfg.dt, sys, cfg);
    return s.psi_qp();
}

// Classic RK4 on i dpsi/dt = effective_gradient(psi), renormalizing each
// step (oracle convention). Independent of the symplectic path.
inline Trajectory rk4_reference(const StateVector& psi0, const ModelSystem& sys, double dt,
                                double t_end, int sample_every = 100) {
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("rk4_reference: dt and t_end must be > 0");
    const Complex mi(0.0, -1.0);
    auto f = [&](const StateVector& psi) -> StateVector { return mi * effective_gradient(psi, sys); };

    const long steps = std::lround(t_end / dt);
    StateVector psi = psi0;
    Trajectory traj;
    traj.samples.push_back(detail::make_sample(0.0, psi, sys));
    for (long i = 1; i <= steps; ++i) {
        const StateVector k1 = f(psi);
        const StateVector k2 = f(psi + 0.5 * dt * k1);
        const StateVector k3 = f(psi + 0.5 * dt * k2);
        const StateVector k4 = f(psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        psi.normalize();
        if (i % sample_every == 0 || i == steps)
            traj.samples.push_back(detail::make_sample(i * dt, psi, sys));
    }
    return traj;
}

inline StateVector evolve_rk4(const StateVector& psi0, const ModelSystem& sys, double dt,
                              double t) {
    const Complex mi(0.0, -1.0);
    auto f = [&](const StateVector& psi) -> StateVector { return mi * effective_gradient(psi, sys); };
    const long steps = std::lround(t / dt);
    StateVector psi = psi0;
    for (long i = 0; i < steps; ++i) {
        const StateVector k1 = f(psi);
        const StateVector k2 = f(psi + 0.5 * dt * k1);
        const StateVector k3 = f(psi + 0.5 * dt * k2);
        const StateVector k4 = f(psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        psi.normalize();
    }
    return psi;
}

// Integrate to T, then step back with -dt; returns |psi_back - psi0|.
inline double reversibility_defect(const StateVector& psi0, const ModelSystem& sys,
                                   const IntegratorConfig& cfg, double t_total) {
    const long steps = std::lround(t_total / cfg.dt);
    if (std::abs(steps * cfg.dt - t_total) > 1e-9)
        throw std::invalid_argument("reversibility_defect: T must be a multiple of dt");
    ExtendedState s = ExtendedState::from_state(psi0);
    for (long i = 0; i < steps; ++i) tao_step_inplace(s, cfg.dt, sys, cfg);
    for (long i = 0; i < steps; ++i) tao_step_inplace(s, -cfg.dt, sys, cfg);
    return (s.psi_qp() - psi0).norm();
}

inline double reversibility_defect(const StateVector& psi0, const ModelParams& params,
                                   const IntegratorConfig& cfg, double t_total) {
    return reversibility_defect(psi0, make_system(params), cfg, t_total);
}

}  // namespace spincat
