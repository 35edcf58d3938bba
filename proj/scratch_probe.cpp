#include <cstdio>
#include <vector>

#include "spincat/dynamics.hpp"

using namespace spincat;

struct PK {
    double peak, t_peak;
};

static PK peak_for(double w, double alpha, double b, double height, double t_end = 10.0,
                   int k = 8) {
    ModelParams mp;
    mp.w = w;
    mp.alpha = alpha;
    mp.b = b;
    mp.potential.height = height;
    mp.initial_band_halfwidth = 1;
    ModelSystem sys = make_system(mp);
    StateVector psi0 = make_initial_state(mp, sys.ops);
    IntegratorConfig cfg;
    cfg.dt = 1e-3 / k;
    cfg.t_end = t_end;
    cfg.sample_every = 100 * k;
    Trajectory traj = integrate(psi0, sys, cfg);
    PK out{0, 0};
    for (auto& s : traj.samples)
        if (s.t >= 1.0 && s.dispersion > out.peak) {
            out.peak = s.dispersion;
            out.t_peak = s.t;
        }
    return out;
}

int main() {
    std::puts("b=0.15 a=0.15 w=2.2, t_end=10 vs 30:");
    for (double h : {6.0, 7.0, 8.0, 9.0, 10.0}) {
        PK a = peak_for(2.2, 0.15, 0.15, h, 10.0);
        PK c = peak_for(2.2, 0.15, 0.15, h, 30.0);
        std::printf("  h=%4.1f peak10=%.3f@t=%.1f  peak30=%.3f@t=%.1f\n", h, a.peak, a.t_peak,
                    c.peak, c.t_peak);
    }
    std::puts("b=0.08 a=0.04 w=2.2 grid (t_end=10):");
    for (double h = 0; h <= 10.01; h += 1.0) {
        PK a = peak_for(2.2, 0.04, 0.08, h, 10.0);
        std::printf("  h=%4.1f peak=%.3f@t=%.1f\n", h, a.peak, a.t_peak);
    }
    return 0;
}
