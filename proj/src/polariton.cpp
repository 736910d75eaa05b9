#include "tripod/polariton.hpp"

#include <cmath>

namespace tripod::polariton {

namespace {
constexpr cd kI{0.0, 1.0};
}

MixingAngles mixing_angles(double omega_c1, double omega_c2, double gn) {
    double o1 = std::abs(omega_c1);
    double o2 = std::abs(omega_c2);
    double g = std::abs(gn);
    if (o1 == 0.0 && o2 == 0.0 && g == 0.0)
        throw ValidationError("mixing_angles: all couplings zero, angles undefined");
    MixingAngles a;
    a.theta = std::atan2(g, std::hypot(o1, o2));
    a.phi = std::atan2(o1, o2);
    return a;
}

std::pair<cd, cd> compose_dark(cd signal, cd sigma_bc1, cd sigma_bc2,
                               const MixingAngles& angles,
                               double phase_c1, double phase_c2) {
    double ct = std::cos(angles.theta), st = std::sin(angles.theta);
    double cp = std::cos(angles.phi), sp = std::sin(angles.phi);
    cd e1 = std::exp(-kI * phase_c1);
    cd e2 = std::exp(-kI * phase_c2);
    cd psi = ct * signal - st * (sp * e1 * sigma_bc1 + cp * e2 * sigma_bc2);
    cd psi_perp = sp * e2 * sigma_bc2 - cp * e1 * sigma_bc1;
    return {psi, psi_perp};
}

PolaritonState evolve(const PolaritonState& state, double delta_s,
                      double delta_c, double duration_us) {
    // exp(+i H t) with H = ds*I + dc*(sin2phi sx - cos2phi sz):
    //   e^{i ds t} [cos(dc t) I + i sin(dc t) (sin2phi sx - cos2phi sz)]
    double two_phi = 2.0 * state.angles.phi;
    double c2p = std::cos(two_phi), s2p = std::sin(two_phi);
    double ct = std::cos(delta_c * duration_us);
    double st = std::sin(delta_c * duration_us);
    cd global = std::exp(kI * (delta_s * duration_us));
    cd u00 = global * (ct - kI * st * c2p);
    cd u01 = global * (kI * st * s2p);
    cd u11 = global * (ct + kI * st * c2p);
    PolaritonState out = state;
    out.psi = u00 * state.psi + u01 * state.psi_perp;
    out.psi_perp = u01 * state.psi + u11 * state.psi_perp;
    return out;
}

TimeBinState time_bin_state(double phi, double delta_phase,
                            double t1_us, double t2_us) {
    if (!(t1_us < t2_us))
        throw ValidationError("time_bin_state: t1 must precede t2");
    TimeBinState s;
    s.amp_t1 = std::sin(phi);
    s.amp_t2 = std::cos(phi) * std::exp(kI * delta_phase);
    s.t1_us = t1_us;
    s.t2_us = t2_us;
    s.delta_phase = delta_phase;
    return s;
}

double retrieval_fraction(double storage_us, double delta_c, double delta_s,
                          double phi, double phase_offset) {
    if (storage_us < 0.0)
        throw ValidationError("retrieval_fraction: storage time must be >= 0");
    PolaritonState stored;
    stored.psi = 1.0;
    stored.psi_perp = 0.0;
    stored.angles = {M_PI / 2.0, phi};
    PolaritonState evolved = evolve(stored, delta_s, delta_c, storage_us);

    // Back to the spin basis (zero storage phases):
    //   dark = (sin phi, cos phi), perp = (cos phi, -sin phi)
    double sp = std::sin(phi), cp = std::cos(phi);
    cd spin1 = evolved.psi * sp + evolved.psi_perp * cp;
    cd spin2 = evolved.psi * cp - evolved.psi_perp * sp;
    // Retrieval dark mode with the c2 phase shifted by phase_offset.
    cd overlap = sp * spin1 + cp * std::exp(kI * phase_offset) * spin2;
    return std::norm(overlap);
}

} // namespace tripod::polariton
