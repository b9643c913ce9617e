#include "fanochain/analytic.hpp"

#include "fanochain/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fanochain {

namespace {

constexpr double kPoleFloor = 1e-300; // denominator magnitude treated as an exact pole
constexpr double kLimitTol = 1e-12;   // window for the pole/removable limit branches

const Complex kNaN{std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};

double normalized_arg(const Complex& z) {
    double sigma = std::arg(z);
    if (sigma <= -std::numbers::pi)
        sigma += 2.0 * std::numbers::pi;
    return sigma;
}

ScatteringSolution finish(double omega, double k, Complex t, Complex r, Complex B1, Complex B2,
                          SolutionFlag flag = SolutionFlag::none) {
    ScatteringSolution s;
    s.omega = omega;
    s.k = k;
    s.t = t;
    s.r = r;
    s.B1 = B1;
    s.B2 = B2;
    s.T = std::norm(t);
    s.R = std::norm(r);
    s.phase_sigma = normalized_arg(t);
    s.flag = flag;
    return s;
}

[[noreturn]] void pole_error(const char* what, double omega) {
    std::ostringstream msg;
    msg << what << " has a pole at omega = " << omega;
    throw PoleError(msg.str());
}

} // namespace

EffectivePotential effective_potential_a(const ScatteringModel& model, double omega) {
    const ModelAParams p = model_a_params(model);
    const double u = omega - p.E_d;
    const double q = u * u + p.gamma * p.gamma;
    if (q < kPoleFloor)
        pole_error("effective potential (paired defects on two sites)", omega);
    // Gain and loss cancel in the symmetric defect response, leaving a real scalar.
    return EffectivePotential{Complex(2.0 * p.J_par * p.J_par * u / q, 0.0), true};
}

EffectivePotential effective_potential_b(const ScatteringModel& model, double omega) {
    const ModelBParams p = model_b_params(model);
    const Complex w1 = Complex(omega - p.E_d1, -p.gamma1);
    const Complex w2 = Complex(omega - p.E_d2, -p.gamma2);
    const Complex num = p.J2 * p.J2 * w1 + p.J1 * p.J1 * w2 + 2.0 * p.J1 * p.J2 * p.J_perp;
    const Complex den = w1 * w2 - p.J_perp * p.J_perp;
    if (std::abs(den) < kPoleFloor)
        pole_error("effective potential (defect pair on one site)", omega);
    return EffectivePotential{num / den, check_pt_symmetry(model).is_pt_symmetric};
}

EffectivePotential effective_potential_c(const ScatteringModel& model, double omega) {
    const ModelCParams p = model_c_params(model);
    const Complex wp = Complex(omega - p.E_d, -p.gamma);
    if (std::abs(wp) < kPoleFloor)
        pole_error("effective potential (mirror-split defect pair)", omega);
    // The defect on site 0 sees only the gain level: complex whenever gamma != 0.
    return EffectivePotential{p.J_perp * p.J_perp / wp, p.gamma == 0.0};
}

ScatteringSolution amplitudes_a(const ScatteringModel& model, double omega) {
    const ModelAParams p = model_a_params(model);
    const double k = wavenumber(p.J, omega);
    const double s = std::sin(k);
    const Complex z = std::exp(Complex(0.0, k));
    const Complex i2(0.0, 1.0);

    const double u = omega - p.E_d;
    const double q = u * u + p.gamma * p.gamma;
    const double nq = 2.0 * p.J_par * p.J_par * u; // effective potential = nq / q

    if (q < kPoleFloor) {
        // Both the potential's numerator and denominator vanish: a dark state
        // of the defect pair sits exactly here. The balanced gain/loss limit
        // passes straight through; the defect amplitudes have no finite limit.
        return finish(omega, k, Complex(1.0, 0.0), Complex(0.0, 0.0), kNaN, kNaN,
                      SolutionFlag::removable_limit);
    }

    // Multiplied-through form: stable for arbitrarily large effective potential.
    const Complex den = nq * (1.0 + z) + i2 * (p.J * s * q);
    const Complex t = i2 * s * (nq + p.J * q) / den;
    const Complex r = -nq * (1.0 + z + i2 * z * s) / den;

    const Complex a_sum = (1.0 + r) + t * z; // A_0 + A_1 from the boundary ansatz
    const Complex B1 = p.J_par * a_sum / Complex(u, -p.gamma);
    const Complex B2 = p.J_par * a_sum / Complex(u, p.gamma);
    return finish(omega, k, t, r, B1, B2);
}

ScatteringSolution amplitudes_b(const ScatteringModel& model, double omega) {
    const ModelBParams p = model_b_params(model);
    const double k = wavenumber(p.J, omega);
    const double s = std::sin(k);
    const Complex i2(0.0, 1.0);
    const Complex two_iJs = i2 * (2.0 * p.J * s);

    if (p.J1 == 0.0 && p.J2 == 0.0) {
        // Detached defects leave a free chain.
        return finish(omega, k, Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
                      Complex(0.0, 0.0));
    }

    const Complex w1 = Complex(omega - p.E_d1, -p.gamma1);
    const Complex w2 = Complex(omega - p.E_d2, -p.gamma2);
    const Complex num = p.J2 * p.J2 * w1 + p.J1 * p.J1 * w2 + 2.0 * p.J1 * p.J2 * p.J_perp;
    const Complex den_pot = w1 * w2 - p.J_perp * p.J_perp;

    // Frequency distance to the nearest pole, estimated through the
    // denominator's slope w1 + w2. A raw |den_pot| cut would misfire near a
    // double zero, where den_pot is quadratic in the detuning.
    const double pole_distance =
        std::abs(den_pot) / std::max(std::abs(w1 + w2), 1e-6);

    if (pole_distance < kLimitTol) {
        if (std::abs(num) < kLimitTol) {
            if (std::abs(w1 + w2) > 1e-9) {
                // Simple zero over simple zero: the transmission root collides
                // with the potential's pole (gamma = 0, omega = E_d - J_perp).
                // A chain-decoupled defect state lives at this energy; the
                // balanced-limit convention keeps the transmission perfect.
                return finish(omega, k, Complex(1.0, 0.0), Complex(0.0, 0.0), kNaN, kNaN,
                              SolutionFlag::removable_limit);
            }
            // Double zero of the denominator: the potential still diverges
            // (gamma = 0, J_perp = 0, omega = E_d) and reflection is total.
            const double j11 = p.J1 * p.J1 + p.J2 * p.J2;
            const Complex B1 = two_iJs * p.J1 / j11;
            const Complex B2 = two_iJs * p.J2 / j11;
            return finish(omega, k, Complex(0.0, 0.0), Complex(-1.0, 0.0), B1, B2,
                          SolutionFlag::pole_limit);
        }
        // Plain pole of the effective potential: these frequencies are exactly
        // the perfect-reflection roots, so report the continuous limit.
        const Complex B1 = two_iJs * (p.J1 * w2 + p.J_perp * p.J2) / num;
        const Complex B2 = two_iJs * (p.J2 * w1 + p.J_perp * p.J1) / num;
        return finish(omega, k, Complex(0.0, 0.0), Complex(-1.0, 0.0), B1, B2,
                      SolutionFlag::pole_limit);
    }

    // Multiplied-through by the potential's denominator; valid for balanced
    // and imbalanced parameters alike.
    const Complex den = num + two_iJs * den_pot;
    if (std::abs(den) < kPoleFloor)
        pole_error("scattering response (defect pair on one site)", omega);
    const Complex t = two_iJs * den_pot / den;
    const Complex r = -num / den;
    const Complex B1 = two_iJs * (p.J1 * w2 + p.J_perp * p.J2) / den;
    const Complex B2 = two_iJs * (p.J2 * w1 + p.J_perp * p.J1) / den;
    return finish(omega, k, t, r, B1, B2);
}

ScatteringSolution amplitudes_c(const ScatteringModel& model, double omega) {
    const ModelCParams p = model_c_params(model);
    const double k = wavenumber(p.J, omega);
    const double s = std::sin(k);
    const Complex i2(0.0, 1.0);
    const Complex zm = std::exp(Complex(0.0, -k));
    const Complex zp = std::exp(Complex(0.0, k));

    const Complex wp = Complex(omega - p.E_d, -p.gamma); // gain-side denominator
    const Complex wm = Complex(omega - p.E_d, p.gamma);  // loss-side denominator
    if (std::abs(wp) < kPoleFloor || std::abs(wm) < kPoleFloor)
        pole_error("defect response (mirror-split pair)", omega);

    const double jp2 = p.J_perp * p.J_perp;
    // Multiplied through by wp*wm: G - J e^{+-ik} becomes (jp2 - J e^{+-ik} w)/w.
    const Complex den = (jp2 - p.J * zm * wp) * (jp2 - p.J * zm * wm) - p.J * p.J * wp * wm;
    if (std::abs(den) < kPoleFloor)
        pole_error("scattering denominator (mirror-split pair)", omega);

    const Complex t = zm * (-2.0 * i2 * p.J * p.J * s) * wp * wm / den;
    const Complex r = (p.J * p.J * wp * wm - (jp2 - p.J * zp * wp) * (jp2 - p.J * zm * wm)) / den;

    const Complex B1 = p.J_perp * (1.0 + r) / wp;
    const Complex B2 = p.J_perp * (t * zp) / wm;
    return finish(omega, k, t, r, B1, B2);
}

ScatteringSolution amplitudes(const ScatteringModel& model, double omega) {
    switch (model.variant) {
    case Variant::A:
        return amplitudes_a(model, omega);
    case Variant::B:
        return amplitudes_b(model, omega);
    case Variant::C:
        return amplitudes_c(model, omega);
    case Variant::Generic:
        break;
    }
    throw UnsupportedAnalysisError("no closed-form amplitudes for generic defect graphs");
}

std::pair<double, FanoParameters> fano_single(double J, double J1, double E_d1, double omega) {
    const double k = wavenumber(J, omega);
    const double s = std::sin(k);
    const double u = omega - E_d1;
    if (J1 == 0.0) {
        return {1.0, FanoParameters{std::numeric_limits<double>::infinity(), 0.0}};
    }
    const double beta = J1 * J1 / (2.0 * J * s);
    const double T = u * u / (u * u + beta * beta);
    return {T, FanoParameters{u / beta, 0.0}};
}

double fano_double(double J, double J_par, double E_d, double J_perp, double omega) {
    const double k = wavenumber(J, omega);
    const double s = std::sin(k);
    if (J_perp != 0.0 && std::abs(omega - (E_d - J_perp)) < kLimitTol) {
        // Same dark-state collision as in the balanced two-defect amplitudes;
        // kept consistent with their gamma -> 0 convention.
        return 1.0;
    }
    if (J_par == 0.0)
        return 1.0;
    const double v = omega - E_d - J_perp;
    const double beta = J_par * J_par / (J * s);
    return v * v / (v * v + beta * beta);
}

namespace {

ResonanceRoot make_root(double J, double omega, bool degenerate = false) {
    return ResonanceRoot{omega, in_band(J, omega), degenerate};
}

} // namespace

ResonanceSet resonances_a(const ScatteringModel& model) {
    const ModelAParams p = model_a_params(model);
    const double jp2 = p.J_par * p.J_par;

    ResonanceSet set;
    set.critical_gamma = jp2 / p.J;
    set.discriminant = jp2 * jp2 - p.J * p.J * p.gamma * p.gamma;
    // The effective potential vanishes at E_d for every gamma.
    set.perfect_transmission = {make_root(p.J, p.E_d)};

    if (p.gamma == 0.0) {
        // One branch of the quadratic collapses onto the transmission point
        // (the dark-state energy); only the shifted root reflects.
        set.perfect_reflection = {make_root(p.J, p.E_d - 2.0 * jp2 / p.J)};
    } else if (set.discriminant > 0.0) {
        const double root = std::sqrt(set.discriminant);
        set.perfect_reflection = {make_root(p.J, p.E_d - (jp2 + root) / p.J),
                                  make_root(p.J, p.E_d - (jp2 - root) / p.J)};
    } else if (set.discriminant == 0.0) {
        set.perfect_reflection = {make_root(p.J, p.E_d - jp2 / p.J, true)};
    }
    return set;
}

ResonanceSet resonances_b(const ScatteringModel& model) {
    const PTSymmetryReport pt = check_pt_symmetry(model);
    if (!pt.is_pt_symmetric)
        throw UnsupportedAnalysisError(
            "closed-form resonance roots require balanced gain/loss parameters");
    const ModelBParams p = model_b_params(model);
    const double gamma = p.gamma1;

    ResonanceSet set;
    set.critical_gamma = std::abs(p.J_perp);
    set.discriminant = p.J_perp * p.J_perp - gamma * gamma;

    if (gamma == 0.0) {
        if (p.J_perp != 0.0) {
            // The lower branch is the dark-state energy where the balanced
            // limit transmits perfectly; only the upper branch reflects.
            set.perfect_reflection = {make_root(p.J, p.E_d1 + p.J_perp)};
            set.perfect_transmission = {make_root(p.J, p.E_d1 - p.J_perp)};
        } else {
            // Plain Hermitian antiresonance; no perfect-transmission frequency.
            set.perfect_reflection = {make_root(p.J, p.E_d1)};
        }
        return set;
    }

    set.perfect_transmission = {make_root(p.J, p.E_d1 - p.J_perp)};
    if (set.discriminant > 0.0) {
        const double root = std::sqrt(set.discriminant);
        set.perfect_reflection = {make_root(p.J, p.E_d1 - root), make_root(p.J, p.E_d1 + root)};
    } else if (set.discriminant == 0.0) {
        set.perfect_reflection = {make_root(p.J, p.E_d1, true)};
    }
    return set;
}

} // namespace fanochain
