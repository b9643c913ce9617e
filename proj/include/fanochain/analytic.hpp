#ifndef FANOCHAIN_ANALYTIC_HPP
#define FANOCHAIN_ANALYTIC_HPP

#include "fanochain/model.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace fanochain {

// Marks grid points that needed a limiting rule instead of plain evaluation:
//  - pole_limit: the effective potential diverges there; the continuous limit
//    is perfect reflection (t = 0, r = -1).
//  - removable_limit: gamma = 0 collision of a transmission root with a
//    vanishing denominator (a bound state in the continuum sits at this
//    energy and the direct solve is singular); the balanced-potential limit
//    gamma -> 0 gives perfect transmission, which is the convention used
//    throughout, and the defect amplitudes diverge in that limit (reported
//    as NaN).
enum class SolutionFlag { none, pole_limit, removable_limit };

// Frequency-dependent scalar that replaces the eliminated defect amplitudes.
// Real for balanced gain/loss in variants A and B; complex otherwise.
struct EffectivePotential {
    Complex value{};
    bool is_real_certified = false;
};

// Scattering data at one frequency, normalized to incoming amplitude I = 1.
struct ScatteringSolution {
    double omega = 0.0;
    double k = 0.0;
    Complex t{};
    Complex r{};
    Complex B1{};
    Complex B2{};
    double T = 0.0;           // |t|^2
    double R = 0.0;           // |r|^2
    double phase_sigma = 0.0; // arg(t), in (-pi, pi]
    SolutionFlag flag = SolutionFlag::none;
};

// Lineshape parameters of the single-defect transmission formula.
struct FanoParameters {
    double alpha_k = 0.0;
    double q = 0.0;
};

struct ResonanceRoot {
    double omega = 0.0;
    bool in_band = true;
    bool degenerate = false;
};

// Perfect-reflection and perfect-transmission frequencies with their
// existence data. Roots outside the band are still listed, flagged.
struct ResonanceSet {
    std::vector<ResonanceRoot> perfect_reflection;
    std::vector<ResonanceRoot> perfect_transmission;
    std::optional<double> critical_gamma;
    double discriminant = 0.0;
};

// Effective potentials. Pole errors fire when the defect-block denominator
// vanishes outright (magnitude below 1e-300).
EffectivePotential effective_potential_a(const ScatteringModel& model, double omega);
EffectivePotential effective_potential_b(const ScatteringModel& model, double omega);
EffectivePotential effective_potential_c(const ScatteringModel& model, double omega);

// Closed-form amplitudes per variant; amplitudes() dispatches on the tag and
// throws UnsupportedAnalysisError for Generic models.
ScatteringSolution amplitudes_a(const ScatteringModel& model, double omega);
ScatteringSolution amplitudes_b(const ScatteringModel& model, double omega);
ScatteringSolution amplitudes_c(const ScatteringModel& model, double omega);
ScatteringSolution amplitudes(const ScatteringModel& model, double omega);

// Hermitian single side-coupled defect: T and the lineshape parameters of
// the equivalent (alpha + q)^2 / (alpha^2 + 1) form (q = 0 here).
std::pair<double, FanoParameters> fano_single(double J, double J1, double E_d1, double omega);

// Hermitian pair of defects attached to one site, linked by J_perp.
double fano_double(double J, double J_par, double E_d, double J_perp, double omega);

// Resonance structure. resonances_b covers only balanced (PT-symmetric)
// parameters and throws UnsupportedAnalysisError otherwise.
ResonanceSet resonances_a(const ScatteringModel& model);
ResonanceSet resonances_b(const ScatteringModel& model);

} // namespace fanochain

#endif
