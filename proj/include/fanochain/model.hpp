#ifndef FANOCHAIN_MODEL_HPP
#define FANOCHAIN_MODEL_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace fanochain {

using Complex = std::complex<double>;

// Semi-infinite tight-binding leads with nearest-neighbor hopping J.
// Propagating band: omega = 2 J cos k, k in (0, pi).
struct ChainLead {
    double hopping = 0.0; // J, nonzero
};

// One side-coupled defect level with complex on-site energy E + i*gamma.
// Positive gamma injects amplitude (gain), negative removes it (loss).
struct DefectSite {
    Complex onsite{0.0, 0.0};
};

// Coupling between two defect sites (indices into DefectBlock::sites).
struct InternalCoupling {
    std::size_t a = 0;
    std::size_t b = 0;
    double strength = 0.0;
};

// Coupling between a defect site and a chain site.
struct Attachment {
    std::size_t defect = 0;
    int chain_site = 0;
    double strength = 0.0;
};

struct DefectBlock {
    std::vector<DefectSite> sites;
    std::vector<InternalCoupling> internal_couplings;
    std::vector<Attachment> attachments;
};

// Attachment topology tag. A: both defects couple to chain sites 0 and 1
// with one amplitude; B: both defects couple to site 0 only, optionally
// linked to each other; C: defect 1 on site 0, defect 2 on site 1.
// Generic carries any defect graph and has no closed forms.
enum class Variant { A, B, C, Generic };

struct ScatteringModel {
    ChainLead lead;
    DefectBlock defects;
    Variant variant = Variant::Generic;
};

// Result of the parity/time-reversal symmetry test. `determined` is false
// for Generic models, where no mirror axis is defined for the defect graph.
struct PTSymmetryReport {
    bool is_pt_symmetric = false;
    bool determined = true;
    std::vector<std::string> violated_conditions;
};

// Builders. All throw InvalidModelError for J == 0 or non-finite inputs.
ScatteringModel build_model_a(double J, double J_par, double E_d, double gamma);
ScatteringModel build_model_b(double J, double J1, double J2, double E_d1, double E_d2,
                              double gamma1, double gamma2, double J_perp);
ScatteringModel build_model_c(double J, double J_perp, double E_d, double gamma);

// Pure structural test; equalities use absolute tolerance 1e-12.
PTSymmetryReport check_pt_symmetry(const ScatteringModel& model);

// True iff omega lies strictly inside the propagating band.
bool in_band(double J, double omega);

// Inverts the dispersion omega = 2 J cos k for the left-incident branch,
// k in (0, pi). Throws OutOfBandError at and beyond the band edges, where
// sin k = 0 makes every scattering formula singular.
double wavenumber(double J, double omega);

// Parameter views for the closed-form variants. Extraction re-validates the
// attachment topology so edited models cannot silently reach a wrong formula.
struct ModelAParams {
    double J, J_par, E_d, gamma;
};
struct ModelBParams {
    double J, J1, J2, E_d1, E_d2, gamma1, gamma2, J_perp;
};
struct ModelCParams {
    double J, J_perp, E_d, gamma;
};

ModelAParams model_a_params(const ScatteringModel& model);
ModelBParams model_b_params(const ScatteringModel& model);
ModelCParams model_c_params(const ScatteringModel& model);

} // namespace fanochain

#endif
