#include "fanochain/model.hpp"

#include "fanochain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fanochain {

namespace {

constexpr double kPtTol = 1e-12; // absolute tolerance for symmetry equalities

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "non-finite model parameter " << name << " = " << value;
        throw InvalidModelError(msg.str());
    }
}

void require_lead(double J) {
    require_finite(J, "J");
    if (J == 0.0)
        throw InvalidModelError("lead hopping J must be nonzero: the chain has no band otherwise");
}

bool near(double a, double b) { return std::abs(a - b) <= kPtTol; }

} // namespace

ScatteringModel build_model_a(double J, double J_par, double E_d, double gamma) {
    require_lead(J);
    require_finite(J_par, "J_par");
    require_finite(E_d, "E_d");
    require_finite(gamma, "gamma");

    ScatteringModel m;
    m.lead.hopping = J;
    m.variant = Variant::A;
    m.defects.sites = {DefectSite{Complex(E_d, gamma)}, DefectSite{Complex(E_d, -gamma)}};
    m.defects.attachments = {
        Attachment{0, 0, J_par},
        Attachment{0, 1, J_par},
        Attachment{1, 0, J_par},
        Attachment{1, 1, J_par},
    };
    return m;
}

ScatteringModel build_model_b(double J, double J1, double J2, double E_d1, double E_d2,
                              double gamma1, double gamma2, double J_perp) {
    require_lead(J);
    require_finite(J1, "J1");
    require_finite(J2, "J2");
    require_finite(E_d1, "E_d1");
    require_finite(E_d2, "E_d2");
    require_finite(gamma1, "gamma1");
    require_finite(gamma2, "gamma2");
    require_finite(J_perp, "J_perp");

    ScatteringModel m;
    m.lead.hopping = J;
    m.variant = Variant::B;
    m.defects.sites = {DefectSite{Complex(E_d1, gamma1)}, DefectSite{Complex(E_d2, gamma2)}};
    m.defects.attachments = {Attachment{0, 0, J1}, Attachment{1, 0, J2}};
    m.defects.internal_couplings = {InternalCoupling{0, 1, J_perp}};
    return m;
}

ScatteringModel build_model_c(double J, double J_perp, double E_d, double gamma) {
    require_lead(J);
    require_finite(J_perp, "J_perp");
    require_finite(E_d, "E_d");
    require_finite(gamma, "gamma");

    ScatteringModel m;
    m.lead.hopping = J;
    m.variant = Variant::C;
    m.defects.sites = {DefectSite{Complex(E_d, gamma)}, DefectSite{Complex(E_d, -gamma)}};
    m.defects.attachments = {Attachment{0, 0, J_perp}, Attachment{1, 1, J_perp}};
    return m;
}

PTSymmetryReport check_pt_symmetry(const ScatteringModel& model) {
    PTSymmetryReport report;

    if (model.variant == Variant::Generic) {
        // No parity operator is defined for an arbitrary attachment pattern,
        // so the test is reported as undetermined instead of guessing an axis.
        report.determined = false;
        report.is_pt_symmetric = false;
        report.violated_conditions = {"parity-axis-undetermined"};
        return report;
    }

    const auto& sites = model.defects.sites;
    const auto& att = model.defects.attachments;
    if (sites.size() != 2)
        throw InvalidModelError("variants A/B/C carry exactly two defect sites");

    // Mirror exchanges the two defects (and, for variant C, chain sites 0 and 1),
    // time reversal conjugates. Invariance needs equal mirrored couplings,
    // equal real on-site energies, and opposite imaginary parts.
    bool couplings_ok = true;
    switch (model.variant) {
    case Variant::A:
    case Variant::C:
        for (std::size_t i = 1; i < att.size(); ++i)
            couplings_ok = couplings_ok && near(att[i].strength, att[0].strength);
        break;
    case Variant::B: {
        const double J1 = att.at(0).strength;
        const double J2 = att.at(1).strength;
        couplings_ok = near(J1, J2);
        break;
    }
    case Variant::Generic:
        break;
    }

    if (!couplings_ok)
        report.violated_conditions.emplace_back("coupling-equality");
    if (!near(sites[0].onsite.real(), sites[1].onsite.real()))
        report.violated_conditions.emplace_back("onsite-equality");
    if (!near(sites[0].onsite.imag(), -sites[1].onsite.imag()))
        report.violated_conditions.emplace_back("gamma-balance");

    report.is_pt_symmetric = report.violated_conditions.empty();
    return report;
}

bool in_band(double J, double omega) { return std::abs(omega) < 2.0 * std::abs(J); }

double wavenumber(double J, double omega) {
    if (J == 0.0)
        throw InvalidModelError("lead hopping J must be nonzero");
    if (!in_band(J, omega)) {
        std::ostringstream msg;
        msg << "omega = " << omega << " outside the open band (-" << 2.0 * std::abs(J) << ", "
            << 2.0 * std::abs(J) << ")";
        throw OutOfBandError(msg.str());
    }
    return std::acos(omega / (2.0 * J));
}

namespace {

[[noreturn]] void wrong_variant(const char* wanted) {
    throw InvalidModelError(std::string("model does not have the ") + wanted +
                            " attachment topology");
}

} // namespace

ModelAParams model_a_params(const ScatteringModel& model) {
    if (model.variant != Variant::A)
        wrong_variant("variant-A");
    const auto& d = model.defects;
    if (d.sites.size() != 2 || d.attachments.size() != 4 || !d.internal_couplings.empty())
        wrong_variant("variant-A");

    const double J_par = d.attachments[0].strength;
    bool site0_seen[2] = {false, false};
    bool site1_seen[2] = {false, false};
    for (const auto& a : d.attachments) {
        if (a.defect > 1 || (a.chain_site != 0 && a.chain_site != 1) ||
            a.strength != J_par)
            wrong_variant("variant-A");
        (a.chain_site == 0 ? site0_seen : site1_seen)[a.defect] = true;
    }
    if (!(site0_seen[0] && site0_seen[1] && site1_seen[0] && site1_seen[1]))
        wrong_variant("variant-A");
    if (d.sites[0].onsite.real() != d.sites[1].onsite.real() ||
        d.sites[0].onsite.imag() != -d.sites[1].onsite.imag())
        wrong_variant("variant-A");

    return ModelAParams{model.lead.hopping, J_par, d.sites[0].onsite.real(),
                        d.sites[0].onsite.imag()};
}

ModelBParams model_b_params(const ScatteringModel& model) {
    if (model.variant != Variant::B)
        wrong_variant("variant-B");
    const auto& d = model.defects;
    if (d.sites.size() != 2 || d.attachments.size() != 2 || d.internal_couplings.size() > 1)
        wrong_variant("variant-B");

    double J1 = 0.0, J2 = 0.0;
    bool seen1 = false, seen2 = false;
    for (const auto& a : d.attachments) {
        if (a.chain_site != 0)
            wrong_variant("variant-B");
        if (a.defect == 0) {
            J1 = a.strength;
            seen1 = true;
        } else if (a.defect == 1) {
            J2 = a.strength;
            seen2 = true;
        } else {
            wrong_variant("variant-B");
        }
    }
    if (!seen1 || !seen2)
        wrong_variant("variant-B");

    double J_perp = 0.0;
    if (!d.internal_couplings.empty()) {
        const auto& link = d.internal_couplings[0];
        if (std::min(link.a, link.b) != 0 || std::max(link.a, link.b) != 1)
            wrong_variant("variant-B");
        J_perp = link.strength;
    }

    return ModelBParams{model.lead.hopping,
                        J1,
                        J2,
                        d.sites[0].onsite.real(),
                        d.sites[1].onsite.real(),
                        d.sites[0].onsite.imag(),
                        d.sites[1].onsite.imag(),
                        J_perp};
}

ModelCParams model_c_params(const ScatteringModel& model) {
    if (model.variant != Variant::C)
        wrong_variant("variant-C");
    const auto& d = model.defects;
    if (d.sites.size() != 2 || d.attachments.size() != 2 || !d.internal_couplings.empty())
        wrong_variant("variant-C");

    double J_perp = 0.0;
    bool seen1 = false, seen2 = false;
    for (const auto& a : d.attachments) {
        if (a.defect == 0 && a.chain_site == 0) {
            J_perp = a.strength;
            seen1 = true;
        } else if (a.defect == 1 && a.chain_site == 1) {
            seen2 = true;
        } else {
            wrong_variant("variant-C");
        }
    }
    if (!seen1 || !seen2 || d.attachments[0].strength != d.attachments[1].strength)
        wrong_variant("variant-C");
    if (d.sites[0].onsite.real() != d.sites[1].onsite.real() ||
        d.sites[0].onsite.imag() != -d.sites[1].onsite.imag())
        wrong_variant("variant-C");

    return ModelCParams{model.lead.hopping, J_perp, d.sites[0].onsite.real(),
                        d.sites[0].onsite.imag()};
}

} // namespace fanochain
