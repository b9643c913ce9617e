#include "fanochain/oracle.hpp"

#include "fanochain/analytic.hpp"
#include "fanochain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fanochain {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kResidualFactor = 1e-10;

Complex phase_factor(double k, int n) { return std::exp(Complex(0.0, k * n)); }

double vector_norm(const std::vector<Complex>& v) {
    double sum = 0.0;
    for (const auto& c : v)
        sum += std::norm(c);
    return std::sqrt(sum);
}

// Eigenvalues of the isolated defect block, used only for the singular-solve
// diagnostic: poles of the eliminated defect response sit at these energies.
std::vector<Complex> defect_block_levels(const ScatteringModel& model) {
    const auto& d = model.defects;
    if (d.sites.size() == 1)
        return {d.sites[0].onsite};
    if (d.sites.size() == 2) {
        double link = 0.0;
        for (const auto& c : d.internal_couplings)
            link += c.strength;
        const Complex half_sum = 0.5 * (d.sites[0].onsite + d.sites[1].onsite);
        const Complex half_diff = 0.5 * (d.sites[0].onsite - d.sites[1].onsite);
        const Complex disc = std::sqrt(half_diff * half_diff + link * link);
        return {half_sum - disc, half_sum + disc};
    }
    return {};
}

// Defects connected to the chain directly or through internal links; only
// these enter the linear system.
std::vector<std::size_t> find_active_defects(const DefectBlock& defects) {
    const std::size_t n = defects.sites.size();
    std::vector<bool> active(n, false);
    for (const auto& a : defects.attachments) {
        if (a.strength != 0.0 && a.defect < n)
            active[a.defect] = true;
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& c : defects.internal_couplings) {
            if (c.strength == 0.0 || c.a >= n || c.b >= n)
                continue;
            if (active[c.a] != active[c.b]) {
                active[c.a] = active[c.b] = true;
                grew = true;
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
        if (active[j])
            out.push_back(j);
    }
    return out;
}

} // namespace

LinearScatteringSystem assemble(const ScatteringModel& model, double omega, int extra_margin) {
    if (model.lead.hopping == 0.0)
        throw InvalidModelError("lead hopping J must be nonzero");
    if (extra_margin < 0)
        throw InvalidModelError("window margin must be nonnegative");
    for (const auto& a : model.defects.attachments) {
        if (a.defect >= model.defects.sites.size())
            throw InvalidModelError("attachment references a missing defect site");
    }
    for (const auto& c : model.defects.internal_couplings) {
        if (c.a >= model.defects.sites.size() || c.b >= model.defects.sites.size())
            throw InvalidModelError("internal coupling references a missing defect site");
    }

    const double J = model.lead.hopping;
    const double k = wavenumber(J, omega); // throws outside the open band

    int min_att = 0, max_att = 0;
    if (!model.defects.attachments.empty()) {
        min_att = std::numeric_limits<int>::max();
        max_att = std::numeric_limits<int>::min();
        for (const auto& a : model.defects.attachments) {
            min_att = std::min(min_att, a.chain_site);
            max_att = std::max(max_att, a.chain_site);
        }
    }

    LinearScatteringSystem sys;
    sys.n_min = min_att - 1 - extra_margin;
    sys.n_max = max_att + 1 + extra_margin;
    sys.omega = omega;
    sys.k = k;
    sys.active_defects = find_active_defects(model.defects);

    std::vector<std::size_t> slot_of(model.defects.sites.size(),
                                     std::numeric_limits<std::size_t>::max());
    for (std::size_t slot = 0; slot < sys.active_defects.size(); ++slot)
        slot_of[sys.active_defects[slot]] = slot;
    const auto is_active = [&](std::size_t j) {
        return slot_of[j] != std::numeric_limits<std::size_t>::max();
    };

    const std::size_t window = static_cast<std::size_t>(sys.n_max - sys.n_min + 1);
    const std::size_t n = window + sys.active_defects.size() + 2;
    sys.matrix = ComplexMatrix(n, n);
    sys.rhs.assign(n, Complex(0.0, 0.0));

    ComplexMatrix& M = sys.matrix;
    std::size_t eq = 0;

    // Bulk equations: omega A_n = J A_{n-1} + J A_{n+1} + sum couplings B_j.
    for (int site = sys.n_min; site <= sys.n_max; ++site, ++eq) {
        M(eq, sys.index_chain(site)) += omega;

        if (site - 1 >= sys.n_min) {
            M(eq, sys.index_chain(site - 1)) -= J;
        } else {
            // Left neighbor is in the incoming lead: I e^{ikn} + r e^{-ikn}.
            M(eq, sys.index_r()) -= J * phase_factor(-k, site - 1);
            sys.rhs[eq] += J * phase_factor(k, site - 1);
        }
        if (site + 1 <= sys.n_max) {
            M(eq, sys.index_chain(site + 1)) -= J;
        } else {
            // Right neighbor is in the outgoing lead: t e^{ikn}.
            M(eq, sys.index_t()) -= J * phase_factor(k, site + 1);
        }
        for (const auto& a : model.defects.attachments) {
            if (a.chain_site == site && is_active(a.defect))
                M(eq, sys.index_defect(slot_of[a.defect])) -= a.strength;
        }
    }

    // Defect equations: omega B_j = onsite_j B_j + couplings to chain and partners.
    for (const std::size_t j : sys.active_defects) {
        M(eq, sys.index_defect(slot_of[j])) += omega - model.defects.sites[j].onsite;
        for (const auto& a : model.defects.attachments) {
            if (a.defect == j)
                M(eq, sys.index_chain(a.chain_site)) -= a.strength;
        }
        for (const auto& c : model.defects.internal_couplings) {
            if (c.a == j && is_active(c.b))
                M(eq, sys.index_defect(slot_of[c.b])) -= c.strength;
            else if (c.b == j && is_active(c.a))
                M(eq, sys.index_defect(slot_of[c.a])) -= c.strength;
        }
        ++eq;
    }

    // Lead matching, reduced via omega - J e^{-+ik} = J e^{+-ik}.
    M(eq, sys.index_chain(sys.n_min)) = 1.0;
    M(eq, sys.index_r()) = -phase_factor(-k, sys.n_min);
    sys.rhs[eq] = phase_factor(k, sys.n_min);
    ++eq;
    M(eq, sys.index_chain(sys.n_max)) = 1.0;
    M(eq, sys.index_t()) = -phase_factor(k, sys.n_max);

    return sys;
}

OracleSolution solve_scattering(const ScatteringModel& model, double omega, int extra_margin) {
    const LinearScatteringSystem sys = assemble(model, omega, extra_margin);

    LinearSolveResult solved;
    try {
        solved = solve_full_pivot(sys.matrix, sys.rhs);
    } catch (const SingularSystemError&) {
        std::ostringstream msg;
        msg << "scattering system singular at omega = " << omega;
        for (const auto& level : defect_block_levels(model))
            msg << "; defect-block level at " << level.real() << (level.imag() < 0 ? " - " : " + ")
                << std::abs(level.imag()) << "i";
        throw SingularSystemError(msg.str());
    }

    if (solved.condition_estimate > kConditionLimit) {
        std::ostringstream msg;
        msg << "scattering system numerically singular at omega = " << omega
            << " (condition estimate " << solved.condition_estimate << ")";
        for (const auto& level : defect_block_levels(model))
            msg << "; defect-block level at " << level.real() << (level.imag() < 0 ? " - " : " + ")
                << std::abs(level.imag()) << "i";
        throw SingularSystemError(msg.str());
    }

    const double bound =
        kResidualFactor * sys.matrix.frobenius_norm() * std::max(vector_norm(solved.x), 1.0);
    if (solved.residual_norm > bound) {
        std::ostringstream msg;
        msg << "solve rejected at omega = " << omega << ": residual " << solved.residual_norm
            << " exceeds backward-error bound " << bound;
        throw SingularSystemError(msg.str());
    }

    OracleSolution out;
    out.omega = omega;
    out.k = sys.k;
    out.n_min = sys.n_min;
    out.n_max = sys.n_max;
    out.r = solved.x[sys.index_r()];
    out.t = solved.x[sys.index_t()];
    for (int site = sys.n_min; site <= sys.n_max; ++site)
        out.chain_amplitudes.push_back(solved.x[sys.index_chain(site)]);
    out.defect_amplitudes.assign(model.defects.sites.size(), Complex(0.0, 0.0));
    for (std::size_t slot = 0; slot < sys.active_defects.size(); ++slot)
        out.defect_amplitudes[sys.active_defects[slot]] = solved.x[sys.index_defect(slot)];
    out.T = std::norm(out.t);
    out.R = std::norm(out.r);
    out.phase_sigma = std::arg(out.t);
    if (out.phase_sigma <= -std::numbers::pi)
        out.phase_sigma += 2.0 * std::numbers::pi;
    out.residual_norm = solved.residual_norm;
    out.condition_estimate = solved.condition_estimate;
    return out;
}

CompareReport compare(const ScatteringModel& model, const std::vector<double>& omega_grid) {
    if (model.variant == Variant::Generic)
        throw UnsupportedAnalysisError("compare() needs a variant with closed forms");

    CompareReport report;
    report.rows.reserve(omega_grid.size());

    for (const double omega : omega_grid) {
        CompareRow row;
        row.omega = omega;

        ScatteringSolution closed;
        bool closed_ok = true;
        try {
            closed = amplitudes(model, omega);
        } catch (const PoleError& e) {
            closed_ok = false;
            row.skipped = true;
            row.reason = std::string("pole: ") + e.what();
        }
        if (closed_ok && closed.flag != SolutionFlag::none) {
            row.skipped = true;
            row.reason = closed.flag == SolutionFlag::pole_limit ? "pole-limit" : "removable-limit";
        }

        if (!row.skipped) {
            try {
                const OracleSolution direct = solve_scattering(model, omega);
                row.dev_t = std::abs(closed.t - direct.t);
                row.dev_r = std::abs(closed.r - direct.r);
                if (row.dev_t > report.max_dev_t) {
                    report.max_dev_t = row.dev_t;
                    report.at_omega_t = omega;
                }
                if (row.dev_r > report.max_dev_r) {
                    report.max_dev_r = row.dev_r;
                    report.at_omega_r = omega;
                }
                ++report.compared;
            } catch (const SingularSystemError& e) {
                row.skipped = true;
                row.reason = std::string("oracle-singular: ") + e.what();
            }
        }
        if (row.skipped)
            ++report.skipped;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace fanochain
