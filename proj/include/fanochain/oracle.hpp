#ifndef FANOCHAIN_ORACLE_HPP
#define FANOCHAIN_ORACLE_HPP

#include "fanochain/dense.hpp"
#include "fanochain/model.hpp"

#include <string>
#include <vector>

namespace fanochain {

// Exact stationary scattering system for one frequency.
//
// Unknown ordering: [r, t, A_{n_min} ... A_{n_max}, B_0 ... B_{D-1}], where
// A_n are chain amplitudes inside the solve window and B_j defect amplitudes.
// The incoming amplitude is normalized to I = 1.
//
// Rows: one bulk equation per window site (with the plane-wave forms
// I e^{ikn} + r e^{-ikn} / t e^{ikn} substituted for neighbors outside the
// window), one equation per defect, and two lead-matching rows obtained from
// the bulk equations just outside the window, which the dispersion identity
// omega - J e^{-+ik} = J e^{+-ik} collapses to
//   A_{n_min} - r e^{-ik n_min} = e^{ik n_min},
//   A_{n_max} - t e^{ik n_max}  = 0.
struct LinearScatteringSystem {
    int n_min = 0;
    int n_max = 0;
    double omega = 0.0;
    double k = 0.0;
    ComplexMatrix matrix;
    std::vector<Complex> rhs;
    // Defects with some coupling path to the chain, in original index order.
    // Fully detached levels cannot influence t or r and are left out of the
    // system (their only effect would be a spurious singularity when omega
    // crosses their energy); their amplitudes are reported as zero.
    std::vector<std::size_t> active_defects;

    std::size_t size() const { return rhs.size(); }
    std::size_t index_r() const { return 0; }
    std::size_t index_t() const { return 1; }
    std::size_t index_chain(int n) const { return 2 + static_cast<std::size_t>(n - n_min); }
    std::size_t index_defect(std::size_t active_slot) const {
        return 2 + static_cast<std::size_t>(n_max - n_min + 1) + active_slot;
    }
};

struct OracleSolution {
    double omega = 0.0;
    double k = 0.0;
    Complex t{};
    Complex r{};
    std::vector<Complex> chain_amplitudes; // A_{n_min} .. A_{n_max}
    std::vector<Complex> defect_amplitudes;
    int n_min = 0;
    int n_max = 0;
    double T = 0.0;
    double R = 0.0;
    double phase_sigma = 0.0;
    double residual_norm = 0.0;
    double condition_estimate = 0.0;
};

// Builds the dense system. The default window is [min attachment - 1,
// max attachment + 1]; extra_margin widens it symmetrically (the solution
// must not depend on it). Throws OutOfBandError outside the open band.
LinearScatteringSystem assemble(const ScatteringModel& model, double omega,
                                int extra_margin = 0);

// Full-pivot dense solve of the assembled system. Rejects solves whose
// condition estimate exceeds 1e12 or whose residual fails the backward-error
// bound, throwing SingularSystemError with a nearest-defect-resonance
// diagnostic. This module never evaluates a closed-form amplitude: it shares
// only the model types and wavenumber() with the rest of the library.
OracleSolution solve_scattering(const ScatteringModel& model, double omega,
                                int extra_margin = 0);

struct CompareRow {
    double omega = 0.0;
    double dev_t = 0.0;
    double dev_r = 0.0;
    bool skipped = false;
    std::string reason;
};

struct CompareReport {
    double max_dev_t = 0.0;
    double max_dev_r = 0.0;
    double at_omega_t = 0.0;
    double at_omega_r = 0.0;
    std::size_t compared = 0;
    std::size_t skipped = 0;
    std::vector<CompareRow> rows;
};

// Closed form vs direct solve over a frequency grid. Rows where either side
// sits on a flagged pole/limit point (or the solve is singular) are listed
// but excluded from the maxima.
CompareReport compare(const ScatteringModel& model, const std::vector<double>& omega_grid);

} // namespace fanochain

#endif
