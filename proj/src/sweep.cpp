#include "fanochain/sweep.hpp"

#include "fanochain/errors.hpp"
#include "fanochain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace fanochain {

namespace {

constexpr double kJumpPhaseThreshold = std::numbers::pi / 2.0;
constexpr double kJumpDipFraction = 1e-3;

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

// Vertex of the parabola through three equally spaced samples; falls back to
// the middle sample when the curvature is not convex.
struct ParabolicMin {
    double x;
    double y;
};

ParabolicMin parabolic_minimum(double x1, double h, double y0, double y1, double y2) {
    const double curvature = y0 - 2.0 * y1 + y2;
    if (!(curvature > 0.0))
        return {x1, y1};
    const double shift = 0.5 * (y0 - y2) / curvature;
    const double y_min = y1 - 0.125 * (y0 - y2) * (y0 - y2) / curvature;
    return {x1 + shift * h, std::max(y_min, 0.0)};
}

// Golden-section minimization; f must be unimodal on [a, b] for full accuracy.
struct GoldenResult {
    double x;
    double y;
};

GoldenResult golden_minimize(const std::function<double(double)>& f, double a, double b) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int iter = 0; iter < 200 && (b - a) > 1e-13; ++iter) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, std::min(f(x), std::min(f1, f2))};
}

std::string flag_label(SolutionFlag flag) {
    switch (flag) {
    case SolutionFlag::pole_limit:
        return "pole-limit";
    case SolutionFlag::removable_limit:
        return "removable-limit";
    case SolutionFlag::none:
        break;
    }
    return "";
}

void append_note(std::string& note, const std::string& extra) {
    if (extra.empty())
        return;
    if (!note.empty())
        note += ';';
    note += extra;
}

} // namespace

std::vector<double> band_grid(double J, std::size_t steps, double margin_rel) {
    const double edge = 2.0 * std::abs(J) * (1.0 - margin_rel);
    std::vector<double> grid(steps);
    for (std::size_t i = 0; i < steps; ++i)
        grid[i] = -edge + 2.0 * edge * static_cast<double>(i) / static_cast<double>(steps - 1);
    return grid;
}

ScatteringModel with_parameter(const ScatteringModel& model, const std::string& name,
                               double value) {
    switch (model.variant) {
    case Variant::A: {
        const ModelAParams p = model_a_params(model);
        if (name == "gamma")
            return build_model_a(p.J, p.J_par, p.E_d, value);
        if (name == "J_par")
            return build_model_a(p.J, value, p.E_d, p.gamma);
        break;
    }
    case Variant::B: {
        ModelBParams p = model_b_params(model);
        if (name == "gamma") {
            p.gamma1 = value;
            p.gamma2 = -value;
        } else if (name == "J_perp") {
            p.J_perp = value;
        } else if (name == "J1") {
            p.J1 = value;
        } else if (name == "J2") {
            p.J2 = value;
        } else if (name == "E_d1") {
            p.E_d1 = value;
        } else if (name == "E_d2") {
            p.E_d2 = value;
        } else {
            break;
        }
        return build_model_b(p.J, p.J1, p.J2, p.E_d1, p.E_d2, p.gamma1, p.gamma2, p.J_perp);
    }
    case Variant::C: {
        const ModelCParams p = model_c_params(model);
        if (name == "gamma")
            return build_model_c(p.J, p.J_perp, p.E_d, value);
        if (name == "J_perp")
            return build_model_c(p.J, value, p.E_d, p.gamma);
        break;
    }
    case Variant::Generic:
        break;
    }
    throw InvalidModelError("parameter '" + name + "' is not sweepable for this model variant");
}

std::vector<PhaseJump> detect_phase_jumps(const std::vector<SweepRow>& rows,
                                          const std::function<double(double)>& transmission) {
    std::vector<PhaseJump> jumps;
    if (rows.size() < 2)
        return jumps;

    double max_t = 0.0;
    for (const auto& row : rows) {
        if (!row.error)
            max_t = std::max(max_t, std::abs(row.t));
    }
    if (max_t == 0.0)
        return jumps;

    // Rows whose phase enters the difference chain. An exact zero of t (a
    // grid point landing on a reflection root) carries no phase; the chain
    // bridges over it so the pi step is not split into two half-steps.
    std::vector<std::size_t> chain;
    chain.reserve(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].error)
            continue;
        if (std::abs(rows[j].t) == 0.0)
            continue;
        chain.push_back(j);
    }
    if (chain.size() < 2)
        return jumps;

    // Grid-only estimate of the local |t| minimum over original rows [lo, hi].
    const auto interpolated_min = [&](std::size_t lo, std::size_t hi) {
        std::size_t m = lo;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = lo; j <= hi; ++j) {
            if (rows[j].error)
                continue;
            const double mag = std::abs(rows[j].t);
            if (mag < best) {
                best = mag;
                m = j;
            }
        }
        double t_min = best;
        double at = rows[m].omega;
        if (m > 0 && m + 1 < rows.size() && !rows[m - 1].error && !rows[m + 1].error) {
            const double h = rows[m + 1].omega - rows[m].omega;
            const auto fit =
                parabolic_minimum(rows[m].omega, h, std::norm(rows[m - 1].t),
                                  std::norm(rows[m].t), std::norm(rows[m + 1].t));
            t_min = std::sqrt(std::max(fit.y, 0.0));
            at = fit.x;
        }
        return std::pair<double, double>{t_min, at};
    };

    // Phase criterion on the chain step chain[c-1] -> chain[c].
    const auto phase_triggers = [&](std::size_t c) {
        return std::abs(rows[chain[c]].phase_unwrapped - rows[chain[c - 1]].phase_unwrapped) >
               kJumpPhaseThreshold;
    };

    std::size_t c = 1;
    while (c < chain.size()) {
        if (!phase_triggers(c)) {
            ++c;
            continue;
        }
        const std::size_t first = c;
        double delta = 0.0;
        while (c < chain.size() && phase_triggers(c)) {
            delta += rows[chain[c]].phase_unwrapped - rows[chain[c - 1]].phase_unwrapped;
            ++c;
        }

        const std::size_t lo = chain[first - 1] >= 1 ? chain[first - 1] - 1 : 0;
        const std::size_t hi = std::min(chain[c - 1] + 1, rows.size() - 1);

        // Dip validation on the true local minimum when an evaluator is
        // available, otherwise on the interpolated grid estimate.
        double t_min;
        double at;
        if (transmission) {
            const auto refined =
                golden_minimize(transmission, rows[lo].omega, rows[hi].omega);
            t_min = std::sqrt(std::max(refined.y, 0.0));
            at = refined.x;
        } else {
            const auto estimate = interpolated_min(lo, hi);
            t_min = estimate.first;
            at = estimate.second;
        }
        if (t_min >= kJumpDipFraction * max_t)
            continue;

        PhaseJump jump;
        jump.omega_lo = rows[chain[first - 1]].omega;
        jump.omega_hi = rows[chain[c - 1]].omega;
        jump.sign = delta > 0.0 ? 1 : -1;
        jump.omega_refined = at;
        jumps.push_back(jump);
    }
    return jumps;
}

SweepResult run_sweep(const SweepSpec& spec) {
    const double J = spec.model.lead.hopping;
    if (J == 0.0)
        throw InvalidModelError("lead hopping J must be nonzero");
    if (spec.steps < 2)
        throw InvalidModelError("a sweep needs at least two grid points");

    const double edge = 2.0 * std::abs(J);
    const double omega_min = spec.omega_min.value_or(-edge * (1.0 - 1e-6));
    const double omega_max = spec.omega_max.value_or(edge * (1.0 - 1e-6));
    if (!(omega_min < omega_max) || !in_band(J, omega_min) || !in_band(J, omega_max))
        throw OutOfBandError("sweep range must lie strictly inside the band, ascending");

    const bool oracle_only = spec.model.variant == Variant::Generic;
    const bool with_oracle = spec.use_oracle || oracle_only;

    SweepResult result;
    result.source = oracle_only ? "oracle" : (with_oracle ? "both" : "analytic");
    result.rows.reserve(spec.steps);

    for (std::size_t i = 0; i < spec.steps; ++i) {
        SweepRow row;
        row.omega = omega_min + (omega_max - omega_min) * static_cast<double>(i) /
                                    static_cast<double>(spec.steps - 1);

        if (oracle_only) {
            try {
                const OracleSolution direct = solve_scattering(spec.model, row.omega);
                row.k = direct.k;
                row.t = direct.t;
                row.r = direct.r;
                row.T = direct.T;
                row.R = direct.R;
                row.sum = direct.R + direct.T;
                row.phase_wrapped = direct.phase_sigma;
            } catch (const SingularSystemError&) {
                row.error = true;
                append_note(row.note, "oracle-singular");
            }
        } else {
            try {
                const ScatteringSolution closed = amplitudes(spec.model, row.omega);
                row.k = closed.k;
                row.t = closed.t;
                row.r = closed.r;
                row.T = closed.T;
                row.R = closed.R;
                row.sum = closed.R + closed.T;
                row.phase_wrapped = closed.phase_sigma;
                row.flag = closed.flag;
                append_note(row.note, flag_label(closed.flag));
            } catch (const PoleError&) {
                row.error = true;
                append_note(row.note, "pole-error");
            }
            if (with_oracle && !row.error) {
                try {
                    const OracleSolution direct = solve_scattering(spec.model, row.omega);
                    row.t_oracle = direct.t;
                    row.r_oracle = direct.r;
                    if (row.flag == SolutionFlag::none) {
                        result.max_dev_t = std::max(result.max_dev_t, std::abs(row.t - direct.t));
                        result.max_dev_r = std::max(result.max_dev_r, std::abs(row.r - direct.r));
                    }
                } catch (const SingularSystemError&) {
                    append_note(row.note, "oracle-singular");
                }
            }
        }

        if (row.error) {
            row.k = row.T = row.R = row.sum = row.phase_wrapped = quiet_nan();
            row.t = row.r = Complex(quiet_nan(), quiet_nan());
        }
        result.rows.push_back(std::move(row));
    }

    // Unwrap with an integer 2*pi offset so unwrapped - wrapped stays an exact
    // multiple of 2*pi; offsets carry across error rows unchanged.
    long turns = 0;
    double prev_wrapped = quiet_nan();
    for (auto& row : result.rows) {
        if (row.error) {
            row.phase_unwrapped = quiet_nan();
            continue;
        }
        if (!std::isnan(prev_wrapped)) {
            const double delta = row.phase_wrapped - prev_wrapped;
            if (delta > std::numbers::pi)
                --turns;
            else if (delta <= -std::numbers::pi)
                ++turns;
        }
        row.phase_unwrapped = row.phase_wrapped + 2.0 * std::numbers::pi * static_cast<double>(turns);
        prev_wrapped = row.phase_wrapped;
    }

    // Jump detection with the matching transmission evaluator: the dip test
    // runs on the true local minimum, not just the grid samples.
    const std::function<double(double)> transmission = [&](double omega) {
        try {
            if (oracle_only)
                return solve_scattering(spec.model, omega).T;
            return amplitudes(spec.model, omega).T;
        } catch (const PoleError&) {
            return 1e300;
        } catch (const SingularSystemError&) {
            return 1e300;
        }
    };
    result.jumps = detect_phase_jumps(result.rows, transmission);

    return result;
}

std::vector<SweepResult> run_sweep_vary(const SweepSpec& spec) {
    if (!spec.vary_name || spec.vary_values.empty()) {
        return {run_sweep(spec)};
    }
    std::vector<SweepResult> results;
    results.reserve(spec.vary_values.size());
    for (const double value : spec.vary_values) {
        SweepSpec single = spec;
        single.model = with_parameter(spec.model, *spec.vary_name, value);
        single.vary_name.reset();
        single.vary_values.clear();
        results.push_back(run_sweep(single));
    }
    return results;
}

ConservationAudit conservation_audit(const ScatteringModel& model,
                                     const std::vector<double>& omega_grid, bool use_oracle) {
    ConservationAudit audit;
    for (const double omega : omega_grid) {
        double sum = quiet_nan();
        if (use_oracle) {
            try {
                const OracleSolution direct = solve_scattering(model, omega);
                sum = direct.R + direct.T;
            } catch (const SingularSystemError&) {
                continue;
            }
        } else {
            try {
                const ScatteringSolution closed = amplitudes(model, omega);
                if (closed.flag != SolutionFlag::none)
                    continue;
                sum = closed.R + closed.T;
            } catch (const PoleError&) {
                continue;
            }
        }
        const double deviation = std::abs(sum - 1.0);
        if (deviation > audit.max_deviation) {
            audit.max_deviation = deviation;
            audit.at_omega = omega;
        }
    }
    return audit;
}

} // namespace fanochain
