#include "fanochain/io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace fanochain {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

namespace {

Json json_complex(const Complex& z) {
    return Json{{"re", z.real()}, {"im", z.imag()}};
}

std::string variant_name(Variant v) {
    switch (v) {
    case Variant::A:
        return "a";
    case Variant::B:
        return "b";
    case Variant::C:
        return "c";
    case Variant::Generic:
        return "generic";
    }
    return "generic";
}

} // namespace

Json model_to_json(const ScatteringModel& model) {
    Json j;
    j["variant"] = variant_name(model.variant);
    j["J"] = model.lead.hopping;
    switch (model.variant) {
    case Variant::A: {
        const ModelAParams p = model_a_params(model);
        j["J_par"] = p.J_par;
        j["E_d"] = p.E_d;
        j["gamma"] = p.gamma;
        break;
    }
    case Variant::B: {
        const ModelBParams p = model_b_params(model);
        j["J1"] = p.J1;
        j["J2"] = p.J2;
        j["E_d1"] = p.E_d1;
        j["E_d2"] = p.E_d2;
        j["gamma1"] = p.gamma1;
        j["gamma2"] = p.gamma2;
        j["J_perp"] = p.J_perp;
        break;
    }
    case Variant::C: {
        const ModelCParams p = model_c_params(model);
        j["J_perp"] = p.J_perp;
        j["E_d"] = p.E_d;
        j["gamma"] = p.gamma;
        break;
    }
    case Variant::Generic: {
        Json sites = Json::array();
        for (const auto& s : model.defects.sites)
            sites.push_back(json_complex(s.onsite));
        Json attachments = Json::array();
        for (const auto& a : model.defects.attachments)
            attachments.push_back(
                Json{{"defect", a.defect}, {"chain_site", a.chain_site}, {"strength", a.strength}});
        Json internal = Json::array();
        for (const auto& c : model.defects.internal_couplings)
            internal.push_back(Json{{"a", c.a}, {"b", c.b}, {"strength", c.strength}});
        j["sites"] = std::move(sites);
        j["attachments"] = std::move(attachments);
        j["internal_couplings"] = std::move(internal);
        break;
    }
    }
    return j;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     const std::optional<CsvPrefix>& prefix, bool header) {
    const bool oracle_cols = result.source == "both";
    if (header) {
        if (prefix)
            out << prefix->name << ',';
        out << "omega,k,T,R,sum,phase_wrapped,phase_unwrapped,flags";
        if (oracle_cols)
            out << ",T_oracle,R_oracle,dev_t,dev_r";
        out << '\n';
    }
    for (const auto& row : result.rows) {
        if (prefix)
            out << format_double(prefix->value) << ',';
        out << format_double(row.omega) << ',' << format_double(row.k) << ','
            << format_double(row.T) << ',' << format_double(row.R) << ','
            << format_double(row.sum) << ',' << format_double(row.phase_wrapped) << ','
            << format_double(row.phase_unwrapped) << ',' << row.note;
        if (oracle_cols) {
            if (row.t_oracle) {
                out << ',' << format_double(std::norm(*row.t_oracle)) << ','
                    << format_double(std::norm(*row.r_oracle)) << ','
                    << format_double(std::abs(row.t - *row.t_oracle)) << ','
                    << format_double(std::abs(row.r - *row.r_oracle));
            } else {
                out << ",nan,nan,nan,nan";
            }
        }
        out << '\n';
    }
}

Json sweep_to_json(const SweepResult& result) {
    Json rows = Json::array();
    for (const auto& row : result.rows) {
        Json r;
        r["omega"] = row.omega;
        r["k"] = row.k;
        r["T"] = row.T;
        r["R"] = row.R;
        r["sum"] = row.sum;
        r["phase_wrapped"] = row.phase_wrapped;
        r["phase_unwrapped"] = row.phase_unwrapped;
        r["flags"] = row.note;
        if (row.t_oracle) {
            r["T_oracle"] = std::norm(*row.t_oracle);
            r["R_oracle"] = std::norm(*row.r_oracle);
            r["dev_t"] = std::abs(row.t - *row.t_oracle);
            r["dev_r"] = std::abs(row.r - *row.r_oracle);
        }
        rows.push_back(std::move(r));
    }
    Json jumps = Json::array();
    for (const auto& jump : result.jumps) {
        jumps.push_back(Json{{"omega_lo", jump.omega_lo},
                             {"omega_hi", jump.omega_hi},
                             {"sign", jump.sign},
                             {"omega_refined", jump.omega_refined}});
    }
    Json j;
    j["source"] = result.source;
    j["rows"] = std::move(rows);
    j["jumps"] = std::move(jumps);
    if (result.source == "both") {
        j["max_dev_t"] = result.max_dev_t;
        j["max_dev_r"] = result.max_dev_r;
    }
    return j;
}

namespace {

void write_root_rows(std::ostream& out, const char* kind,
                     const std::vector<ResonanceRoot>& roots) {
    for (const auto& root : roots) {
        out << kind << ',' << format_double(root.omega) << ',' << (root.in_band ? 1 : 0) << ','
            << (root.degenerate ? 1 : 0) << '\n';
    }
}

Json roots_to_json(const std::vector<ResonanceRoot>& roots) {
    Json arr = Json::array();
    for (const auto& root : roots)
        arr.push_back(Json{{"omega", root.omega},
                           {"in_band", root.in_band},
                           {"degenerate", root.degenerate}});
    return arr;
}

} // namespace

void write_resonances_csv(std::ostream& out, const ResonanceSet& set) {
    out << "kind,omega,in_band,degenerate\n";
    write_root_rows(out, "perfect_reflection", set.perfect_reflection);
    write_root_rows(out, "perfect_transmission", set.perfect_transmission);
}

Json resonances_to_json(const ResonanceSet& set) {
    Json j;
    j["perfect_reflection"] = roots_to_json(set.perfect_reflection);
    j["perfect_transmission"] = roots_to_json(set.perfect_transmission);
    if (set.critical_gamma)
        j["critical_gamma"] = *set.critical_gamma;
    else
        j["critical_gamma"] = nullptr;
    j["discriminant"] = set.discriminant;
    return j;
}

void write_solution_csv(std::ostream& out, const ScatteringSolution& s) {
    out << "omega,k,T,R,sum,phase,t_re,t_im,r_re,r_im,B1_re,B1_im,B2_re,B2_im,flags\n";
    const char* flag = s.flag == SolutionFlag::pole_limit        ? "pole-limit"
                       : s.flag == SolutionFlag::removable_limit ? "removable-limit"
                                                                 : "";
    out << format_double(s.omega) << ',' << format_double(s.k) << ',' << format_double(s.T) << ','
        << format_double(s.R) << ',' << format_double(s.R + s.T) << ','
        << format_double(s.phase_sigma) << ',' << format_double(s.t.real()) << ','
        << format_double(s.t.imag()) << ',' << format_double(s.r.real()) << ','
        << format_double(s.r.imag()) << ',' << format_double(s.B1.real()) << ','
        << format_double(s.B1.imag()) << ',' << format_double(s.B2.real()) << ','
        << format_double(s.B2.imag()) << ',' << flag << '\n';
}

Json solution_to_json(const ScatteringSolution& s) {
    Json j;
    j["omega"] = s.omega;
    j["k"] = s.k;
    j["t"] = json_complex(s.t);
    j["r"] = json_complex(s.r);
    j["B1"] = json_complex(s.B1);
    j["B2"] = json_complex(s.B2);
    j["T"] = s.T;
    j["R"] = s.R;
    j["sum"] = s.R + s.T;
    j["phase_sigma"] = s.phase_sigma;
    j["flags"] = s.flag == SolutionFlag::pole_limit        ? "pole-limit"
                 : s.flag == SolutionFlag::removable_limit ? "removable-limit"
                                                           : "";
    return j;
}

void write_compare_csv(std::ostream& out, const CompareReport& report) {
    out << "omega,dev_t,dev_r,skipped,reason\n";
    for (const auto& row : report.rows) {
        out << format_double(row.omega) << ',' << format_double(row.dev_t) << ','
            << format_double(row.dev_r) << ',' << (row.skipped ? 1 : 0) << ',' << '"'
            << row.reason << '"' << '\n';
    }
}

Json compare_to_json(const CompareReport& report) {
    Json j;
    j["max_dev_t"] = report.max_dev_t;
    j["max_dev_r"] = report.max_dev_r;
    j["at_omega_t"] = report.at_omega_t;
    j["at_omega_r"] = report.at_omega_r;
    j["compared"] = report.compared;
    j["skipped"] = report.skipped;
    Json skipped = Json::array();
    for (const auto& row : report.rows) {
        if (row.skipped)
            skipped.push_back(Json{{"omega", row.omega}, {"reason", row.reason}});
    }
    j["skipped_rows"] = std::move(skipped);
    return j;
}

} // namespace fanochain
