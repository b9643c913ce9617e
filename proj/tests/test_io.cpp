#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fanochain/io.hpp"
#include "fanochain/model.hpp"
#include "fanochain/sweep.hpp"

#include <charconv>
#include <random>
#include <sstream>

using namespace fanochain;

TEST_CASE("doubles round-trip through the 17-digit format") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double specials[] = {0.1,    1.0 / 3.0, 0.28637229814340937, 1e-300, 1e300,
                               -0.125, 2e-17,     0.999999,            0.0};
    for (const double v : specials) {
        const std::string s = format_double(v);
        double parsed = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), parsed);
        CHECK(parsed == v);
        CHECK(s.find(',') == std::string::npos);
    }
    for (int i = 0; i < 2000; ++i) {
        const double v = dist(rng) * std::pow(10.0, i % 60 - 30);
        const std::string s = format_double(v);
        double parsed = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), parsed);
        CHECK(parsed == v);
    }
}

TEST_CASE("sweep CSV carries the fixed header and one line per row") {
    SweepSpec spec;
    spec.model = build_model_a(0.5, 0.3, 0.5, 0.1);
    spec.steps = 11;
    const auto result = run_sweep(spec);

    std::ostringstream out;
    write_sweep_csv(out, result);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "omega,k,T,R,sum,phase_wrapped,phase_unwrapped,flags");
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) {
        ++lines;
        CHECK(std::count(line.begin(), line.end(), ',') == 7);
    }
    CHECK(lines == 11);
}

TEST_CASE("vary prefix becomes the leading CSV column") {
    SweepSpec spec;
    spec.model = build_model_a(0.5, 0.3, 0.5, 0.1);
    spec.steps = 5;
    const auto result = run_sweep(spec);
    std::ostringstream out;
    write_sweep_csv(out, result, CsvPrefix{"gamma", 0.1});
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "gamma,omega,k,T,R,sum,phase_wrapped,phase_unwrapped,flags");
    std::string row;
    std::getline(in, row);
    double lead_value = 0.0;
    std::from_chars(row.data(), row.data() + row.find(','), lead_value);
    CHECK(lead_value == 0.1);
}

TEST_CASE("oracle sweeps add the deviation columns") {
    SweepSpec spec;
    spec.model = build_model_a(0.5, 0.3, 0.5, 0.1);
    spec.steps = 5;
    spec.use_oracle = true;
    const auto result = run_sweep(spec);
    std::ostringstream out;
    write_sweep_csv(out, result);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "omega,k,T,R,sum,phase_wrapped,phase_unwrapped,flags,T_oracle,R_oracle,dev_t,dev_r");
}

TEST_CASE("sweep JSON exposes rows, jumps and source") {
    SweepSpec spec;
    spec.model = build_model_a(0.5, 0.3, 0.5, 0.1);
    spec.steps = 801;
    const auto result = run_sweep(spec);
    const Json j = sweep_to_json(result);
    CHECK(j["source"] == "analytic");
    REQUIRE(j["rows"].size() == 801);
    CHECK(j["rows"][0].contains("omega"));
    CHECK(j["rows"][0].contains("phase_unwrapped"));
    CHECK(j["jumps"].size() == 2);
    CHECK(j["jumps"][0].contains("sign"));
}

TEST_CASE("serialization is deterministic") {
    SweepSpec spec;
    spec.model = build_model_b(0.5, 0.4, 0.4, 0.5, 0.5, 0.05, -0.05, 0.1);
    spec.steps = 101;
    std::ostringstream a, b;
    write_sweep_csv(a, run_sweep(spec));
    write_sweep_csv(b, run_sweep(spec));
    CHECK(a.str() == b.str());
    CHECK(sweep_to_json(run_sweep(spec)).dump() == sweep_to_json(run_sweep(spec)).dump());
}

TEST_CASE("resonance serialization lists both root kinds") {
    const auto set = resonances_b(build_model_b(0.5, 0.4, 0.4, 0.5, 0.5, 0.05, -0.05, 0.1));
    std::ostringstream out;
    write_resonances_csv(out, set);
    const std::string text = out.str();
    CHECK(text.rfind("kind,omega,in_band,degenerate\n", 0) == 0);
    CHECK(text.find("perfect_reflection,0.41339745962155") != std::string::npos);
    CHECK(text.find("perfect_transmission,0.4") != std::string::npos);

    const Json j = resonances_to_json(set);
    CHECK(j["perfect_reflection"].size() == 2);
    CHECK(j["perfect_transmission"].size() == 1);
    CHECK(j["critical_gamma"] == 0.1);
    CHECK(j["perfect_reflection"][0]["in_band"] == true);
}

TEST_CASE("solution serialization carries amplitudes and flags") {
    const auto s = amplitudes_b(build_model_b(0.5, 0.4, 0.4, 0.5, 0.5, 0.05, -0.05, 0.0), 0.3);
    std::ostringstream out;
    write_solution_csv(out, s);
    CHECK(out.str().find("omega,k,T,R,sum,phase,t_re,t_im,r_re,r_im,B1_re,B1_im,B2_re,B2_im,"
                         "flags") == 0);
    const Json j = solution_to_json(s);
    CHECK(j["T"] == s.T);
    CHECK(j["t"].contains("re"));
    CHECK(j["flags"] == "");
}

TEST_CASE("model echo reflects the variant parameters") {
    const Json a = model_to_json(build_model_a(0.5, 0.3, 0.5, 0.1));
    CHECK(a["variant"] == "a");
    CHECK(a["J_par"] == 0.3);
    const Json b = model_to_json(build_model_b(0.5, 0.4, 0.6, 0.4, -0.5, 0.05, -0.15, 0.0));
    CHECK(b["variant"] == "b");
    CHECK(b["J2"] == 0.6);
    CHECK(b["gamma2"] == -0.15);
    const Json c = model_to_json(build_model_c(0.5, 0.3, 0.2, 0.1));
    CHECK(c["variant"] == "c");
    CHECK(c["J_perp"] == 0.3);
}

TEST_CASE("compare report serialization") {
    std::vector<double> grid{0.1, 0.3, 0.5};
    const auto report = compare(build_model_a(0.5, 0.3, 0.5, 0.1), grid);
    const Json j = compare_to_json(report);
    CHECK(j["compared"] == 3);
    CHECK(j["max_dev_t"].get<double>() <= 1e-9);
    std::ostringstream out;
    write_compare_csv(out, report);
    CHECK(out.str().find("omega,dev_t,dev_r,skipped,reason") == 0);
}
