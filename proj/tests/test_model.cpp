#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fanochain/errors.hpp"
#include "fanochain/model.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace fanochain;

TEST_CASE("two-site pair builder places balanced gain and loss") {
    const auto m = build_model_a(0.5, 0.3, 0.5, 0.1);
    CHECK(m.variant == Variant::A);
    CHECK(m.lead.hopping == 0.5);
    REQUIRE(m.defects.sites.size() == 2);
    CHECK(m.defects.sites[0].onsite == Complex(0.5, 0.1));
    CHECK(m.defects.sites[1].onsite == Complex(0.5, -0.1));
    REQUIRE(m.defects.attachments.size() == 4);
    for (const auto& a : m.defects.attachments)
        CHECK(a.strength == 0.3);
    CHECK(m.defects.internal_couplings.empty());

    const auto p = model_a_params(m);
    CHECK(p.J == 0.5);
    CHECK(p.J_par == 0.3);
    CHECK(p.E_d == 0.5);
    CHECK(p.gamma == 0.1);
}

TEST_CASE("two-site pair builder reduces to the Hermitian case at zero gamma") {
    const auto m = build_model_a(0.5, 0.3, 0.5, 0.0);
    CHECK(m.defects.sites[0].onsite == Complex(0.5, 0.0));
    CHECK(m.defects.sites[1].onsite == Complex(0.5, 0.0));
    CHECK(check_pt_symmetry(m).is_pt_symmetric);
}

TEST_CASE("builders reject a dead lead") {
    CHECK_THROWS_AS(build_model_a(0.0, 0.3, 0.5, 0.1), InvalidModelError);
    CHECK_THROWS_AS(build_model_b(0.0, 0.4, 0.4, 0.5, 0.5, 0.05, -0.05, 0.0), InvalidModelError);
    CHECK_THROWS_AS(build_model_c(0.0, 0.3, 0.2, 0.1), InvalidModelError);
}

TEST_CASE("builders reject non-finite parameters") {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(build_model_a(0.5, inf, 0.5, 0.1), InvalidModelError);
    CHECK_THROWS_AS(build_model_b(0.5, 0.4, 0.4, nan, 0.5, 0.0, 0.0, 0.0), InvalidModelError);
    CHECK_THROWS_AS(build_model_c(0.5, 0.3, 0.2, -inf), InvalidModelError);
}

TEST_CASE("one-site pair builder stores parameters as given") {
    const auto m = build_model_b(0.5, 0.4, 0.6, 0.4, -0.5, 0.05, -0.15, 0.0);
    const auto p = model_b_params(m);
    CHECK(p.J1 == 0.4);
    CHECK(p.J2 == 0.6);
    CHECK(p.E_d1 == 0.4);
    CHECK(p.E_d2 == -0.5);
    CHECK(p.gamma1 == 0.05);
    CHECK(p.gamma2 == -0.15);
    CHECK(p.J_perp == 0.0);
}

TEST_CASE("single-defect reduction is a valid one-site model") {
    const auto m = build_model_b(0.5, 0.4, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0);
    const auto p = model_b_params(m);
    CHECK(p.J1 == 0.4);
    CHECK(p.J2 == 0.0);
}

TEST_CASE("mirror-split builder attaches the pair to neighboring sites") {
    const auto m = build_model_c(0.5, 0.3, 0.2, 0.1);
    REQUIRE(m.defects.attachments.size() == 2);
    CHECK(m.defects.attachments[0].chain_site == 0);
    CHECK(m.defects.attachments[1].chain_site == 1);
    const auto p = model_c_params(m);
    CHECK(p.J_perp == 0.3);
    CHECK(p.E_d == 0.2);
    CHECK(p.gamma == 0.1);
}

TEST_CASE("symmetry check accepts balanced one-site pairs") {
    const auto m = build_model_b(0.5, 0.4, 0.4, 0.5, 0.5, 0.05, -0.05, 0.0);
    const auto report = check_pt_symmetry(m);
    CHECK(report.is_pt_symmetric);
    CHECK(report.determined);
    CHECK(report.violated_conditions.empty());
}

TEST_CASE("symmetry check names the broken balance condition") {
    const auto m = build_model_b(0.5, 0.4, 0.4, 0.4, 0.4, 0.05, -0.15, 0.0);
    const auto report = check_pt_symmetry(m);
    CHECK_FALSE(report.is_pt_symmetric);
    REQUIRE(report.violated_conditions.size() == 1);
    CHECK(report.violated_conditions[0] == "gamma-balance");
}

TEST_CASE("symmetry check flags every violated condition") {
    const auto m = build_model_b(0.5, 0.4, 0.6, 0.4, -0.5, 0.05, -0.15, 0.0);
    const auto report = check_pt_symmetry(m);
    CHECK_FALSE(report.is_pt_symmetric);
    CHECK(report.violated_conditions ==
          std::vector<std::string>{"coupling-equality", "onsite-equality", "gamma-balance"});
}

TEST_CASE("mirror-split pair is symmetric about the bond axis") {
    const auto report = check_pt_symmetry(build_model_c(0.5, 0.3, 0.2, 0.1));
    CHECK(report.is_pt_symmetric);
}

TEST_CASE("symmetry of generic graphs is undetermined") {
    ScatteringModel m;
    m.lead.hopping = 0.5;
    m.variant = Variant::Generic;
    m.defects.sites = {DefectSite{Complex(0.1, 0.2)}};
    m.defects.attachments = {Attachment{0, 3, 0.2}};
    const auto report = check_pt_symmetry(m);
    CHECK_FALSE(report.determined);
    CHECK_FALSE(report.is_pt_symmetric);
    CHECK_FALSE(report.violated_conditions.empty());
}

TEST_CASE("symmetry check is pure and repeatable") {
    const auto m = build_model_b(0.5, 0.4, 0.4, 0.4, 0.4, 0.05, -0.15, 0.0);
    const auto first = check_pt_symmetry(m);
    const auto second = check_pt_symmetry(m);
    CHECK(first.is_pt_symmetric == second.is_pt_symmetric);
    CHECK(first.violated_conditions == second.violated_conditions);
}

TEST_CASE("edited two-site model loses its symmetry") {
    auto m = build_model_a(0.5, 0.3, 0.5, 0.1);
    m.defects.sites[1].onsite = Complex(0.6, -0.1);
    const auto report = check_pt_symmetry(m);
    CHECK_FALSE(report.is_pt_symmetric);
    CHECK(report.violated_conditions == std::vector<std::string>{"onsite-equality"});
    CHECK_THROWS_AS(model_a_params(m), InvalidModelError);
}

TEST_CASE("wavenumber inverts the dispersion on the left-incidence branch") {
    CHECK(wavenumber(0.5, 0.5) == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-15));
    CHECK(wavenumber(0.5, 0.0) == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
    CHECK_THROWS_AS(wavenumber(0.5, 1.0), OutOfBandError);
    CHECK_THROWS_AS(wavenumber(0.5, -1.0), OutOfBandError);
    CHECK_THROWS_AS(wavenumber(0.5, 1.7), OutOfBandError);
}

TEST_CASE("dispersion round-trip holds across the open band") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> j_dist(0.1, 2.0);
    std::uniform_real_distribution<double> frac(-0.999999, 0.999999);
    for (int i = 0; i < 2000; ++i) {
        const double J = j_dist(rng) * (i % 2 == 0 ? 1.0 : -1.0);
        const double omega = 2.0 * std::abs(J) * frac(rng);
        const double k = wavenumber(J, omega);
        CHECK(k > 0.0);
        CHECK(k < std::numbers::pi);
        CHECK(std::abs(2.0 * J * std::cos(k) - omega) <= 1e-14);
    }
}

TEST_CASE("builders produce finite fields for finite inputs") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        double J = dist(rng);
        if (J == 0.0)
            J = 0.5;
        const auto a = build_model_a(J, dist(rng), dist(rng), dist(rng));
        const auto b =
            build_model_b(J, dist(rng), dist(rng), dist(rng), dist(rng), dist(rng), dist(rng),
                          dist(rng));
        const auto c = build_model_c(J, dist(rng), dist(rng), dist(rng));
        for (const auto* m : {&a, &b, &c}) {
            CHECK(std::isfinite(m->lead.hopping));
            for (const auto& s : m->defects.sites) {
                CHECK(std::isfinite(s.onsite.real()));
                CHECK(std::isfinite(s.onsite.imag()));
            }
            for (const auto& att : m->defects.attachments)
                CHECK(std::isfinite(att.strength));
        }
    }
}
