#include "biphoton/sweep_io.hpp"

#include "biphoton/counting.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

using namespace biphoton;
using Catch::Matchers::WithinAbs;

namespace {

SweepResult random_sweep(std::mt19937& gen, bool with_missing) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> counts(0, 2000000);
    SweepResult sweep;
    const int n = 30;
    for (int i = 0; i < n; ++i) {
        SweepRow row;
        row.retardation_nm = 13.7 * i + unif(gen);
        row.phi_rad = 2.0 * std::numbers::pi * row.retardation_nm / 885.0;
        row.counts_vv = counts(gen);
        row.counts_vh = counts(gen);
        if (!with_missing || unif(gen) > 0.2) {
            row.intensity_norm = unif(gen);
            row.intensity_sigma = unif(gen) * 0.01;
        }
        sweep.rows.push_back(row);
    }
    return sweep;
}

void require_equal(const SweepResult& a, const SweepResult& b) {
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        REQUIRE_THAT(b.rows[i].retardation_nm,
                     WithinAbs(a.rows[i].retardation_nm, 1e-12 * (1.0 + std::abs(a.rows[i].retardation_nm))));
        REQUIRE_THAT(b.rows[i].phi_rad,
                     WithinAbs(a.rows[i].phi_rad, 1e-12 * (1.0 + std::abs(a.rows[i].phi_rad))));
        REQUIRE(b.rows[i].counts_vv == a.rows[i].counts_vv);
        REQUIRE(b.rows[i].counts_vh == a.rows[i].counts_vh);
        REQUIRE(b.rows[i].intensity_norm.has_value() == a.rows[i].intensity_norm.has_value());
        if (a.rows[i].intensity_norm) {
            REQUIRE_THAT(*b.rows[i].intensity_norm, WithinAbs(*a.rows[i].intensity_norm, 1e-12));
            REQUIRE_THAT(*b.rows[i].intensity_sigma, WithinAbs(*a.rows[i].intensity_sigma, 1e-12));
        }
    }
}

}  // namespace

TEST_CASE("write-read round trip preserves sweeps") {
    std::mt19937 gen(777);
    for (int trial = 0; trial < 20; ++trial) {
        const SweepResult original = random_sweep(gen, trial % 2 == 1);
        std::stringstream buffer;
        write_sweep_csv(buffer, original);
        const SweepResult recovered = read_sweep_csv(buffer);
        require_equal(original, recovered);
    }
}

TEST_CASE("written header matches the documented format") {
    SweepResult sweep;
    SweepRow row;
    row.retardation_nm = 1.0;
    sweep.rows.push_back(row);
    std::stringstream buffer;
    write_sweep_csv(buffer, sweep);
    std::string first_line;
    std::getline(buffer, first_line);
    REQUIRE(first_line == "retardation_nm,phi_rad,counts_vv,counts_vh,intensity_norm,intensity_sigma");
}

TEST_CASE("missing intensity writes empty fields") {
    SweepResult sweep;
    SweepRow row;
    row.retardation_nm = 5.0;
    row.phi_rad = 0.03;
    row.counts_vv = 0;
    row.counts_vh = 0;
    sweep.rows.push_back(row);
    std::stringstream buffer;
    write_sweep_csv(buffer, sweep);
    std::string line;
    std::getline(buffer, line);  // header
    std::getline(buffer, line);
    REQUIRE(line == "5,0.03,0,0,,");
}

TEST_CASE("reals carry enough digits to survive the trip") {
    SweepResult sweep;
    SweepRow row;
    row.retardation_nm = 1234.56789012345;
    row.phi_rad = 8.765432109876543;
    row.intensity_norm = 0.123456789012345;
    row.intensity_sigma = 3.14159265358979e-3;
    sweep.rows.push_back(row);
    std::stringstream buffer;
    write_sweep_csv(buffer, sweep);
    const SweepResult recovered = read_sweep_csv(buffer);
    REQUIRE_THAT(recovered.rows[0].retardation_nm, WithinAbs(row.retardation_nm, 1e-11));
    REQUIRE_THAT(*recovered.rows[0].intensity_norm, WithinAbs(*row.intensity_norm, 1e-14));
}

TEST_CASE("header mismatch is reported on line one") {
    std::stringstream buffer("wrong,header\n1,2,3,4,5,6\n");
    try {
        read_sweep_csv(buffer);
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        REQUIRE(e.line == 1);
        REQUIRE(std::string(e.what()).find("header") != std::string::npos);
    }
}

TEST_CASE("empty input is rejected") {
    std::stringstream buffer("");
    REQUIRE_THROWS_AS(read_sweep_csv(buffer), CsvError);
}

TEST_CASE("malformed rows cite their line number") {
    const std::string header =
        "retardation_nm,phi_rad,counts_vv,counts_vh,intensity_norm,intensity_sigma\n";

    SECTION("bad real on line 3") {
        std::stringstream buffer(header + "1,0.1,5,5,0.5,0.01\nabc,0.2,5,5,0.5,0.01\n");
        try {
            read_sweep_csv(buffer);
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            REQUIRE(e.line == 3);
            REQUIRE(std::string(e.what()).find("line 3") != std::string::npos);
            REQUIRE(std::string(e.what()).find("retardation_nm") != std::string::npos);
        }
    }
    SECTION("negative count") {
        std::stringstream buffer(header + "1,0.1,-4,5,0.5,0.01\n");
        try {
            read_sweep_csv(buffer);
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            REQUIRE(e.line == 2);
            REQUIRE(std::string(e.what()).find("counts_vv") != std::string::npos);
        }
    }
    SECTION("fractional count") {
        std::stringstream buffer(header + "1,0.1,4.5,5,0.5,0.01\n");
        REQUIRE_THROWS_AS(read_sweep_csv(buffer), CsvError);
    }
    SECTION("wrong field count") {
        std::stringstream buffer(header + "1,0.1,4,5,0.5\n");
        try {
            read_sweep_csv(buffer);
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            REQUIRE(e.line == 2);
            REQUIRE(std::string(e.what()).find("6 fields") != std::string::npos);
        }
    }
    SECTION("non-increasing retardation") {
        std::stringstream buffer(header + "10,0.1,4,5,0.5,0.01\n10,0.2,4,5,0.5,0.01\n");
        try {
            read_sweep_csv(buffer);
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            REQUIRE(e.line == 3);
            REQUIRE(std::string(e.what()).find("increasing") != std::string::npos);
        }
    }
}

TEST_CASE("CRLF line endings and trailing blank lines are tolerated") {
    const std::string text =
        "retardation_nm,phi_rad,counts_vv,counts_vh,intensity_norm,intensity_sigma\r\n"
        "1,0.1,5,6,0.45,0.01\r\n"
        "2,0.2,7,8,0.47,0.01\r\n"
        "\r\n"
        "\n";
    std::stringstream buffer(text);
    const SweepResult sweep = read_sweep_csv(buffer);
    REQUIRE(sweep.rows.size() == 2);
    REQUIRE(sweep.rows[1].counts_vv == 7);
    REQUIRE_THAT(*sweep.rows[1].intensity_norm, WithinAbs(0.47, 1e-12));
}

TEST_CASE("file round trip through the path overloads") {
    const auto dir = std::filesystem::temp_directory_path() / "biphoton_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "sweep.csv";

    SweepConfig cfg;
    cfg.n_points = 25;
    cfg.seed = 5;
    const SweepResult sweep = run_sweep(SourceModel{.z = 1.0, .b = 0.37}, cfg);
    write_sweep_csv(path, sweep);
    const SweepResult recovered = read_sweep_csv(path);
    require_equal(sweep, recovered);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unreadable and unwritable paths are reported") {
    REQUIRE_THROWS_AS(read_sweep_csv(std::filesystem::path("/nonexistent/nowhere.csv")),
                      std::runtime_error);
    SweepResult sweep;
    REQUIRE_THROWS_AS(write_sweep_csv(std::filesystem::path("/nonexistent/nowhere.csv"), sweep),
                      std::runtime_error);
}
