#include <cstdio>
#include <fstream>
#include <random>

#include <doctest.h>

#include "ctsid/errors.hpp"
#include "ctsid/estimator.hpp"
#include "ctsid/harness.hpp"
#include "ctsid/io.hpp"

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("dataset CSV round trip is bit exact") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    ctsid::SampledSignal u, y;
    double t = 0.0;
    for (int k = 0; k < 50; ++k) {
        t += 0.1 + 0.01 * (k % 7);
        u.times.push_back(t);
        y.times.push_back(t);
        u.values.push_back(dist(rng));
        y.values.push_back(dist(rng));
    }
    TempFile f("io_roundtrip.csv");
    ctsid::write_dataset_csv(f.path, u, y);
    auto [u2, y2] = ctsid::read_dataset_csv(f.path);
    CHECK(u2.times == u.times);
    CHECK(u2.values == u.values);
    CHECK(y2.values == y.values);
}

TEST_CASE("dataset CSV error handling") {
    CHECK_THROWS_AS(ctsid::read_dataset_csv("does_not_exist.csv"), ctsid::IoError);

    TempFile f("io_badheader.csv");
    std::ofstream(f.path) << "a,b,c\n1,2,3\n";
    CHECK_THROWS_AS(ctsid::read_dataset_csv(f.path), ctsid::IoError);

    TempFile g("io_badfield.csv");
    std::ofstream(g.path) << "t,u,y\n0,zzz,1\n";
    CHECK_THROWS_AS(ctsid::read_dataset_csv(g.path), ctsid::IoError);

    TempFile h("io_badcols.csv");
    std::ofstream(h.path) << "t,u,y\n0,1\n";
    CHECK_THROWS_AS(ctsid::read_dataset_csv(h.path), ctsid::IoError);
}

TEST_CASE("dataset writer rejects mismatched grids") {
    ctsid::SampledSignal u, y;
    u.times = {0.0, 1.0};
    u.values = {1.0, 2.0};
    y.times = {0.0, 2.0};
    y.values = {1.0, 2.0};
    TempFile f("io_mismatch.csv");
    CHECK_THROWS_AS(ctsid::write_dataset_csv(f.path, u, y), ctsid::DimensionMismatch);
}

TEST_CASE("multisine round trip") {
    ctsid::Multisine ms = ctsid::benchmark_input();
    ms.offset = 0.123456789012345;
    TempFile f("io_ms.txt");
    ctsid::write_multisine(f.path, ms);
    ctsid::Multisine back = ctsid::read_multisine(f.path);
    CHECK(back.offset == ms.offset);
    REQUIRE(back.components.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.components[i].amp == ms.components[i].amp);
        CHECK(back.components[i].omega == ms.components[i].omega);
        CHECK(back.components[i].phase == ms.components[i].phase);
    }
}

TEST_CASE("multisine reader validates structure") {
    TempFile f("io_ms_bad.txt");
    std::ofstream(f.path) << "amp,freq_rad_s,phase_rad\n1,1,0\n";
    CHECK_THROWS_AS(ctsid::read_multisine(f.path), ctsid::IoError);

    TempFile g("io_ms_dup.txt");
    std::ofstream(g.path) << "offset=0\namp,freq_rad_s,phase_rad\n1,1,0\n1,1,0\n";
    CHECK_THROWS_AS(ctsid::read_multisine(g.path), ctsid::Error);  // duplicate frequency
}

TEST_CASE("report writer emits the iteration history") {
    ctsid::ThetaVector th = ctsid::ThetaVector::from_polys(
        ctsid::Polynomial{1.0, 0.7, 0.25}, ctsid::Polynomial{1.25}, {2, 0});
    ctsid::EstimationResult res{th, true, {}, ctsid::TransferFunction(th.num(), th.den())};
    res.iterations.push_back({1, th, 0.5, false, 10.0});
    res.iterations.push_back({2, th, 1e-6, true, 12.0});

    TempFile f("io_report.txt");
    ctsid::write_report(f.path, res, "srivc-c");
    std::ifstream in(f.path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "estimator=srivc-c");
    std::getline(in, line);
    CHECK(line == "converged=1");
    std::getline(in, line);
    CHECK(line == "iterations=2");
    std::getline(in, line);
    CHECK(line.rfind("theta=", 0) == 0);
    CHECK(line.find("0.69999999999999996") != std::string::npos);
    int history_lines = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++history_lines;
    CHECK(history_lines == 3);  // header + 2 iterations
}
