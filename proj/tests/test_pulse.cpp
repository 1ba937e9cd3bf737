#include <doctest.h>

#include <cstdio>

#include "blockade/pulse.hpp"
#include "blockade/rng.hpp"

using namespace blockade;

TEST_CASE("pulse validation catches shape errors") {
    PulseSequence p = PulseSequence::constant(1e-6, 4, {"m0"}, {Complex(1.0, 2.0)});
    CHECK_NOTHROW(p.validate());
    CHECK(p.steps() == 4);
    CHECK(p.duration() == doctest::Approx(4e-6));
    PulseSequence bad = p;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.channel_names.push_back("extra");
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.channels.push_back({Complex(0.0)});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("pulse csv round trip is exact") {
    Rng rng(11);
    PulseSequence p;
    p.dt = 5e-8;
    p.channel_names = {"m0", "m1"};
    p.channels.resize(2);
    for (int c = 0; c < 2; ++c)
        for (int k = 0; k < 17; ++k)
            p.channels[c].push_back(rng.normal_complex() * 1e4);
    std::string path = "pulse_roundtrip_test.csv";
    p.save_csv(path);
    PulseSequence q = PulseSequence::load_csv(path);
    std::remove(path.c_str());
    CHECK(q.dt == p.dt);
    CHECK(q.channel_names == p.channel_names);
    REQUIRE(q.steps() == p.steps());
    for (int c = 0; c < 2; ++c)
        for (int k = 0; k < 17; ++k) CHECK(q.channels[c][k] == p.channels[c][k]);
}
