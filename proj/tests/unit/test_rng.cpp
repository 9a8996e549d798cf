#include <doctest.h>

#include <cmath>
#include <vector>

#include "icb/rng.hpp"

using icb::RngStream;

TEST_CASE("identical (seed, stream) reproduce the draw sequence") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("different streams of one seed do not collide") {
    RngStream a(42, 0), b(42, 1);
    int same = 0;
    for (int i = 0; i < 1000; ++i) {
        if (a.next_u64() == b.next_u64()) ++same;
    }
    CHECK(same == 0);
}

TEST_CASE("keyed access is position independent") {
    RngStream a(9, 3), b(9, 3);
    (void)a.next_u64();
    (void)a.next_u64();
    (void)a.next_u64();
    CHECK(a.unit_at(5) == b.unit_at(5));
    CHECK(a.u64_at(0) == b.u64_at(0));
}

TEST_CASE("units land in [0,1) and look uniform") {
    RngStream rng(123, 0);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    // mean 1/2 +- 5 sigma (sigma = sqrt(1/12n)), variance near 1/12
    CHECK(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / (12.0 * n)));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("substreams are reproducible and distinct") {
    RngStream parent(5, 0);
    RngStream c1 = parent.substream(1);
    RngStream c2 = parent.substream(2);
    RngStream c1b = RngStream(5, 0).substream(1);
    CHECK(c1.next_u64() == c1b.next_u64());
    CHECK(c1.next_u64() != c2.next_u64());
}
