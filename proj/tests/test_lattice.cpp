#include <doctest.h>

#include <rbmlab/lattice.hpp>

#include <set>
#include <stdexcept>

using rbmlab::BlockPartition;
using rbmlab::TorusLattice;

TEST_SUITE("lattice") {

TEST_CASE("row-major indexing and coordinate round trip") {
    TorusLattice lat(5, 2);
    CHECK(lat.volume() == 25);
    CHECK(lat.index(0, 0) == 0);
    CHECK(lat.index(3, 2) == 3 + 5 * 2);
    for (int i = 0; i < lat.volume(); ++i) {
        auto [x, y] = lat.coords(i);
        CHECK(lat.index(x, y) == i);
    }
    // wrapping, including negative coordinates
    CHECK(lat.index(5, 0) == 0);
    CHECK(lat.index(-1, 0) == 4);
    CHECK(lat.index(0, -2) == lat.index(0, 3));
}

TEST_CASE("constructor rejects degenerate sizes") {
    CHECK_THROWS_AS(TorusLattice(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(TorusLattice(4, 0), std::invalid_argument);
    CHECK_NOTHROW(TorusLattice(1, 1));
}

TEST_CASE("neighbors invert and count four directions") {
    TorusLattice lat(6, 1);
    for (int i = 0; i < lat.volume(); ++i) {
        CHECK(lat.neighbor(lat.neighbor(i, 0), 1) == i);
        CHECK(lat.neighbor(lat.neighbor(i, 2), 3) == i);
        std::set<int> nb;
        for (int d = 0; d < 4; ++d) nb.insert(lat.neighbor(i, d));
        CHECK(nb.size() == 4);  // L >= 3: all four neighbors distinct
    }
    CHECK_THROWS_AS(lat.neighbor(0, 4), std::invalid_argument);
}

TEST_CASE("L = 2 torus has doubled edges") {
    // on the two-site ring both x-neighbors coincide; the eigenvalue formula
    // 2 sum (1 - cos k) stays exact precisely because multiplicity is kept
    TorusLattice lat(2, 1);
    for (int i = 0; i < lat.volume(); ++i) {
        CHECK(lat.neighbor(i, 0) == lat.neighbor(i, 1));
        CHECK(lat.neighbor(i, 2) == lat.neighbor(i, 3));
    }
}

TEST_CASE("minimal-image displacement and distance") {
    TorusLattice lat(8, 1);
    // one step across the periodic seam is distance 1
    CHECK(lat.distance(lat.index(0, 0), lat.index(7, 0)) == doctest::Approx(1.0));
    CHECK(lat.distance(lat.index(0, 0), lat.index(4, 0)) == doctest::Approx(4.0));
    CHECK(lat.distance(lat.index(1, 1), lat.index(5, 4)) ==
          doctest::Approx(5.0));  // {4, 3} wraps to {-4, 3}; 3-4-5 triangle
    auto d = lat.displacement(lat.index(0, 0), lat.index(6, 0));
    CHECK(d[0] == 2);  // -6 mod 8 -> 2
    CHECK(d[1] == 0);
    // symmetry of the metric
    for (int i : {0, 9, 17})
        for (int j : {3, 22, 63}) CHECK(lat.distance(i, j) == doctest::Approx(lat.distance(j, i)));
}

TEST_CASE("block partition covers the torus with disjoint blocks") {
    TorusLattice lat(8, 2);
    BlockPartition part(lat, 4);
    CHECK(part.block_side() == 4);
    CHECK(part.n_blocks() == 4);
    std::set<int> seen;
    for (int b = 0; b < part.n_blocks(); ++b) {
        CHECK(int(part.sites_of(b).size()) == 16);
        for (int s : part.sites_of(b)) {
            CHECK(part.block_of(s) == b);
            CHECK(seen.insert(s).second);  // no overlaps
        }
    }
    CHECK(int(seen.size()) == lat.volume());
    CHECK_THROWS_AS(BlockPartition(lat, 3), std::invalid_argument);  // 3 does not divide 8
    CHECK_THROWS_AS(BlockPartition(lat, 0), std::invalid_argument);
}

TEST_CASE("default block side tracks W (ln W)^{alpha/2}") {
    // round(W (ln W)^{alpha/2}) clamped to [1, L]
    CHECK(rbmlab::default_block_side(1, 16) == 1);   // ln 1 = 0 handled
    CHECK(rbmlab::default_block_side(2, 16) == 2);   // 2 * (ln 2)^{1/4} = 1.83
    CHECK(rbmlab::default_block_side(8, 64) == 10);  // 8 * (ln 8)^{1/4} = 9.61
    CHECK(rbmlab::default_block_side(8, 4) == 4);    // clamped to L
}

}
