#include <doctest.h>

#include <rbmlab/covariance.hpp>
#include <rbmlab/interpolation.hpp>
#include <rbmlab/lattice.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

using rbmlab::BlockPartition;
using rbmlab::covariance;
using rbmlab::CovKind;
using rbmlab::CovOperator;
using rbmlab::ExtractionOrder;
using rbmlab::InterpolatedCov;
using rbmlab::TorusLattice;

namespace {

ExtractionOrder two_blocks(const TorusLattice& lat) {
    BlockPartition part(lat, lat.side() / 2);
    // merge the four quadrants into halves: {0,1} and {2,3}
    ExtractionOrder o;
    o.groups.resize(2);
    for (int b = 0; b < part.n_blocks(); ++b)
        for (int s : part.sites_of(b)) o.groups[b < 2 ? 0 : 1].push_back(s);
    return o;
}

}  // namespace

TEST_SUITE("interpolation") {

TEST_CASE("all s = 1 reproduces C entrywise") {
    TorusLattice lat(8, 2);
    CovOperator c = covariance(CovKind::C, lat, 1.0);
    ExtractionOrder o = two_blocks(lat);
    Eigen::VectorXd s = Eigen::VectorXd::Ones(1);
    InterpolatedCov ic(c, o, s);
    Eigen::MatrixXcd full = rbmlab::build_dense(c);
    CHECK((ic.cs() - full.real()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("s_1 = 0 decouples the root group") {
    TorusLattice lat(8, 2);
    CovOperator c = covariance(CovKind::C, lat, 1.0);
    ExtractionOrder o = two_blocks(lat);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(1);
    InterpolatedCov ic(c, o, s);
    for (int i : o.groups[0])
        for (int j : o.groups[1]) {
            CHECK(ic.cs()(i, j) == 0.0);
            CHECK(ic.cs()(j, i) == 0.0);
        }
    // within-group entries survive untouched
    int a = o.groups[0][0], b = o.groups[0][5];
    CHECK(ic.cs()(a, b) == doctest::Approx(c.real_entry(a, b)).epsilon(1e-13));
}

TEST_CASE("interpolated C stays positive definite across s") {
    TorusLattice lat(8, 2);
    CovOperator c = covariance(CovKind::C, lat, 1.0);
    BlockPartition part(lat, 4);
    ExtractionOrder o = rbmlab::extraction_order_from_partition(part, {0, 1, 2, 3});
    for (double v : {0.0, 0.3, 0.7, 1.0}) {
        Eigen::VectorXd s = Eigen::VectorXd::Constant(3, v);
        InterpolatedCov ic(c, o, s);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ic.cs(), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("pair multiplier is the product over separating steps") {
    TorusLattice lat(8, 2);
    CovOperator c = covariance(CovKind::C, lat, 1.0);
    BlockPartition part(lat, 4);
    ExtractionOrder o = rbmlab::extraction_order_from_partition(part, {0, 1, 2, 3});
    Eigen::VectorXd s(3);
    s << 0.5, 0.7, 0.9;
    InterpolatedCov ic(c, o, s);
    // groups a < b couple through prod_{q=a+1..b} s_q (groups indexed from 0)
    int g0 = o.groups[0][0], g1 = o.groups[1][0], g2 = o.groups[2][0], g3 = o.groups[3][0];
    CHECK(ic.cs()(g0, g1) == doctest::Approx(0.5 * c.real_entry(g0, g1)).epsilon(1e-13));
    CHECK(ic.cs()(g0, g2) == doctest::Approx(0.5 * 0.7 * c.real_entry(g0, g2)).epsilon(1e-13));
    CHECK(ic.cs()(g0, g3) ==
          doctest::Approx(0.5 * 0.7 * 0.9 * c.real_entry(g0, g3)).epsilon(1e-13));
    CHECK(ic.cs()(g1, g3) == doctest::Approx(0.7 * 0.9 * c.real_entry(g1, g3)).epsilon(1e-13));
    CHECK(ic.cs()(g2, g3) == doctest::Approx(0.9 * c.real_entry(g2, g3)).epsilon(1e-13));
}

TEST_CASE("single-group order leaves nothing to interpolate") {
    TorusLattice lat(4, 1);
    CovOperator c = covariance(CovKind::C, lat, 1.0);
    ExtractionOrder o;
    o.groups.resize(1);
    for (int i = 0; i < lat.volume(); ++i) o.groups[0].push_back(i);
    Eigen::VectorXd s(0);
    InterpolatedCov ic(c, o, s);
    CHECK(ic.n_params() == 0);
    CHECK((ic.cs() - rbmlab::build_dense(c).real()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("analytic ds B matches central differences") {
    TorusLattice lat(8, 2);
    CovOperator c = covariance(CovKind::C, lat, 1.0);
    SUBCASE("two groups") {
        ExtractionOrder o = two_blocks(lat);
        Eigen::VectorXd s(1);
        s << 0.5;
        auto rep = rbmlab::ds_derivative_check(c, o, s);
        CHECK(rep.max_rel_err <= 1e-6);
        CHECK(rep.pass);
    }
    SUBCASE("four groups, mixed s") {
        BlockPartition part(lat, 4);
        ExtractionOrder o = rbmlab::extraction_order_from_partition(part, {2, 0, 3, 1});
        Eigen::VectorXd s(3);
        s << 0.35, 0.6, 0.85;
        auto rep = rbmlab::ds_derivative_check(c, o, s);
        CHECK(rep.rel_err.size() == 3);
        CHECK(rep.max_rel_err <= 1e-6);
        CHECK(rep.pass);
    }
}

TEST_CASE("out-of-range s rejected") {
    TorusLattice lat(4, 1);
    CovOperator c = covariance(CovKind::C, lat, 1.0);
    ExtractionOrder o = two_blocks(lat);
    Eigen::VectorXd bad(1);
    bad << 1.2;
    CHECK_THROWS_AS(InterpolatedCov(c, o, bad), std::invalid_argument);
    bad << -0.1;
    CHECK_THROWS_AS(InterpolatedCov(c, o, bad), std::invalid_argument);
}

}
