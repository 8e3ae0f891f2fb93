#include <doctest.h>

#include <cmath>
#include <random>

#include "fdreg/basis.hpp"
#include "testutil.hpp"

using namespace fdreg;
using testutil::random_interior_knots;
using testutil::trapezoid_gram;

TEST_CASE("equispaced construction") {
    auto cubic = SplineBasis::equispaced(BasisKind::bspline, 4, 0, Interval(0, 1));
    CHECK(cubic.dim() == 4);
    CHECK(cubic.interior_knots().empty());

    auto nat = SplineBasis::equispaced(BasisKind::natural_cubic, 4, 2, Interval(0, 24));
    CHECK(nat.dim() == 4);
    REQUIRE(nat.interior_knots().size() == 2);
    CHECK(nat.interior_knots()[0] == doctest::Approx(8.0));
    CHECK(nat.interior_knots()[1] == doctest::Approx(16.0));

    auto b = SplineBasis::equispaced(BasisKind::bspline, 4, 8, Interval(0, 24));
    CHECK(b.dim() == 12);
    CHECK(b.interior_knots()[0] == doctest::Approx(24.0 / 9.0));

    CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SplineBasis::equispaced(BasisKind::bspline, 0, 3, Interval(0, 1)),
                    std::invalid_argument);
}

TEST_CASE("partition of unity and domain checks") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 5; ++rep) {
        Interval dom(0, 24);
        auto b = SplineBasis::bspline(4, random_interior_knots(rng, 6, dom), dom);
        Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(101, 0.0, 24.0);
        Eigen::MatrixXd phi = b.eval(pts, 0);
        for (int p = 0; p < pts.size(); ++p)
            CHECK(phi.row(p).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }

    auto b = SplineBasis::equispaced(BasisKind::bspline, 4, 3, Interval(0, 1));
    Eigen::VectorXd bad(1);
    bad << 1.5;
    CHECK_THROWS_AS(b.eval(bad, 0), std::invalid_argument);
    Eigen::VectorXd good(1);
    good << 0.5;
    CHECK_THROWS_AS(b.eval(good, 4), std::invalid_argument);
}

TEST_CASE("derivatives: constants, finite differences") {
    auto b = SplineBasis::equispaced(BasisKind::bspline, 4, 5, Interval(0, 2));
    // Derivative of the constant 1 = sum of all basis functions is 0 everywhere.
    Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(57, 0.0, 2.0);
    Eigen::MatrixXd d1 = b.eval(pts, 1);
    for (int p = 0; p < pts.size(); ++p) CHECK(std::abs(d1.row(p).sum()) < 1e-10);

    // Single-segment cubic basis: centered finite difference oracle at the midpoint.
    auto c = SplineBasis::equispaced(BasisKind::bspline, 4, 0, Interval(0, 1));
    const double x = 0.5, h = 1e-6;
    Eigen::VectorXd xs(3);
    xs << x - h, x, x + h;
    Eigen::MatrixXd v0 = c.eval(xs, 0);
    Eigen::RowVectorXd fd = (v0.row(2) - v0.row(0)) / (2 * h);
    Eigen::RowVectorXd an = c.eval_at(x, 1);
    for (int j = 0; j < c.dim(); ++j)
        CHECK(an[j] == doctest::Approx(fd[j]).epsilon(1e-6));

    // Same oracle on a multi-knot basis and on the second derivative.
    std::mt19937_64 rng(21);
    auto m = SplineBasis::bspline(4, random_interior_knots(rng, 7, Interval(0, 10)), Interval(0, 10));
    for (double xx : {1.3, 4.9, 7.7}) {
        Eigen::VectorXd pp(3);
        pp << xx - h, xx, xx + h;
        Eigen::MatrixXd g1 = m.eval(pp, 1);
        Eigen::RowVectorXd fdd = (g1.row(2) - g1.row(0)) / (2 * h);
        Eigen::RowVectorXd ann = m.eval_at(xx, 2);
        for (int j = 0; j < m.dim(); ++j)
            CHECK(ann[j] == doctest::Approx(fdd[j]).epsilon(1e-4));
    }
}

TEST_CASE("natural cubic basis") {
    auto nat = SplineBasis::natural_cubic({8.0, 16.0}, Interval(0, 24));
    CHECK(nat.dim() == 4);

    // Second derivative vanishes at both boundaries for every member.
    Eigen::VectorXd ends(2);
    ends << 0.0, 24.0;
    Eigen::MatrixXd d2 = nat.eval(ends, 2);
    CHECK(d2.cwiseAbs().maxCoeff() < 1e-10);

    // Constants and linears live in the span: project and compare.
    Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(40, 0.0, 24.0);
    Eigen::MatrixXd phi = nat.eval(pts, 0);
    for (auto fn : {+[](double) { return 1.0; }, +[](double x) { return 0.3 * x - 2.0; }}) {
        Eigen::VectorXd target(pts.size());
        for (int i = 0; i < pts.size(); ++i) target[i] = fn(pts[i]);
        Eigen::VectorXd c = phi.colPivHouseholderQr().solve(target);
        CHECK((phi * c - target).cwiseAbs().maxCoeff() < 1e-9);
    }

    // Linear continuation beyond the domain: value extends with constant slope.
    Eigen::VectorXd cs = Eigen::VectorXd::Random(nat.dim());
    Eigen::VectorXd out(2);
    out << -3.0, 27.0;
    Eigen::MatrixXd v = nat.eval(out, 0);
    double left_val = nat.eval_at(0.0, 0).dot(cs), left_slope = nat.eval_at(0.0, 1).dot(cs);
    CHECK(v.row(0).dot(cs) == doctest::Approx(left_val - 3.0 * left_slope).epsilon(1e-10));
    CHECK(nat.eval(out, 2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gram: partition-of-unity mass and null spaces") {
    auto b = SplineBasis::equispaced(BasisKind::bspline, 4, 8, Interval(0, 24));
    auto g = gram(b, b);
    CHECK(g.entries.sum() == doctest::Approx(24.0).epsilon(1e-12));
    CHECK((g.entries - g.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    // Quadratic form of the straight line under the (2,2) penalty is 0.
    Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(b.dim(), 0.0, 24.0);
    Eigen::VectorXd line(pts.size());
    for (int i = 0; i < pts.size(); ++i) line[i] = 2.0 * pts[i] + 1.0;
    Eigen::VectorXd c = b.eval(pts, 0).colPivHouseholderQr().solve(line);
    auto p = penalty(b, 2);
    CHECK(std::abs(c.dot(p.entries * c)) < 1e-8);

    // Pure quadratic t^2 on [0,1]: integral of (2)^2 = 4.
    auto q = SplineBasis::equispaced(BasisKind::bspline, 4, 3, Interval(0, 1));
    Eigen::VectorXd qs = Eigen::VectorXd::LinSpaced(q.dim(), 0.0, 1.0);
    Eigen::VectorXd quad(qs.size());
    for (int i = 0; i < qs.size(); ++i) quad[i] = qs[i] * qs[i];
    Eigen::VectorXd cq = q.eval(qs, 0).colPivHouseholderQr().solve(quad);
    auto pq = penalty(q, 2);
    CHECK(cq.dot(pq.entries * cq) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("gram matches the dense trapezoid oracle") {
    std::mt19937_64 rng(123);
    Interval dom(0, 1);
    auto l = SplineBasis::bspline(4, random_interior_knots(rng, 6, dom), dom);
    auto r = SplineBasis::bspline(4, random_interior_knots(rng, 9, dom), dom);
    auto g = gram(l, r);
    Eigen::MatrixXd oracle = trapezoid_gram(l, r, 0, 0, 0.0, 1.0);
    CHECK((g.entries - oracle).cwiseAbs().maxCoeff() < 1e-8);

    // Mixed orders exercise the node-count rule.
    auto lin = SplineBasis::equispaced(BasisKind::bspline, 2, 5, dom);
    auto g2 = gram(lin, r);
    Eigen::MatrixXd oracle2 = trapezoid_gram(lin, r, 0, 0, 0.0, 1.0);
    CHECK((g2.entries - oracle2).cwiseAbs().maxCoeff() < 1e-8);

    // Natural cubic pair.
    auto nl = SplineBasis::natural_cubic(random_interior_knots(rng, 5, dom), dom);
    auto g3 = gram(nl, l);
    Eigen::MatrixXd oracle3 = trapezoid_gram(nl, l, 0, 0, 0.0, 1.0);
    CHECK((g3.entries - oracle3).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("gram symmetry and eigenvalue floor") {
    std::mt19937_64 rng(5);
    Interval dom(0, 24);
    for (int d : {0, 1, 2}) {
        auto b = SplineBasis::bspline(4, random_interior_knots(rng, 7, dom), dom);
        auto g = gram(b, b, {d, d});
        CHECK((g.entries - g.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.entries);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("windowed gram: additivity and mid-segment endpoints") {
    std::mt19937_64 rng(17);
    Interval dom(0, 365);
    auto x = SplineBasis::bspline(4, random_interior_knots(rng, 20, dom), dom);
    auto s = SplineBasis::equispaced(BasisKind::bspline, 4, 12, dom);

    // Windows cut inside knot segments on purpose.
    double a = 33.7, mid = 61.123, c = 93.4;
    Eigen::MatrixXd whole = gram(x, s, {0, 0}, Interval(a, c)).entries;
    Eigen::MatrixXd first = gram(x, s, {0, 0}, Interval(a, mid)).entries;
    Eigen::MatrixXd second = gram(x, s, {0, 0}, Interval(mid, c)).entries;
    CHECK((whole - first - second).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::MatrixXd oracle = trapezoid_gram(x, s, 0, 0, a, c);
    CHECK((whole - oracle).cwiseAbs().maxCoeff() < 1e-8);

    CHECK_THROWS_AS(gram(x, s, {0, 0}, Interval(-5.0, 3.0)), std::invalid_argument);
    CHECK_THROWS_AS(gram(x, s, {0, 0}, Interval(10.0, 10.0)), std::invalid_argument);
}

TEST_CASE("penalty null space dimensions") {
    auto b = SplineBasis::equispaced(BasisKind::bspline, 4, 6, Interval(0, 10));
    auto p = penalty(b, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.entries);
    int n_null = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] < 1e-9 * es.eigenvalues().maxCoeff()) ++n_null;
    CHECK(n_null == 2);  // constants and linears
    CHECK_THROWS_AS(penalty(b, 4), std::invalid_argument);
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    std::vector<double> x, w;
    for (int n = 1; n <= 8; ++n) {
        gauss_legendre(n, x, w);
        // integral of t^k over [-1,1] for k up to 2n-1
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], k);
            double expect = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
            CHECK(s == doctest::Approx(expect).epsilon(1e-13));
        }
    }
}
