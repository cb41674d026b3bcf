#include <doctest.h>

#include "ffchain/poly.hpp"
#include "test_helpers.hpp"

using namespace ffchain;

TEST_SUITE("poly") {

TEST_CASE("evaluation and calculus") {
    // f(X; lambda) = (2 x00 + lambda x10^2, -x01)
    PolyResponse f(1, 2);
    Monomial m1 = f.blank();
    m1.state[0] = 1;
    f.add_term(m1, Eigen::Vector2d(2, 0));
    Monomial m2 = f.blank();
    m2.state[2] = 2;
    m2.lambda = 1;
    f.add_term(m2, Eigen::Vector2d(1, 0));
    Monomial m3 = f.blank();
    m3.state[1] = 1;
    f.add_term(m3, Eigen::Vector2d(0, -1));

    Eigen::VectorXd x(4);
    x << 0.5, -0.25, 2.0, 3.0;
    const Eigen::VectorXd v = poly_eval(f, x, 0.1);
    CHECK(v(0) == doctest::Approx(2 * 0.5 + 0.1 * 4.0));
    CHECK(v(1) == doctest::Approx(0.25));

    const PolyResponse d2 = poly_partial(f, 2);
    const Eigen::VectorXd dv = poly_eval(d2, x, 0.1);
    CHECK(dv(0) == doctest::Approx(0.1 * 2 * 2.0));
    CHECK(dv(1) == 0.0);

    const PolyResponse dl = poly_partial_lambda(f);
    CHECK(poly_eval(dl, x, 0.7)(0) == doctest::Approx(4.0));

    CHECK(f.pinned_origin());
    Monomial cst = f.blank();
    PolyResponse g = f;
    g.add_term(cst, Eigen::Vector2d(0, 1e-3));
    CHECK_FALSE(g.pinned_origin());
}

TEST_CASE("linear part extraction round trips through the ring view") {
    std::mt19937_64 rng(2);
    PolyResponse f(2, 2);
    std::vector<Mat> as;
    for (int i = 0; i <= 2; ++i) {
        as.push_back(random_mat(2, rng));
        f.add_linear(i, as.back(), 0);
    }
    f.add_linear(1, 3.0 * Mat::Identity(2, 2), 1); // lambda-linear piece
    for (int i = 0; i <= 2; ++i) {
        CHECK((linear_coefficient(f, i, 0) - as[static_cast<std::size_t>(i)]).norm() == 0.0);
    }
    CHECK((linear_coefficient(f, 1, 1) - 3.0 * Mat::Identity(2, 2)).norm() == 0.0);
    const RingElement lin = linear_ring(f, 0);
    for (int i = 0; i <= 2; ++i)
        CHECK((lin.coeffs[static_cast<std::size_t>(i)] - as[static_cast<std::size_t>(i)]).norm() ==
              0.0);
}

TEST_CASE("grading") {
    PolyResponse f(2, 1);
    Monomial m = f.blank();
    m.state[0] = 1;
    m.lambda = 1;
    f.add_term(m, Eigen::VectorXd::Constant(1, 1.0));
    auto g = grading_degree(f);
    REQUIRE(g.has_value());
    CHECK(g->first == 0);
    CHECK(g->second == 1);

    PolyResponse q(2, 1);
    Monomial mq = q.blank();
    mq.state[1] = 2;
    q.add_term(mq, Eigen::VectorXd::Constant(1, -2.0));
    auto gq = grading_degree(q);
    REQUIRE(gq.has_value());
    CHECK(gq->first == 1);
    CHECK(gq->second == 0);

    CHECK_FALSE(grading_degree(f + q).has_value());
}

TEST_CASE("complex and real views agree pointwise") {
    std::mt19937_64 rng(4);
    ComplexPoly f(2);
    f.add_linear(0, Complex(0, 1), 0.0, 0);
    f.add_linear(1, Complex(1, -0.5), Complex(0.25, 0.1), 0);
    CMonomial cm = f.blank();
    cm.z[0] = 2;
    cm.zc[1] = 1;
    cm.lambda = 1;
    f.add_term(cm, Complex(-0.7, 0.3));

    const PolyResponse fr = to_real(f);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 25; ++t) {
        std::vector<Complex> z(3);
        Eigen::VectorXd x(6);
        for (int j = 0; j < 3; ++j) {
            z[static_cast<std::size_t>(j)] = Complex(dist(rng), dist(rng));
            x(2 * j) = z[static_cast<std::size_t>(j)].real();
            x(2 * j + 1) = z[static_cast<std::size_t>(j)].imag();
        }
        const double lam = dist(rng);
        const Complex lhs = cpoly_eval(f, z, lam);
        const Eigen::VectorXd rhs = poly_eval(fr, x, lam);
        CHECK(std::abs(lhs - Complex(rhs(0), rhs(1))) <= 1e-12 * (1.0 + std::abs(lhs)));
    }

    SUBCASE("round trip is exact on the coefficients") {
        const ComplexPoly back = to_complex(fr);
        for (const auto& [m, c] : f.terms) {
            const auto it = back.terms.find(m);
            REQUIRE(it != back.terms.end());
            CHECK(std::abs(it->second - c) <= 1e-14 * std::abs(c));
        }
        CHECK(back.terms.size() == f.terms.size());
    }
}

TEST_CASE("Wirtinger partials against finite differences") {
    std::mt19937_64 rng(6);
    ComplexPoly f(1);
    CMonomial m = f.blank();
    m.z[0] = 2;
    m.zc[0] = 1;
    f.add_term(m, Complex(-1, 0.5));
    f.add_linear(1, Complex(0.3, 1.1), Complex(0, -0.2), 0);
    const ComplexPoly fz = cpoly_partial_z(f, 0);
    const ComplexPoly fzc = cpoly_partial_zc(f, 0);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        std::vector<Complex> z{Complex(dist(rng), dist(rng)), Complex(dist(rng), dist(rng))};
        const double h = 1e-6;
        auto at = [&](Complex dz) {
            std::vector<Complex> w = z;
            w[0] += dz;
            return cpoly_eval(f, w, 0.0);
        };
        const Complex fx = (at(h) - at(-h)) / (2 * h);
        const Complex fy = (at(Complex(0, h)) - at(Complex(0, -h))) / (2 * h);
        const Complex hz = cpoly_eval(fz, z, 0.0), hzc = cpoly_eval(fzc, z, 0.0);
        CHECK(std::abs(fx - (hz + hzc)) <= 1e-6);
        CHECK(std::abs(fy - Complex(0, 1) * (hz - hzc)) <= 1e-6);
    }
}

TEST_CASE("realify and complexify are inverse") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        const Complex p(dist(rng), dist(rng)), q(dist(rng), dist(rng));
        const Mat m = realify(p, q);
        Complex p2, q2;
        complexify(m, p2, q2);
        CHECK(std::abs(p - p2) <= 1e-15);
        CHECK(std::abs(q - q2) <= 1e-15);
        // action check: m * (x, y) == p z + q conj(z)
        const Complex z(dist(rng), dist(rng));
        const Eigen::Vector2d v = m * Eigen::Vector2d(z.real(), z.imag());
        const Complex expect = p * z + q * std::conj(z);
        CHECK(std::abs(Complex(v(0), v(1)) - expect) <= 1e-14);
    }
}

TEST_CASE("term text parsing") {
    SUBCASE("real terms") {
        PolyResponse f(1, 2);
        parse_real_term("X0^2 X1^1 L^1 : (0.5, -1)", f);
        parse_real_term("X3 : (0, 2)", f);
        Eigen::VectorXd x(4);
        x << 2.0, 3.0, 0.0, 1.5;
        const Eigen::VectorXd v = poly_eval(f, x, 2.0);
        CHECK(v(0) == doctest::Approx(0.5 * 4 * 3 * 2));
        CHECK(v(1) == doctest::Approx(-1 * 4 * 3 * 2 + 2 * 1.5));
    }
    SUBCASE("complex terms") {
        ComplexPoly f(1);
        parse_complex_term("Z0^2 Z0c^1 : (-1, 0)", f);
        parse_complex_term("Z1 L : (0, 1)", f);
        const std::vector<Complex> z{Complex(1, 1), Complex(2, 0)};
        const Complex v = cpoly_eval(f, z, 0.5);
        const Complex expect = -Complex(1, 1) * Complex(1, 1) * Complex(1, -1) +
                               Complex(0, 1) * 0.5 * 2.0;
        CHECK(std::abs(v - expect) <= 1e-14);
    }
    SUBCASE("print then parse returns the same polynomial") {
        std::mt19937_64 rng(10);
        const PolyResponse f = testing::random_poly(2, 2, 8, 3, 1, rng);
        const std::string text = print_poly_text(f);
        PolyResponse g(2, 2);
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) parse_real_term(line, g);
        CHECK(print_poly_text(g) == text);
    }
    SUBCASE("malformed input names the offending factor") {
        PolyResponse f(1, 1);
        CHECK_THROWS_WITH_AS(parse_real_term("X0^a : (1)", f),
                             doctest::Contains("bad exponent"), ParseError);
        CHECK_THROWS_AS(parse_real_term("X9 : (1)", f), ParseError);
        CHECK_THROWS_AS(parse_real_term("X0 (1)", f), ParseError);
        CHECK_THROWS_AS(parse_real_term("X0 : (1, 2)", f), ParseError);
        CHECK_THROWS_AS(parse_real_term("Z0 : (1)", f), ParseError);
        ComplexPoly c(1);
        CHECK_THROWS_AS(parse_complex_term("X0 : (1, 0)", c), ParseError);
        CHECK_THROWS_AS(parse_complex_term("Z0 : (1)", c), ParseError);
    }
}

} // TEST_SUITE
