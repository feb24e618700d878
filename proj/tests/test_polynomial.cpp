#include <doctest.h>

#include <betamorph/errors.hpp>
#include <betamorph/polynomial.hpp>

using namespace betamorph;

TEST_CASE("integer polynomial parsing and evaluation") {
    IntPoly p = IntPoly::parse("-1,-1,1");  // x^2 - x - 1
    CHECK(p.degree() == 2);
    CHECK(p.eval(Rat(2)) == Rat(1));
    CHECK(p.eval(Rat(3, 2)) == Rat(-1, 4));
    CHECK(p.to_string() == "x^2 - x - 1");

    CHECK(IntPoly::parse(" 3 , 1 ") == IntPoly::parse("3,1"));
    CHECK(IntPoly::parse("0,0,0").is_zero());
    CHECK_THROWS_AS(IntPoly::parse(""), InputError);
    CHECK_THROWS_AS(IntPoly::parse("1,,2"), InputError);
    CHECK_THROWS_AS(IntPoly::parse("1,x"), InputError);
}

TEST_CASE("multinacci polynomials") {
    CHECK(multinacci_poly(2) == IntPoly::parse("-1,-1,1"));
    CHECK(multinacci_poly(5) == IntPoly::parse("-1,-1,-1,-1,-1,1"));
    CHECK_THROWS_AS(multinacci_poly(1), InputError);

    // p_n(1) = 1 - n and p_n(2) = 1: the root in (1,2) is pinned by a sign
    // change for every n.
    for (int n = 2; n <= 12; ++n) {
        IntPoly p = multinacci_poly(n);
        CHECK(p.eval(Rat(1)) == Rat(1 - n));
        CHECK(p.eval(Rat(2)) == Rat(1));
    }
}

TEST_CASE("from_rational builds the degree-one polynomial with the given root") {
    IntPoly p = IntPoly::from_rational(Rat(17, 10));
    CHECK(p.degree() == 1);
    CHECK(p.eval(Rat(17, 10)) == Rat(0));
    CHECK(p == IntPoly::parse("-17,10"));
}

TEST_CASE("derivative and squarefree part") {
    IntPoly p = IntPoly::parse("-1,-1,1");
    CHECK(p.derivative() == IntPoly::parse("-1,2"));

    // (x^2-x-1)^2 (2x-3) loses its repeated factor.
    IntPoly repeated = IntPoly::parse("-3,-4,7,4,-7,2");
    CHECK(repeated.squarefree_part() == IntPoly::parse("3,1,-5,2"));
    // Already squarefree inputs come back unchanged.
    CHECK(p.squarefree_part() == p);
}

TEST_CASE("rational polynomial division and gcd") {
    QPoly a{std::vector<Rat>{Rat(1), Rat(0), Rat(-3), Rat(1, 2), Rat(2)}};
    QPoly b{std::vector<Rat>{Rat(-1), Rat(1), Rat(3)}};

    auto [q, r] = QPoly::divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());

    QPoly g = QPoly::gcd(a * b, b);
    CHECK(g == b.monic());

    // Coprime polynomials have unit gcd.
    QPoly one{std::vector<Rat>{Rat(1)}};
    CHECK(QPoly::gcd(QPoly(IntPoly::parse("-1,-1,1")), QPoly(IntPoly::parse("-1,1"))) == one);

    CHECK_THROWS_AS(QPoly::divmod(a, QPoly{std::vector<Rat>{}}), InputError);
}

TEST_CASE("interval evaluation bounds the range on nonnegative intervals") {
    QPoly p{std::vector<Rat>{Rat(-2), Rat(3), Rat(-1), Rat(1)}};
    Rat lo(1, 3), hi(7, 4);
    auto [rlo, rhi] = p.eval_interval(lo, hi);
    for (const Rat& x : std::vector<Rat>{lo, hi, Rat((lo + hi) / 2), Rat(lo + (hi - lo) / 7)}) {
        Rat v = p.eval(x);
        CHECK(rlo <= v);
        CHECK(v <= rhi);
    }
}

TEST_CASE("display uses the requested variable") {
    CHECK(poly_display({Rat(-1), Rat(-1), Rat(1)}, "beta") == "beta^2 - beta - 1");
    CHECK(poly_display({Rat(1, 2)}, "x") == "1/2");
}
