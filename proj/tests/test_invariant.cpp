#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "harness.hpp"

using namespace orbq;

static FieldId F3{3, 1};
static FieldId E3{3, 2};

static Poly P(const std::string& s, FieldId fid = F3)
{
    return parse_poly(s, fid);
}

TEST_CASE("inv_linear")
{
    Mat x = parse_matrix("t, 0; 0, t^2", F3);
    InvariantProfile p = inv_linear(x, 40);
    CHECK(p.delta == P("T - t") * P("T - t^2"));
    CHECK(p.regular_semisimple());

    Mat c = parse_matrix("0, t; 1, t", F3); // companion of T^2 - tT - t
    CHECK(inv_linear(c, 40).delta == P("T^2 - t*T - t"));

    Mat bad = parse_matrix("t, 0; 0, t", F3);
    InvariantProfile pb = inv_linear(bad, 40);
    CHECK_FALSE(pb.regular_semisimple());
    CHECK_FALSE(pb.separable);
}

TEST_CASE("inv_quaternion")
{
    // n=1, lambda=1/2, unit u: T - Nm(u) t
    Mat u(E3, 1, 1);
    u.at(0, 0) = parse_local("w + t", E3);
    InvariantProfile p = inv_quaternion(u, Lambda::Half, 40);
    Local nm = u.at(0, 0).norm_to_base();
    Poly expect(F3, {-(nm.shifted(1)), Local::one(F3)});
    CHECK(p.delta == expect);

    // n=1, lambda=0, x=t: T - t^2
    Mat xt(E3, 1, 1);
    xt.at(0, 0) = Local::t(E3);
    CHECK(inv_quaternion(xt, Lambda::Zero, 40).delta == P("T - t^2"));

    // n=2, lambda=0, diag(1, w): (T-1)(T-Nm(w))
    Mat d(E3, 2, 2);
    d.at(0, 0) = Local::one(E3);
    d.at(1, 1) = Local::from_fq(Fq::gen(E3));
    Local nw = Local::from_fq(Fq::gen(E3)).norm_to_base();
    Poly want = P("T - 1") * Poly(F3, {-nw, Local::one(F3)});
    CHECK(inv_quaternion(d, Lambda::Zero, 40).delta == want);
}

TEST_CASE("inv_general agrees with inv_linear on gamma(x)")
{
    std::mt19937_64 rng(13);
    int done = 0;
    for (int it = 0; it < 60 && done < 25; ++it) {
        int n = 1 + int(rng() % 2);
        Mat x(F3, n, n);
        for (int i = 0; i < n; ++i)
            x.at(i, i) = Local::monomial(F3, Fq(F3, 1 + int(rng() % 2)), int(rng() % 3));
        if (n == 2 && rng() % 2)
            x.at(0, 1) = Local::t(F3);
        InvariantProfile lin = inv_linear(x, 40);
        if (!lin.regular_semisimple())
            continue;
        // gamma(x) = (1 x; 1 1)
        Mat g(F3, 2 * n, 2 * n);
        for (int i = 0; i < n; ++i) {
            g.at(i, i) = Local::one(F3);
            g.at(n + i, n + i) = Local::one(F3);
            g.at(n + i, i) = Local::one(F3);
            for (int j = 0; j < n; ++j)
                g.at(i, n + j) = x.at(i, j);
        }
        InvariantProfile gen = inv_general(g, 40);
        CHECK(gen.delta.truncated(30) == lin.delta.truncated(30));
        ++done;
    }
    CHECK(done >= 20);

    // singular antidiagonal block
    Mat g0(F3, 2, 2);
    g0.at(0, 0) = Local::one(F3);
    g0.at(1, 1) = Local::one(F3);
    CHECK_THROWS_AS(inv_general(g0, 40), Error);
}

TEST_CASE("match_test")
{
    InvariantProfile a = profile_of(P("T - t^2"), 40);
    InvariantProfile b = profile_of(P("T - t^2"), 40);
    CHECK(match_test(a, b));
    InvariantProfile c = profile_of(P("T - 2*t^2"), 40);
    CHECK_FALSE(match_test(a, c));
    InvariantProfile bad = profile_of(P("T^2 - 2*t*T + t^2"), 40);
    CHECK_THROWS_AS(match_test(a, bad), Error);
}

TEST_CASE("ord examples")
{
    CHECK(ord_lambda(profile_of(P("T - t"), 40), Lambda::Zero) == 1);
    CHECK(ord_lambda(profile_of(P("T - t^2"), 40), Lambda::Half) == 1);
    CHECK(ord_lambda(profile_of(P("T - t - t^2"), 40), Lambda::Half) == 0);
    // Eq. (3.24) instance: ord_{1/2}(T - t^2) = ord_0(T - t)
    CHECK(ord_lambda(profile_of(P("T - t^2"), 40), Lambda::Half) ==
          ord_lambda(profile_of(P("T - t"), 40), Lambda::Zero));
}

TEST_CASE("epsilon examples")
{
    CHECK(epsilon_sign(profile_of(P("T - t^2"), 40)) == -1);
    CHECK(epsilon_sign(profile_of(P("T - t - t^2"), 40)) == 1);
    CHECK(epsilon_sign(profile_of(P("T - t") * P("T - t^2"), 40)) == -1);
}

TEST_CASE("matching_exists")
{
    CHECK(matching_exists(profile_of(P("T - t - t^2"), 40), Lambda::Half));
    CHECK_FALSE(matching_exists(profile_of(P("T - t^2"), 40), Lambda::Half));
    CHECK_FALSE(matching_exists(profile_of(P("T - t"), 40), Lambda::Zero));
}

TEST_CASE("shift_invariant")
{
    auto a = shift_invariant(P("T - t^2"));
    CHECK(a.cls == ShiftClass::TopNilpotent);
    CHECK(a.shifted == P("T - t"));

    auto b = shift_invariant(P("T - 1"));
    CHECK(b.cls == ShiftClass::NonIntegral);

    auto c = shift_invariant(P("T - t") * P("T - t^2"));
    CHECK(c.cls == ShiftClass::IntegralUnitPart);
    CHECK(c.shifted == P("T - 1") * P("T - t"));
}

TEST_CASE("Eq 3.24 as a universal property")
{
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> cd(0, 2), ed(1, 4);
    int done = 0;
    for (int it = 0; it < 600 && done < 100; ++it) {
        int n = 1 + int(rng() % 4);
        // draw delta with roots of valuation >= 1 so the shift is polynomial
        std::vector<Local> coeffs(n + 1, Local::zero(F3));
        coeffs[n] = Local::one(F3);
        for (int i = 0; i < n; ++i) {
            Local v(F3);
            int terms = int(rng() % 2) + 1;
            for (int k = 0; k < terms; ++k)
                v.set_coeff(n - i + ed(rng) - 1, Fq(F3, cd(rng)));
            coeffs[i] = v;
        }
        Poly delta(F3, std::move(coeffs));
        try {
            InvariantProfile p = profile_of(delta, 60);
            if (!p.regular_semisimple() || !p.profile.complete)
                continue;
            auto sh = shift_invariant(delta);
            if (sh.cls == ShiftClass::NonIntegral)
                continue;
            InvariantProfile ps = profile_of(sh.shifted, 60);
            if (!ps.regular_semisimple() || !ps.profile.complete)
                continue;
            CHECK(ord_lambda(p, Lambda::Half) == ord_lambda(ps, Lambda::Zero));
            ++done;
        } catch (const Error&) {
            continue;
        }
    }
    CHECK(done >= 100);
}

TEST_CASE("epsilon parity law")
{
    // epsilon_{1/2} = (-1)^{ord_{1/2}} on random regular semi-simple deltas
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int> cd(0, 2), ed(0, 4);
    int done = 0;
    for (int it = 0; it < 500 && done < 80; ++it) {
        int n = 1 + int(rng() % 3);
        std::vector<Local> coeffs(n + 1, Local::zero(F3));
        coeffs[n] = Local::one(F3);
        for (int i = 0; i < n; ++i) {
            Local v(F3);
            if (rng() % 4 != 0)
                v.set_coeff(ed(rng), Fq(F3, cd(rng)));
            coeffs[i] = v;
        }
        Poly delta(F3, std::move(coeffs));
        try {
            InvariantProfile p = profile_of(delta, 60);
            if (!p.regular_semisimple() || !p.profile.complete)
                continue;
            int eps = epsilon_sign(p);
            int ord = ord_lambda(p, Lambda::Half);
            CHECK(eps == (ord % 2 == 0 ? 1 : -1));
            ++done;
        } catch (const Error&) {
            continue;
        }
    }
    CHECK(done >= 60);
}
