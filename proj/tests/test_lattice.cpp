#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lattice.hpp"
#include "oracles.hpp"

using namespace orbq;

static FieldId F3{3, 1};
static FieldId E3{3, 2};

static Mat M2(const std::string& s, FieldId fid = F3)
{
    return parse_matrix(s, fid);
}

TEST_CASE("canonicalize basics")
{
    // {(1,0), (1,t)} spans the same lattice as {(1,0), (0,t)}
    Lattice L = Lattice::from_generators(M2("1, 1; 0, t"));
    Lattice R = Lattice::from_generators(M2("1, 0; 0, t"));
    CHECK(L == R);
    CHECK(L.pivots()[0] == 0);
    CHECK(L.pivots()[1] == 1);

    // {(t,0), (0,t), (1,1)} spans O(1,1) + tO^2; compare by membership
    Lattice S = Lattice::from_generators(M2("t, 0, 1; 0, t, 1"));
    CHECK(orbq_test::spans_equal(S.basis(), M2("1, 0; 1, t")));
    CHECK(S.vdet() == 1);

    // single vector in rank 2
    CHECK_THROWS_AS(Lattice::from_generators(Mat(F3, 2, 1)), Error);
    Mat sing(F3, 2, 2); // rank deficient square
    sing.at(0, 0) = Local::one(F3);
    sing.at(0, 1) = Local::one(F3);
    CHECK_THROWS_AS(Lattice::from_generators(sing), Error);
}

TEST_CASE("canonicalize is idempotent and basis independent")
{
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> cd(0, 2), ed(-2, 3);
    for (int it = 0; it < 120; ++it) {
        int n = 1 + int(rng() % 3);
        Mat g(F3, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Local v(F3);
                if (rng() % 2)
                    v.set_coeff(ed(rng), Fq(F3, 1 + cd(rng) % 2));
                if (i == j && v.is_zero())
                    v = Local::t(F3, ed(rng));
                g.at(i, j) = v;
            }
        Lattice L;
        try {
            L = Lattice::from_generators(g);
        } catch (const Error&) {
            continue;
        }
        // idempotent
        CHECK(Lattice::from_generators(L.basis()) == L);
        // random unimodular change of generators
        Mat u = Mat::identity(F3, n);
        for (int s = 0; s < 3; ++s) {
            int i = int(rng() % n), j = int(rng() % n);
            if (i == j)
                continue;
            Mat e = Mat::identity(F3, n);
            e.at(i, j) = Local::monomial(F3, Fq(F3, 1 + cd(rng) % 2), ed(rng) >= 0 ? 1 : 0);
            u = u * e;
        }
        CHECK(Lattice::from_generators(g * u) == L);
    }
}

TEST_CASE("index")
{
    Lattice O2 = Lattice::standard(F3, 2);
    Lattice sub = Lattice::from_generators(M2("t, 0; 0, t^2"));
    CHECK(lattice_index(O2, sub) == 3);
    CHECK(lattice_index(O2, O2) == 0);
    CHECK_THROWS_AS(lattice_index(sub, O2), Error);

    // O_E-length convention in rank 1 over E
    Lattice OE = Lattice::standard(E3, 1);
    Lattice tOE = Lattice::standard(E3, 1, 1);
    CHECK(lattice_index(OE, tOE) == 1);
}

TEST_CASE("index additivity")
{
    std::mt19937_64 rng(17);
    for (int it = 0; it < 60; ++it) {
        int n = 1 + int(rng() % 2);
        // nested diagonal scales d1 <= d2 <= d3 entrywise
        std::vector<int> d1(n), d2(n), d3(n);
        for (int i = 0; i < n; ++i) {
            d1[i] = int(rng() % 3);
            d2[i] = d1[i] + int(rng() % 3);
            d3[i] = d2[i] + int(rng() % 3);
        }
        auto diag = [&](const std::vector<int>& d) {
            Mat m(F3, n, n);
            for (int i = 0; i < n; ++i)
                m.at(i, i) = Local::t(F3, d[i]);
            return Lattice::from_generators(m);
        };
        Lattice L1 = diag(d1), L2 = diag(d2), L3 = diag(d3);
        CHECK(L1.contains(L2));
        CHECK(L2.contains(L3));
        CHECK(lattice_index(L1, L3) == lattice_index(L1, L2) + lattice_index(L2, L3));
    }
}

TEST_CASE("apply")
{
    Lattice O2 = Lattice::standard(F3, 2);
    Mat d = M2("t, 0; 0, t");
    Lattice tO2 = O2.apply(d);
    CHECK(lattice_index(O2, tO2) == 2);
    CHECK(O2.apply(Mat::identity(F3, 2)) == O2);

    Mat m = M2("1, t; t^2, 1 + t");
    Lattice L = O2.apply(m);
    Lattice back = L.apply(m.inverse_to(30));
    CHECK(back == O2);

    // determinant law: [L : M L] = v(det M) when M L <= L
    Mat md = M2("t^2, t; 0, t");
    Lattice img = O2.apply(md);
    CHECK(O2.contains(img));
    CHECK(lattice_index(O2, img) == md.det().valuation());

    Mat singular(F3, 2, 2);
    singular.at(0, 0) = Local::one(F3);
    CHECK_THROWS_AS(O2.apply(singular), Error);
}

TEST_CASE("conj lattice")
{
    Lattice OE2 = Lattice::standard(E3, 2);
    CHECK(OE2.conj() == OE2);

    Mat g(E3, 2, 2);
    g.at(0, 0) = Local::from_fq(Fq::gen(E3));
    g.at(1, 1) = Local::one(E3);
    g.at(0, 1) = Local::monomial(E3, Fq::gen(E3), 2);
    Lattice L = Lattice::from_generators(g);
    CHECK(L.conj().conj() == L);
    // sigma of the lattice spanned by (w,0),(0,1) equals O_E^2 as a span
    Mat h(E3, 2, 2);
    h.at(0, 0) = Local::from_fq(Fq::gen(E3));
    h.at(1, 1) = Local::one(E3);
    Lattice W = Lattice::from_generators(h);
    CHECK(W.conj() == Lattice::standard(E3, 2));
}

TEST_CASE("contains")
{
    Lattice O2 = Lattice::standard(F3, 2);
    Lattice tO2 = Lattice::standard(F3, 2, 1);
    CHECK(O2.contains(tO2));
    CHECK_FALSE(tO2.contains(O2));
    CHECK(O2.contains(O2));

    // mutual containment iff equal canonical forms
    std::mt19937_64 rng(23);
    for (int it = 0; it < 40; ++it) {
        Mat a(F3, 2, 2), b(F3, 2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                if (rng() % 2)
                    a.at(i, j) = Local::t(F3, int(rng() % 3));
                if (rng() % 2)
                    b.at(i, j) = Local::t(F3, int(rng() % 3));
            }
        a.at(0, 0) = a.at(0, 0) + Local::one(F3);
        a.at(1, 1) = a.at(1, 1) + Local::t(F3);
        b.at(0, 0) = b.at(0, 0) + Local::one(F3);
        b.at(1, 1) = b.at(1, 1) + Local::t(F3);
        Lattice A = Lattice::from_generators(a), B = Lattice::from_generators(b);
        CHECK((A.contains(B) && B.contains(A)) == (A == B));
    }
}
