#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harness.hpp"

using namespace orbq;

static FieldId F3{3, 1};

TEST_CASE("solve_norm")
{
    for (int q : {2, 3, 5, 7}) {
        FieldId F{uint8_t(q), 1};
        Local u = Local::one(F) + Local::t(F) + Local::t(F, 3);
        Local w = solve_norm(u, 40);
        CHECK((w.norm_to_base() - u).truncated(38).is_zero());
        // a non-square residue unit is also a norm (E/F unramified)
        if (q > 2) {
            Local v = Local::monomial(F, Fq(F, q - 1), 0) + Local::t(F, 2);
            Local wv = solve_norm(v, 40);
            CHECK((wv.norm_to_base() - v).truncated(38).is_zero());
        }
    }
}

TEST_CASE("REDUCTION suite on the spec instance")
{
    Instance inst;
    inst.q = 3;
    inst.n = 1;
    inst.lambda = Lambda::Half;
    inst.side = Side::Linear;
    inst.x_linear = "t^2";
    SuiteResult r = run_suite(inst, "REDUCTION");
    CHECK(r.status == "PASS");
    CHECK(r.lhs == "q^s - q^{-1s}");
    CHECK(r.lhs == r.rhs);
    CHECK(r.window_stable);
    CHECK(r.precision_robust);
}

TEST_CASE("FUNC_EQ and VANISH on x = t^2")
{
    Instance inst;
    inst.q = 3;
    inst.n = 1;
    inst.side = Side::Linear;
    inst.x_linear = "t^2";
    SuiteResult f = run_suite(inst, "FUNC_EQ");
    CHECK(f.status == "PASS");
    SuiteResult v = run_suite(inst, "VANISH");
    CHECK(v.status == "PASS");
    CHECK(v.lhs == "1"); // central value 0, first derivative nonzero
}

TEST_CASE("FL suite at rank 1")
{
    // matching case: v(x) odd
    Instance inst;
    inst.q = 3;
    inst.n = 1;
    inst.lambda = Lambda::Half;
    inst.side = Side::Linear;
    inst.x_linear = "t + t^2";
    SuiteResult r = run_suite(inst, "FL");
    CHECK(r.status == "PASS");
    CHECK(r.lhs == "1");
    CHECK(r.rhs == "1");

    // non-matching case: even valuation, central value must vanish
    Instance inst2 = inst;
    inst2.x_linear = "t^2";
    SuiteResult r2 = run_suite(inst2, "FL");
    CHECK(r2.status == "PASS");
    CHECK(r2.lhs == "0");
}

TEST_CASE("EDGE and PAR suites")
{
    Instance inst;
    inst.q = 3;
    inst.n = 1;
    inst.lambda = Lambda::Half;
    inst.side = Side::Linear;
    inst.x_linear = "t + t^3"; // x/pi = 1 + t^2, a unit
    SuiteResult e = run_suite(inst, "EDGE");
    CHECK(e.status == "PASS");
    SuiteResult p = run_suite(inst, "PAR");
    CHECK(p.status == "PASS");
}

TEST_CASE("instance JSON round trip and determinism")
{
    GenConfig cfg;
    cfg.qs = {3};
    cfg.ns = {1};
    cfg.count = 8;
    cfg.seed = 11;
    auto a = gen_instances(cfg);
    auto b = gen_instances(cfg);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == 8);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(instance_to_json(a[i]) == instance_to_json(b[i]));
        Instance back = instance_from_json(instance_to_json(a[i]));
        CHECK(instance_to_json(back) == instance_to_json(a[i]));
    }
    // byte-identical reports for identical instances
    a[0].suites = {"FUNC_EQ", "VANISH"};
    Report r1 = run_instance(a[0]);
    Report r2 = run_instance(a[0]);
    CHECK(report_to_json(r1, false) == report_to_json(r2, false));
}

TEST_CASE("generator emits matched pairs that pass FL")
{
    GenConfig cfg;
    cfg.qs = {3};
    cfg.ns = {2};
    cfg.count = 8;
    cfg.seed = 21;
    auto insts = gen_instances(cfg);
    int matched = 0, checked = 0;
    for (auto& inst : insts) {
        if (inst.side != Side::Both)
            continue;
        ++matched;
        SuiteResult r = run_suite(inst, "FL");
        if (r.status == "PASS")
            ++checked;
        CHECK(r.status == "PASS");
    }
    CHECK(matched >= 1);
    CHECK(checked == matched);
}

TEST_CASE("gamma weight identity on small instances")
{
    EnumConfig cfg;
    std::string detail;
    // rank 1
    Mat a(F3, 1, 1);
    a.at(0, 0) = parse_local("t^2", F3);
    CHECK(gamma_weight_check(a, cfg, &detail));
    // split diagonal with distinct residues
    Mat b = parse_matrix("1 + t, 0; 0, 2", F3);
    CHECK(gamma_weight_check(b, cfg, &detail));
    // split diagonal with equal residues (conductor order, weight q - 1)
    Mat c = parse_matrix("1, 0; 0, 1 + t", F3);
    CHECK(gamma_weight_check(c, cfg, &detail));
    // inert quadratic: companion of T^2 + 1 over F_3
    Mat d = parse_matrix("0, 2; 1, 0", F3);
    CHECK(gamma_weight_check(d, cfg, &detail));
    // ramified quadratic: companion of T^2 - t
    Mat e = parse_matrix("0, t; 1, 0", F3);
    CHECK(gamma_weight_check(e, cfg, &detail));
    // nilpotent-valuation split torus
    Mat f = parse_matrix("t, 0; 0, t^2", F3);
    CHECK(gamma_weight_check(f, cfg, &detail));
}
