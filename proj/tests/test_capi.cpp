#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "orbq.h"

using nlohmann::json;

namespace {

struct Ctx {
    orbq_ctx* p;
    Ctx() : p(orbq_ctx_new(nullptr)) {}
    ~Ctx() { orbq_ctx_free(p); }
};

json call(int (*fn)(orbq_ctx*, const char*, char**), orbq_ctx* ctx, const json& req,
          int expect = ORBQ_OK)
{
    char* out = nullptr;
    int rc = fn(ctx, req.dump().c_str(), &out);
    REQUIRE(rc == expect);
    REQUIRE(out != nullptr);
    json parsed = json::parse(out);
    orbq_free(out);
    return parsed;
}

} // namespace

TEST_CASE("orb endpoint matches the documented example")
{
    Ctx ctx;
    json res = call(orbq_orb, ctx.p,
                    {{"q", 3}, {"n", 1}, {"lambda", "1/2"}, {"side", "LINEAR"}, {"x", "t^2"}});
    CHECK(res["poly"]["1"] == 1);
    CHECK(res["poly"]["-1"] == -1);
    CHECK(res["value"] == 0);
    CHECK(res["derivative_log_q"] == 2);
    CHECK(res["certificates"]["window_stable"] == true);
}

TEST_CASE("inv endpoint")
{
    Ctx ctx;
    json res = call(orbq_inv, ctx.p,
                    {{"q", 3}, {"n", 1}, {"lambda", "1/2"}, {"delta", "T - t^2"}});
    CHECK(res["ord"] == 1);
    CHECK(res["epsilon"] == -1);
    CHECK(res["matching_exists"] == false);
    CHECK(res["shift_class"] == "TOP_NILPOTENT");
}

TEST_CASE("verify endpoint")
{
    Ctx ctx;
    json inst = {{"q", 3},          {"n", 1},
                 {"lambda", "1/2"}, {"side", "LINEAR"},
                 {"x_linear", "t^2"}, {"suites", json::array({"REDUCTION", "FUNC_EQ"})}};
    json res = call(orbq_verify, ctx.p, inst);
    CHECK(res["all_pass"] == true);
    CHECK(res["suites"]["REDUCTION"]["status"] == "PASS");
    CHECK(res["suites"]["FUNC_EQ"]["status"] == "PASS");
}

TEST_CASE("gen endpoint is deterministic")
{
    Ctx ctx;
    json cfg = {{"q", 3}, {"n", 1}, {"count", 5}, {"seed", 7}};
    json a = call(orbq_gen, ctx.p, cfg);
    json b = call(orbq_gen, ctx.p, cfg);
    CHECK(a == b);
    CHECK(a.size() == 5);
}

TEST_CASE("error paths carry status codes and messages")
{
    Ctx ctx;
    char* out = nullptr;
    int rc = orbq_orb(ctx.p, "this is not json", &out);
    CHECK(rc == ORBQ_E_PARSE);
    orbq_free(out);
    CHECK(std::string(orbq_last_error(ctx.p)).size() > 0);

    // inseparable input: domain error
    json req = {{"q", 3}, {"n", 2}, {"lambda", "0"}, {"side", "LINEAR"}, {"x", "t, 0; 0, t"}};
    rc = orbq_orb(ctx.p, req.dump().c_str(), &out);
    CHECK(rc == ORBQ_E_DOMAIN);
    json err = json::parse(out);
    CHECK(err.contains("kind"));
    orbq_free(out);
}

TEST_CASE("version string")
{
    CHECK(std::string(orbq_version()).find("orbq") == 0);
}
