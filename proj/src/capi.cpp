#include "orbq.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "harness.hpp"

using nlohmann::json;
using namespace orbq;

struct orbq_ctx {
    int precision = 40;
    int window = -1;
    std::string last_error;
};

extern "C" ORBQ_API const char* orbq_version(void)
{
    return "orbq 1.0.0";
}

extern "C" ORBQ_API orbq_ctx* orbq_ctx_new(const char* options_json)
{
    auto* ctx = new (std::nothrow) orbq_ctx;
    if (!ctx)
        return nullptr;
    if (options_json && *options_json) {
        try {
            json j = json::parse(options_json);
            if (j.contains("precision"))
                ctx->precision = j["precision"].get<int>();
            if (j.contains("window"))
                ctx->window = j["window"].get<int>();
        } catch (...) {
            delete ctx;
            return nullptr;
        }
    }
    return ctx;
}

extern "C" ORBQ_API void orbq_ctx_free(orbq_ctx* ctx)
{
    delete ctx;
}

extern "C" ORBQ_API const char* orbq_last_error(const orbq_ctx* ctx)
{
    return ctx ? ctx->last_error.c_str() : "null context";
}

extern "C" ORBQ_API void orbq_free(char* s)
{
    std::free(s);
}

namespace {

char* dup_out(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p)
        std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

int status_of(const Error& e)
{
    switch (e.kind()) {
    case Err::Parse:
        return ORBQ_E_PARSE;
    case Err::InsufficientPrecision:
        return ORBQ_E_PRECISION;
    case Err::WindowUnstable:
        return ORBQ_E_UNSTABLE;
    case Err::Internal:
        return ORBQ_E_INTERNAL;
    default:
        return ORBQ_E_DOMAIN;
    }
}

template <class Fn>
int guarded(orbq_ctx* ctx, char** out, Fn&& fn)
{
    if (!ctx || !out)
        return ORBQ_E_PARSE;
    *out = nullptr;
    try {
        std::string s = fn();
        *out = dup_out(s);
        return *out ? ORBQ_OK : ORBQ_E_INTERNAL;
    } catch (const Error& e) {
        ctx->last_error = e.what();
        json j = {{"error", e.what()}, {"kind", err_name(e.kind())}};
        *out = dup_out(j.dump());
        return status_of(e);
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        json j = {{"error", e.what()}, {"kind", "Internal"}};
        *out = dup_out(j.dump());
        return ORBQ_E_INTERNAL;
    }
}

OrbConfig make_cfg(const orbq_ctx* ctx, const json& j)
{
    OrbConfig cfg;
    cfg.enumeration.prec = j.value("precision", ctx->precision);
    cfg.enumeration.window_override = j.value("window", ctx->window);
    return cfg;
}

} // namespace

extern "C" ORBQ_API int orbq_orb(orbq_ctx* ctx, const char* request_json, char** result_json)
{
    return guarded(ctx, result_json, [&]() -> std::string {
        json req;
        try {
            req = json::parse(request_json ? request_json : "");
        } catch (const std::exception& e) {
            fail(Err::Parse, std::string("bad request: ") + e.what());
        }
        int q = req.at("q").get<int>();
        check_supported_prime(q);
        int n = req.at("n").get<int>();
        std::string side = req.value("side", "LINEAR");
        Lambda lam = Lambda::Half;
        if (req.contains("lambda"))
            lam = lambda_from_string(req["lambda"].get<std::string>());
        OrbConfig cfg = make_cfg(ctx, req);
        FieldId F{uint8_t(q), 1}, E{uint8_t(q), 2};

        json out;
        if (side == "LINEAR") {
            Mat x = parse_matrix(req.at("x").get<std::string>(), F);
            OrbResult r = orb_linear({n, x, lam}, cfg);
            out["poly"] = json::parse(qslaurent_to_json(r.poly));
            auto [v, d] = central_value_and_derivative(r.poly);
            out["value"] = v;
            out["derivative_log_q"] = d;
            out["pairs"] = r.terms;
            out["certificates"] = {{"window", r.window},
                                   {"window_stable", r.window_stable},
                                   {"omega_cross_ok", r.cross_checked},
                                   {"precision", cfg.enumeration.prec}};
        } else if (side == "QUATERNION") {
            Mat x = parse_matrix(req.at("x").get<std::string>(), E);
            CountResult r = orb_quaternion({n, x, lam}, cfg);
            out["count"] = r.count;
            out["value"] = r.count;
            out["derivative_log_q"] = 0;
            out["certificates"] = {{"window", r.window},
                                   {"window_stable", r.window_stable},
                                   {"precision", cfg.enumeration.prec}};
        } else if (side == "CONJUGATION") {
            Mat x = parse_matrix(req.at("x").get<std::string>(), F);
            CountResult r = orb_conjugation(x, cfg);
            out["count"] = r.count;
            out["value"] = r.count;
        } else if (side == "TWISTED") {
            Mat x = parse_matrix(req.at("x").get<std::string>(), E);
            CountResult r = orb_twisted(x, cfg);
            out["count"] = r.count;
            out["value"] = r.count;
        } else {
            fail(Err::Parse, "side must be LINEAR, QUATERNION, CONJUGATION or TWISTED");
        }
        return out.dump();
    });
}

extern "C" ORBQ_API int orbq_inv(orbq_ctx* ctx, const char* request_json, char** result_json)
{
    return guarded(ctx, result_json, [&]() -> std::string {
        json req;
        try {
            req = json::parse(request_json ? request_json : "");
        } catch (const std::exception& e) {
            fail(Err::Parse, std::string("bad request: ") + e.what());
        }
        int q = req.at("q").get<int>();
        check_supported_prime(q);
        Lambda lam = Lambda::Half;
        if (req.contains("lambda"))
            lam = lambda_from_string(req["lambda"].get<std::string>());
        int prec = req.value("precision", ctx->precision);
        FieldId F{uint8_t(q), 1}, E{uint8_t(q), 2};

        InvariantProfile prof;
        if (req.contains("delta")) {
            Poly delta = parse_poly(req["delta"].get<std::string>(), F);
            if (!delta.monic())
                fail(Err::Parse, "delta must be monic");
            prof = profile_of(delta, prec);
        } else if (req.contains("x")) {
            std::string side = req.value("side", "LINEAR");
            if (side == "LINEAR")
                prof = inv_linear(parse_matrix(req["x"].get<std::string>(), F), prec);
            else if (side == "QUATERNION")
                prof = inv_quaternion(parse_matrix(req["x"].get<std::string>(), E), lam, prec);
            else if (side == "GENERAL")
                prof = inv_general(parse_matrix(req["x"].get<std::string>(), F), prec);
            else
                fail(Err::Parse, "side must be LINEAR, QUATERNION or GENERAL");
        } else {
            fail(Err::Parse, "request needs delta or x");
        }

        json out;
        out["delta"] = prof.delta.str();
        json coeffs = json::array();
        for (int i = 0; i <= prof.delta.deg(); ++i)
            coeffs.push_back(prof.delta[i].str());
        out["delta_coeffs"] = coeffs;
        out["separable"] = prof.separable;
        out["regular_semisimple"] = prof.regular_semisimple();
        json factors = json::array();
        for (const auto& lf : prof.profile.factors)
            factors.push_back({{"e", lf.e}, {"f", lf.f}, {"c", lf.c}, {"d", lf.d}});
        out["factors"] = factors;
        if (prof.regular_semisimple() && prof.profile.complete) {
            out["ord"] = ord_lambda(prof, lam);
            out["ord_0"] = ord_lambda(prof, Lambda::Zero);
            out["ord_half"] = ord_lambda(prof, Lambda::Half);
            out["epsilon"] = epsilon_sign(prof);
            out["matching_exists"] = matching_exists(prof, lam);
        }
        ShiftedInvariant sh = shift_invariant(prof.delta);
        out["shift_class"] = shift_class_name(sh.cls);
        out["shifted"] = sh.shifted.str();
        return out.dump();
    });
}

extern "C" ORBQ_API int orbq_verify(orbq_ctx* ctx, const char* instance_json, char** report_json)
{
    return guarded(ctx, report_json, [&]() -> std::string {
        Instance inst = instance_from_json(instance_json ? instance_json : "");
        if (inst.precision <= 0)
            inst.precision = ctx->precision;
        Report rep = run_instance(inst);
        return report_to_json(rep);
    });
}

extern "C" ORBQ_API int orbq_gen(orbq_ctx* ctx, const char* config_json, char** instances_json)
{
    return guarded(ctx, instances_json, [&]() -> std::string {
        json j;
        try {
            j = json::parse(config_json ? config_json : "{}");
        } catch (const std::exception& e) {
            fail(Err::Parse, std::string("bad config: ") + e.what());
        }
        GenConfig cfg;
        if (j.contains("q"))
            cfg.qs = j["q"].is_array() ? j["q"].get<std::vector<int>>()
                                       : std::vector<int>{j["q"].get<int>()};
        if (j.contains("n"))
            cfg.ns = j["n"].is_array() ? j["n"].get<std::vector<int>>()
                                       : std::vector<int>{j["n"].get<int>()};
        if (j.contains("lambda")) {
            cfg.lambdas.clear();
            if (j["lambda"].is_array())
                for (const auto& l : j["lambda"])
                    cfg.lambdas.push_back(lambda_from_string(l.get<std::string>()));
            else
                cfg.lambdas.push_back(lambda_from_string(j["lambda"].get<std::string>()));
        }
        cfg.count = j.value("count", cfg.count);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.val_min = j.value("val_min", cfg.val_min);
        cfg.val_max = j.value("val_max", cfg.val_max);
        cfg.precision = j.value("precision", ctx->precision);
        if (j.contains("suites"))
            cfg.suites = j["suites"].get<std::vector<std::string>>();
        for (int q : cfg.qs)
            check_supported_prime(q);
        std::vector<Instance> insts = gen_instances(cfg);
        json arr = json::array();
        for (const auto& inst : insts)
            arr.push_back(json::parse(instance_to_json(inst)));
        return arr.dump();
    });
}
