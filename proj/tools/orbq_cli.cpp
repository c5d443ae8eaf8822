// Command-line front end.  Talks to the engine exclusively through the
// C API in orbq.h; exit codes: 0 all pass, 1 any failure, 2 usage errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orbq.h"

using nlohmann::json;

namespace {

struct CtxGuard {
    orbq_ctx* ctx = nullptr;
    explicit CtxGuard(const std::string& opts) { ctx = orbq_ctx_new(opts.c_str()); }
    ~CtxGuard() { orbq_ctx_free(ctx); }
};

struct StrGuard {
    char* s = nullptr;
    ~StrGuard() { orbq_free(s); }
};

int emit(int rc, const char* payload, const std::string& out_path)
{
    std::string text = payload ? payload : "{}";
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << text << "\n";
    } else {
        std::cout << text << "\n";
    }
    return rc;
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        return {};
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"orbq: exact orbital integrals over F_q((t)) by lattice counting"};
    app.require_subcommand(1);

    int q = 3, n = 1, precision = 40, window = -1;
    std::string lambda = "1/2", out_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--q", q, "residue field cardinality (2, 3, 5 or 7)");
        cmd->add_option("--n", n, "rank");
        cmd->add_option("--lambda", lambda, "Hasse invariant: 0 or 1/2");
        cmd->add_option("--precision", precision, "working t-adic precision");
        cmd->add_option("--window", window, "override the enumeration window");
        cmd->add_option("--json", out_path, "write the JSON result to a file");
    };

    // orb
    auto* orb = app.add_subcommand("orb", "evaluate one orbital integral");
    std::string orb_x, orb_side = "LINEAR";
    add_common(orb);
    orb->add_option("--x", orb_x, "matrix in the element grammar, rows ';', entries ','")
        ->required();
    orb->add_option("--side", orb_side, "LINEAR, QUATERNION, CONJUGATION or TWISTED");

    // inv
    auto* inv = app.add_subcommand("inv", "invariant profile, ord, epsilon, matching");
    std::string inv_delta, inv_x, inv_side = "LINEAR";
    add_common(inv);
    inv->add_option("--delta", inv_delta, "monic polynomial in T over F");
    inv->add_option("--x", inv_x, "matrix whose invariant to take");
    inv->add_option("--side", inv_side, "LINEAR, QUATERNION or GENERAL");

    // verify
    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::string verify_file, verify_gen, verify_suite = "ALL";
    uint64_t verify_seed = 1;
    add_common(verify);
    verify->add_option("--instances", verify_file, "instance file (JSON array or object)");
    verify->add_option("--gen", verify_gen, "generator config, e.g. n=1,count=20,seed=7");
    verify->add_option("--suite", verify_suite, "suite name or ALL");
    verify->add_option("--seed", verify_seed, "generator seed");

    // gen
    auto* gen = app.add_subcommand("gen", "emit instance files");
    std::string gen_spec;
    uint64_t gen_seed = 1;
    int gen_count = 10;
    add_common(gen);
    gen->add_option("--count", gen_count, "instances per (q, n, lambda)");
    gen->add_option("--seed", gen_seed, "deterministic seed");
    gen->add_option("--config", gen_spec, "extra config JSON");

    CLI11_PARSE(app, argc, argv);

    json opts = {{"precision", precision}, {"window", window}};
    CtxGuard guard(opts.dump());
    if (!guard.ctx) {
        std::cerr << "{\"error\":\"context creation failed\"}\n";
        return 2;
    }

    auto parse_kv_config = [&](const std::string& text) {
        // "n=1,count=20,seed=7" convenience form; also accepts raw JSON
        if (!text.empty() && text.front() == '{')
            return json::parse(text);
        json j;
        std::istringstream is(text);
        std::string kv;
        while (std::getline(is, kv, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                continue;
            std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
            try {
                j[k] = std::stoll(v);
            } catch (...) {
                j[k] = v;
            }
        }
        return j;
    };

    if (*orb) {
        json req = {{"q", q},         {"n", n},           {"lambda", lambda},
                    {"side", orb_side}, {"x", orb_x},     {"precision", precision},
                    {"window", window}};
        StrGuard res;
        int rc = orbq_orb(guard.ctx, req.dump().c_str(), &res.s);
        return emit(rc == ORBQ_OK ? 0 : 2, res.s, out_path);
    }

    if (*inv) {
        json req = {{"q", q}, {"n", n}, {"lambda", lambda}, {"precision", precision}};
        if (!inv_delta.empty())
            req["delta"] = inv_delta;
        if (!inv_x.empty()) {
            req["x"] = inv_x;
            req["side"] = inv_side;
        }
        StrGuard res;
        int rc = orbq_inv(guard.ctx, req.dump().c_str(), &res.s);
        return emit(rc == ORBQ_OK ? 0 : 2, res.s, out_path);
    }

    if (*gen) {
        json cfg = gen_spec.empty() ? json::object() : parse_kv_config(gen_spec);
        if (!cfg.contains("q"))
            cfg["q"] = q;
        if (!cfg.contains("n"))
            cfg["n"] = n;
        if (!cfg.contains("lambda"))
            cfg["lambda"] = lambda;
        if (!cfg.contains("count"))
            cfg["count"] = gen_count;
        if (!cfg.contains("seed"))
            cfg["seed"] = gen_seed;
        StrGuard res;
        int rc = orbq_gen(guard.ctx, cfg.dump().c_str(), &res.s);
        return emit(rc == ORBQ_OK ? 0 : 2, res.s, out_path);
    }

    if (*verify) {
        // assemble the instance list
        std::vector<json> instances;
        if (!verify_file.empty()) {
            std::string text = read_file(verify_file);
            if (text.empty()) {
                std::cerr << "{\"error\":\"cannot read " << verify_file << "\"}\n";
                return 2;
            }
            json parsed = json::parse(text, nullptr, false);
            if (parsed.is_discarded()) {
                std::cerr << "{\"error\":\"instance file is not valid JSON\"}\n";
                return 2;
            }
            if (parsed.is_array())
                for (auto& e : parsed)
                    instances.push_back(e);
            else
                instances.push_back(parsed);
        } else {
            json cfg = parse_kv_config(verify_gen);
            if (!cfg.contains("q"))
                cfg["q"] = q;
            if (!cfg.contains("n"))
                cfg["n"] = n;
            if (!cfg.contains("lambda"))
                cfg["lambda"] = lambda;
            if (!cfg.contains("seed"))
                cfg["seed"] = verify_seed;
            StrGuard res;
            int rc = orbq_gen(guard.ctx, cfg.dump().c_str(), &res.s);
            if (rc != ORBQ_OK) {
                std::cerr << (res.s ? res.s : "{}") << "\n";
                return 2;
            }
            for (auto& e : json::parse(res.s))
                instances.push_back(e);
        }
        json reports = json::array();
        int pass = 0, failc = 0, skip = 0;
        for (auto& inst : instances) {
            if (verify_suite != "ALL")
                inst["suites"] = json::array({verify_suite});
            if (!inst.contains("precision"))
                inst["precision"] = precision;
            if (window >= 0)
                inst["window"] = window;
            StrGuard res;
            int rc = orbq_verify(guard.ctx, inst.dump().c_str(), &res.s);
            if (rc != ORBQ_OK) {
                std::cerr << (res.s ? res.s : "{}") << "\n";
                return 2;
            }
            json rep = json::parse(res.s);
            reports.push_back(rep);
            for (auto& [name, suite] : rep["suites"].items()) {
                std::string st = suite["status"].get<std::string>();
                if (st == "PASS")
                    ++pass;
                else if (st == "FAIL")
                    ++failc;
                else
                    ++skip;
            }
        }
        json out = {{"reports", reports},
                    {"summary", {{"pass", pass}, {"fail", failc}, {"skip", skip}}}};
        emit(0, out.dump(2).c_str(), out_path);
        std::cerr << "pass=" << pass << " fail=" << failc << " skip=" << skip << "\n";
        return failc == 0 ? 0 : 1;
    }

    return 2;
}
