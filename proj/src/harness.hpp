#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "invariant.hpp"

namespace orbq {

enum class Side { Linear, Quaternion, Both };

struct Instance {
    int q = 3;
    int n = 1;
    Lambda lambda = Lambda::Half;
    Side side = Side::Linear;
    std::optional<std::string> x_linear;     // matrix grammar over F
    std::optional<std::string> x_quaternion; // matrix grammar over E
    int precision = 40;
    int window = -1; // override when >= 0
    std::vector<std::string> suites;
    uint64_t seed = 0;

    FieldId f() const { return FieldId{uint8_t(q), 1}; }
    FieldId e() const { return FieldId{uint8_t(q), 2}; }
};

struct SuiteResult {
    std::string suite;
    std::string status; // PASS / FAIL / SKIP
    std::string reason; // for SKIP and FAIL
    std::string lhs, rhs;
    bool window_stable = true;
    bool precision_robust = true;
    bool omega_cross_ok = true;
    double time_ms = 0;
};

struct Report {
    Instance instance;
    std::vector<SuiteResult> suites;

    bool all_pass() const
    {
        for (const auto& s : suites)
            if (s.status == "FAIL")
                return false;
        return true;
    }
};

struct GenConfig {
    std::vector<int> qs = {3};
    std::vector<int> ns = {1};
    std::vector<Lambda> lambdas = {Lambda::Half};
    int count = 10;
    uint64_t seed = 1;
    int val_min = -1;
    int val_max = 4;
    int precision = 40;
    std::vector<std::string> suites = {"ALL"};
};

// Known suite names, in canonical order.
const std::vector<std::string>& suite_names();

Report run_instance(const Instance& inst);
SuiteResult run_suite(const Instance& inst, const std::string& suite);

std::vector<Instance> gen_instances(const GenConfig& cfg);

// Orbit-stabilizer identity: the plain Gamma-representative count equals the
// sum over L^x-classes of the unit-orbit sizes [O^x : R^x].  Checked by
// explicit unit-orbit BFS inside the window; meaningful on instances whose
// residue data is reachable from powers of x (the generator emits only such).
bool gamma_weight_check(const Mat& x, const EnumConfig& cfg, std::string* detail = nullptr);

// JSON encodings (nlohmann::json text)
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
// with_timing=false drops the per-suite time_ms fields, leaving the
// deterministic report content (byte-identical for identical inputs)
std::string report_to_json(const Report& rep, bool with_timing = true);
std::string qslaurent_to_json(const QsLaurent& p);

// lambda parse/print helpers ("0" or "1/2")
Lambda lambda_from_string(const std::string& s);
std::string lambda_to_string(Lambda l);

// norm equation Nm(u') = u for a unit u of O_F (E/F unramified); truncated
Local solve_norm(const Local& u, int prec);

} // namespace orbq
