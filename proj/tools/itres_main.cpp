#include "itres/oracles.hpp"
#include "itres/pairing.hpp"
#include "itres/report.hpp"
#include "itres/verlinde.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>

using namespace itres;
using nlohmann::json;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::pair<std::size_t, unsigned> parse_eq(const std::string& s, const char* what) {
    auto pos = s.find('=');
    if (pos == std::string::npos)
        throw std::invalid_argument(std::string(what) + ": expected r=m, got '" + s + "'");
    return {std::stoul(s.substr(0, pos)), static_cast<unsigned>(std::stoul(s.substr(pos + 1)))};
}

std::pair<std::size_t, unsigned> parse_colon(const std::string& s) {
    auto pos = s.find(':');
    if (pos == std::string::npos)
        throw std::invalid_argument("--b: expected r:j, got '" + s + "'");
    return {std::stoul(s.substr(0, pos)), static_cast<unsigned>(std::stoul(s.substr(pos + 1)))};
}

void print_report(const json& doc, bool as_json) {
    if (as_json) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    // aligned text table from the flat result object
    auto row = [](const std::string& k, const std::string& v) {
        std::cout << "  " << std::left << std::setw(18) << k << v << "\n";
    };
    if (doc.contains("request")) {
        std::cout << "request:\n";
        for (auto& [k, v] : doc["request"].items())
            row(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    if (doc.contains("result")) {
        std::cout << "result:\n";
        for (auto& [k, v] : doc["result"].items())
            row(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    if (doc.contains("checks")) {
        std::cout << "checks:\n";
        for (auto& c : doc["checks"]) row(c["name"].get<std::string>(), c["status"].get<std::string>());
    }
    if (doc.contains("timing_ms")) std::cout << "timing_ms: " << doc["timing_ms"] << "\n";
}

int run_pair(const PairingSpec& spec, const std::string& route_str, bool as_json,
             bool no_timing) {
    Timer timer;
    std::optional<Route> route;
    if (!route_str.empty()) {
        route = route_from_name(route_str);
        if (!route) throw std::invalid_argument("unknown route '" + route_str + "'");
    }
    PairingResult res = pairing_dispatch(spec, route);

    json req{{"n", std::to_string(spec.n)},  {"d", std::to_string(spec.d)},
             {"g", std::to_string(spec.g)}};
    json aexp = json::object(), fexp = json::object();
    for (auto& [r, m] : spec.a_exp) aexp[std::to_string(r)] = std::to_string(m);
    for (auto& [r, m] : spec.f_exp) fexp[std::to_string(r)] = std::to_string(m);
    if (!aexp.empty()) req["a"] = aexp;
    if (!fexp.empty()) req["f"] = fexp;
    if (!spec.b_idx.empty()) {
        json b = json::array();
        for (auto& [r, j] : spec.b_idx) b.push_back(std::to_string(r) + ":" + std::to_string(j));
        req["b"] = b;
    }
    if (spec.epsilon) req["epsilon"] = spec.epsilon->str();

    json result{{"value", res.value.str()},
                {"route", route_name(res.route)},
                {"pi_exponent", "0"},
                {"residue_order", res.residue_order},
                {"top_degree", res.top_degree ? "yes" : "no"}};
    if (!res.notes.empty()) result["notes"] = res.notes;
    if (res.route == Route::eq936) result["b_sign"] = std::to_string(res.b_sign);
    if (!res.jet_caps.empty()) {
        json caps = json::array();
        for (unsigned c : res.jet_caps) caps.push_back(std::to_string(c));
        result["jet_caps"] = caps;
    }

    json doc{{"request", req}, {"result", result}, {"checks", json::array()}};
    if (!no_timing) doc["timing_ms"] = timer.ms();
    print_report(doc, as_json);
    return 0;
}

int run_verlinde(const VerlindeSpec& spec, unsigned digits, bool as_json, bool no_timing) {
    Timer timer;
    VerlindeReport rep = verlinde_check(spec, digits);
    json req{{"n", std::to_string(spec.n)},
             {"d", std::to_string(spec.d)},
             {"g", std::to_string(spec.g)},
             {"k", std::to_string(spec.k)}};
    json result{{"D", rep.D.str()}, {"V", rep.V}};
    json checks = json::array();
    checks.push_back(json{{"name", "D-integral"}, {"status", rep.integral ? "pass" : "fail"}});
    checks.push_back(json{{"name", "D-nonnegative"}, {"status", rep.nonneg ? "pass" : "fail"}});
    checks.push_back(json{{"name", "V-agrees-with-D"}, {"status", rep.agree ? "pass" : "fail"}});
    json doc{{"request", req}, {"result", result}, {"checks", checks}};
    if (!no_timing) doc["timing_ms"] = timer.ms();
    print_report(doc, as_json);
    return rep.pass() ? 0 : 4;
}

int run_verlinde_csv(std::size_t n, long d, unsigned g, const std::vector<unsigned long>& ks,
                     unsigned digits) {
    std::cout << "n,d,g,k,D,V,check\n";
    int rc = 0;
    for (unsigned long k : ks) {
        VerlindeSpec spec;
        spec.n = n;
        spec.d = d;
        spec.g = g;
        spec.k = k;
        VerlindeReport rep = verlinde_check(spec, digits);
        if (!rep.pass()) rc = 4;
        std::cout << n << "," << d << "," << g << "," << k << "," << rep.D.str() << ","
                  << rep.V << "," << (rep.pass() ? "pass" : "fail") << "\n";
    }
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact intersection pairings on moduli of fixed-determinant bundles"};
    app.require_subcommand(1);
    bool as_json = false;
    bool no_timing = false;

    // pair
    auto* pair = app.add_subcommand("pair", "intersection pairing with exp(f_2)");
    unsigned long pn = 2;
    long pd = 1;
    unsigned pg = 2;
    std::vector<std::string> a_args, f_args, b_args;
    std::string eps_str, route_str;
    pair->add_option("--n", pn, "rank")->required();
    pair->add_option("--d", pd, "degree")->required();
    pair->add_option("--g", pg, "genus")->required();
    pair->add_option("--a", a_args, "a-class exponent r=m (repeatable)");
    pair->add_option("--f", f_args, "f-class exponent r=m (repeatable, r >= 3)");
    pair->add_option("--b", b_args, "b-class index r:j (repeatable)");
    pair->add_option("--epsilon", eps_str, "scale the symplectic form by p/q");
    pair->add_option("--route", route_str, "mainab|t96b|eq936");
    pair->add_flag("--json", as_json, "emit a JSON report");
    pair->add_flag("--no-timing", no_timing, "omit timing_ms for byte-stable output");

    // verlinde
    auto* ver = app.add_subcommand("verlinde", "Verlinde dimension two ways");
    unsigned long vn = 2;
    std::vector<unsigned long> vks;
    long vd = 1;
    unsigned vg = 2, vprec = 50;
    bool vcsv = false;
    ver->add_option("--n", vn, "rank")->required();
    ver->add_option("--d", vd, "degree")->required();
    ver->add_option("--g", vg, "genus")->required();
    ver->add_option("--k", vks, "level(s), each divisible by n")->required();
    ver->add_option("--precision", vprec, "working decimal digits for the sine sum");
    ver->add_flag("--csv", vcsv, "one CSV row per level");
    ver->add_flag("--json", as_json, "emit a JSON report");
    ver->add_flag("--no-timing", no_timing, "omit timing_ms for byte-stable output");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "independent reference computations");
    oracle->require_subcommand(1);
    auto* wit = oracle->add_subcommand("witten", "truncated lattice sum");
    unsigned long wn = 2, wcut = 200;
    long wd = 1;
    unsigned wg = 2, wdig = 18;
    std::vector<std::string> wa_args;
    wit->add_option("--n", wn)->required();
    wit->add_option("--d", wd)->required();
    wit->add_option("--g", wg)->required();
    wit->add_option("--a", wa_args, "a-class exponent r=m (repeatable)");
    wit->add_option("--cutoff", wcut, "lattice cutoff N (compares N and 2N)");
    wit->add_option("--digits", wdig, "working precision");

    auto* sz = oracle->add_subcommand("szenes", "lattice-sum identity check");
    unsigned long sid = 0, scut = 200;
    unsigned sdig = 18;
    sz->add_option("--fn", sid, "built-in test function id (0..3)");
    sz->add_option("--cutoff", scut);
    sz->add_option("--digits", sdig);

    auto* th = oracle->add_subcommand("thaddeus", "rank-2 closed form");
    unsigned tg = 2, tj = 0;
    th->add_option("--g", tg)->required();
    th->add_option("--j", tj, "a_2 exponent");

    auto* sv = oracle->add_subcommand("svol", "rank-2 symplectic volume");
    unsigned svg = 2;
    sv->add_option("--g", svg)->required();
    for (auto* sub : {wit, sz, th, sv}) {
        sub->add_flag("--json", as_json, "emit a JSON report");
        sub->add_flag("--no-timing", no_timing, "omit timing_ms for byte-stable output");
    }

    // selftest
    app.add_subcommand("selftest", "run the deterministic invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (pair->parsed()) {
            PairingSpec spec;
            spec.n = pn;
            spec.d = pd;
            spec.g = pg;
            for (auto& s : a_args) {
                auto [r, m] = parse_eq(s, "--a");
                spec.a_exp[r] += m;
            }
            for (auto& s : f_args) {
                auto [r, m] = parse_eq(s, "--f");
                spec.f_exp[r] += m;
            }
            for (auto& s : b_args) spec.b_idx.push_back(parse_colon(s));
            if (!eps_str.empty()) spec.epsilon = Rational::from_string(eps_str);
            return run_pair(spec, route_str, as_json, no_timing);
        }
        if (ver->parsed()) {
            if (vcsv || vks.size() > 1) return run_verlinde_csv(vn, vd, vg, vks, vprec);
            VerlindeSpec spec;
            spec.n = vn;
            spec.d = vd;
            spec.g = vg;
            spec.k = vks.at(0);
            return run_verlinde(spec, vprec, as_json, no_timing);
        }
        if (oracle->parsed()) {
            Timer timer;
            json doc;
            int rc = 0;
            if (wit->parsed()) {
                std::map<std::size_t, unsigned> a_exp;
                for (auto& s : wa_args) {
                    auto [r, m] = parse_eq(s, "--a");
                    a_exp[r] += m;
                }
                LatticeSumConfig cfg;
                cfg.cutoff = wcut;
                cfg.digits = wdig;
                auto rep = witten_sum(wn, wd, wg, a_exp, cfg);
                doc["request"] = json{{"oracle", "witten"},
                                      {"n", std::to_string(wn)},
                                      {"d", std::to_string(wd)},
                                      {"g", std::to_string(wg)},
                                      {"cutoff", std::to_string(wcut)}};
                doc["result"] = json{{"value", rep.value_str},
                                     {"value_at_N", std::to_string(rep.value_half)},
                                     {"window", std::to_string(rep.window)},
                                     {"converged", rep.converged ? "yes" : "no"}};
                if (!rep.converged) rc = 4;
            } else if (sz->parsed()) {
                LatticeSumConfig cfg;
                cfg.cutoff = scut;
                cfg.digits = sdig;
                auto rep = szenes_check(sid, cfg);
                doc["request"] = json{{"oracle", "szenes"}, {"fn", std::to_string(sid)},
                                      {"cutoff", std::to_string(scut)}};
                doc["result"] = json{{"lhs", rep.lhs.value_str},
                                     {"rhs_exact", rep.rhs.str()},
                                     {"difference", std::to_string(rep.diff)},
                                     {"window", std::to_string(rep.lhs.window)},
                                     {"converged", rep.lhs.converged ? "yes" : "no"}};
                if (!rep.lhs.converged) rc = 4;
            } else if (th->parsed()) {
                auto v = thaddeus_value(tg, tj);
                doc["request"] = json{{"oracle", "thaddeus"}, {"g", std::to_string(tg)},
                                      {"j", std::to_string(tj)}};
                doc["result"] = json{{"value", v.value.str()},
                                     {"regularized", v.regularized ? "yes" : "no"},
                                     {"pi_exponent", "0"}};
            } else if (sv->parsed()) {
                doc["request"] = json{{"oracle", "svol"}, {"g", std::to_string(svg)}};
                doc["result"] = json{{"value", svol_value(svg).str()}, {"pi_exponent", "0"}};
            }
            doc["checks"] = json::array();
            if (!no_timing) doc["timing_ms"] = timer.ms();
            print_report(doc, as_json);
            return rc;
        }
        // selftest: deterministic output, no timing
        bool ok = false;
        std::string rep = selftest_report(ok);
        std::cout << rep;
        return ok ? 0 : 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 3;
    }
}
