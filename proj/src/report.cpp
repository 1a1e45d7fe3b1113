#include "itres/report.hpp"

#include "itres/oracles.hpp"
#include "itres/pairing.hpp"
#include "itres/verlinde.hpp"

#include <json.hpp>

namespace itres {

namespace {

using nlohmann::json;

json check(const std::string& name, bool pass, const std::string& detail) {
    return json{{"name", name}, {"status", pass ? "pass" : "fail"}, {"detail", detail}};
}

} // namespace

std::string selftest_report(bool& ok) {
    json checks = json::array();
    ok = true;
    auto push = [&](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back(check(name, pass, detail));
        ok = ok && pass;
    };

    // volumes against the closed form
    for (unsigned g : {2u, 3u, 4u}) {
        PairingSpec s;
        s.n = 2;
        s.d = 1;
        s.g = g;
        Rational got = pairing_a(s).value;
        Rational want = svol_value(g);
        push("volume-rank2-g" + std::to_string(g), got == want,
             got.str() + " vs " + want.str());
    }

    // rank-2 closed forms with one a_2 power
    {
        PairingSpec s;
        s.n = 2;
        s.d = 1;
        s.g = 3;
        s.a_exp[2] = 1;
        Rational got = pairing_a(s).value;
        Rational want = thaddeus_value(3, 1).value;
        push("thaddeus-g3-j1", got == want, got.str() + " vs " + want.str());
    }

    // jet route reduces to the a-route
    for (auto [n, g] : std::vector<std::pair<std::size_t, unsigned>>{{2, 2}, {3, 2}}) {
        PairingSpec s;
        s.n = n;
        s.d = 1;
        s.g = g;
        s.a_exp[2] = 1;
        Rational a = pairing_a(s).value;
        Rational f = pairing_f(s).value;
        push("route-agreement-n" + std::to_string(n), a == f, a.str() + " vs " + f.str());
    }

    // change-of-variables identity at one jet order
    {
        auto rep = binverse_identity_check(3, 1, 2, {}, {1});
        push("binverse-n3-cap1", rep.equal, rep.equal ? "jets equal" : "jets differ");
    }

    // b-sector: unpaired index vanishes; genus reduction
    {
        PairingSpec s;
        s.n = 2;
        s.d = 1;
        s.g = 2;
        s.b_idx = {{2, 1}};
        push("b-unpaired-zero", pairing_b(s).value == Rational(0), "single b_2^1");
        PairingSpec t;
        t.n = 2;
        t.d = 1;
        t.g = 3;
        t.a_exp[2] = 1;
        t.b_idx = {{2, 1}, {2, 4}};
        Rational got = pairing_b(t).value;
        push("b-genus-reduction", got == Rational(1, 2), got.str() + " vs 1/2");
    }

    // epsilon independence on a top-degree class
    {
        PairingSpec s;
        s.n = 2;
        s.d = 1;
        s.g = 3;
        s.a_exp[2] = 3;
        Rational v1 = epsilon_scaled_pairing(s, Rational(1)).value;
        Rational v2 = epsilon_scaled_pairing(s, Rational(2)).value;
        Rational v3 = epsilon_scaled_pairing(s, Rational(1, 3)).value;
        push("epsilon-independence", v1 == v2 && v2 == v3, v1.str());
    }

    // Verlinde spot values
    {
        VerlindeSpec v{2, 1, 2, 2};
        auto rep = verlinde_check(v);
        push("verlinde-2-1-2-2", rep.pass() && rep.D == Rational(6),
             "D=" + rep.D.str() + " V=" + rep.V);
        VerlindeSpec w{2, 1, 3, 2};
        auto rep2 = verlinde_check(w);
        push("verlinde-2-1-3-2", rep2.pass() && rep2.D == Rational(28),
             "D=" + rep2.D.str() + " V=" + rep2.V);
    }

    json doc;
    doc["tool"] = "selftest";
    doc["status"] = ok ? "pass" : "fail";
    doc["checks"] = checks;
    return doc.dump(2) + "\n";
}

} // namespace itres
