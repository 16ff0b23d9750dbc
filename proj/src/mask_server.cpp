#include "archprog/mask_server.hpp"

#include <istream>
#include <ostream>

#include "json.hpp"

namespace archprog {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string error_json(const std::string& what) {
    ordered_json j;
    j["error"] = what;
    return j.dump();
}

} // namespace

std::string mask_response(const Fsm& fsm, std::string_view request) {
    TokenSequence prefix;
    try {
        const json j = json::parse(request);
        if (!j.is_object() || !j.contains("prefix")) return error_json("request must be an object with a \"prefix\" array");
        const json& p = j["prefix"];
        if (!p.is_array()) return error_json("\"prefix\" must be an array of token ids");
        for (const json& t : p) {
            if (!t.is_number_integer()) return error_json("token ids must be integers");
            prefix.push_back(t.get<Token>());
        }
    } catch (const json::exception& e) {
        return error_json(std::string("malformed request: ") + e.what());
    }

    ordered_json r;
    try {
        const PrefixState st = run_prefix(fsm, prefix);
        if (st.at_start) {
            r["valid"] = TokenSequence{Vocab::kBos};
            r["accept"] = false;
        } else {
            r["valid"] = fsm.allowed(st.state);
            r["accept"] = st.state.phase == Phase::Accept;
        }
    } catch (const TokenError& e) {
        r["error"] = e.what();
        r["position"] = e.position();
        r["expected"] = e.expected();
    }
    return r.dump();
}

std::size_t serve_masks(std::istream& in, std::ostream& out, const Fsm& fsm) {
    std::size_t served = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out << mask_response(fsm, line) << '\n';
        out.flush();
        ++served;
    }
    return served;
}

} // namespace archprog
