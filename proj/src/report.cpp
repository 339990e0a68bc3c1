#include "voawb/report.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace voawb {

int Report::count(const std::string& status) const {
    int n = 0;
    for (const auto& c : checks)
        if (c.status == status) ++n;
    return n;
}

void Report::canonicalize() {
    std::stable_sort(checks.begin(), checks.end(), [](const CheckRecord& a, const CheckRecord& b) {
        if (a.suite != b.suite) return a.suite < b.suite;
        return a.id < b.id;
    });
}

std::string emit_json(const Report& r, bool with_timings) {
    nlohmann::json j;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [key, val] : r.config) cfg[key] = val;
    j["config"] = cfg;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json jc;
        jc["suite"] = c.suite;
        jc["id"] = c.id;
        jc["anchor"] = c.anchor;
        jc["status"] = c.status;
        jc["witness"] = c.witness;
        if (with_timings && c.ms >= 0) jc["ms"] = c.ms;
        else jc["ms"] = nullptr;
        checks.push_back(jc);
    }
    j["checks"] = checks;
    j["summary"] = {{"pass", r.count("pass")}, {"fail", r.count("fail")}, {"skip", r.count("skip")}};
    return j.dump(2) + "\n";
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

} // namespace

std::string emit_csv(const Report& r, bool with_timings) {
    std::ostringstream os;
    os << "suite,id,anchor,status,witness,ms\n";
    for (const auto& c : r.checks) {
        os << csv_escape(c.suite) << ',' << csv_escape(c.id) << ',' << csv_escape(c.anchor) << ','
           << c.status << ',' << csv_escape(c.witness) << ',';
        if (with_timings && c.ms >= 0) os << c.ms;
        os << '\n';
    }
    return os.str();
}

std::string emit_text(const Report& r, bool with_timings) {
    std::ostringstream os;
    for (const auto& [key, val] : r.config) os << "# " << key << " = " << val << "\n";
    for (const auto& c : r.checks) {
        os << (c.status == "pass" ? "PASS" : c.status == "fail" ? "FAIL" : "SKIP") << "  "
           << c.suite << "/" << c.id;
        if (!c.anchor.empty()) os << "  [" << c.anchor << "]";
        if (with_timings && c.ms >= 0) os << "  (" << c.ms << " ms)";
        if (!c.witness.empty()) os << "  :: " << c.witness;
        os << "\n";
    }
    os << "summary: pass=" << r.count("pass") << " fail=" << r.count("fail")
       << " skip=" << r.count("skip") << "\n";
    return os.str();
}

} // namespace voawb
