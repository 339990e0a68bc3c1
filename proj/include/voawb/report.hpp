#ifndef VOAWB_REPORT_HPP
#define VOAWB_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace voawb {

/// One verification record. `anchor` is the identity or contract being
/// checked, rendered as a formula; `witness` carries the offending data on
/// failure (empty or a short value summary on pass).
struct CheckRecord {
    std::string suite;
    std::string id;
    std::string anchor;
    std::string status;  // "pass" | "fail" | "skip"
    std::string witness;
    double ms = -1;      // < 0 means not recorded
};

struct Report {
    std::map<std::string, std::string> config;
    std::vector<CheckRecord> checks;

    void add(CheckRecord r) { checks.push_back(std::move(r)); }
    void pass(const std::string& suite, const std::string& id, const std::string& anchor,
              const std::string& witness = "") {
        add({suite, id, anchor, "pass", witness, -1});
    }
    void fail(const std::string& suite, const std::string& id, const std::string& anchor,
              const std::string& witness) {
        add({suite, id, anchor, "fail", witness, -1});
    }
    void skip(const std::string& suite, const std::string& id, const std::string& anchor,
              const std::string& why) {
        add({suite, id, anchor, "skip", why, -1});
    }

    int count(const std::string& status) const;
    bool all_ok() const { return count("fail") == 0; }

    /// Sorts records by (suite, id) for byte-stable output.
    void canonicalize();
};

/// Serializers. `with_timings` controls whether measured wall times are
/// written; when false the "ms" field is null so identical configs produce
/// identical bytes.
std::string emit_json(const Report& r, bool with_timings = false);
std::string emit_csv(const Report& r, bool with_timings = false);
std::string emit_text(const Report& r, bool with_timings = true);

} // namespace voawb

#endif
