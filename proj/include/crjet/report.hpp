#pragma once

// Per-identity verification outcome plus text/record rendering. Record lines
// carry only seed-determined fields so equal seeds give byte-identical output;
// wall times go to the human-readable form only.

#include <string>

namespace crjet {

struct VerificationReport {
    std::string id;
    bool pass = false;
    bool requires_pde = false;
    std::size_t lhs_terms = 0;
    std::size_t rhs_terms = 0;
    std::size_t residual_terms = 0;
    std::size_t numeric_points = 0;   // oracle evaluations that ran
    std::size_t numeric_failures = 0;
    double millis = 0.0;
    std::string note;  // error text or residual preview

    std::string record_line() const {
        std::string s = "case=" + id + " status=" + (pass ? "pass" : "fail") +
                        " pde=" + (requires_pde ? "yes" : "no") +
                        " lhs=" + std::to_string(lhs_terms) + " rhs=" + std::to_string(rhs_terms) +
                        " residual=" + std::to_string(residual_terms);
        if (numeric_points)
            s += " oracle_points=" + std::to_string(numeric_points) +
                 " oracle_failures=" + std::to_string(numeric_failures);
        return s;
    }

    std::string text_line() const {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", millis);
        std::string s = (pass ? "PASS  " : "FAIL  ") + id + "  (lhs " +
                        std::to_string(lhs_terms) + " terms, rhs " + std::to_string(rhs_terms) +
                        " terms, residual " + std::to_string(residual_terms) + ", " + buf + " ms)";
        if (numeric_points)
            s += " [oracle " + std::to_string(numeric_points - numeric_failures) + "/" +
                 std::to_string(numeric_points) + "]";
        if (!note.empty())
            s += "\n      " + note;
        return s;
    }
};

}  // namespace crjet
