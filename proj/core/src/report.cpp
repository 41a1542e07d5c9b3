#include "cgur/report.hpp"

namespace cgur {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::Satisfied: return "Satisfied";
    case Verdict::Violated: return "Violated";
    case Verdict::TriviallySatisfied: return "TriviallySatisfied";
    }
    return "Satisfied";
}

URReport make_report(std::string kind, double lhs, double bound, double tol) {
    URReport r;
    r.kind = std::move(kind);
    r.lhs = lhs;
    r.bound = bound;
    r.margin = lhs - bound;
    r.verdict = r.margin < -tol ? Verdict::Violated : Verdict::Satisfied;
    return r;
}

} // namespace cgur
