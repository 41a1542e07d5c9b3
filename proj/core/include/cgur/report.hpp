#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cgur {

enum class Verdict { Satisfied, Violated, TriviallySatisfied };

std::string_view to_string(Verdict v) noexcept;

// Absolute tolerance applied to margins when deciding a verdict.
inline constexpr double kVerdictTolerance = 1e-9;

struct URReport {
    std::string kind;
    double lhs = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    Verdict verdict = Verdict::Satisfied;
    std::vector<std::string> annotations;

    bool violated() const noexcept { return verdict == Verdict::Violated; }
};

// margin = lhs - bound; Violated only when margin < -tol.
URReport make_report(std::string kind, double lhs, double bound, double tol = kVerdictTolerance);

} // namespace cgur
