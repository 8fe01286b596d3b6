#pragma once

// Human-readable tables and JSON documents printed by the command-line tool.

#include <string>
#include <vector>

#include "cld/loops.hpp"
#include "cld/signs.hpp"
#include "cld/sim.hpp"

namespace cld {

struct ReportStyle {
  bool json = false;
  bool color = false;
};

// Declared loops (Table-style rows) or every enumerated cycle. Enumerated
// rows carry the declared name when the cycle is also declared.
std::string report_declared_loops(const Model &model, const ReportStyle &style);
std::string report_enumerated_loops(const Model &model, const std::vector<FoundLoop> &loops, const ReportStyle &style);

std::string report_verdicts(const std::vector<LoopVerdict> &verdicts, const ReportStyle &style);
bool all_verified(const std::vector<LoopVerdict> &verdicts);

std::string report_participation(const Model &model, LoopSet over, const ReportStyle &style);

// `emit` adds paste-ready "link a -> b +|-" lines for the inferred links.
std::string report_signs(const Model &model, const SignSystem &system, const SignSolution &solution, bool emit,
                         const ReportStyle &style);

std::string report_trajectory_summary(const Trajectory &trajectory);

std::string report_sign_mismatches(const std::vector<SignMismatch> &mismatches);

}  // namespace cld
