#pragma once

// Run logs as CSV and regret plots as SVG.
//
// CSV columns: agent,run,t,action,reward_total,regret_inst,regret_cum,elapsed_ns
// with t starting at 1, action as dash-joined items, and doubles written in
// their shortest round-trip form.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rankbandit/harness.hpp"

namespace rankbandit {

inline constexpr const char* kCsvHeader =
    "agent,run,t,action,reward_total,regret_inst,regret_cum,elapsed_ns";

void write_csv(std::ostream& os, const std::vector<RunRecord>& records);
void write_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records);

// Rebuilds records from CSV text; oracle totals are not stored and stay 0.
std::vector<RunRecord> read_csv(std::istream& is);
std::vector<RunRecord> read_csv(const std::filesystem::path& path);

std::string format_double(double x);

struct BoundOverlay {
  std::string name;
  Vec values;  // per step, same horizon as the curves
};

// Mean cumulative regret per agent with a min-max band, one polyline per
// agent and one dashed polyline per overlay.
std::string render_svg(const std::vector<RegretCurve>& curves,
                       const std::vector<BoundOverlay>& overlays = {});
void write_svg(const std::filesystem::path& path, const std::vector<RegretCurve>& curves,
               const std::vector<BoundOverlay>& overlays = {});

// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rankbandit
