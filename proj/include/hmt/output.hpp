#pragma once

// Bit-stable CSV emission. Numbers use the shortest representation that
// parses back to the same double.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hmt/harness.hpp"

namespace hmt {

std::string format_number(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(const std::string& v);
    void end_row();

private:
    std::ofstream out_;
    bool first_ = true;
};

void write_series(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

/// Rows at every cadence-th step plus the final state; u is the Darcy velocity
/// averaged from faces to cells.
void write_snapshots(const std::filesystem::path& path, const RunResult& result,
                     const Problem& problem, int cadence);

void write_mms_table(const std::filesystem::path& path, const MMSStudy& study);
void write_ladder_table(const std::filesystem::path& path, const LadderResult& ladder);
void write_sweep_table(const std::filesystem::path& path, const std::vector<SweepCell>& cells);

/// Writes the text followed by a newline.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hmt
