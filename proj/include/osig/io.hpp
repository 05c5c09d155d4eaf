#pragma once

#include <iosfwd>
#include <string>

#include "osig/dual.hpp"
#include "osig/primal.hpp"
#include "osig/sim.hpp"

namespace osig {
namespace io {

// Parses a strict JSON game configuration; unknown keys are errors naming
// the offending field.
GameSpec load_spec(const std::string& path);
GameSpec parse_spec(const std::string& json_text);

// Binary table container: u64 little-endian header length, JSON header
// (version "osig-table-v1"), then row-major float64 payload per timestep.
// Masks use the same header with packed bits.
void write_value_table(const std::string& path, const primal::ValueTable& table);
primal::ValueTable read_value_table(const std::string& path);
void write_conjugate_table(const std::string& path, const dual::ConjugateTable& table);
dual::ConjugateTable read_conjugate_table(const std::string& path);
void write_masks(const std::string& path, const reach::FeasibilitySet& masks, const GameSpec& spec);
reach::FeasibilitySet read_masks(const std::string& path);

// JSONL trajectory records, one rollout per line.
void write_trajectories(const std::string& path, const std::vector<sim::TrajectoryRecord>& recs);

// CSV with one header row; floats at 12 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_float(double v);

}  // namespace io
}  // namespace osig
