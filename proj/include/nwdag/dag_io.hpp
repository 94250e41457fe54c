#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nwdag/dag.hpp"

namespace nwdag {

// Plain-text interchange format:
//
//   nwdag v1 N=<N> d=<d>
//   <dst> <src> param <weight>
//   <dst> <src> fixed <weight>
//   <dst> <src> nonlinear
//
// Blank lines and lines starting with '#' are ignored. Weights are written with
// 17 significant digits so a save/load cycle reproduces every double exactly.
// Parsing is purely syntactic; structural problems (e.g. src >= dst) survive
// into the DAG and are reported by validate().

void write_dag(std::ostream& out, const NonlinearDag& dag);
std::string format_dag(const NonlinearDag& dag);

NonlinearDag read_dag(std::istream& in);
NonlinearDag parse_dag(const std::string& text);

void save_dag(const std::filesystem::path& path, const NonlinearDag& dag);
NonlinearDag load_dag(const std::filesystem::path& path);

// %.17g, enough digits to round-trip any double.
std::string format_double(double v);

}  // namespace nwdag
