#pragma once

#include <functional>
#include <istream>
#include <string>
#include <string_view>

#include "cms/shift.hpp"

namespace cms {

/// Builds a gallery shift from a descriptor:
///   full | finite_full:<m> | star | renewal | loop_family:<counts>
/// where <counts> is one of  n | 2^(n^2) | const:<c> | list:<a1>,<a2>,...
/// Throws InvalidArgument for unknown names or non-positive parameters.
ShiftSpec make_builtin(std::string_view descriptor);

ShiftSpec full_shift();
ShiftSpec finite_full_shift(Symbol m);
/// B(i, j) = 1 iff i == 1 or j == 1.
ShiftSpec star_shift();
/// 1 -> k for every k, k -> k-1 for k >= 2.
ShiftSpec renewal_shift();

/// a(n) simple loops of length n (edges) at root 1, pairwise disjoint away
/// from the root. The root carries at most one self-loop, so a(1) is read as
/// min(a(1), 1). Loop vertices are numbered consecutively by (length, index),
/// starting at 2; loops whose vertices would exceed 64-bit symbols, or whose
/// length exceeds max_length, are not represented.
ShiftSpec loop_family(std::function<BigInt(std::uint64_t)> counts, std::string label,
                      std::uint64_t max_length = 65536);

/// Parses the finite-row text format:
///   name: <id>
///   alphabet: <m>              (optional, restricts to 1..m)
///   default: all | none | j1 j2 ...
///   <i>: j1 j2 ...
/// '#' starts a comment. Rows not listed use the default rule.
ShiftSpec parse_shift_text(std::istream& in);
ShiftSpec parse_shift_text(std::string_view text);
ShiftSpec load_shift_file(const std::string& path);

/// A built-in descriptor, or "@path" for a text file.
ShiftSpec resolve_shift(std::string_view reference);

}  // namespace cms
