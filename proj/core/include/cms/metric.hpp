#pragma once

#include <variant>
#include <vector>

#include "cms/cylinder_function.hpp"
#include "cms/orbit.hpp"
#include "cms/shift.hpp"

namespace cms {

/// First `count` admissible cylinders in canonical order: ascending symbol
/// sum, then shorter first, then lexicographic. Throws SearchExhausted if the
/// shift has fewer admissible words of moderate size than requested.
std::vector<Cylinder> canonical_cylinders(const ShiftSpec& spec, std::size_t count);

/// The index-th (1-based) cylinder of the canonical enumeration.
Cylinder canonical_cylinder_enumeration(std::size_t index, const ShiftSpec& spec);

struct DistanceBracket {
  Rational lower{0};
  Rational upper{0};
};

using MeasureLike = std::variant<ConvexCombination, CylinderFunction>;

Rational value_on(const MeasureLike& m, const Cylinder& c);

/// Σ_{n <= N} 2^-n |a(C_n) − b(C_n)| and that sum + 2^-N. A table that does
/// not represent some C_n raises NotRepresented naming the index.
DistanceBracket metric_d(const MeasureLike& a, const MeasureLike& b, std::size_t n_terms, const ShiftSpec& spec);

}  // namespace cms
