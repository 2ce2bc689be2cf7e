#pragma once

// Functional-data CSV format.
//
//   #grid,<t_1>,...,<t_d>
//   #quadrature_weight,<w_1>,...,<w_d>     (precombined weights), or
//   #weight,<w(t_1)>,...,<w(t_d)>          (pointwise; trapezoid rule applied)
//   <X_1(t_1)>,...,<X_1(t_d)>
//   ...
//
// One row per observation. The header lines may instead live in a sidecar
// file with the same syntax. A file without header lines and exactly one
// column is read as a scalar sample. Doubles are written in shortest
// round-trip form, so write followed by read is bit exact.

#include "blockboot/hilbert.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace blockboot::io {

[[nodiscard]] std::string format_double(double x);
[[nodiscard]] double parse_double(std::string_view text);

void write_sample_csv(std::ostream& out, const HilbertSample& s);
void write_sample_csv(const std::filesystem::path& path, const HilbertSample& s);

[[nodiscard]] HilbertSample read_sample_csv(std::istream& in, std::istream* sidecar = nullptr);
[[nodiscard]] HilbertSample read_sample_csv(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& sidecar = std::nullopt);

}  // namespace blockboot::io
