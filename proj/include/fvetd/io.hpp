#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fvetd/fields.hpp"
#include "fvetd/mesh.hpp"
#include "fvetd/verification.hpp"

namespace fvetd {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

/// Whitespace separated numbers. Throws IoError with the offending index on
/// a non-finite or unparsable value.
std::vector<double> read_numbers(const std::filesystem::path& path);

/// One value per cell, first axis fastest then layer by layer. Throws
/// IoError("expected N, found M") on a count mismatch.
ScalarCellField load_raster(const std::filesystem::path& path, const StructuredMesh& mesh);

void write_raster(const std::filesystem::path& path, const ScalarCellField& field);

/// RFC 4180 field quoting.
std::string csv_escape(const std::string& field);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& footer_comments = {});

/// Columns param,error; when a slope was fitted a final "# slope = v" line.
void export_report_csv(const ConvergenceReport& report, const std::filesystem::path& path);

void print_report(const ConvergenceReport& report, std::ostream& os);

/// Legacy ASCII VTK STRUCTURED_POINTS with one SCALARS block per field as
/// cell data. DIMENSIONS are cell counts + 1 (1 on the unused axis in 2D).
void write_vtk(const std::filesystem::path& path, const StructuredMesh& mesh,
               const std::vector<std::pair<std::string, const ScalarCellField*>>& fields,
               const std::string& title = "fvetd output");

} // namespace fvetd
