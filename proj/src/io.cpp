#include "fvetd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fvetd/error.hpp"

namespace fvetd {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> read_numbers(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<double> values;
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw IoError("'" + path.string() + "': value " + std::to_string(values.size()) + " ('" + tok +
                    "') is not a finite number");
    }
    values.push_back(v);
  }
  return values;
}

ScalarCellField load_raster(const std::filesystem::path& path, const StructuredMesh& mesh) {
  auto values = read_numbers(path);
  if (static_cast<Index>(values.size()) != mesh.num_cells()) {
    throw IoError("'" + path.string() + "': expected " + std::to_string(mesh.num_cells()) +
                  ", found " + std::to_string(values.size()));
  }
  return values;
}

void write_raster(const std::filesystem::path& path, const ScalarCellField& field) {
  auto out = open_out(path);
  for (double v : field) out << format_double(v) << '\n';
  finish(out, path);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string s = "\"";
  for (char c : field) {
    if (c == '"') s += '"';
    s += c;
  }
  s += '"';
  return s;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& footer_comments) {
  auto out = open_out(path);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(cells[i]);
    }
    out << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  for (const auto& c : footer_comments) out << "# " << c << "\r\n";
  finish(out, path);
}

void export_report_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : report.points) rows.push_back({format_double(p.parameter), format_double(p.error)});
  std::vector<std::string> footer;
  if (report.slope) footer.push_back("slope = " + format_double(*report.slope));
  write_csv(path, {"param", "error"}, rows, footer);
}

void print_report(const ConvergenceReport& report, std::ostream& os) {
  os << report.name << " (" << report.parameter << " sweep";
  for (const auto& [k, v] : report.metadata) os << ", " << k << "=" << v;
  os << ")\n";
  os << std::setw(24) << report.parameter << std::setw(24) << "error" << std::setw(12) << "ratio"
     << '\n';
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    os << std::setw(24) << std::setprecision(10) << report.points[i].parameter << std::setw(24)
       << report.points[i].error;
    if (i > 0 && report.points[i].error > 0.0) {
      os << std::setw(12) << std::setprecision(4) << report.points[i - 1].error / report.points[i].error;
    }
    os << '\n';
  }
  if (report.slope) os << "fitted slope: " << std::setprecision(6) << *report.slope << '\n';
  if (!report.notice.empty()) os << "notice: " << report.notice << '\n';
}

void write_vtk(const std::filesystem::path& path, const StructuredMesh& mesh,
               const std::vector<std::pair<std::string, const ScalarCellField*>>& fields,
               const std::string& title) {
  for (const auto& [name, f] : fields) {
    if (static_cast<Index>(f->size()) != mesh.num_cells()) {
      throw InvalidArgument("write_vtk: field '" + name + "' does not match the cell count");
    }
  }
  auto out = open_out(path);
  const auto& c = mesh.counts();
  const auto& s = mesh.sizes();
  const auto& o = mesh.origin();
  const bool flat = mesh.dim() == 2;
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << c[0] + 1 << ' ' << c[1] + 1 << ' ' << (flat ? 1 : c[2] + 1) << '\n';
  out << "ORIGIN " << format_double(o[0]) << ' ' << format_double(o[1]) << ' '
      << format_double(o[2]) << '\n';
  out << "SPACING " << format_double(s[0]) << ' ' << format_double(s[1]) << ' '
      << format_double(flat ? 1.0 : s[2]) << '\n';
  out << "CELL_DATA " << mesh.num_cells() << '\n';
  for (const auto& [name, f] : fields) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : *f) out << format_double(v) << '\n';
  }
  finish(out, path);
}

} // namespace fvetd
