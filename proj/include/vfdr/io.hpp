#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "vfdr/analyze.hpp"
#include "vfdr/geometry.hpp"
#include "vfdr/periodicity.hpp"
#include "vfdr/pvector.hpp"

namespace vfdr::io {

/// CSV with header `id,p1,p2` (or `id,p1,p2,p3` when dims is 3). Lines are
/// numbered from 1 with the header as line 1; blank lines are ignored.
/// Throws ParseError, OutOfDomain, DuplicateId and EmptyInput.
std::vector<PVector> read_pvectors(std::istream& in, std::size_t dims, std::string_view source = "input");
std::vector<PVector> read_pvectors(const std::filesystem::path& path, std::size_t dims);

void write_pvectors(std::span<const PVector> ps, std::ostream& out);

/// Gene id column followed by one column per time point. Empty, NA and NaN
/// fields load as NaN so callers can drop incomplete genes.
std::vector<periodicity::TimeCourse> read_time_courses(std::istream& in, std::string_view source = "input");
std::vector<periodicity::TimeCourse> read_time_courses(const std::filesystem::path& path);

/// "# key: value" header lines, then the per-gene table
/// id,p1,p2[,p3],rank,area,T,Z,fdr,leftFDR,reject with 17 significant digits.
void write_report(const AnalysisReport& report, std::ostream& out);
AnalysisReport read_report(std::istream& in, std::string_view source = "report");
AnalysisReport read_report(const std::filesystem::path& path);

/// Human-readable summary of a report: settings, decision and rejected ids.
void render_summary(const AnalysisReport& report, std::ostream& out);

/// id,p1,p2,area in input order.
void write_areas(const geometry::Tessellation& tess, std::span<const PVector> ps, std::ostream& out);
/// id,vertex,x,y with one row per polygon vertex, counter-clockwise.
void write_polygons(const geometry::Tessellation& tess, std::span<const PVector> ps, std::ostream& out);

/// UTC "YYYY-MM-DDTHH:MM:SSZ"; honours SOURCE_DATE_EPOCH when set.
std::string current_timestamp();

}  // namespace vfdr::io
