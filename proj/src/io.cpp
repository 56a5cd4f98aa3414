#include "vfdr/io.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

#include "vfdr/csv.hpp"
#include "vfdr/error.hpp"

namespace vfdr::io {

namespace {

constexpr const char* kModule = "io";

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

[[noreturn]] void fail(ErrorKind kind, std::string_view source, std::size_t line, const std::string& what) {
  throw Error(kind, kModule, where(source, line) + ": " + what);
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, kModule, "cannot open '" + path.string() + "'");
  return in;
}

// Reads the next line, stripping a UTF-8 byte order mark on line 1 and a trailing CR.
bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  if (!std::getline(in, line)) return false;
  ++number;
  if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string> fields_of(const std::string& line, std::string_view source, std::size_t number) {
  auto fields = csv::split(line);
  if (!fields) fail(ErrorKind::ParseError, source, number, "unterminated quoted field");
  return std::move(*fields);
}

std::string optional_number(const std::optional<double>& v) {
  return v ? csv::format_number(*v) : std::string();
}

std::string join(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += csv::format_number(values[i]);
  }
  return out;
}

std::vector<std::string> report_columns(int dims) {
  std::vector<std::string> cols{"id"};
  for (int k = 1; k <= dims; ++k) cols.push_back("p" + std::to_string(k));
  for (const char* c : {"rank", "area", "T", "Z", "fdr", "leftFDR", "reject"}) cols.emplace_back(c);
  return cols;
}

}  // namespace

std::vector<PVector> read_pvectors(std::istream& in, std::size_t dims, std::string_view source) {
  if (dims != 2 && dims != 3) {
    throw Error(ErrorKind::InvalidConfig, kModule, "dims must be 2 or 3, got " + std::to_string(dims));
  }
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) fail(ErrorKind::EmptyInput, source, 1, "file is empty");

  std::vector<std::string> expected{"id"};
  for (std::size_t k = 1; k <= dims; ++k) expected.push_back("p" + std::to_string(k));
  const auto header = fields_of(line, source, number);
  if (header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    fail(ErrorKind::ParseError, source, number, "expected header '" + want + "'");
  }

  std::vector<PVector> out;
  std::unordered_map<std::string, std::size_t> seen;
  while (next_line(in, line, number)) {
    if (csv::trim(line).empty()) continue;
    const auto fields = fields_of(line, source, number);
    if (fields.size() != dims + 1) {
      fail(ErrorKind::ParseError, source, number,
           "expected " + std::to_string(dims + 1) + " fields, found " + std::to_string(fields.size()));
    }
    PVector p;
    p.id = fields[0];
    if (p.id.empty()) fail(ErrorKind::ParseError, source, number, "empty id");
    for (std::size_t k = 1; k <= dims; ++k) {
      const auto v = csv::parse_double(fields[k]);
      if (!v) fail(ErrorKind::ParseError, source, number, "p" + std::to_string(k) + " '" + fields[k] + "' is not a number");
      if (!(*v >= 0.0 && *v <= 1.0)) {
        fail(ErrorKind::OutOfDomain, source, number,
             "p" + std::to_string(k) + " = " + fields[k] + " of '" + p.id + "' is outside [0, 1]");
      }
      p.coords.push_back(*v);
    }
    const auto [it, inserted] = seen.emplace(p.id, number);
    if (!inserted) {
      fail(ErrorKind::DuplicateId, source, number,
           "id '" + p.id + "' already used on line " + std::to_string(it->second));
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) fail(ErrorKind::EmptyInput, source, number, "no data rows after the header");
  return out;
}

std::vector<PVector> read_pvectors(const std::filesystem::path& path, std::size_t dims) {
  auto in = open(path);
  return read_pvectors(in, dims, path.string());
}

void write_pvectors(std::span<const PVector> ps, std::ostream& out) {
  const std::size_t dims = ps.empty() ? 2 : ps.front().dims();
  out << "id";
  for (std::size_t k = 1; k <= dims; ++k) out << ",p" << k;
  out << '\n';
  for (const auto& p : ps) {
    out << csv::escape(p.id);
    for (double c : p.coords) out << ',' << csv::format_number(c);
    out << '\n';
  }
}

std::vector<periodicity::TimeCourse> read_time_courses(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) fail(ErrorKind::EmptyInput, source, 1, "file is empty");
  const auto header = fields_of(line, source, number);
  if (header.size() < 2) fail(ErrorKind::ParseError, source, number, "expected an id column and time point columns");

  std::vector<periodicity::TimeCourse> out;
  std::unordered_map<std::string, std::size_t> seen;
  while (next_line(in, line, number)) {
    if (csv::trim(line).empty()) continue;
    const auto fields = fields_of(line, source, number);
    if (fields.size() != header.size()) {
      fail(ErrorKind::ParseError, source, number,
           "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    periodicity::TimeCourse tc;
    tc.id = fields[0];
    if (tc.id.empty()) fail(ErrorKind::ParseError, source, number, "empty id");
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto f = csv::trim(fields[k]);
      if (f.empty() || f == "NA" || f == "NaN" || f == "nan") {
        tc.values.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      const auto v = csv::parse_double(f);
      if (!v) fail(ErrorKind::ParseError, source, number, "value '" + fields[k] + "' is not a number");
      tc.values.push_back(*v);
    }
    const auto [it, inserted] = seen.emplace(tc.id, number);
    if (!inserted) {
      fail(ErrorKind::DuplicateId, source, number,
           "id '" + tc.id + "' already used on line " + std::to_string(it->second));
    }
    out.push_back(std::move(tc));
  }
  if (out.empty()) fail(ErrorKind::EmptyInput, source, number, "no data rows after the header");
  return out;
}

std::vector<periodicity::TimeCourse> read_time_courses(const std::filesystem::path& path) {
  auto in = open(path);
  return read_time_courses(in, path.string());
}

void write_report(const AnalysisReport& report, std::ostream& out) {
  out << "# voronoi-fdr report\n";
  out << "# generated: " << report.timestamp << '\n';
  for (const auto& [key, value] : report.metadata) out << "# " << key << ": " << value << '\n';
  if (report.fit) {
    const auto& f = *report.fit;
    out << "# fit.components: " << f.components() << '\n';
    out << "# fit.null-index: " << f.null_index << '\n';
    out << "# fit.weights: " << join(f.weights) << '\n';
    out << "# fit.means: " << join(f.means) << '\n';
    out << "# fit.scales: " << join(f.scales) << '\n';
    out << "# fit.log-likelihood: " << csv::format_number(f.log_likelihood) << '\n';
    out << "# fit.iterations: " << f.iterations << '\n';
    out << "# fit.converged: " << (f.converged ? "true" : "false") << '\n';
  }
  out << "# rule: " << method_name(report.decision.rule) << '\n';
  out << "# level: " << csv::format_number(report.decision.level) << '\n';
  out << "# rejections: " << report.decision.k << '\n';

  const auto cols = report_columns(report.dims);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& r : report.records) {
    out << csv::escape(r.id);
    for (double c : r.coords) out << ',' << csv::format_number(c);
    out << ',' << r.rank << ',' << csv::format_number(r.area) << ',' << csv::format_number(r.cumulative) << ','
        << csv::format_number(r.z) << ',' << optional_number(r.fdr) << ',' << optional_number(r.left_fdr) << ','
        << (r.reject ? 1 : 0) << '\n';
  }
}

AnalysisReport read_report(std::istream& in, std::string_view source) {
  AnalysisReport report;
  std::string line;
  std::size_t number = 0;
  std::optional<std::vector<std::string>> header;
  while (next_line(in, line, number)) {
    if (line.rfind('#', 0) == 0) {
      const auto body = csv::trim(std::string_view(line).substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string key(csv::trim(body.substr(0, colon)));
      const std::string value(csv::trim(body.substr(colon + 1)));
      if (key == "generated") {
        report.timestamp = value;
      } else if (key == "rule") {
        const auto rule = parse_method(value);
        if (!rule) fail(ErrorKind::ParseError, source, number, "unknown rule '" + value + "'");
        report.decision.rule = *rule;
      } else if (key == "level") {
        const auto v = csv::parse_double(value);
        if (!v) fail(ErrorKind::ParseError, source, number, "level '" + value + "' is not a number");
        report.decision.level = *v;
      } else if (key == "rejections") {
        const auto v = csv::parse_double(value);
        if (!v || *v < 0) fail(ErrorKind::ParseError, source, number, "bad rejection count '" + value + "'");
        report.decision.k = static_cast<std::size_t>(*v);
      } else {
        report.metadata.emplace_back(key, value);
      }
      continue;
    }
    if (csv::trim(line).empty()) continue;
    header = fields_of(line, source, number);
    break;
  }
  if (!header) fail(ErrorKind::EmptyInput, source, number, "no per-gene table found");
  const int dims = header->size() == report_columns(3).size() ? 3 : 2;
  if (*header != report_columns(dims)) fail(ErrorKind::ParseError, source, number, "unexpected table header");
  report.dims = dims;

  auto number_at = [&](const std::string& f, const char* what) {
    const auto v = csv::parse_double(f);
    if (!v) fail(ErrorKind::ParseError, source, number, std::string(what) + " '" + f + "' is not a number");
    return *v;
  };
  auto optional_at = [&](const std::string& f, const char* what) -> std::optional<double> {
    if (csv::trim(f).empty()) return std::nullopt;
    return number_at(f, what);
  };

  std::size_t rejected = 0;
  std::unordered_map<std::string, std::size_t> seen;
  while (next_line(in, line, number)) {
    if (csv::trim(line).empty()) continue;
    const auto f = fields_of(line, source, number);
    if (f.size() != header->size()) {
      fail(ErrorKind::ParseError, source, number,
           "expected " + std::to_string(header->size()) + " fields, found " + std::to_string(f.size()));
    }
    CombinedRecord r;
    r.id = f[0];
    std::size_t c = 1;
    for (int k = 0; k < dims; ++k) r.coords.push_back(number_at(f[c++], "p-value"));
    r.rank = static_cast<std::size_t>(number_at(f[c++], "rank"));
    r.area = number_at(f[c++], "area");
    r.cumulative = number_at(f[c++], "T");
    r.z = number_at(f[c++], "Z");
    r.fdr = optional_at(f[c++], "fdr");
    r.left_fdr = optional_at(f[c++], "leftFDR");
    const auto& flag = f[c];
    if (flag != "0" && flag != "1") fail(ErrorKind::ParseError, source, number, "reject must be 0 or 1");
    r.reject = flag == "1";
    rejected += r.reject;
    r.input_index = report.records.size();
    const auto [it, inserted] = seen.emplace(r.id, number);
    if (!inserted) {
      fail(ErrorKind::DuplicateId, source, number,
           "id '" + r.id + "' already used on line " + std::to_string(it->second));
    }
    report.records.push_back(std::move(r));
  }
  if (rejected != report.decision.k) {
    fail(ErrorKind::ParseError, source, number,
         "header reports " + std::to_string(report.decision.k) + " rejections but the table flags " +
             std::to_string(rejected));
  }
  return report;
}

AnalysisReport read_report(const std::filesystem::path& path) {
  auto in = open(path);
  return read_report(in, path.string());
}

void render_summary(const AnalysisReport& report, std::ostream& out) {
  out << "voronoi-fdr report";
  if (!report.timestamp.empty()) out << " (" << report.timestamp << ")";
  out << '\n';
  for (const auto& [key, value] : report.metadata) out << "  " << key << ": " << value << '\n';
  out << "hypotheses: " << report.records.size() << '\n';
  out << "rule: " << method_name(report.decision.rule) << " at " << csv::format_number(report.decision.level, 6)
      << '\n';
  out << "rejections: " << report.decision.k << '\n';
  for (const auto& r : report.records) {
    if (!r.reject) continue;
    out << "  " << r.id << "  rank " << r.rank << "  T " << csv::format_number(r.cumulative, 6);
    if (r.left_fdr) out << "  leftFDR " << csv::format_number(*r.left_fdr, 6);
    out << '\n';
  }
}

void write_areas(const geometry::Tessellation& tess, std::span<const PVector> ps, std::ostream& out) {
  out << "id,p1,p2,area\n";
  for (const auto& cell : tess.cells()) {
    const auto& p = ps[cell.input];
    out << csv::escape(p.id) << ',' << csv::format_number(p.coords[0]) << ',' << csv::format_number(p.coords[1])
        << ',' << csv::format_number(cell.area) << '\n';
  }
}

void write_polygons(const geometry::Tessellation& tess, std::span<const PVector> ps, std::ostream& out) {
  out << "id,vertex,x,y\n";
  for (const auto& cell : tess.cells()) {
    const auto id = csv::escape(ps[cell.input].id);
    for (std::size_t v = 0; v < cell.polygon.size(); ++v) {
      out << id << ',' << v << ',' << csv::format_number(cell.polygon[v].x) << ','
          << csv::format_number(cell.polygon[v].y) << '\n';
    }
  }
}

std::string current_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0') now = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace vfdr::io
