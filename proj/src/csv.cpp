#include "rig/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace rig::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void bad_cell(std::string_view column, const std::string& cell) {
  throw std::runtime_error("column '" + std::string(column) +
                           "': cannot parse '" + cell + "'");
}

template <class T>
T parse_number(std::string_view column, const std::string& cell) {
  T v{};
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || cell.empty()) bad_cell(column, cell);
  return v;
}

std::optional<double> parse_optional(std::string_view column,
                                     const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return parse_number<double>(column, cell);
}

void write_optional(std::ostream& os, const std::optional<double>& v) {
  if (v) os << format_real(*v);
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write_manifest(std::ostream& os, const RunManifest& m) {
  os << "# command: " << m.command_line << '\n'
     << "# version: " << m.version << '\n'
     << "# seed: " << m.seed << '\n'
     << "# timestamp: " << m.timestamp << '\n'
     << "# output: " << m.output_path << '\n';
}

void write_header(std::ostream& os) {
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    os << (k ? "," : "") << kColumns[k];
  }
  os << '\n';
}

void write_row(std::ostream& os, const mc::SweepRow& row) {
  const auto& c = row.config;
  os << to_string(c.metric) << ',' << c.n << ',' << format_real(c.params.r())
     << ',' << format_real(c.params.p()) << ',' << c.trials << ',' << c.seed
     << ',' << format_real(row.p_hat) << ',' << format_real(row.std_error)
     << ',' << format_real(row.mean_isolated) << ','
     << format_real(row.mean_isolated_sq) << ',';
  write_optional(os, row.analytic_expected_isolated);
  os << ',';
  write_optional(os, row.prob_lower);
  os << ',';
  write_optional(os, row.prob_upper);
  os << '\n';
}

Document read(std::istream& is) {
  Document doc;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      doc.comments.push_back(line.substr(1));
      continue;
    }
    const auto cells = split(line);
    if (!have_header) {
      for (std::size_t k = 0; k < kColumns.size(); ++k) {
        if (k >= cells.size() || cells[k] != kColumns[k]) {
          throw std::runtime_error("missing or misplaced column '" +
                                   std::string(kColumns[k]) + "'");
        }
      }
      if (cells.size() != kColumns.size()) {
        throw std::runtime_error("unexpected column '" +
                                 cells[kColumns.size()] + "'");
      }
      have_header = true;
      continue;
    }
    if (cells.size() != kColumns.size()) {
      throw std::runtime_error("data row has " + std::to_string(cells.size()) +
                               " cells, expected " +
                               std::to_string(kColumns.size()));
    }
    Record rec{};
    try {
      rec.metric = parse_metric(cells[0]);
    } catch (const std::invalid_argument&) {
      bad_cell(kColumns[0], cells[0]);
    }
    rec.n = parse_number<std::int64_t>(kColumns[1], cells[1]);
    rec.r = parse_number<double>(kColumns[2], cells[2]);
    rec.p = parse_number<double>(kColumns[3], cells[3]);
    rec.trials = parse_number<std::int64_t>(kColumns[4], cells[4]);
    rec.seed = parse_number<std::uint64_t>(kColumns[5], cells[5]);
    rec.p_hat = parse_number<double>(kColumns[6], cells[6]);
    rec.std_error = parse_number<double>(kColumns[7], cells[7]);
    rec.mean_isolated = parse_number<double>(kColumns[8], cells[8]);
    rec.mean_isolated_sq = parse_number<double>(kColumns[9], cells[9]);
    rec.analytic_expected_isolated = parse_optional(kColumns[10], cells[10]);
    rec.prob_lower = parse_optional(kColumns[11], cells[11]);
    rec.prob_upper = parse_optional(kColumns[12], cells[12]);
    doc.records.push_back(rec);
  }
  if (!have_header) throw std::runtime_error("missing header line");
  return doc;
}

}  // namespace rig::csv
