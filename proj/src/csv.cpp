#include "dyadic/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "dyadic/errors.hpp"
#include "dyadic/numeric.hpp"

namespace dyadic::csv {

namespace {

constexpr double kLengthSumTol = 1e-9;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    detail::fail_precondition("csv line " + std::to_string(line_no) + ": not a number: '" +
                              cell + "'");
  }
  return v;
}

// Returns data rows (header checked and dropped, blank lines skipped).
std::vector<std::vector<std::string>> read_rows(std::istream& in, const std::string& header,
                                                std::size_t columns) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool seen_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_row(line);
    if (!seen_header) {
      std::string joined;
      for (std::size_t i = 0; i < cells.size(); ++i) joined += (i ? "," : "") + cells[i];
      detail::require(joined == header, "csv: expected header '" + header + "'");
      seen_header = true;
      continue;
    }
    detail::require(cells.size() == columns,
                    "csv line " + std::to_string(line_no) + ": expected " +
                        std::to_string(columns) + " columns");
    cells.push_back(std::to_string(line_no));
    rows.push_back(std::move(cells));
  }
  detail::require(seen_header, "csv: missing header '" + header + "'");
  return rows;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  detail::require(in.good(), "cannot open '" + path + "'");
  return in;
}

}  // namespace

StepFunction read_step_function(std::istream& in) {
  auto rows = read_rows(in, "length,value", 2);
  detail::require(!rows.empty(), "step function csv: no pieces");
  std::vector<Piece> pieces;
  CompensatedSum total;
  for (const auto& row : rows) {
    std::size_t line_no = std::stoul(row[2]);
    Piece p{parse_number(row[0], line_no), parse_number(row[1], line_no)};
    total.add(p.length);
    pieces.push_back(p);
  }
  detail::require(std::abs(total.value() - 1.0) <= kLengthSumTol,
                  "step function csv: lengths must sum to 1 (within 1e-9)");
  return StepFunction(std::move(pieces));
}

StepFunction read_step_function(const std::string& path) {
  auto in = open_or_throw(path);
  return read_step_function(in);
}

void write_step_function(std::ostream& out, const StepFunction& g) {
  auto old = out.precision(17);
  out << "length,value\n";
  for (const Piece& p : g.pieces()) out << p.length << ',' << p.value << '\n';
  out.precision(old);
}

AtomFunction read_atom_function(std::istream& in, std::shared_ptr<const ProbTree> tree) {
  detail::require(tree != nullptr, "atom function csv: null tree");
  auto rows = read_rows(in, "leaf_index,measure,value", 3);
  const std::size_t n = tree->leaf_count();
  std::vector<double> values(n, 0.0);
  std::vector<bool> seen(n, false);
  for (const auto& row : rows) {
    std::size_t line_no = std::stoul(row[3]);
    double index = parse_number(row[0], line_no);
    double measure = parse_number(row[1], line_no);
    double value = parse_number(row[2], line_no);
    detail::require(index >= 0 && index == std::floor(index) && index < static_cast<double>(n),
                    "atom function csv line " + std::to_string(line_no) + ": bad leaf_index");
    auto leaf = static_cast<std::size_t>(index);
    detail::require(!seen[leaf], "atom function csv: duplicate leaf " + std::to_string(leaf));
    double expected = tree->leaf_measure(leaf);
    detail::require(std::abs(measure - expected) <= 1e-9 * expected,
                    "atom function csv line " + std::to_string(line_no) +
                        ": measure does not match the tree leaf");
    seen[leaf] = true;
    values[leaf] = value;
  }
  for (std::size_t i = 0; i < n; ++i) {
    detail::require(seen[i], "atom function csv: missing leaf " + std::to_string(i));
  }
  return AtomFunction(std::move(tree), std::move(values));
}

AtomFunction read_atom_function(const std::string& path, std::shared_ptr<const ProbTree> tree) {
  auto in = open_or_throw(path);
  return read_atom_function(in, std::move(tree));
}

void write_atom_function(std::ostream& out, const AtomFunction& phi) {
  auto old = out.precision(17);
  out << "leaf_index,measure,value\n";
  for (std::size_t i = 0; i < phi.size(); ++i) {
    out << i << ',' << phi.tree().leaf_measure(i) << ',' << phi[i] << '\n';
  }
  out.precision(old);
}

}  // namespace dyadic::csv
