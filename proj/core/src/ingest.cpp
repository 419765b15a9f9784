#include "riskbound/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>

#include "riskbound/error.hpp"

namespace riskbound {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

ReturnSeries load_returns_csv(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::FileNotFound, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::EmptySeries, "'" + path + "' is empty");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_csv_line(line);

  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) col = i;
  }
  if (col == header.size()) {
    const bool digits = !column.empty() && column.find_first_not_of("0123456789") == std::string::npos;
    if (!digits || std::stoul(column) >= header.size()) {
      fail(ErrorCode::InvalidArgument, "no column '" + column + "' in '" + path + "'");
    }
    col = std::stoul(column);
  }
  std::size_t date_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != col && lower(header[i]) == "date") date_col = i;
  }

  ReturnSeries s;
  s.label = header[col];
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      fail(ErrorCode::MalformedCsv, "row " + std::to_string(row) + " has " +
                                        std::to_string(cells.size()) + " cells, header has " +
                                        std::to_string(header.size()));
    }
    const std::string& cell = cells[col];
    if (cell.empty()) {
      ++s.skipped;
      continue;
    }
    double x = 0.0;
    try {
      std::size_t used = 0;
      x = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::logic_error&) {
      fail(ErrorCode::NonNumericCell, "row " + std::to_string(row) + ": '" + cell + "' is not a number");
    }
    if (!std::isfinite(x)) fail(ErrorCode::NonNumericCell, "row " + std::to_string(row) + " is not finite");
    s.values.push_back(x);
    if (date_col < header.size()) {
      if (!s.dates.empty() && !(s.dates.back() < cells[date_col])) {
        fail(ErrorCode::MalformedCsv, "dates are not strictly increasing at row " + std::to_string(row));
      }
      s.dates.push_back(cells[date_col]);
    }
  }
  if (s.values.empty()) fail(ErrorCode::EmptySeries, "column '" + s.label + "' has no values");
  return s;
}

Estimator parse_estimator(const std::string& name) {
  if (name == "population") return Estimator::Population;
  if (name == "sample") return Estimator::Sample;
  fail(ErrorCode::InvalidArgument, "estimator must be 'population' or 'sample', got '" + name + "'");
}

MomentInfo sample_moments(const ReturnSeries& series, Estimator estimator) {
  const std::size_t n = series.values.size();
  if (n < 2) fail(ErrorCode::TooFewObservations, "need at least 2 observations, got " + std::to_string(n));
  // Sorted summation keeps the result independent of row order.
  std::vector<double> x = series.values;
  std::sort(x.begin(), x.end());
  // Shifted by the median so a constant series gives exactly (c, 0).
  const double shift = x[n / 2];
  double dev = 0.0;
  for (double xi : x) dev += xi - shift;
  const double mean = shift + dev / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  std::sort(sq.begin(), sq.end());
  const double ss = std::accumulate(sq.begin(), sq.end(), 0.0);
  const double var = ss / static_cast<double>(estimator == Estimator::Sample ? n - 1 : n);
  return {mean, std::sqrt(var), false};
}

std::vector<double> prices_to_returns(const std::vector<double>& prices) {
  if (prices.size() < 2) fail(ErrorCode::TooFewObservations, "need at least 2 prices");
  std::vector<double> out;
  out.reserve(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i) {
    if (!(prices[i - 1] != 0.0)) fail(ErrorCode::DomainError, "zero price at position " + std::to_string(i - 1));
    out.push_back((prices[i] - prices[i - 1]) / prices[i - 1] * 100.0);
  }
  return out;
}

}  // namespace riskbound
