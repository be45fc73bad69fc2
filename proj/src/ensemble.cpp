#include "gfront/ensemble.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gfront {

void Aggregate::add(double x) {
  Aggregate one;
  one.count = 1;
  one.mean = x;
  one.min = one.max = x;
  *this = merge_aggregates(*this, one);
}

Aggregate merge_aggregates(const Aggregate& a, const Aggregate& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Aggregate r;
  r.count = a.count + b.count;
  const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count), n = static_cast<double>(r.count);
  const double delta = b.mean - a.mean;
  r.mean = a.mean + delta * (nb / n);
  r.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
  r.min = std::min(a.min, b.min);
  r.max = std::max(a.max, b.max);
  return r;
}

AggregateTable merge_aggregates(const AggregateTable& a, const AggregateTable& b) {
  AggregateTable r = a;
  for (const auto& [k, v] : b) r[k] = merge_aggregates(r[k], v);
  return r;
}

void ResultTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw Error("ResultTable: row width does not match the columns");
  rows.push_back(std::move(row));
}

void ResultTable::write(std::ostream& os) const {
  os << kResultsHeader << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
    os << '\n';
  }
}

void ResultTable::write(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  write(os);
}

namespace {
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}
}  // namespace

ResultTable ResultTable::read(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kResultsHeader) throw Error("ResultTable: missing schema header");
  ResultTable t;
  if (!std::getline(is, line)) throw Error("ResultTable: missing column line");
  t.columns = split_csv(line);
  while (std::getline(is, line))
    if (!line.empty()) t.add_row(split_csv(line));
  return t;
}

ResultTable ResultTable::read(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return read(is);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buf, p);
}

}  // namespace gfront
