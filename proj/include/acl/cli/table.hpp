#pragma once

#include "acl/errors.hpp"
#include "acl/numeric.hpp"

#include "json.hpp"

#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace acl::cli {

/// A table cell keeps its exact text; the kind only affects JSON typing.
struct Cell {
  enum class Kind { text, integer, real, boolean };
  std::string text;
  Kind kind = Kind::text;

  static Cell str(std::string s) { return {std::move(s), Kind::text}; }
  static Cell integer(const BigInt& x) { return {x.str(), Kind::integer}; }
  static Cell integer(long long x) { return {std::to_string(x), Kind::integer}; }
  static Cell rational(const Rational& x) { return {to_string(x), is_integer(x) ? Kind::integer : Kind::text}; }
  static Cell real(const Real& x, unsigned digits) { return {to_string(x, digits), Kind::real}; }
  static Cell boolean(bool b) { return {b ? "true" : "false", Kind::boolean}; }

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != header.size()) throw InvariantError("row width does not match header");
    rows.push_back(std::move(row));
  }
  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return header.size();
  }

  friend bool operator==(const Table&, const Table&) = default;
};

/// Comma separated, header row first, LF line endings; cells never contain separators.
inline void write_csv(std::ostream& os, const Table& t) {
  auto line = [&os](const auto& cells, auto text) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << text(cells[i]);
    os << '\n';
  };
  line(t.header, [](const std::string& s) -> const std::string& { return s; });
  for (const auto& row : t.rows) line(row, [](const Cell& c) -> const std::string& { return c.text; });
}

namespace detail {

inline nlohmann::json cell_json(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::boolean:
      return c.text == "true";
    case Cell::Kind::integer: {
      const BigInt v(c.text);
      if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
        return v.convert_to<long long>();
      return c.text;
    }
    case Cell::Kind::real:
      // decimal text may carry more digits than a double
      return c.text;
    case Cell::Kind::text:
      break;
  }
  return c.text;
}

}  // namespace detail

/// Flat array of objects keyed by the header.
inline void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = detail::cell_json(row[i]);
    out.push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

/// Lossless form used by the cache.
inline nlohmann::json to_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back({c.text, static_cast<int>(c.kind)});
    rows.push_back(std::move(r));
  }
  return {{"header", t.header}, {"rows", std::move(rows)}};
}

inline Table table_from_json(const nlohmann::json& j) {
  Table t;
  t.header = j.at("header").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) {
      const int kind = c.at(1).get<int>();
      if (kind < 0 || kind > 3) throw std::runtime_error("bad cell kind");
      row.push_back({c.at(0).get<std::string>(), static_cast<Cell::Kind>(kind)});
    }
    t.add(std::move(row));
  }
  return t;
}

/// One comparison between an observed and a predicted value; match is derived, never stored.
struct CountRecord {
  std::string label;
  std::string params;
  Rational observed;
  Rational predicted;
  Rational tolerance;

  bool match() const { return abs(observed - predicted) <= tolerance; }

  static std::vector<std::string> header() { return {"label", "params", "observed", "predicted", "match", "tolerance"}; }
  std::vector<Cell> row() const {
    return {Cell::str(label),           Cell::str(params),          Cell::rational(observed),
            Cell::rational(predicted), Cell::boolean(match()),     Cell::rational(tolerance)};
  }
};

}  // namespace acl::cli
