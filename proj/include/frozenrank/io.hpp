#pragma once

// Plain-text formats.
//
// Matrix:   "m n field" then m lines of n entries.
// Graph:    "n m field" then m lines "i j weight" (0-based, i != j).
//
// Field labels are those of FieldSpec ("F2", "Fp:<p>", "Q"). Blank lines and
// lines starting with '#' are skipped.

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "frozenrank/errors.hpp"
#include "frozenrank/field.hpp"
#include "frozenrank/matrix.hpp"
#include "frozenrank/randgraph.hpp"

namespace frozenrank {

using AnyMatrix = std::variant<Matrix<Gf2>, Matrix<PrimeField>, Matrix<RationalField>>;

// Calls fn with the field policy selected by `spec`.
template <class Fn>
decltype(auto) visit_field(const FieldSpec& spec, Fn&& fn,
                           std::size_t rational_cap = RationalField::default_max_dimension) {
  switch (spec.kind()) {
    case FieldKind::rational:
      return fn(RationalField(rational_cap));
    case FieldKind::prime:
      if (spec.is_gf2()) return fn(Gf2{});
      return fn(PrimeField(spec));
  }
  throw internal_error("unknown field kind");
}

namespace io_detail {

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

inline std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

inline std::size_t parse_size(const std::string& tok) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw usage_error("expected a nonnegative integer, got '" + tok + "'");
  }
  return v;
}

inline std::string at_line(std::size_t lineno) { return "line " + std::to_string(lineno) + ": "; }

struct Header {
  std::size_t first = 0, second = 0;
  FieldSpec spec = FieldSpec::gf2();
};

inline Header parse_header(const std::string& line, std::size_t lineno, const char* shape) {
  const auto head = split(line);
  if (head.size() != 3) throw usage_error(at_line(lineno) + "header must be '" + shape + "'");
  try {
    return {parse_size(head[0]), parse_size(head[1]), FieldSpec::parse(head[2])};
  } catch (const usage_error& e) {
    throw usage_error(at_line(lineno) + e.what());
  }
}

}  // namespace io_detail

template <class Field>
typename Field::value_type parse_value(const Field& f, const std::string& tok) {
  if constexpr (std::is_same_v<Field, RationalField>) {
    return parse_rational(tok);
  } else {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw usage_error("expected an integer field entry, got '" + tok + "'");
    }
    return f.from_integer(v);
  }
}

template <class Field>
void write_matrix(std::ostream& out, const Matrix<Field>& a) {
  out << a.rows() << ' ' << a.cols() << ' ' << a.field().spec().label() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << Field::format(a.at(i, j));
    }
    out << '\n';
  }
}

inline AnyMatrix read_matrix(std::istream& in,
                             std::size_t rational_cap = RationalField::default_max_dimension) {
  using namespace io_detail;
  std::string line;
  std::size_t lineno = 0;
  if (!next_content_line(in, line, lineno)) throw usage_error("matrix file is empty");
  const auto [m, n, spec] = parse_header(line, lineno, "m n field");
  return visit_field(
      spec,
      [&](const auto& f) -> AnyMatrix {
        using F = std::decay_t<decltype(f)>;
        Matrix<F> a(f, m, n);
        for (std::size_t i = 0; i < m; ++i) {
          if (!next_content_line(in, line, lineno)) {
            throw usage_error("matrix file ends after " + std::to_string(i) + " of " +
                              std::to_string(m) + " rows");
          }
          const auto toks = split(line);
          if (toks.size() != n) {
            throw usage_error(at_line(lineno) + "expected " + std::to_string(n) + " entries, got " +
                              std::to_string(toks.size()));
          }
          for (std::size_t j = 0; j < n; ++j) {
            try {
              a.set(i, j, parse_value(f, toks[j]));
            } catch (const usage_error& e) {
              throw usage_error(at_line(lineno) + e.what());
            }
          }
        }
        if (next_content_line(in, line, lineno)) {
          throw usage_error(at_line(lineno) + "unexpected content after the last row");
        }
        return a;
      },
      rational_cap);
}

template <class Field>
void write_graph(std::ostream& out, const Graph<Field>& g) {
  out << g.n << ' ' << g.edges.size() << ' ' << g.field.spec().label() << '\n';
  for (const auto& e : g.edges) out << e.u << ' ' << e.v << ' ' << Field::format(e.weight) << '\n';
}

using AnyGraph = std::variant<Graph<Gf2>, Graph<PrimeField>, Graph<RationalField>>;

inline AnyGraph read_graph(std::istream& in) {
  using namespace io_detail;
  std::string line;
  std::size_t lineno = 0;
  if (!next_content_line(in, line, lineno)) throw usage_error("graph file is empty");
  const auto [n, m, spec] = parse_header(line, lineno, "n m field");
  return visit_field(spec, [&](const auto& f) -> AnyGraph {
    using F = std::decay_t<decltype(f)>;
    Graph<F> g{f, n, {}};
    g.edges.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      if (!next_content_line(in, line, lineno)) {
        throw usage_error("graph file ends after " + std::to_string(k) + " of " +
                          std::to_string(m) + " edges");
      }
      const auto toks = split(line);
      if (toks.size() != 3) throw usage_error(at_line(lineno) + "edge line must be 'i j weight'");
      try {
        g.edges.push_back(
            {parse_size(toks[0]), parse_size(toks[1]), parse_value(f, toks[2])});
      } catch (const usage_error& e) {
        throw usage_error(at_line(lineno) + e.what());
      }
    }
    try {
      g.validate();
    } catch (const usage_error& e) {
      throw usage_error(std::string("graph file: ") + e.what());
    }
    return g;
  });
}

}  // namespace frozenrank
