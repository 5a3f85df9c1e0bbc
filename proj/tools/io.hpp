#pragma once

// Text formats: words, graph documents and reports.

#include <deque>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvn/graph.hpp"
#include "cvn/word.hpp"

namespace cvn::cli {

/// Lowercase a..z are generators 1..26, uppercase their inverses; any rank
/// also accepts x<i> / X<i> tokens. Spaces are ignored between letters,
/// "1" and "" are the identity. Throws InvalidInput.
Word parse_word(std::string_view text, int rank);

/// Letters for rank <= 26, space-separated x<i> tokens above; "" for 1.
std::string format_word(const Word& w);

/// Signed 1-based edge ids, space separated.
std::string format_edge_path(const EdgePath& p);

/// Parses a graph document. Labels may be omitted (all of them), in which
/// case they are derived from the marking. Throws InvalidInput.
MarkedMetricGraph graph_from_json(const nlohmann::json& doc);
MarkedMetricGraph load_graph(const std::string& path);

/// Canonical serialisation: edges sorted by id, vertices 0..V-1.
nlohmann::ordered_json graph_to_json(const MarkedMetricGraph& g);

/// One named table of string cells.
struct Section {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

struct Report {
  // deque: section references stay valid while more are added.
  std::deque<Section> sections;

  Section& section(std::string name, std::vector<std::string> columns);
  const Section* find(std::string_view name) const;
};

enum class Format { tsv, json };

/// TSV: "# name", header, rows, blank line between sections.
/// JSON: {"name": [{column: cell, ...}, ...], ...} in insertion order.
void render(std::ostream& out, const Report& report, Format format);

std::string bool_cell(bool b);
std::string log_cell(const Rational& q);

}  // namespace cvn::cli
