#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <ostream>

#include "cvn/rational.hpp"

namespace cvn::cli {

using nlohmann::json;

Word parse_word(std::string_view text, int rank) {
  std::vector<Letter> letters;
  std::size_t i = 0;
  auto bad = [&](const std::string& why) {
    return InvalidInput("bad word '" + std::string(text) + "': " + why);
  };
  if (text == "1") return Word(rank);
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if ((c == 'x' || c == 'X') && i + 1 < text.size() &&
        std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      std::size_t j = i + 1;
      int idx = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        idx = idx * 10 + (text[j] - '0');
        if (idx > 1000000) throw bad("index too large");
        ++j;
      }
      if (idx < 1 || idx > rank) throw bad("generator out of range");
      letters.push_back(c == 'x' ? idx : -idx);
      i = j;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) throw bad("unexpected character");
    int idx = std::tolower(static_cast<unsigned char>(c)) - 'a' + 1;
    if (idx > rank) throw bad("generator out of range");
    letters.push_back(std::islower(static_cast<unsigned char>(c)) ? idx : -idx);
    ++i;
  }
  return Word::reduce(letters, rank);
}

std::string format_word(const Word& w) {
  std::string out;
  if (w.rank() <= 26) {
    for (Letter l : w.letters())
      out += l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1);
    return out;
  }
  for (Letter l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += (l > 0 ? "x" : "X") + std::to_string(std::abs(l));
  }
  return out;
}

std::string format_edge_path(const EdgePath& p) {
  std::string out;
  for (OrientedEdge oe : p) {
    if (!out.empty()) out += ' ';
    int id = edge_of(oe) + 1;
    out += std::to_string(is_forward(oe) ? id : -id);
  }
  return out;
}

namespace {

Rational length_of(const json& v) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  throw InvalidInput("edge length must be a string \"p/q\" or an integer");
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name))
    throw InvalidInput(std::string("missing field '") + name + "'");
  return doc.at(name);
}

}  // namespace

MarkedMetricGraph graph_from_json(const json& doc) {
  try {
    int rank = field(doc, "rank").get<int>();
    if (rank <= 0) throw InvalidInput("rank must be positive");

    std::map<long, Vertex> vid;
    for (const auto& v : field(doc, "vertices")) {
      long id = v.get<long>();
      if (!vid.emplace(id, 0).second) throw InvalidInput("duplicate vertex id " + std::to_string(id));
    }
    if (vid.empty()) throw InvalidInput("graph has no vertices");
    Vertex next = 0;
    for (auto& [id, idx] : vid) idx = next++;
    auto vertex = [&](long id) {
      auto it = vid.find(id);
      if (it == vid.end()) throw InvalidInput("unknown vertex id " + std::to_string(id));
      return it->second;
    };

    const json& edges = field(doc, "edges");
    std::map<long, const json*> by_id;
    for (const auto& e : edges) {
      long id = field(e, "id").get<long>();
      if (!by_id.emplace(id, &e).second) throw InvalidInput("duplicate edge id " + std::to_string(id));
    }
    long expect = 1;
    for (const auto& [id, _] : by_id)
      if (id != expect++) throw InvalidInput("edge ids must be 1..E");

    std::size_t labelled = 0;
    std::vector<EdgeData> data;
    for (const auto& [id, e] : by_id) {
      EdgeData d;
      d.from = vertex(field(*e, "from").get<long>());
      d.to = vertex(field(*e, "to").get<long>());
      d.length = length_of(field(*e, "length"));
      d.label = Word(rank);
      if (e->contains("label")) {
        d.label = parse_word(e->at("label").get<std::string>(), rank);
        ++labelled;
      }
      data.push_back(std::move(d));
    }
    if (labelled != 0 && labelled != data.size())
      throw InvalidInput("either every edge or no edge carries a label");

    const long ecount = static_cast<long>(data.size());
    std::vector<EdgePath> marking;
    for (const auto& loop : field(doc, "marking")) {
      EdgePath p;
      for (const auto& s : loop) {
        long x = s.get<long>();
        if (x == 0 || std::abs(x) > ecount) throw InvalidInput("marking uses unknown edge " + std::to_string(x));
        EdgeId e = static_cast<EdgeId>(std::abs(x) - 1);
        p.push_back(x > 0 ? forward_of(e) : reversed(forward_of(e)));
      }
      marking.push_back(std::move(p));
    }
    if (static_cast<int>(marking.size()) != rank)
      throw InvalidInput("marking must list one loop per generator");

    MarkedMetricGraph g(rank, static_cast<int>(vid.size()), std::move(data),
                        vertex(field(doc, "basepoint").get<long>()), std::move(marking));
    if (labelled == 0) g = with_derived_labels(g);
    require_valid(g);
    return g;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed graph document: ") + e.what());
  }
}

MarkedMetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  return graph_from_json(doc);
}

nlohmann::ordered_json graph_to_json(const MarkedMetricGraph& g) {
  nlohmann::ordered_json doc;
  doc["rank"] = g.rank();
  doc["vertices"] = nlohmann::ordered_json::array();
  for (Vertex v = 0; v < g.vertex_count(); ++v) doc["vertices"].push_back(v);
  doc["edges"] = nlohmann::ordered_json::array();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& d = g.edge(e);
    doc["edges"].push_back({{"id", e + 1},
                            {"from", d.from},
                            {"to", d.to},
                            {"length", to_string(d.length)},
                            {"label", format_word(d.label)}});
  }
  doc["basepoint"] = g.basepoint();
  doc["marking"] = nlohmann::ordered_json::array();
  for (const auto& loop : g.marking()) {
    auto arr = nlohmann::ordered_json::array();
    for (OrientedEdge oe : loop) {
      int id = edge_of(oe) + 1;
      arr.push_back(is_forward(oe) ? id : -id);
    }
    doc["marking"].push_back(arr);
  }
  return doc;
}

void Section::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw InvariantViolation("report row width mismatch in " + name);
  rows.push_back(std::move(row));
}

Section& Report::section(std::string name, std::vector<std::string> columns) {
  sections.push_back({std::move(name), std::move(columns), {}});
  return sections.back();
}

const Section* Report::find(std::string_view name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

void render(std::ostream& out, const Report& report, Format format) {
  if (format == Format::json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& s : report.sections) {
      auto rows = nlohmann::ordered_json::array();
      for (const auto& r : s.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < r.size(); ++c) obj[s.columns[c]] = r[c];
        rows.push_back(std::move(obj));
      }
      doc[s.name] = std::move(rows);
    }
    out << doc.dump(2) << '\n';
    return;
  }
  bool first = true;
  for (const auto& s : report.sections) {
    if (!first) out << '\n';
    first = false;
    out << "# " << s.name << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "\t" : "") << cells[c];
      out << '\n';
    };
    line(s.columns);
    for (const auto& r : s.rows) line(r);
  }
}

std::string bool_cell(bool b) { return b ? "true" : "false"; }

std::string log_cell(const Rational& q) { return format_decimal(log_of(q)); }

}  // namespace cvn::cli
