#include "ccbp/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace ccbp {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : line) {
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

int parse_int(const std::string& tok, int line_no) {
  int v;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad integer '" +
                     tok + "'");
  return v;
}

double parse_real(const std::string& tok, int line_no) {
  double v;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() ||
      !std::isfinite(v))
    throw ParseError("line " + std::to_string(line_no) + ": bad value '" +
                     tok + "'");
  return v;
}

void append_real(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("serialize: to_chars failed");
  out.append(buf, ptr);
}

}  // namespace

GraphicalModel parse_model(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool have_header = false, have_counts = false;
  int n = 0, m = 0;
  std::vector<std::vector<double>> node_costs;
  std::vector<char> node_seen;
  int nodes_read = 0;
  std::vector<std::pair<int, int>> edge_pairs;
  std::vector<std::vector<double>> edge_costs;

  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> tok = tokenize(line);
    if (tok.empty()) continue;

    if (!have_header) {
      if (tok.size() != 2 || tok[0] != "mrf")
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 'mrf 1' header");
      if (parse_int(tok[1], line_no) != 1)
        throw ParseError("line " + std::to_string(line_no) +
                         ": unsupported format version '" + tok[1] + "'");
      have_header = true;
      continue;
    }
    if (!have_counts) {
      if (tok.size() != 3 || tok[0] != "nodes")
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 'nodes <n> <m>'");
      n = parse_int(tok[1], line_no);
      m = parse_int(tok[2], line_no);
      if (n < 1 || m < 1)
        throw ParseError("line " + std::to_string(line_no) +
                         ": counts must be positive");
      node_costs.assign(n, {});
      node_seen.assign(n, 0);
      have_counts = true;
      continue;
    }
    if (tok[0] == "node") {
      if (static_cast<int>(tok.size()) != 2 + m)
        throw ParseError("line " + std::to_string(line_no) +
                         ": node line must carry " + std::to_string(m) +
                         " costs");
      const int i = parse_int(tok[1], line_no);
      if (i < 0 || i >= n)
        throw ParseError("line " + std::to_string(line_no) +
                         ": node id out of range");
      if (node_seen[i])
        throw ParseError("line " + std::to_string(line_no) +
                         ": duplicate node " + std::to_string(i));
      node_seen[i] = 1;
      ++nodes_read;
      node_costs[i].reserve(m);
      for (int t = 0; t < m; ++t)
        node_costs[i].push_back(parse_real(tok[2 + t], line_no));
    } else if (tok[0] == "edge") {
      if (static_cast<int>(tok.size()) != 3 + m * m)
        throw ParseError("line " + std::to_string(line_no) +
                         ": edge line must carry " + std::to_string(m * m) +
                         " costs");
      const int i = parse_int(tok[1], line_no);
      const int j = parse_int(tok[2], line_no);
      if (i < 0 || i >= n || j < 0 || j >= n)
        throw ParseError("line " + std::to_string(line_no) +
                         ": edge endpoint out of range");
      if (i >= j)
        throw ParseError("line " + std::to_string(line_no) +
                         ": edge endpoints must satisfy i < j");
      for (const auto& e : edge_pairs)
        if (e.first == i && e.second == j)
          throw ParseError("line " + std::to_string(line_no) +
                           ": duplicate edge " + std::to_string(i) + " " +
                           std::to_string(j));
      edge_pairs.emplace_back(i, j);
      std::vector<double> h;
      h.reserve(m * m);
      for (int t = 0; t < m * m; ++t)
        h.push_back(parse_real(tok[3 + t], line_no));
      edge_costs.push_back(std::move(h));
    } else {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unknown directive '" + tok[0] + "'");
    }
  }
  if (!have_header) throw ParseError("empty input: expected 'mrf 1' header");
  if (!have_counts) throw ParseError("missing 'nodes <n> <m>' line");
  if (nodes_read != n)
    throw ParseError("expected " + std::to_string(n) + " node lines, found " +
                     std::to_string(nodes_read));

  // Edge lines arrive in arbitrary order; Graph sorts (i,j) pairs, so the
  // cost matrices must be reordered to match.
  std::vector<std::size_t> order(edge_pairs.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edge_pairs[a] < edge_pairs[b];
  });
  std::vector<std::pair<int, int>> sorted_pairs;
  std::vector<std::vector<double>> sorted_costs;
  sorted_pairs.reserve(order.size());
  sorted_costs.reserve(order.size());
  for (std::size_t k : order) {
    sorted_pairs.push_back(edge_pairs[k]);
    sorted_costs.push_back(std::move(edge_costs[k]));
  }

  try {
    return GraphicalModel(Graph(n, std::move(sorted_pairs)), m,
                          std::move(node_costs), std::move(sorted_costs));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid model: ") + e.what());
  }
}

GraphicalModel parse_model(const std::string& text) {
  std::istringstream in(text);
  return parse_model(in);
}

GraphicalModel parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_model(in);
}

std::string serialize_model(const GraphicalModel& model) {
  const Graph& graph = model.graph();
  const int m = model.label_count();
  std::string out = "mrf 1\n";
  out += "nodes " + std::to_string(graph.node_count()) + " " +
         std::to_string(m) + "\n";
  for (int i = 0; i < graph.node_count(); ++i) {
    out += "node " + std::to_string(i);
    for (int a = 0; a < m; ++a) {
      out += ' ';
      append_real(out, model.node_cost(i, a));
    }
    out += '\n';
  }
  for (int e = 0; e < graph.edge_count(); ++e) {
    auto [i, j] = graph.edges()[e];
    out += "edge " + std::to_string(i) + " " + std::to_string(j);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        out += ' ';
        append_real(out, model.edge_cost_by_index(e, a, b));
      }
    out += '\n';
  }
  return out;
}

void write_model_file(const GraphicalModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << serialize_model(model);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace ccbp
