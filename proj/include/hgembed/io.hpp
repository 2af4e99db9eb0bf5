#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hgembed/analysis.hpp"
#include "hgembed/embedding.hpp"
#include "hgembed/trace.hpp"
#include "json.hpp"

namespace hgembed {

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("error while reading '" + path.string() + "'");
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("error while writing '" + path.string() + "'");
}

// Shortest round-tripping decimal form (17 significant digits).
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

// Splits on spaces and tabs; anything after '#' is a comment.
inline std::vector<Token> tokenize(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline long long parse_int(const Token& tok, std::size_t line_no, const char* what) {
  long long v = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec == std::errc::result_out_of_range)
    throw ParseError(std::string(what) + " '" + std::string(tok.text) + "' is out of range", line_no, tok.column);
  if (ec != std::errc() || ptr != last)
    throw ParseError(std::string(what) + " '" + std::string(tok.text) + "' is not an integer", line_no, tok.column);
  return v;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hyperedge lists
//
// One hyperedge per line as whitespace-separated node ids; '#' starts a
// comment and blank lines are skipped. Directives:
//   %n <count>   node count (default: largest id + 1)
//   %empty       a hyperedge without members

struct HyperedgeListOptions {
  bool one_based = false;
};

inline Hypergraph parse_hyperedge_list(std::string_view text, const HyperedgeListOptions& opt = {}) {
  std::vector<std::vector<Index>> edges;
  std::optional<long long> declared_n;
  std::size_t declared_line = 0;
  long long max_id = -1;
  const auto lines = detail::split_lines(text);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::size_t line_no = k + 1;
    const auto toks = detail::tokenize(lines[k]);
    if (toks.empty()) continue;
    if (toks[0].text.front() == '%') {
      if (toks[0].text == "%n") {
        if (toks.size() != 2) throw ParseError("'%n' takes exactly one integer", line_no, toks[0].column);
        if (declared_n) throw ParseError("'%n' given twice", line_no, toks[0].column);
        const long long n = detail::parse_int(toks[1], line_no, "node count");
        if (n < 1) throw ParseError("node count must be positive", line_no, toks[1].column);
        declared_n = n;
        declared_line = line_no;
      } else if (toks[0].text == "%empty") {
        if (toks.size() != 1) throw ParseError("'%empty' takes no arguments", line_no, toks[1].column);
        edges.emplace_back();
      } else {
        throw ParseError("unknown directive '" + std::string(toks[0].text) + "'", line_no, toks[0].column);
      }
      continue;
    }
    std::vector<Index> members;
    for (const auto& tok : toks) {
      long long id = detail::parse_int(tok, line_no, "node id");
      if (opt.one_based) {
        if (id < 1) throw ParseError("node id " + std::to_string(id) + " is below 1 (one-based input)", line_no, tok.column);
        --id;
      } else if (id < 0) {
        throw ParseError("node id " + std::to_string(id) + " is negative", line_no, tok.column);
      }
      max_id = std::max(max_id, id);
      members.push_back(static_cast<Index>(id));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    edges.push_back(std::move(members));
  }
  if (edges.empty()) throw ParseError("no hyperedges", lines.size() == 0 ? 1 : lines.size());
  if (declared_n && max_id >= *declared_n)
    throw ParseError("node id " + std::to_string(max_id + (opt.one_based ? 1 : 0)) + " exceeds the declared count " +
                         std::to_string(*declared_n),
                     declared_line);
  const long long n = declared_n.value_or(max_id + 1);
  if (n < 1) throw ParseError("node count unknown: every hyperedge is empty and there is no '%n'", 1);
  return Hypergraph(static_cast<Index>(n), std::move(edges));
}

inline std::string write_hyperedge_list(const Hypergraph& h, const HyperedgeListOptions& opt = {}) {
  std::string out = "%n " + std::to_string(h.num_nodes()) + "\n";
  const Index shift = opt.one_based ? 1 : 0;
  for (Index j = 0; j < h.num_edges(); ++j) {
    const auto& e = h.edge(j);
    if (e.empty()) {
      out += "%empty\n";
      continue;
    }
    for (std::size_t m = 0; m < e.size(); ++m) {
      if (m) out += ' ';
      out += std::to_string(e[m] + shift);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings: CSV "id,kind,x0,...", nodes first, then hyperedge centres

inline std::string write_embedding(const Embedding& y) {
  std::string out = "id,kind";
  for (Index c = 0; c < y.dim(); ++c) out += ",x" + std::to_string(c);
  out += '\n';
  const auto row = [&](Index id, const char* kind, const auto& coords) {
    out += std::to_string(id);
    out += ',';
    out += kind;
    for (Index c = 0; c < coords.size(); ++c) {
      out += ',';
      out += format_double(coords(c));
    }
    out += '\n';
  };
  for (Index i = 0; i < y.num_nodes(); ++i) row(i, "node", y.node(i));
  for (Index j = 0; j < y.num_edges(); ++j) row(j, "edge", y.centre(j));
  return out;
}

inline Embedding read_embedding(std::string_view text) {
  const auto lines = detail::split_lines(text);
  const auto split = [](std::string_view line) {
    std::vector<std::string_view> cells;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  if (lines.empty()) throw ParseError("empty embedding file", 1);
  const auto header = split(lines[0]);
  if (header.size() < 3 || header[0] != "id" || header[1] != "kind")
    throw ParseError("header must be 'id,kind,x0,...'", 1, 1);
  const Index dim = static_cast<Index>(header.size()) - 2;
  for (Index c = 0; c < dim; ++c)
    if (header[static_cast<std::size_t>(c + 2)] != "x" + std::to_string(c))
      throw ParseError("header column " + std::to_string(c + 3) + " must be 'x" + std::to_string(c) + "'", 1);

  struct Row {
    Index id;
    std::vector<double> x;
  };
  std::vector<Row> nodes, centres;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::size_t line_no = k + 1;
    std::string_view line = lines[k];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (static_cast<Index>(cells.size()) != dim + 2)
      throw ParseError("expected " + std::to_string(dim + 2) + " fields, found " + std::to_string(cells.size()),
                       line_no);
    const long long id = detail::parse_int({cells[0], 1}, line_no, "id");
    if (id < 0) throw ParseError("negative id", line_no, 1);
    Row r{static_cast<Index>(id), {}};
    for (Index c = 0; c < dim; ++c) {
      const std::string cell(cells[static_cast<std::size_t>(c + 2)]);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v))
        throw ParseError("coordinate '" + cell + "' is not a finite number", line_no);
      r.x.push_back(v);
    }
    if (cells[1] == "node") nodes.push_back(std::move(r));
    else if (cells[1] == "edge") centres.push_back(std::move(r));
    else throw ParseError("kind must be 'node' or 'edge', found '" + std::string(cells[1]) + "'", line_no);
  }

  const Index n = static_cast<Index>(nodes.size()), s = static_cast<Index>(centres.size());
  Matrix coords(n + s, dim);
  const auto place = [&](const std::vector<Row>& rows, Index offset, const char* kind) {
    std::vector<bool> seen(rows.size(), false);
    for (const auto& r : rows) {
      if (r.id >= static_cast<Index>(rows.size()) || seen[static_cast<std::size_t>(r.id)])
        throw ParseError(std::string(kind) + " ids must be exactly 0.." + std::to_string(rows.size() - 1) +
                             " (id " + std::to_string(r.id) + ")",
                         1);
      seen[static_cast<std::size_t>(r.id)] = true;
      for (Index c = 0; c < dim; ++c) coords(offset + r.id, c) = r.x[static_cast<std::size_t>(c)];
    }
  };
  place(nodes, 0, "node");
  place(centres, n, "edge");
  if (n == 0) throw ParseError("embedding has no node rows", 1);
  return Embedding(n, s, std::move(coords));
}

// ---------------------------------------------------------------------------
// Metrics and plot series

struct RunSummary {
  double loss_hard = 0.0;
  double loss_smooth = 0.0;
  double radius = 0.0;
  double tau = 0.0;
  std::optional<double> auc;
  std::optional<double> ari;
};

inline RunSummary summarize(const RunResult& r) { return {r.loss_hard, r.loss_smooth, r.radius, r.tau, {}, {}}; }

inline nlohmann::ordered_json metrics_json(const RunTrace& trace, const RunSummary& s) {
  const auto finite = [](double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string("metrics: ") + name + " is not finite");
    return v;
  };
  nlohmann::ordered_json j;
  j["loss_hard"] = finite(s.loss_hard, "loss_hard");
  j["loss_smooth"] = finite(s.loss_smooth, "loss_smooth");
  j["r"] = finite(s.radius, "r");
  j["tau"] = finite(s.tau, "tau");
  j["iterations"] = trace.size();
  if (s.auc) j["auc"] = finite(*s.auc, "auc");
  if (s.ari) j["ari"] = finite(*s.ari, "ari");
  j["trace"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& rec = trace.records[k];
    nlohmann::ordered_json t;
    t["iteration"] = k + 1;
    t["loss_smooth"] = finite(rec.loss_smooth, "trace loss_smooth");
    t["loss_hard"] = finite(rec.loss_hard, "trace loss_hard");
    t["r"] = finite(rec.radius, "trace r");
    t["tau"] = finite(rec.tau, "trace tau");
    j["trace"].push_back(std::move(t));
  }
  return j;
}

inline std::string write_metrics(const RunTrace& trace, const RunSummary& s) {
  return metrics_json(trace, s).dump(2) + "\n";
}

inline std::string write_trace_csv(const RunTrace& trace) {
  std::string out = "iteration,loss_smooth,loss_hard,r,tau\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& r = trace.records[k];
    out += std::to_string(k + 1) + ',' + format_double(r.loss_smooth) + ',' + format_double(r.loss_hard) + ',' +
           format_double(r.radius) + ',' + format_double(r.tau) + '\n';
  }
  return out;
}

inline std::string write_roc_csv(const RocResult& roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : roc.curve)
    out += format_double(p.threshold) + ',' + format_double(p.fpr) + ',' + format_double(p.tpr) + '\n';
  return out;
}

inline std::string write_scores_csv(const ScoredRelations& scored) {
  std::string out = "node,edge,score,injected\n";
  for (const auto& p : scored.pairs)
    out += std::to_string(p.relation.node) + ',' + std::to_string(p.relation.edge) + ',' + format_double(p.score) +
           ',' + (p.positive ? "1" : "0") + '\n';
  return out;
}

inline std::string write_ari_csv(const std::vector<ClusterTracePoint>& series) {
  std::string out = "iteration,ari\n";
  for (const auto& p : series) out += std::to_string(p.iteration) + ',' + format_double(p.ari) + '\n';
  return out;
}

// One integer label per line; '#' comments and blank lines are skipped.
inline Partition parse_labels(std::string_view text) {
  Partition labels;
  const auto lines = detail::split_lines(text);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto toks = detail::tokenize(lines[k]);
    if (toks.empty()) continue;
    if (toks.size() != 1) throw ParseError("expected one label per line", k + 1, toks[1].column);
    const long long v = detail::parse_int(toks[0], k + 1, "label");
    if (v < 0) throw ParseError("labels must be non-negative", k + 1, toks[0].column);
    labels.push_back(static_cast<Index>(v));
  }
  return labels;
}

inline std::string write_labels(const Partition& labels) {
  std::string out;
  for (Index l : labels) out += std::to_string(l) + '\n';
  return out;
}

}  // namespace hgembed
