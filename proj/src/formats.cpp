#include "kutato/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "kutato/errors.hpp"

namespace kutato {
namespace {

constexpr std::string_view kWeightColumn = "__weight";
constexpr std::string_view kMissingCell = "?";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool valid_token(std::string_view s) {
  if (s.empty() || s == kMissingCell) return false;
  return s.find_first_of(" \t\r\n=:|,#") == std::string_view::npos;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw FormatError("line " + std::to_string(line) + ": " + msg);
}

std::string shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string sci6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw FormatError("error writing '" + path.string() + "'");
}

BeliefNetwork parse_network(std::string_view text) {
  enum Section { vars = 0, parents = 1, cpts = 2 };
  Section section = vars;
  std::string name = "network";
  bool named = false;
  Structure structure;
  std::vector<bool> parents_seen;
  // Per variable: one slot per configuration, filled once.
  std::vector<std::vector<std::optional<std::vector<double>>>> rows;

  const auto lines = split_lines(text);
  for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
    const auto line = trim(lines[ln - 1]);
    if (line.empty() || line.front() == '#') continue;
    auto tokens = split_ws(line);
    const auto keyword = tokens.front();

    if (keyword == "network") {
      if (named) fail(ln, "duplicate 'network' line");
      if (tokens.size() != 2) fail(ln, "expected 'network <name>'");
      if (!structure.variables.empty()) fail(ln, "'network' must precede variable declarations");
      name = std::string(tokens[1]);
      named = true;
    } else if (keyword == "var") {
      if (section != vars) fail(ln, "'var' after parents/cpt section");
      if (tokens.size() < 3) fail(ln, "expected 'var <name> <label>...'");
      Variable v;
      if (!valid_token(tokens[1])) fail(ln, "invalid variable name '" + std::string(tokens[1]) + "'");
      v.name = tokens[1];
      if (structure.index_of(v.name)) fail(ln, "variable '" + v.name + "' declared twice");
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (!valid_token(tokens[i])) fail(ln, "invalid value label '" + std::string(tokens[i]) + "'");
        if (v.index_of(tokens[i])) fail(ln, "duplicate label '" + std::string(tokens[i]) + "'");
        v.values.emplace_back(tokens[i]);
      }
      structure.variables.push_back(std::move(v));
      structure.parents.emplace_back();
    } else if (keyword == "parents") {
      if (section == cpts) fail(ln, "'parents' after cpt section");
      section = parents;
      if (tokens.size() < 2) fail(ln, "expected 'parents <name> <parent>...'");
      auto child = structure.index_of(tokens[1]);
      if (!child) fail(ln, "unknown variable '" + std::string(tokens[1]) + "'");
      parents_seen.resize(structure.size(), false);
      if (parents_seen[*child]) fail(ln, "parents of '" + std::string(tokens[1]) + "' given twice");
      parents_seen[*child] = true;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        auto p = structure.index_of(tokens[i]);
        if (!p) fail(ln, "unknown parent '" + std::string(tokens[i]) + "'");
        structure.parents[*child].push_back(*p);
      }
    } else if (keyword == "cpt") {
      if (section != cpts) {
        section = cpts;
        if (auto report = validate_structure(structure); !report.ok()) {
          throw ValidationError("invalid network '" + name + "':\n" + report.to_string());
        }
        rows.resize(structure.size());
        for (std::size_t v = 0; v < structure.size(); ++v) rows[v].resize(structure.parent_configurations(v));
      }
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) fail(ln, "expected ':' in cpt line");
      auto head = split_ws(line.substr(0, colon));
      auto probs = split_ws(line.substr(colon + 1));
      if (head.size() < 2) fail(ln, "expected 'cpt <name> ...'");
      auto var = structure.index_of(head[1]);
      if (!var) fail(ln, "unknown variable '" + std::string(head[1]) + "'");
      const auto& ps = structure.parents[*var];
      std::vector<std::optional<std::size_t>> digit(ps.size());
      std::size_t cond_start = 2;
      if (head.size() > 2) {
        if (head[2] != "|") fail(ln, "expected '|' before parent conditions");
        cond_start = 3;
      }
      if (head.size() - cond_start != ps.size()) {
        fail(ln, "cpt for '" + std::string(head[1]) + "' must condition on exactly its " +
                     std::to_string(ps.size()) + " parent(s)");
      }
      for (std::size_t i = cond_start; i < head.size(); ++i) {
        const auto eq = head[i].find('=');
        if (eq == std::string_view::npos) fail(ln, "expected <parent>=<label>, got '" + std::string(head[i]) + "'");
        const auto pname = head[i].substr(0, eq);
        const auto label = head[i].substr(eq + 1);
        auto p = structure.index_of(pname);
        auto pos = p ? std::find(ps.begin(), ps.end(), *p) - ps.begin() : static_cast<std::ptrdiff_t>(ps.size());
        if (!p || pos == static_cast<std::ptrdiff_t>(ps.size())) {
          fail(ln, "'" + std::string(pname) + "' is not a parent of '" + std::string(head[1]) + "'");
        }
        if (digit[pos]) fail(ln, "parent '" + std::string(pname) + "' conditioned twice");
        auto value = structure.variables[*p].index_of(label);
        if (!value) fail(ln, "unknown label '" + std::string(label) + "' for '" + std::string(pname) + "'");
        digit[pos] = *value;
      }
      std::size_t config = 0;
      for (std::size_t k = 0; k < ps.size(); ++k) config = config * structure.variables[ps[k]].arity() + *digit[k];
      const auto arity = structure.variables[*var].arity();
      if (probs.size() != arity) {
        fail(ln, "expected " + std::to_string(arity) + " probabilities, got " + std::to_string(probs.size()));
      }
      std::vector<double> row;
      for (auto tok : probs) {
        auto value = parse_double(tok);
        if (!value) fail(ln, "bad probability '" + std::string(tok) + "'");
        row.push_back(*value);
      }
      if (rows[*var][config]) fail(ln, "configuration listed twice for '" + std::string(head[1]) + "'");
      rows[*var][config] = std::move(row);
    } else {
      fail(ln, "unknown keyword '" + std::string(keyword) + "'");
    }
  }

  if (structure.variables.empty()) throw FormatError("network declares no variables");
  if (section != cpts) throw FormatError("network has no cpt lines");

  NetworkParts parts{name, structure, {}};
  for (std::size_t v = 0; v < structure.size(); ++v) {
    std::vector<double> flat;
    for (std::size_t c = 0; c < rows[v].size(); ++c) {
      if (!rows[v][c]) {
        throw FormatError("variable '" + structure.variables[v].name + "' is missing cpt row for configuration " +
                          std::to_string(c));
      }
      flat.insert(flat.end(), rows[v][c]->begin(), rows[v][c]->end());
    }
    parts.cpts.emplace_back(structure.variables[v].arity(), rows[v].size(), std::move(flat));
  }
  return BeliefNetwork(std::move(parts));
}

BeliefNetwork read_network_file(const std::filesystem::path& path) { return parse_network(read_text_file(path)); }

std::string format_network(const BeliefNetwork& net) {
  std::ostringstream out;
  out << "network " << net.name() << '\n';
  for (const auto& v : net.variables()) {
    out << "var " << v.name;
    for (const auto& l : v.values) out << ' ' << l;
    out << '\n';
  }
  for (std::size_t v = 0; v < net.size(); ++v) {
    if (net.parents(v).empty()) continue;
    out << "parents " << net.variable(v).name;
    for (auto p : net.parents(v)) out << ' ' << net.variable(p).name;
    out << '\n';
  }
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto radix = net.structure().parent_radix(v);
    const auto& ps = net.parents(v);
    for (std::size_t r = 0; r < radix.size(); ++r) {
      out << "cpt " << net.variable(v).name;
      if (!ps.empty()) {
        out << " |";
        const auto digits = radix.decode(r);
        for (std::size_t k = 0; k < ps.size(); ++k) {
          out << ' ' << net.variable(ps[k]).name << '=' << net.variable(ps[k]).values[digits[k]];
        }
      }
      out << " :";
      for (double p : net.cpt(v).row(r)) out << ' ' << shortest(p);
      out << '\n';
    }
  }
  return out.str();
}

void write_network_file(const std::filesystem::path& path, const BeliefNetwork& net) {
  write_text_file(path, format_network(net));
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool is_integer(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> sorted_vocabulary(std::vector<std::string> labels) {
  const bool numeric = std::all_of(labels.begin(), labels.end(), [](const std::string& l) { return is_integer(l); });
  if (numeric) {
    std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
      return std::stoll(a) < std::stoll(b);
    });
  } else {
    std::sort(labels.begin(), labels.end());
  }
  return labels;
}

}  // namespace

CaseDatabase parse_cases(std::string_view text, const std::vector<Variable>& vocabulary) {
  const auto lines = split_lines(text);
  std::size_t ln = 0;
  while (ln < lines.size() && trim(lines[ln]).empty()) ++ln;
  if (ln == lines.size()) throw FormatError("case file has no header");
  auto header = split_csv(lines[ln]);
  const std::size_t header_line = ++ln;

  bool weighted = !header.empty() && header.back() == kWeightColumn;
  if (weighted) header.pop_back();
  if (header.empty()) fail(header_line, "header names no variables");
  std::vector<Variable> variables;
  for (auto name : header) {
    if (!valid_token(name)) fail(header_line, "invalid variable name '" + std::string(name) + "'");
    for (const auto& v : variables) {
      if (v.name == name) fail(header_line, "duplicate column '" + std::string(name) + "'");
    }
    if (vocabulary.empty()) {
      variables.push_back({std::string(name), {}});
    } else {
      auto it = std::find_if(vocabulary.begin(), vocabulary.end(), [&](const Variable& v) { return v.name == name; });
      if (it == vocabulary.end()) fail(header_line, "unknown variable '" + std::string(name) + "'");
      variables.push_back(*it);
    }
  }

  const std::size_t width = variables.size();
  std::vector<std::vector<std::string_view>> raw;
  std::vector<double> weights;
  for (; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    auto cells = split_csv(lines[ln]);
    if (cells.size() != width + (weighted ? 1 : 0)) {
      fail(ln + 1, "expected " + std::to_string(width + (weighted ? 1 : 0)) + " cells, got " +
                       std::to_string(cells.size()));
    }
    double w = 1.0;
    if (weighted) {
      auto parsed = parse_double(cells.back());
      if (!parsed || *parsed < 0.0) fail(ln + 1, "bad weight '" + std::string(cells.back()) + "'");
      w = *parsed;
      cells.pop_back();
    }
    for (auto c : cells) {
      if (c != kMissingCell && !valid_token(c)) fail(ln + 1, "invalid value label '" + std::string(c) + "'");
    }
    raw.push_back(std::move(cells));
    weights.push_back(w);
  }

  if (vocabulary.empty()) {
    for (std::size_t v = 0; v < width; ++v) {
      std::vector<std::string> labels;
      for (const auto& row : raw) {
        if (row[v] == kMissingCell) continue;
        if (std::find(labels.begin(), labels.end(), row[v]) == labels.end()) labels.emplace_back(row[v]);
      }
      if (labels.empty() && !raw.empty()) {
        throw FormatError("column '" + variables[v].name + "' has no observed values");
      }
      variables[v].values = sorted_vocabulary(std::move(labels));
    }
  }

  std::vector<std::int32_t> cells;
  cells.reserve(raw.size() * width);
  std::vector<std::map<std::string, std::int32_t, std::less<>>> lookup(width);
  for (std::size_t v = 0; v < width; ++v) {
    for (std::size_t i = 0; i < variables[v].values.size(); ++i) {
      lookup[v].emplace(variables[v].values[i], static_cast<std::int32_t>(i));
    }
  }
  for (std::size_t r = 0; r < raw.size(); ++r) {
    for (std::size_t v = 0; v < width; ++v) {
      if (raw[r][v] == kMissingCell) {
        cells.push_back(CaseDatabase::kMissing);
        continue;
      }
      auto it = lookup[v].find(raw[r][v]);
      if (it == lookup[v].end()) {
        throw FormatError("row " + std::to_string(r + 1) + ": unknown label '" + std::string(raw[r][v]) +
                          "' for variable '" + variables[v].name + "'");
      }
      cells.push_back(it->second);
    }
  }
  return CaseDatabase(std::move(variables), std::move(cells), std::move(weights));
}

CaseDatabase read_case_file(const std::filesystem::path& path, const std::vector<Variable>& vocabulary) {
  return parse_cases(read_text_file(path), vocabulary);
}

std::string format_cases(const CaseDatabase& db) {
  const bool weighted = std::any_of(db.weights().begin(), db.weights().end(), [](double w) { return w != 1.0; });
  std::string out;
  for (std::size_t v = 0; v < db.variable_count(); ++v) {
    if (v) out += ',';
    out += db.variable(v).name;
  }
  if (weighted) out += "," + std::string(kWeightColumn);
  out += '\n';
  for (std::size_t r = 0; r < db.row_count(); ++r) {
    for (std::size_t v = 0; v < db.variable_count(); ++v) {
      if (v) out += ',';
      const auto c = db.cell(r, v);
      out += c == CaseDatabase::kMissing ? std::string(kMissingCell) : db.variable(v).values[static_cast<std::size_t>(c)];
    }
    if (weighted) out += "," + shortest(db.weight(r));
    out += '\n';
  }
  return out;
}

void write_case_file(const std::filesystem::path& path, const CaseDatabase& db) {
  write_text_file(path, format_cases(db));
}

std::string format_trace(const LearnTrace& trace, const std::vector<Variable>& variables) {
  std::string out = "step\tfrom\tto\tdelta_h\tdf\tstatistic\tp_value\tentropy_after\n";
  for (const auto& s : trace.steps) {
    const auto& c = s.accepted;
    out += std::to_string(s.step) + '\t' + variables[c.from].name + '\t' + variables[c.to].name + '\t' +
           fixed6(c.delta_h) + '\t' + std::to_string(c.df) + '\t' + fixed6(c.statistic) + '\t' + sci6(c.p_value) +
           '\t' + fixed6(s.entropy_after) + '\n';
  }
  out += "# halt: " + std::string(to_string(trace.halt_reason)) + '\n';
  return out;
}

void write_trace_file(const std::filesystem::path& path, const LearnTrace& trace,
                      const std::vector<Variable>& variables) {
  write_text_file(path, format_trace(trace, variables));
}

}  // namespace kutato
