#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ulmt/modeltheory.hpp"
#include "ulmt/parser.hpp"
#include "ulmt/tableaux.hpp"
#include "ulmt/types.hpp"

namespace ulmt {

// Text formats. Every format is line based; '#' starts a comment that runs to
// the end of the line and blank lines are ignored.
//
//   chain L5            model m            T:            p:
//   size 5              algebra G3         p -> q        P(x)
//   one 4               domain a b         U:            p':
//   zero 0              P a = 1            q             P(x) -> 0
//   conj:               f a = b
//   0 0 0 0 0           c = a
//   ...                 p = 2

namespace detail {

struct Line {
  std::size_t number;
  std::string text;
};

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<Line> content_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string t = trim(raw);
    if (!t.empty()) out.push_back(Line{number, std::move(t)});
  }
  return out;
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] inline void fail_at(const std::string& source, std::size_t line, const std::string& what) {
  throw error(errc::syntax_error, source + ":" + std::to_string(line) + ": " + what);
}

inline int to_int(const std::string& source, std::size_t line, const std::string& word) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(word, &used);
  } catch (const std::exception&) {
    fail_at(source, line, "expected an integer, got '" + word + "'");
  }
  if (used != word.size()) fail_at(source, line, "expected an integer, got '" + word + "'");
  return value;
}

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_error, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Chains

inline UlChain read_chain(std::istream& in, const std::string& source = "<chain>") {
  using namespace detail;
  const auto lines = content_lines(in);
  std::optional<std::string> name;
  std::optional<int> size, one, zero;
  std::vector<std::vector<Degree>> table;
  bool in_table = false;
  for (const auto& [number, text] : lines) {
    const auto w = words(text);
    if (in_table) {
      std::vector<Degree> row;
      for (const auto& cell : w) row.push_back(to_int(source, number, cell));
      table.push_back(std::move(row));
      continue;
    }
    if (w[0] == "chain" && w.size() == 2) name = w[1];
    else if (w[0] == "size" && w.size() == 2) size = to_int(source, number, w[1]);
    else if (w[0] == "one" && w.size() == 2) one = to_int(source, number, w[1]);
    else if (w[0] == "zero" && w.size() == 2) zero = to_int(source, number, w[1]);
    else if (w[0] == "conj:" && w.size() == 1) in_table = true;
    else fail_at(source, number, "unexpected '" + text + "'");
  }
  const std::size_t last = lines.empty() ? 0 : lines.back().number;
  if (!name) fail_at(source, last, "missing 'chain <name>'");
  if (!size) fail_at(source, last, "missing 'size <n>'");
  if (!one) fail_at(source, last, "missing 'one <i>'");
  if (!zero) fail_at(source, last, "missing 'zero <i>'");
  if (static_cast<int>(table.size()) != *size)
    fail_at(source, last, "conj table has " + std::to_string(table.size()) + " rows, expected " + std::to_string(*size));
  return UlChain(*name, std::move(table), *one, *zero);
}

inline void write_chain(std::ostream& out, const UlChain& chain) {
  out << "chain " << chain.name() << "\nsize " << chain.size() << "\none " << chain.one() << "\nzero " << chain.zero()
      << "\nconj:\n";
  for (const auto& row : chain.conj_table()) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
}

inline UlChain load_chain(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_chain(in, path.string());
}

/// Built-in chain names: L<n> (Lukasiewicz), G<n> (Goedel), Z<k> (truncated group on -k..k).
inline std::optional<UlChain> builtin_chain(const std::string& name) {
  if (name.size() < 2 || !std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  if (name.size() > 4) return std::nullopt;
  const int k = std::stoi(name.substr(1));
  switch (name[0]) {
    case 'L': return make_lukasiewicz_chain(k);
    case 'G': return make_godel_chain(k);
    case 'Z': return make_truncated_group_chain(k);
    default: return std::nullopt;
  }
}

/// Chains by name: explicitly registered ones first, built-in names otherwise.
class ChainRegistry {
 public:
  void add(std::shared_ptr<const UlChain> chain) { chains_[chain->name()] = std::move(chain); }

  std::shared_ptr<const UlChain> resolve(const std::string& name) {
    if (auto it = chains_.find(name); it != chains_.end()) return it->second;
    if (auto c = builtin_chain(name)) {
      auto ptr = std::make_shared<const UlChain>(std::move(*c));
      chains_[name] = ptr;
      return ptr;
    }
    throw error(errc::unknown_symbol, "unknown chain '" + name + "'");
  }

  /// A chain file path, or a built-in chain name.
  std::shared_ptr<const UlChain> load(const std::string& spec) {
    if (std::filesystem::is_regular_file(spec)) {
      auto ptr = std::make_shared<const UlChain>(load_chain(spec));
      add(ptr);
      return ptr;
    }
    return resolve(spec);
  }

 private:
  std::map<std::string, std::shared_ptr<const UlChain>> chains_;
};

// ---------------------------------------------------------------------------
// Models

inline Structure read_model(std::istream& in, ChainRegistry& registry, const std::string& source = "<model>") {
  using namespace detail;
  const auto lines = content_lines(in);
  std::string name = "model";
  std::shared_ptr<const UlChain> chain;
  std::optional<std::vector<std::string>> domain;

  struct Entry {
    std::size_t line;
    std::vector<std::string> args;
    std::string value;
  };
  std::map<std::string, std::vector<Entry>> entries;
  std::vector<std::string> order;

  for (const auto& [number, text] : lines) {
    auto w = words(text);
    if (w[0] == "model") {
      if (w.size() > 2) fail_at(source, number, "expected 'model <name>'");
      if (w.size() == 2) name = w[1];
    } else if (w[0] == "algebra") {
      if (w.size() != 2) fail_at(source, number, "expected 'algebra <chain-name>'");
      try {
        chain = registry.resolve(w[1]);
      } catch (const error& e) {
        fail_at(source, number, e.what());
      }
    } else if (w[0] == "domain") {
      if (w.size() < 2) fail_at(source, number, "empty domain");
      std::vector<std::string> names(w.begin() + 1, w.end());
      for (const auto& e : names)
        if (!is_identifier(e)) fail_at(source, number, "element names must be identifiers, got '" + e + "'");
      domain = std::move(names);
    } else {
      const auto eq = std::find(w.begin(), w.end(), "=");
      if (eq == w.end() || eq == w.begin() || std::next(eq) == w.end() || std::next(eq, 2) != w.end())
        fail_at(source, number, "expected '<symbol> <args> = <value>'");
      const std::string symbol = w[0];
      if (!is_identifier(symbol)) fail_at(source, number, "bad symbol '" + symbol + "'");
      if (!entries.contains(symbol)) order.push_back(symbol);
      entries[symbol].push_back(Entry{number, std::vector<std::string>(w.begin() + 1, eq), *std::next(eq)});
    }
  }
  const std::size_t last = lines.empty() ? 0 : lines.back().number;
  if (!chain) fail_at(source, last, "missing 'algebra <chain-name>'");
  if (!domain) fail_at(source, last, "missing 'domain ...'");

  Structure s(name, chain, *domain);
  const std::size_t n = s.size();
  for (const auto& symbol : order) {
    const auto& list = entries[symbol];
    const std::size_t arity = list.front().args.size();
    const bool is_function = s.element(list.front().value).has_value();
    std::vector<int> seen(tuple_count(static_cast<int>(arity), n), 0);
    std::vector<Degree> pvalues(seen.size(), 0);
    std::vector<Element> fvalues(seen.size(), 0);
    for (const auto& e : list) {
      if (e.args.size() != arity) fail_at(source, e.line, "symbol '" + symbol + "' used with different arities");
      std::vector<Element> tuple;
      for (const auto& a : e.args) {
        auto el = s.element(a);
        if (!el) fail_at(source, e.line, "'" + a + "' is not in the domain");
        tuple.push_back(*el);
      }
      const std::size_t idx = tuple_index(tuple, n);
      if (seen[idx]++) fail_at(source, e.line, "tuple assigned twice for '" + symbol + "'");
      if (is_function) {
        auto el = s.element(e.value);
        if (!el) fail_at(source, e.line, "function '" + symbol + "' maps to '" + e.value + "', not a domain element");
        fvalues[idx] = *el;
      } else {
        const int v = to_int(source, e.line, e.value);
        if (!chain->contains(v)) fail_at(source, e.line, "value " + e.value + " outside chain " + chain->name());
        pvalues[idx] = v;
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      fail_at(source, list.back().line, "symbol '" + symbol + "' is not assigned on every tuple");
    if (is_function)
      s.set_function(symbol, static_cast<int>(arity), std::move(fvalues));
    else
      s.set_predicate(symbol, static_cast<int>(arity), std::move(pvalues));
  }
  return s;
}

inline void write_model(std::ostream& out, const Structure& s) {
  out << "model " << s.name() << "\nalgebra " << s.chain().name() << "\ndomain";
  for (const auto& e : s.domain()) out << ' ' << e;
  out << '\n';
  auto args = [&](std::span<const Element> t) {
    std::string text;
    for (Element e : t) text += " " + s.domain()[e];
    return text;
  };
  for (const auto& [name, table] : s.predicates())
    for_each_tuple(s.size(), static_cast<std::size_t>(table.arity), [&](std::span<const Element> t) {
      out << name << args(t) << " = " << table.values[tuple_index(t, s.size())] << '\n';
      return false;
    });
  for (const auto& [name, table] : s.functions())
    for_each_tuple(s.size(), static_cast<std::size_t>(table.arity), [&](std::span<const Element> t) {
      out << name << args(t) << " = " << s.domain()[table.values[tuple_index(t, s.size())]] << '\n';
      return false;
    });
}

inline Structure load_model(const std::filesystem::path& path, ChainRegistry& registry) {
  auto in = detail::open_input(path);
  return read_model(in, registry, path.string());
}

/// A list of model paths, one per line, relative to the list file.
inline ModelChain load_model_chain(const std::filesystem::path& path, ChainRegistry& registry) {
  auto in = detail::open_input(path);
  ModelChain links;
  for (const auto& line : detail::content_lines(in)) links.push_back(load_model(path.parent_path() / line.text, registry));
  if (links.empty()) throw error(errc::not_a_chain, path.string() + ": no models listed");
  return links;
}

// ---------------------------------------------------------------------------
// Formulas, tableaux, types

namespace detail {

inline Formula parse_line(const Line& line, Signature& sig, const std::string& source) {
  try {
    return parse_formula_extending(line.text, sig);
  } catch (const error& e) {
    const std::string col = e.offset() ? ":" + std::to_string(*e.offset() + 1) : "";
    throw error(e.code(), source + ":" + std::to_string(line.number) + col + ": " + e.what());
  }
}

/// Formulas grouped under section headers; formulas before any header are an error.
inline std::map<std::string, std::vector<Formula>> read_sections(std::istream& in, Signature& sig,
                                                                 const std::vector<std::string>& headers,
                                                                 const std::string& source) {
  std::map<std::string, std::vector<Formula>> out;
  for (const auto& h : headers) out[h];
  std::optional<std::string> current;
  for (const auto& line : content_lines(in)) {
    if (std::find(headers.begin(), headers.end(), line.text) != headers.end()) {
      current = line.text;
      continue;
    }
    if (!current) fail_at(source, line.number, "formula outside a section");
    out[*current].push_back(parse_line(line, sig, source));
  }
  return out;
}

}  // namespace detail

inline std::vector<Formula> read_theory(std::istream& in, Signature& sig, const std::string& source = "<theory>") {
  std::vector<Formula> out;
  for (const auto& line : detail::content_lines(in)) out.push_back(detail::parse_line(line, sig, source));
  return out;
}

inline Tableau read_tableau(std::istream& in, Signature& sig, const std::string& source = "<tableau>") {
  auto sections = detail::read_sections(in, sig, {"T:", "U:"}, source);
  return Tableau(sections["T:"], sections["U:"]);
}

inline TypePair read_type(std::istream& in, Signature& sig, const std::string& source = "<type>") {
  auto sections = detail::read_sections(in, sig, {"p:", "p':"}, source);
  TypePair t{sections["p:"], sections["p':"], {}};
  validate_type(t);
  std::set<std::string> params;
  for (const auto* side : {&t.p, &t.p_prime})
    for (const auto& f : *side) {
      Signature used;
      collect_symbols(f, used);
      for (const auto& [name, arity] : used.functions)
        if (is_parameter_name(name)) params.insert(name.substr(1));
    }
  t.parameters.assign(params.begin(), params.end());
  return t;
}

inline void write_formulas(std::ostream& out, const std::vector<Formula>& fs) {
  for (const auto& f : fs) out << f << '\n';
}

inline void write_tableau(std::ostream& out, const Tableau& t) {
  out << "T:\n";
  write_formulas(out, t.left());
  out << "U:\n";
  write_formulas(out, t.right());
}

inline void write_type(std::ostream& out, const TypePair& t) {
  out << "p:\n";
  write_formulas(out, t.p);
  out << "p':\n";
  write_formulas(out, t.p_prime);
}

inline Tableau load_tableau(const std::filesystem::path& path, Signature& sig) {
  auto in = detail::open_input(path);
  return read_tableau(in, sig, path.string());
}

inline TypePair load_type(const std::filesystem::path& path, Signature& sig) {
  auto in = detail::open_input(path);
  return read_type(in, sig, path.string());
}

inline std::vector<Formula> load_theory(const std::filesystem::path& path, Signature& sig) {
  auto in = detail::open_input(path);
  return read_theory(in, sig, path.string());
}

}  // namespace ulmt
