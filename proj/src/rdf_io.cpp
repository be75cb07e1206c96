#include "mrm/rdf_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mrm/convert.hpp"
#include "mrm/error.hpp"
#include "mrm/vocab.hpp"

namespace mrm {

// --- prefixes ---------------------------------------------------------------

PrefixTable PrefixTable::standard() {
  PrefixTable table;
  table.add("rdf", std::string(vocab::kRdf));
  table.add("rdfs", std::string(vocab::kRdfs));
  table.add("xsd", std::string(vocab::kXsd));
  table.add("wd", std::string(vocab::kWd));
  table.add("kgc", std::string(vocab::kKgc));
  table.add("", std::string(vocab::kSp));
  return table;
}

void PrefixTable::add(std::string prefix, std::string ns) {
  auto it = table_.find(prefix);
  if (it != table_.end() && it->second != ns) {
    throw ConfigError("prefix '" + prefix + "' already bound to <" + it->second + ">");
  }
  table_[std::move(prefix)] = std::move(ns);
}

std::optional<std::string> PrefixTable::lookup(std::string_view prefix) const {
  if (auto it = table_.find(std::string(prefix)); it != table_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::string> PrefixTable::expand(std::string_view prefixed) const {
  auto colon = prefixed.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto ns = lookup(prefixed.substr(0, colon));
  if (!ns) return std::nullopt;
  return *ns + std::string(prefixed.substr(colon + 1));
}

std::optional<std::string> PrefixTable::compact(std::string_view iri) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : table_) {
    const auto& ns = entry.second;
    if (ns.empty() || iri.size() <= ns.size() || iri.substr(0, ns.size()) != ns) continue;
    if (!valid_local_name(iri.substr(ns.size()))) continue;
    if (best == nullptr || ns.size() > best->second.size()) best = &entry;
  }
  if (best == nullptr) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

namespace {

bool is_local_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == '#' || c == '%' ||
         c == ':' || c >= 0x80;
}

bool is_prefix_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c >= 0x80;
}

}  // namespace

bool valid_local_name(std::string_view local) {
  if (local.empty()) return false;
  if (local.front() == '-' || local.front() == '.' || local.back() == '.') return false;
  for (unsigned char c : local) {
    if (!is_local_char(c)) return false;
  }
  return true;
}

// --- WD50K ------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Term wd50k_term(std::string_view token, std::string_view ns) {
  if (ns.empty() || token.find("://") != std::string_view::npos) return Term::iri(std::string(token));
  return Term::iri(std::string(ns) + std::string(token));
}

std::string wd50k_token(const Term& term, std::string_view ns) {
  switch (term.kind()) {
    case Term::Kind::Iri: {
      const auto& text = term.iri_text();
      if (!ns.empty() && text.size() > ns.size() && text.compare(0, ns.size(), ns) == 0) {
        return text.substr(ns.size());
      }
      return text;
    }
    case Term::Kind::BlankNode:
      return "_:" + term.blank_label();
    default:
      throw UnsupportedShape("WD50K rows hold only IRIs and blank nodes");
  }
}

}  // namespace

HyperFact parse_wd50k_row(std::string_view line, std::size_t line_number, std::string_view ns) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos
                                                                             : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() < 3) throw MalformedRow("expected at least s,p,o", line_number);
  if ((fields.size() - 3) % 2 != 0) {
    throw MalformedRow("qualifier relation without a value", line_number);
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].empty()) {
      throw MalformedRow("empty field " + std::to_string(i + 1), line_number);
    }
  }
  try {
    HyperFact fact{wd50k_term(fields[0], ns), wd50k_term(fields[1], ns), wd50k_term(fields[2], ns),
                   {}};
    for (std::size_t i = 3; i < fields.size(); i += 2) {
      fact.qualifiers.push_back({wd50k_term(fields[i], ns), wd50k_term(fields[i + 1], ns)});
    }
    return fact;
  } catch (const MalformedTerm& e) {
    throw MalformedRow(e.what(), line_number);
  }
}

std::string format_wd50k_row(const HyperFact& fact, std::string_view ns) {
  std::string out = wd50k_token(fact.subject, ns) + "," + wd50k_token(fact.predicate, ns) + "," +
                    wd50k_token(fact.object, ns);
  for (const auto& q : fact.qualifiers) {
    out += "," + wd50k_token(q.relation, ns) + "," + wd50k_token(q.value, ns);
  }
  return out;
}

std::vector<HyperFact> read_wd50k(std::istream& in, const Wd50kReadOptions& options) {
  std::vector<HyperFact> facts;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    auto fact = parse_wd50k_row(line, line_number, options.ns);
    if (options.hyper_relational_only && fact.qualifiers.empty()) continue;
    facts.push_back(std::move(fact));
  }
  return facts;
}

std::vector<HyperFact> read_wd50k_file(const std::string& path, const Wd50kReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_wd50k(in, options);
}

// --- Turtle-star parser -----------------------------------------------------

namespace {

class TurtleStarParser {
 public:
  TurtleStarParser(std::string_view text, Graph& graph, PrefixTable& prefixes)
      : text_(text), graph_(graph), prefixes_(prefixes) {}

  void parse_document() {
    while (true) {
      skip_ws();
      if (eof()) return;
      if (starts_with("@prefix")) {
        pos_ += 7;
        parse_prefix_directive(true);
      } else if (starts_with_keyword("PREFIX")) {
        pos_ += 6;
        parse_prefix_directive(false);
      } else if (starts_with("@base") || starts_with_keyword("BASE")) {
        fail("base directives are not supported");
      } else {
        parse_statement();
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t at) const {
    throw ParseError(message, at);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
  bool starts_with_keyword(std::string_view kw) const {
    if (text_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i]) return false;
    }
    return std::isspace(static_cast<unsigned char>(peek(kw.size()))) != 0;
  }

  void skip_ws() {
    while (!eof()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (!eof() && text_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void parse_prefix_directive(bool needs_dot) {
    skip_ws();
    std::size_t start = pos_;
    while (!eof() && is_prefix_char(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() != ':') fail("expected prefix name followed by ':'");
    std::string prefix(text_.substr(start, pos_ - start));
    ++pos_;
    skip_ws();
    if (peek() != '<') fail("expected namespace IRI");
    std::string ns = parse_iriref();
    prefixes_.set(std::move(prefix), std::move(ns));
    if (needs_dot) expect('.');
  }

  void parse_statement() {
    TermId subject = parse_subject();
    parse_predicate_object_list(subject);
    expect('.');
  }

  void parse_predicate_object_list(TermId subject) {
    while (true) {
      skip_ws();
      TermId predicate = parse_verb();
      while (true) {
        skip_ws();
        TermId object = parse_object();
        graph_.add(IdTriple{subject, predicate, object});
        skip_ws();
        if (peek() != ',') break;
        ++pos_;
      }
      skip_ws();
      if (peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skip_ws();
      }
      if (eof() || peek() == '.') return;
    }
  }

  TermId parse_subject() {
    skip_ws();
    std::size_t at = pos_;
    if (starts_with("<<")) return parse_quoted();
    char c = peek();
    if (c == '"' || c == '\'') fail_at("literal in subject position", at);
    if (c == '[' || c == '(') fail_at("anonymous nodes and collections are not supported", at);
    return parse_resource();
  }

  TermId parse_verb() {
    skip_ws();
    if (peek() == 'a') {
      char next = peek(1);
      if (std::isspace(static_cast<unsigned char>(next)) || next == '<' || next == '"') {
        ++pos_;
        return graph_.intern(Term::iri(std::string(vocab::kRdfType)));
      }
    }
    std::size_t at = pos_;
    if (starts_with("<<") || starts_with("_:") || peek() == '"' || peek() == '\'') {
      fail_at("predicate must be an IRI", at);
    }
    return parse_resource();
  }

  TermId parse_object() {
    skip_ws();
    std::size_t at = pos_;
    if (starts_with("<<")) return parse_quoted();
    char c = peek();
    if (c == '"' || c == '\'') return graph_.intern(parse_literal());
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') {
      fail_at("numeric literal shorthand is not supported", at);
    }
    if (c == '[' || c == '(') fail_at("anonymous nodes and collections are not supported", at);
    if (starts_with("true") || starts_with("false")) {
      auto after = peek(c == 't' ? 4 : 5);
      if (!is_local_char(static_cast<unsigned char>(after)) || after == '.') {
        fail_at("boolean literal shorthand is not supported", at);
      }
    }
    return parse_resource();
  }

  TermId parse_quoted() {
    std::size_t at = pos_;
    pos_ += 2;
    TermId s = parse_subject();
    TermId p = parse_verb();
    TermId o = parse_object();
    skip_ws();
    if (!starts_with(">>")) fail_at("unbalanced '<<' (missing '>>')", at);
    pos_ += 2;
    QtId id = graph_.intern_qt(s, p, o);
    return graph_.quoted(id).self;
  }

  // IRI reference, prefixed name, or blank node.
  TermId parse_resource() {
    skip_ws();
    std::size_t at = pos_;
    if (eof()) fail("unexpected end of input");
    if (starts_with(">>")) fail_at("unbalanced '>>'", at);
    if (peek() == '<') return graph_.intern(Term::iri(parse_iriref()));
    if (starts_with("_:")) {
      pos_ += 2;
      std::size_t start = pos_;
      while (!eof() && is_prefix_char(static_cast<unsigned char>(peek()))) ++pos_;
      while (pos_ > start && text_[pos_ - 1] == '.') --pos_;
      if (pos_ == start) fail_at("empty blank node label", at);
      return graph_.intern(Term::blank(std::string(text_.substr(start, pos_ - start))));
    }
    return graph_.intern(Term::iri(parse_prefixed_name()));
  }

  std::string parse_iriref() {
    std::size_t at = pos_;
    ++pos_;
    std::size_t start = pos_;
    while (!eof() && peek() != '>') {
      if (std::isspace(static_cast<unsigned char>(peek()))) fail("whitespace inside IRI");
      ++pos_;
    }
    if (eof()) fail_at("unterminated IRI", at);
    std::string iri(text_.substr(start, pos_ - start));
    ++pos_;
    if (iri.empty()) fail_at("empty IRI", at);
    return iri;
  }

  std::string parse_prefixed_name() {
    std::size_t at = pos_;
    while (!eof() && is_prefix_char(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() != ':') {
      pos_ = at;
      fail_at("expected IRI, prefixed name, or blank node", at);
    }
    std::string_view prefix = text_.substr(at, pos_ - at);
    ++pos_;
    std::size_t local_start = pos_;
    while (!eof() && is_local_char(static_cast<unsigned char>(peek()))) ++pos_;
    while (pos_ > local_start && text_[pos_ - 1] == '.') --pos_;
    auto ns = prefixes_.lookup(prefix);
    if (!ns) fail_at("unknown prefix '" + std::string(prefix) + "'", at);
    std::string iri = *ns + std::string(text_.substr(local_start, pos_ - local_start));
    if (iri.empty()) fail_at("empty IRI", at);
    return iri;
  }

  Term parse_literal() {
    std::size_t at = pos_;
    char quote = peek();
    bool long_form = peek(1) == quote && peek(2) == quote;
    pos_ += long_form ? 3 : 1;
    std::string lexical;
    while (true) {
      if (eof()) fail_at("unterminated string literal", at);
      char c = text_[pos_];
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          pos_ += 3;
          break;
        }
      } else if (c == quote) {
        ++pos_;
        break;
      } else if (c == '\n' || c == '\r') {
        fail("line break inside short string literal");
      }
      if (c == '\\') {
        lexical += parse_escape();
        continue;
      }
      lexical += c;
      ++pos_;
    }
    std::string language;
    std::string datatype;
    if (peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++pos_;
      if (pos_ == start) fail("empty language tag");
      language = std::string(text_.substr(start, pos_ - start));
    } else if (starts_with("^^")) {
      pos_ += 2;
      if (peek() == '<') {
        datatype = parse_iriref();
      } else {
        datatype = parse_prefixed_name();
      }
    }
    return Term::literal(std::move(lexical), std::move(language), std::move(datatype));
  }

  std::string parse_escape() {
    std::size_t at = pos_;
    ++pos_;
    char c = peek();
    ++pos_;
    switch (c) {
      case 't': return "\t";
      case 'b': return "\b";
      case 'n': return "\n";
      case 'r': return "\r";
      case 'f': return "\f";
      case '"': return "\"";
      case '\'': return "'";
      case '\\': return "\\";
      case 'u':
      case 'U': {
        std::size_t digits = c == 'u' ? 4 : 8;
        if (pos_ + digits > text_.size()) fail_at("truncated unicode escape", at);
        std::uint32_t cp = 0;
        for (std::size_t i = 0; i < digits; ++i) {
          char h = text_[pos_ + i];
          if (!std::isxdigit(static_cast<unsigned char>(h))) fail_at("bad unicode escape", at);
          cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                        ? h - '0'
                                                        : std::tolower(h) - 'a' + 10);
        }
        pos_ += digits;
        return encode_utf8(cp);
      }
      default:
        fail_at("unknown escape sequence", at);
    }
  }

  static std::string encode_utf8(std::uint32_t cp) {
    std::string out;
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Graph& graph_;
  PrefixTable& prefixes_;
};

}  // namespace

void parse_turtle_star(std::string_view text, Graph& graph, PrefixTable& prefixes) {
  TurtleStarParser parser(text, graph, prefixes);
  try {
    parser.parse_document();
  } catch (const ParseError&) {
    throw;
  } catch (const MalformedTerm& e) {
    throw ParseError(e.what(), 0);
  }
}

Graph parse_turtle_star(std::string_view text, PrefixTable prefixes) {
  Graph graph;
  parse_turtle_star(text, graph, prefixes);
  return graph;
}

Graph read_turtle_file(const std::string& path, PrefixTable prefixes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_turtle_star(buffer.str(), std::move(prefixes));
}

// --- serialization ----------------------------------------------------------

std::optional<RdfFormat> parse_rdf_format(std::string_view name) {
  if (name == "turtle" || name == "ttl") return RdfFormat::Turtle;
  if (name == "turtle-star" || name == "ttls") return RdfFormat::TurtleStar;
  if (name == "ntriples-star" || name == "nt" || name == "nts") return RdfFormat::NTriplesStar;
  if (name == "wd50k-csv" || name == "csv") return RdfFormat::Wd50kCsv;
  return std::nullopt;
}

std::string_view to_string(RdfFormat format) {
  switch (format) {
    case RdfFormat::Turtle: return "turtle";
    case RdfFormat::TurtleStar: return "turtle-star";
    case RdfFormat::NTriplesStar: return "ntriples-star";
    case RdfFormat::Wd50kCsv: return "wd50k-csv";
  }
  return "?";
}

namespace {

std::string turtle_term(const Graph& graph, TermId id, const PrefixTable& prefixes) {
  const Term& term = graph.term(id);
  switch (term.kind()) {
    case Term::Kind::Iri: {
      if (auto compact = prefixes.compact(term.iri_text())) return *compact;
      return "<" + term.iri_text() + ">";
    }
    case Term::Kind::QtRef: {
      const auto& q = graph.quoted(term.qt_id());
      return "<< " + turtle_term(graph, q.subject, prefixes) + " " +
             turtle_term(graph, q.predicate, prefixes) + " " +
             turtle_term(graph, q.object, prefixes) + " >>";
    }
    default:
      return ntriples_term(graph, id);
  }
}

std::string serialize_turtle(const Graph& graph, const PrefixTable& prefixes) {
  std::string out;
  if (graph.empty()) return out;
  for (const auto& [prefix, ns] : prefixes.entries()) {
    out += "@prefix " + prefix + ": <" + ns + "> .\n";
  }
  if (!prefixes.empty()) out += "\n";
  std::vector<char> done(graph.term_count(), 0);
  for (const auto& t : graph.triples()) {
    if (done[t.subject]) continue;
    done[t.subject] = 1;
    out += turtle_term(graph, t.subject, prefixes);
    auto positions = graph.with_subject(t.subject);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const auto& u = graph.triples()[positions[i]];
      out += i == 0 ? " " : " ;\n    ";
      out += turtle_term(graph, u.predicate, prefixes) + " " +
             turtle_term(graph, u.object, prefixes);
    }
    out += " .\n";
  }
  return out;
}

}  // namespace

std::string serialize_triples(const Graph& graph, std::span<const IdTriple> triples) {
  std::string out;
  for (const auto& t : triples) {
    out += ntriples_term(graph, t.subject) + " " + ntriples_term(graph, t.predicate) + " " +
           ntriples_term(graph, t.object) + " .\n";
  }
  return out;
}

std::string serialize(const Graph& graph, RdfFormat format, const PrefixTable& prefixes,
                      std::string_view wd50k_ns) {
  switch (format) {
    case RdfFormat::NTriplesStar:
      return serialize_triples(graph, graph.triples());
    case RdfFormat::TurtleStar:
      return serialize_turtle(graph, prefixes);
    case RdfFormat::Turtle:
      if (graph.qt_count() > 0) {
        throw UnsupportedShape("plain Turtle cannot carry quoted triples; use turtle-star");
      }
      return serialize_turtle(graph, prefixes);
    case RdfFormat::Wd50kCsv: {
      for (std::size_t i = 0; i < graph.qt_count(); ++i) {
        const auto& q = graph.quoted(static_cast<QtId>(i));
        if (graph.term(q.subject).is_qt() || graph.term(q.object).is_qt()) {
          throw UnsupportedShape("nested quoted triples have no WD50K row form");
        }
      }
      std::string out;
      for (const auto& fact : extract_hyperfacts(graph, Mrm::Rdr)) {
        out += format_wd50k_row(fact, wd50k_ns) + "\n";
      }
      return out;
    }
  }
  return {};
}

}  // namespace mrm
