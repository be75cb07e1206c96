#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mrm {

using QtId = std::uint32_t;

struct Iri {
  std::string text;
  auto operator<=>(const Iri&) const = default;
};

struct BlankNode {
  std::string label;
  auto operator<=>(const BlankNode&) const = default;
};

// Plain, language-tagged, or typed literal. Compared by all three fields;
// no datatype normalization is attempted.
struct Literal {
  std::string lexical;
  std::string language;
  std::string datatype;
  auto operator<=>(const Literal&) const = default;
};

// Reference to an entry of the owning Graph's quoted-triple table.
struct QtRef {
  QtId id = 0;
  auto operator<=>(const QtRef&) const = default;
};

// A node or edge label. Iri text must be non-empty and free of whitespace.
class Term {
 public:
  enum class Kind : std::uint8_t { Iri, BlankNode, Literal, QtRef };

  Term() : value_(Iri{"urn:mrm:nil"}) {}
  Term(Iri iri);
  Term(BlankNode node);
  Term(Literal literal) : value_(std::move(literal)) {}
  Term(QtRef ref) : value_(ref) {}

  static Term iri(std::string text) { return Term(Iri{std::move(text)}); }
  static Term blank(std::string label) { return Term(BlankNode{std::move(label)}); }
  static Term literal(std::string lexical, std::string language = {},
                      std::string datatype = {}) {
    return Term(Literal{std::move(lexical), std::move(language), std::move(datatype)});
  }
  static Term qt(QtId id) { return Term(QtRef{id}); }

  Kind kind() const { return static_cast<Kind>(value_.index()); }
  bool is_iri() const { return kind() == Kind::Iri; }
  bool is_blank() const { return kind() == Kind::BlankNode; }
  bool is_literal() const { return kind() == Kind::Literal; }
  bool is_qt() const { return kind() == Kind::QtRef; }

  const std::string& iri_text() const { return std::get<Iri>(value_).text; }
  const std::string& blank_label() const { return std::get<BlankNode>(value_).label; }
  const Literal& literal_value() const { return std::get<Literal>(value_); }
  QtId qt_id() const { return std::get<QtRef>(value_).id; }

  const auto& variant() const { return value_; }

  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;

 private:
  std::variant<Iri, BlankNode, Literal, QtRef> value_;
};

// Debug rendering; quoted triples print as their table id.
std::ostream& operator<<(std::ostream& os, const Term& term);

// Wikidata-style statement: (s, p, o) plus ordered qualifier pairs.
struct Qualifier {
  Term relation;
  Term value;
  bool operator==(const Qualifier&) const = default;
  auto operator<=>(const Qualifier&) const = default;
};

struct HyperFact {
  Term subject;
  Term predicate;
  Term object;
  std::vector<Qualifier> qualifiers;
  bool operator==(const HyperFact&) const = default;
  auto operator<=>(const HyperFact&) const = default;
};

std::ostream& operator<<(std::ostream& os, const HyperFact& fact);

}  // namespace mrm

template <>
struct std::hash<mrm::Term> {
  std::size_t operator()(const mrm::Term& term) const noexcept;
};
