#include "mrm/term.hpp"

#include <algorithm>
#include <cctype>

#include "mrm/error.hpp"

namespace mrm {

namespace {

bool has_whitespace(std::string_view text) {
  return std::any_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

Term::Term(Iri iri) : value_(std::move(iri)) {
  const auto& text = std::get<Iri>(value_).text;
  if (text.empty()) throw MalformedTerm("empty IRI");
  if (has_whitespace(text)) throw MalformedTerm("IRI contains whitespace: " + text);
}

Term::Term(BlankNode node) : value_(std::move(node)) {
  const auto& label = std::get<BlankNode>(value_).label;
  if (label.empty() || has_whitespace(label)) {
    throw MalformedTerm("invalid blank node label '" + label + "'");
  }
}

std::ostream& operator<<(std::ostream& os, const Term& term) {
  switch (term.kind()) {
    case Term::Kind::Iri:
      return os << '<' << term.iri_text() << '>';
    case Term::Kind::BlankNode:
      return os << "_:" << term.blank_label();
    case Term::Kind::Literal: {
      const auto& lit = term.literal_value();
      os << '"' << lit.lexical << '"';
      if (!lit.language.empty()) os << '@' << lit.language;
      if (!lit.datatype.empty()) os << "^^<" << lit.datatype << '>';
      return os;
    }
    case Term::Kind::QtRef:
      return os << "<<#" << term.qt_id() << ">>";
  }
  return os;
}

std::ostream& operator<<(std::ostream& os, const HyperFact& fact) {
  os << '(' << fact.subject << ' ' << fact.predicate << ' ' << fact.object;
  for (const auto& q : fact.qualifiers) os << " | " << q.relation << ' ' << q.value;
  return os << ')';
}

}  // namespace mrm

std::size_t std::hash<mrm::Term>::operator()(const mrm::Term& term) const noexcept {
  std::size_t seed = static_cast<std::size_t>(term.kind()) * 0x9e3779b97f4a7c15ULL;
  auto combine = [&seed](std::size_t h) {
    seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  };
  std::hash<std::string> str_hash;
  switch (term.kind()) {
    case mrm::Term::Kind::Iri:
      combine(str_hash(term.iri_text()));
      break;
    case mrm::Term::Kind::BlankNode:
      combine(str_hash(term.blank_label()));
      break;
    case mrm::Term::Kind::Literal: {
      const auto& lit = term.literal_value();
      combine(str_hash(lit.lexical));
      combine(str_hash(lit.language));
      combine(str_hash(lit.datatype));
      break;
    }
    case mrm::Term::Kind::QtRef:
      combine(term.qt_id());
      break;
  }
  return seed;
}
