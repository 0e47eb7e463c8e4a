#include "corpusminer/xml.hpp"

#include <cctype>

#include "corpusminer/text_util.hpp"

namespace cm::xml {

std::string_view local_name(std::string_view qualified) {
  const auto colon = qualified.find(':');
  return colon == std::string_view::npos ? qualified
                                         : qualified.substr(colon + 1);
}

const Node* Node::first_child(std::string_view local) const {
  for (const auto& child : children) {
    if (local_name(child.name) == local) return &child;
  }
  return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view local) const {
  std::vector<const Node*> out;
  for (const auto& child : children) {
    if (local_name(child.name) == local) out.push_back(&child);
  }
  return out;
}

std::string Node::attribute(std::string_view name) const {
  for (const auto& [k, v] : attributes) {
    if (k == name || local_name(k) == name) return v;
  }
  return "";
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view doc) : doc_(doc) {}

  Node parse_document() {
    skip_prolog();
    Node root = parse_element();
    skip_misc();
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw XmlError(msg, pos_);
  }

  bool eof() const { return pos_ >= doc_.size(); }
  char peek() const { return doc_[pos_]; }
  bool starts_with(std::string_view s) const {
    return doc_.compare(pos_, s.size(), s) == 0;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void skip_comment_or_pi() {
    if (starts_with("<!--")) {
      const auto end = doc_.find("-->", pos_ + 4);
      if (end == std::string_view::npos) fail("unterminated comment");
      pos_ = end + 3;
    } else if (starts_with("<?")) {
      const auto end = doc_.find("?>", pos_ + 2);
      if (end == std::string_view::npos) fail("unterminated processing instruction");
      pos_ = end + 2;
    } else if (starts_with("<!DOCTYPE")) {
      const auto end = doc_.find('>', pos_);
      if (end == std::string_view::npos) fail("unterminated doctype");
      pos_ = end + 1;
    }
  }

  void skip_prolog() {
    for (;;) {
      skip_ws();
      if (eof()) fail("empty document");
      if (starts_with("<!--") || starts_with("<?") || starts_with("<!DOCTYPE")) {
        skip_comment_or_pi();
      } else {
        return;
      }
    }
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (eof()) return;
      if (starts_with("<!--") || starts_with("<?")) {
        skip_comment_or_pi();
      } else {
        fail("content after document element");
      }
    }
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == ':' ||
           c == '_' || c == '-' || c == '.';
  }

  std::string read_name() {
    const std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(doc_.substr(start, pos_ - start));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
      if (raw[i] != '&') {
        out.push_back(raw[i++]);
        continue;
      }
      const auto semi = raw.find(';', i);
      if (semi == std::string_view::npos || semi - i > 10) {
        out.push_back(raw[i++]);
        continue;
      }
      const std::string_view entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "amp") out.push_back('&');
      else if (entity == "lt") out.push_back('<');
      else if (entity == "gt") out.push_back('>');
      else if (entity == "quot") out.push_back('"');
      else if (entity == "apos") out.push_back('\'');
      else if (!entity.empty() && entity[0] == '#') {
        std::uint32_t cp = 0;
        const bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
        for (std::size_t k = hex ? 2 : 1; k < entity.size(); ++k) {
          const char c = entity[k];
          if (hex) {
            cp = cp * 16;
            if (c >= '0' && c <= '9') cp += static_cast<std::uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f') cp += static_cast<std::uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') cp += static_cast<std::uint32_t>(c - 'A' + 10);
            else { cp = 0xFFFD; break; }
          } else {
            if (c < '0' || c > '9') { cp = 0xFFFD; break; }
            cp = cp * 10 + static_cast<std::uint32_t>(c - '0');
          }
        }
        utf8_encode(cp, out);
      } else {
        // Unknown entity: keep verbatim.
        out.append(raw.substr(i, semi - i + 1));
      }
      i = semi + 1;
    }
    return out;
  }

  Node parse_element() {
    if (eof() || peek() != '<') fail("expected an element");
    ++pos_;
    Node node;
    node.name = read_name();

    // Attributes.
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag <" + node.name);
      if (peek() == '>' || starts_with("/>")) break;
      std::string attr = read_name();
      skip_ws();
      if (eof() || peek() != '=') fail("expected '=' after attribute " + attr);
      ++pos_;
      skip_ws();
      if (eof() || (peek() != '"' && peek() != '\'')) {
        fail("expected a quoted attribute value");
      }
      const char quote = peek();
      ++pos_;
      const auto end = doc_.find(quote, pos_);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      node.attributes.emplace_back(std::move(attr),
                                   decode_entities(doc_.substr(pos_, end - pos_)));
      pos_ = end + 1;
    }
    if (starts_with("/>")) {
      pos_ += 2;
      return node;
    }
    ++pos_;  // '>'

    // Content.
    for (;;) {
      if (eof()) fail("unterminated element <" + node.name + ">");
      if (starts_with("</")) {
        pos_ += 2;
        const std::string closing = read_name();
        if (closing != node.name) {
          fail("mismatched close tag </" + closing + "> for <" + node.name + ">");
        }
        skip_ws();
        if (eof() || peek() != '>') fail("malformed close tag");
        ++pos_;
        return node;
      }
      if (starts_with("<![CDATA[")) {
        const auto end = doc_.find("]]>", pos_ + 9);
        if (end == std::string_view::npos) fail("unterminated CDATA");
        node.text.append(doc_.substr(pos_ + 9, end - pos_ - 9));
        pos_ = end + 3;
        continue;
      }
      if (starts_with("<!--") || starts_with("<?")) {
        skip_comment_or_pi();
        continue;
      }
      if (peek() == '<') {
        node.children.push_back(parse_element());
        continue;
      }
      const auto next = doc_.find('<', pos_);
      const auto end = next == std::string_view::npos ? doc_.size() : next;
      node.text.append(decode_entities(doc_.substr(pos_, end - pos_)));
      pos_ = end;
    }
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
};

}  // namespace

Node parse(std::string_view document) { return Parser(document).parse_document(); }

}  // namespace cm::xml
