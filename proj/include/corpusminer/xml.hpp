#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cm::xml {

struct XmlError : std::runtime_error {
  explicit XmlError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (byte " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
  std::size_t byte_offset;
};

/// Element node of a small non-validating XML parser: enough for Atom
/// feeds (nesting, attributes, text, CDATA, comments, entities).
/// Namespace prefixes stay in `name`; match via local_name().
struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::string text;  // concatenated character data of this element

  const Node* first_child(std::string_view local) const;
  std::vector<const Node*> children_named(std::string_view local) const;
  std::string attribute(std::string_view name) const;
};

std::string_view local_name(std::string_view qualified);

/// Parses a complete document and returns its root element.
Node parse(std::string_view document);

}  // namespace cm::xml
