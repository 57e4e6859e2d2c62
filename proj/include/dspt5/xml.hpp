// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dspt5::xml {

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};

/// One element of a parsed document. `text` collects the element's direct
/// character data (entity-decoded, CDATA included). `src_begin`/`src_end`
/// delimit the element's byte span in the original input so callers can
/// slice raw XML back out.
struct Element {
  std::string name;  // qualified name as written, e.g. "dc:title"
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
  std::size_t src_begin = 0;
  std::size_t src_end = 0;

  std::string_view local_name() const;
  const std::string* attribute(std::string_view name) const;

  /// First descendant-or-self element whose local name matches; nullptr if none.
  const Element* find(std::string_view local) const;
  /// All descendant elements (document order) whose local name matches.
  std::vector<const Element*> find_all(std::string_view local) const;
};

/// Parse a standalone document (prolog, comments, CDATA and character
/// references are handled; DTDs and namespaces-as-URIs are not resolved).
/// Returns the root element.
Element parse(std::string_view doc);

std::string decode_entities(std::string_view s);

}  // namespace dspt5::xml
