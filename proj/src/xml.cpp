// SPDX-License-Identifier: Apache-2.0
#include "dspt5/xml.hpp"

#include <cctype>

namespace dspt5::xml {
namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '_' || c == '-' || c == '.';
}

class Parser {
 public:
  explicit Parser(std::string_view doc) : doc_(doc) {}

  Element parse_document() {
    skip_misc();
    if (pos_ >= doc_.size() || doc_[pos_] != '<') fail("expected root element");
    Element root = parse_element();
    skip_misc();
    if (pos_ < doc_.size()) fail("trailing content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < doc_.size() ? doc_[pos_ + ahead] : '\0';
  }

  bool starts_with(std::string_view prefix) const {
    return doc_.compare(pos_, prefix.size(), prefix) == 0;
  }

  void skip_whitespace() {
    while (pos_ < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[pos_]))) ++pos_;
  }

  void skip_until(std::string_view terminator, const char* what) {
    const std::size_t found = doc_.find(terminator, pos_);
    if (found == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = found + terminator.size();
  }

  // Whitespace, comments, PIs and DOCTYPE between elements.
  void skip_misc() {
    for (;;) {
      skip_whitespace();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!")) {
        skip_until(">", "declaration");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    const std::size_t start = pos_;
    while (pos_ < doc_.size() && is_name_char(doc_[pos_])) ++pos_;
    if (pos_ == start) fail("expected name");
    return std::string(doc_.substr(start, pos_ - start));
  }

  std::string parse_attribute_value() {
    const char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
    ++pos_;
    const std::size_t start = pos_;
    while (pos_ < doc_.size() && doc_[pos_] != quote) ++pos_;
    if (pos_ >= doc_.size()) fail("unterminated attribute value");
    std::string value = decode_entities(doc_.substr(start, pos_ - start));
    ++pos_;
    return value;
  }

  Element parse_element() {
    Element el;
    el.src_begin = pos_;
    ++pos_;  // consume '<'
    el.name = parse_name();

    for (;;) {
      skip_whitespace();
      const char c = peek();
      if (c == '>' || c == '/') break;
      if (c == '\0') fail("unterminated start tag");
      std::string attr_name = parse_name();
      skip_whitespace();
      if (peek() != '=') fail("expected '=' in attribute");
      ++pos_;
      skip_whitespace();
      el.attributes.emplace_back(std::move(attr_name), parse_attribute_value());
    }

    if (peek() == '/') {
      if (peek(1) != '>') fail("malformed self-closing tag");
      pos_ += 2;
      el.src_end = pos_;
      return el;
    }
    ++pos_;  // consume '>'

    for (;;) {
      if (pos_ >= doc_.size()) fail("unterminated element <" + el.name + ">");
      if (doc_[pos_] == '<') {
        if (starts_with("</")) {
          pos_ += 2;
          const std::string closing = parse_name();
          if (closing != el.name) fail("mismatched closing tag </" + closing + "> for <" + el.name + ">");
          skip_whitespace();
          if (peek() != '>') fail("malformed closing tag");
          ++pos_;
          el.src_end = pos_;
          return el;
        }
        if (starts_with("<!--")) {
          skip_until("-->", "comment");
        } else if (starts_with("<![CDATA[")) {
          pos_ += 9;
          const std::size_t end = doc_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA section");
          el.text.append(doc_.substr(pos_, end - pos_));
          pos_ = end + 3;
        } else if (starts_with("<?")) {
          skip_until("?>", "processing instruction");
        } else {
          el.children.push_back(parse_element());
        }
      } else {
        const std::size_t start = pos_;
        while (pos_ < doc_.size() && doc_[pos_] != '<') ++pos_;
        el.text.append(decode_entities(doc_.substr(start, pos_ - start)));
      }
    }
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
};

void collect(const Element& el, std::string_view local, std::vector<const Element*>& out) {
  for (const Element& child : el.children) {
    if (child.local_name() == local) out.push_back(&child);
    collect(child, local, out);
  }
}

}  // namespace

std::string_view Element::local_name() const {
  const std::size_t colon = name.rfind(':');
  return colon == std::string::npos ? std::string_view(name)
                                    : std::string_view(name).substr(colon + 1);
}

const std::string* Element::attribute(std::string_view attr_name) const {
  for (const auto& [key, value] : attributes) {
    if (key == attr_name) return &value;
  }
  return nullptr;
}

const Element* Element::find(std::string_view local) const {
  if (local_name() == local) return this;
  for (const Element& child : children) {
    if (const Element* hit = child.find(local)) return hit;
  }
  return nullptr;
}

std::vector<const Element*> Element::find_all(std::string_view local) const {
  std::vector<const Element*> out;
  collect(*this, local, out);
  return out;
}

Element parse(std::string_view doc) { return Parser(doc).parse_document(); }

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view entity = s.substr(i + 1, semi - i - 1);
    if (entity == "amp") {
      out.push_back('&');
    } else if (entity == "lt") {
      out.push_back('<');
    } else if (entity == "gt") {
      out.push_back('>');
    } else if (entity == "quot") {
      out.push_back('"');
    } else if (entity == "apos") {
      out.push_back('\'');
    } else if (!entity.empty() && entity[0] == '#') {
      unsigned long code = 0;
      try {
        code = (entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X'))
                   ? std::stoul(std::string(entity.substr(2)), nullptr, 16)
                   : std::stoul(std::string(entity.substr(1)), nullptr, 10);
      } catch (const std::exception&) {
        out.push_back(s[i++]);
        continue;
      }
      // UTF-8 encode the code point.
      if (code < 0x80) {
        out.push_back(static_cast<char>(code));
      } else if (code < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (code >> 6)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
      } else if (code < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (code >> 12)));
        out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
      } else {
        out.push_back(static_cast<char>(0xF0 | (code >> 18)));
        out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
      }
    } else {
      out.push_back(s[i]);
      ++i;
      continue;
    }
    i = semi + 1;
  }
  return out;
}

}  // namespace dspt5::xml
