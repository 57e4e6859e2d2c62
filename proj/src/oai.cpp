// SPDX-License-Identifier: Apache-2.0
#include "dspt5/oai.hpp"

#include <chrono>
#include <thread>

#include "dspt5/xml.hpp"
#include "httplib.h"

namespace dspt5::oai {
namespace {

std::string url_encode(const std::string& value) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : value) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    }
  }
  return out;
}

// Split an absolute URL into (scheme://host[:port], path).
std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TransportError("not an absolute URL: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpGet default_http_get() {
  return [](const std::string& url) -> std::string {
    const auto [origin, path] = split_url(url);
    httplib::Client client(origin);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    client.set_follow_location(true);
    httplib::Result res = client.Get(path);
    if (!res) throw TransportError("request failed: " + url + " (" + httplib::to_string(res.error()) + ")");
    if (res->status < 200 || res->status >= 300)
      throw TransportError("HTTP " + std::to_string(res->status) + " for " + url);
    return res->body;
  };
}

std::string initial_url(const std::string& endpoint, const HarvestOptions& options) {
  std::string url = endpoint + (endpoint.find('?') == std::string::npos ? "?" : "&");
  url += "verb=ListRecords&metadataPrefix=" + url_encode(options.metadata_prefix);
  if (options.set_spec) url += "&set=" + url_encode(*options.set_spec);
  return url;
}

std::string resumption_url(const std::string& endpoint, const std::string& token) {
  std::string url = endpoint + (endpoint.find('?') == std::string::npos ? "?" : "&");
  url += "verb=ListRecords&resumptionToken=" + url_encode(token);
  return url;
}

Page parse_list_records_page(const std::string& body) {
  xml::Element root;
  try {
    root = xml::parse(body);
  } catch (const xml::ParseError& e) {
    throw ProtocolError(std::string("unparseable OAI-PMH response: ") + e.what());
  }

  if (const xml::Element* error = root.find("error")) {
    const std::string* code = error->attribute("code");
    if (code && *code == "noRecordsMatch") return {};
    throw ProtocolError("OAI-PMH error" + (code ? " [" + *code + "]" : "") + ": " + error->text);
  }

  const xml::Element* list = root.find("ListRecords");
  if (!list) throw ProtocolError("response has no ListRecords element");

  Page page;
  for (const xml::Element& child : list->children) {
    if (child.local_name() == "record") {
      page.records.push_back(std::string(
          std::string_view(body).substr(child.src_begin, child.src_end - child.src_begin)));
    } else if (child.local_name() == "resumptionToken") {
      std::string token = child.text;
      // Trim whitespace; an empty token closes the list.
      while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front())))
        token.erase(token.begin());
      while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.pop_back();
      if (!token.empty()) page.resumption_token = token;
    }
  }
  return page;
}

std::size_t harvest(const std::string& endpoint, const HarvestOptions& options,
                    const std::function<void(const std::string&)>& sink, const HttpGet& http_get) {
  const auto fetch_with_retries = [&](const std::string& url) -> std::string {
    int attempt = 0;
    for (;;) {
      try {
        return http_get(url);
      } catch (const TransportError&) {
        if (attempt >= options.max_retries) throw;
        const int backoff_ms = options.retry_base_ms * (1 << attempt);
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        ++attempt;
      }
    }
  };

  std::size_t total = 0;
  std::string url = initial_url(endpoint, options);
  bool first = true;
  for (;;) {
    if (!first && options.min_delay_ms > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(options.min_delay_ms));
    first = false;

    const Page page = parse_list_records_page(fetch_with_retries(url));
    for (const std::string& record : page.records) {
      sink(record);
      ++total;
    }
    if (!page.resumption_token) break;
    url = resumption_url(endpoint, *page.resumption_token);
  }
  return total;
}

}  // namespace dspt5::oai
