// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dspt5::oai {

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HarvestOptions {
  std::string metadata_prefix = "dim";
  std::optional<std::string> set_spec;
  int min_delay_ms = 0;   // pacing between requests
  int max_retries = 3;    // transport errors, exponential backoff
  int retry_base_ms = 250;
};

/// Pluggable HTTP GET: returns the body for a URL, or throws TransportError.
/// The default implementation uses cpp-httplib.
using HttpGet = std::function<std::string(const std::string& url)>;
HttpGet default_http_get();

/// One ListRecords page already split into raw <record> XML slices.
struct Page {
  std::vector<std::string> records;
  std::optional<std::string> resumption_token;
};

/// Parse a ListRecords response body. OAI error code "noRecordsMatch" yields
/// an empty page; other error codes raise ProtocolError.
Page parse_list_records_page(const std::string& body);

/// Harvest every record by following resumptionToken until exhausted,
/// invoking `sink` once per raw record element, in order. Returns the total
/// record count. The request sequencing is inherently serial.
std::size_t harvest(const std::string& endpoint, const HarvestOptions& options,
                    const std::function<void(const std::string& record_xml)>& sink,
                    const HttpGet& http_get = default_http_get());

/// Request URL construction (verb/metadataPrefix always present on the
/// first request; follow-ups carry verb + resumptionToken only).
std::string initial_url(const std::string& endpoint, const HarvestOptions& options);
std::string resumption_url(const std::string& endpoint, const std::string& token);

}  // namespace dspt5::oai
