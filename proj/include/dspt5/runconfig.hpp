// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "json.hpp"

namespace dspt5::cli {

/// Hash of the canonical (sorted-key) dump of a resolved config; changes
/// iff any setting changes.
std::string config_hash(const nlohmann::json& resolved);

/// Overlay `overrides` onto `base` (shallow, by key).
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overrides);

/// Write config.json (resolved settings + their hash) into a run directory.
void dump_resolved_config(const std::string& dir, const std::string& subcommand,
                          nlohmann::json resolved);

/// Exclusive advisory lock on a run directory (lockfile created O_EXCL,
/// removed on destruction). Refuses directories locked by another run.
class RunDirLock {
 public:
  explicit RunDirLock(const std::string& dir);
  ~RunDirLock();
  RunDirLock(const RunDirLock&) = delete;
  RunDirLock& operator=(const RunDirLock&) = delete;

 private:
  std::string lock_path_;
};

int run(int argc, const char* const* argv);

}  // namespace dspt5::cli
