// SPDX-License-Identifier: Apache-2.0
#include "dspt5/runconfig.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "dspt5/sha256.hpp"

namespace dspt5::cli {

namespace fs = std::filesystem;

std::string config_hash(const nlohmann::json& resolved) {
  return util::sha256_hex(resolved.dump());
}

nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overrides) {
  for (const auto& [key, value] : overrides.items()) base[key] = value;
  return base;
}

void dump_resolved_config(const std::string& dir, const std::string& subcommand,
                          nlohmann::json resolved) {
  fs::create_directories(dir);
  resolved["subcommand"] = subcommand;
  resolved["resolved_config_hash"] = config_hash(resolved);
  std::ofstream out(fs::path(dir) / "config.json", std::ios::binary);
  out << resolved.dump(2) << "\n";
}

RunDirLock::RunDirLock(const std::string& dir) {
  fs::create_directories(dir);
  lock_path_ = (fs::path(dir) / ".lock").string();
  const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw std::runtime_error("run directory is locked by another run: " + dir +
                             " (remove " + lock_path_ + " if stale)");
  }
  ::close(fd);
}

RunDirLock::~RunDirLock() { ::unlink(lock_path_.c_str()); }

}  // namespace dspt5::cli
