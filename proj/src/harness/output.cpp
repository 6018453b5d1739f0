#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "kpzlab/error.hpp"
#include "kpzlab/harness.hpp"

#ifndef KPZ_GIT_DESCRIBE
#define KPZ_GIT_DESCRIBE "unknown"
#endif

namespace kpz::harness {

namespace fs = std::filesystem;

const char* git_describe() noexcept { return KPZ_GIT_DESCRIBE; }

namespace {

std::string write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, Errc::io, "cannot create " + dir + ": " + ec.message());
  const fs::path path = fs::path(dir) / name;
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), Errc::io, "cannot open " + path.string());
  os << content;
  require(static_cast<bool>(os), Errc::io, "write failed for " + path.string());
  return path.string();
}

}  // namespace

std::string Output::csv(const std::string& name, const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows) const {
  if (!enabled()) return {};
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return write_file(dir_, name, os.str());
}

std::string Output::manifest(const std::string& name, json body) const {
  if (!enabled()) return {};
  body["build"] = git_describe();
  return write_file(dir_, name + ".json", body.dump(2) + "\n");
}

std::string Output::text(const std::string& name, const std::string& content) const {
  if (!enabled()) return {};
  return write_file(dir_, name, content);
}

}  // namespace kpz::harness
