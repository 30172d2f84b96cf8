#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

// Locations of the repo's data fixtures, injected by the build.

inline std::string data_path(const std::string& name) {
  return std::string(PACCP_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline bool file_exists(const std::string& path) {
  return std::ifstream(path).good();
}
