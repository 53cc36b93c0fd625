#pragma once

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "xcoll/cases/case.hpp"

#ifndef XCOLL_BUNDLED_CASES_DIR
#define XCOLL_BUNDLED_CASES_DIR "cases"
#endif

namespace xcoll::cases {

namespace fs = std::filesystem;

// User directory first, then the bundled one.
inline std::vector<fs::path> case_dirs(const std::string& user_dir = {}) {
  std::vector<fs::path> out;
  std::string dir = user_dir;
  if (dir.empty())
    if (const char* env = std::getenv("XCOLL_CASES_DIR")) dir = env;
  if (!dir.empty()) out.emplace_back(dir);
  fs::path bundled(XCOLL_BUNDLED_CASES_DIR);
  if (out.empty() || fs::weakly_canonical(out.front()) != fs::weakly_canonical(bundled)) out.push_back(bundled);
  return out;
}

// Case files keyed by stem; earlier directories shadow later ones.
inline std::map<std::string, fs::path> list_case_files(const std::vector<fs::path>& dirs) {
  std::map<std::string, fs::path> out;
  for (const auto& d : dirs) {
    std::error_code ec;
    if (!fs::is_directory(d, ec)) continue;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(d, ec))
      if (e.is_regular_file() && (e.path().extension() == ".yaml" || e.path().extension() == ".yml")) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.emplace(f.stem().string(), f);
  }
  return out;
}

inline fs::path resolve_case(const std::string& ref, const std::vector<fs::path>& dirs) {
  std::error_code ec;
  if (fs::is_regular_file(ref, ec)) return ref;
  auto files = list_case_files(dirs);
  if (auto it = files.find(ref); it != files.end()) return it->second;
  throw LoadError("no case '" + ref + "' in the case directories");
}

inline CaseBundle load_case(const std::string& ref, const std::string& user_dir = {}) {
  return load_case_file(resolve_case(ref, case_dirs(user_dir)));
}

}  // namespace xcoll::cases
