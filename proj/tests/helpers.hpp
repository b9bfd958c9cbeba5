#pragma once

// Small test-side utilities: scratch directories, file IO, and a runner for
// the installed command-line binary.

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

inline std::filesystem::path unique_temp_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const std::filesystem::path base = std::filesystem::temp_directory_path();
  const std::filesystem::path dir =
      base / ("csei_" + tag + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) : path(unique_temp_dir(tag)) {}
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string str() const { return path.string(); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

#ifdef CSEI_CLI_PATH

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the pipeline binary with `args`, capturing exit code and both streams.
inline CliResult run_cli(const std::string& args, const TempDir& scratch) {
  static std::atomic<unsigned> counter{0};
  const unsigned k = counter.fetch_add(1);
  const std::string out_path = scratch.file("cli_out_" + std::to_string(k));
  const std::string err_path = scratch.file("cli_err_" + std::to_string(k));
  const std::string cmd = std::string(CSEI_CLI_PATH) + " " + args + " > " +
                          out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  CliResult result;
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

#endif  // CSEI_CLI_PATH

}  // namespace testutil
