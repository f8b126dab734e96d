#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/types.h>

namespace gogap {

class SubprocessError : public std::runtime_error {
 public:
  explicit SubprocessError(const std::string& detail);
};

// Splits a command line into argv honoring single/double quotes and
// backslash escapes, so engine commands come from configuration strings.
std::vector<std::string> shell_split(const std::string& command_line);

// Child process spoken to over stdin/stdout, one line at a time.
class LineSubprocess {
 public:
  explicit LineSubprocess(const std::vector<std::string>& argv);
  ~LineSubprocess();
  LineSubprocess(const LineSubprocess&) = delete;
  LineSubprocess& operator=(const LineSubprocess&) = delete;

  // Appends '\n'. Throws SubprocessError if the child is gone.
  void write_line(const std::string& line);

  // nullopt on timeout; throws SubprocessError on EOF or I/O failure.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

  bool running();
  void terminate();  // SIGTERM, short grace, then SIGKILL

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace gogap
