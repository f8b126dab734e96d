#include "gogap/subprocess.h"

#include <cctype>
#include <cerrno>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace gogap {

SubprocessError::SubprocessError(const std::string& detail)
    : std::runtime_error("subprocess: " + detail) {}

std::vector<std::string> shell_split(const std::string& command_line) {
  std::vector<std::string> argv;
  std::string cur;
  bool in_word = false;
  char quote = '\0';
  for (std::size_t i = 0; i < command_line.size(); ++i) {
    char c = command_line[i];
    if (quote) {
      if (c == quote) {
        quote = '\0';
      } else if (c == '\\' && quote == '"' && i + 1 < command_line.size()) {
        cur += command_line[++i];
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
    } else if (c == '\\' && i + 1 < command_line.size()) {
      cur += command_line[++i];
      in_word = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_word) {
        argv.push_back(std::move(cur));
        cur.clear();
        in_word = false;
      }
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (quote) throw SubprocessError("unterminated quote in command line");
  if (in_word) argv.push_back(std::move(cur));
  return argv;
}

LineSubprocess::LineSubprocess(const std::vector<std::string>& argv) {
  if (argv.empty()) throw SubprocessError("empty command");
  // Writes to a dead child must come back as EPIPE, not kill the process.
  static const bool sigpipe_ignored = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  int to_child[2];    // parent writes [1], child reads [0]
  int from_child[2];  // child writes [1], parent reads [0]
  if (pipe(to_child) != 0 || pipe(from_child) != 0)
    throw SubprocessError(std::string("pipe: ") + std::strerror(errno));

  pid_ = fork();
  if (pid_ < 0) throw SubprocessError(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    std::vector<char*> c_argv;
    c_argv.reserve(argv.size() + 1);
    for (const auto& a : argv) c_argv.push_back(const_cast<char*>(a.c_str()));
    c_argv.push_back(nullptr);
    execvp(c_argv[0], c_argv.data());
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  to_child_ = to_child[1];
  from_child_ = from_child[0];
}

LineSubprocess::~LineSubprocess() { terminate(); }

void LineSubprocess::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t written = 0;
  while (written < data.size()) {
    ssize_t n = write(to_child_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError(std::string("write: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> LineSubprocess::read_line(
    std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) return std::nullopt;

    struct pollfd pfd{from_child_, POLLIN, 0};
    int rv = poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rv < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError(std::string("poll: ") + std::strerror(errno));
    }
    if (rv == 0) return std::nullopt;

    char chunk[4096];
    ssize_t n = read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SubprocessError(std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) throw SubprocessError("child closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

bool LineSubprocess::running() {
  if (pid_ < 0) return false;
  int status = 0;
  pid_t r = waitpid(pid_, &status, WNOHANG);
  if (r == pid_) {
    pid_ = -1;
    return false;
  }
  return r == 0;
}

void LineSubprocess::terminate() {
  if (to_child_ >= 0) {
    close(to_child_);
    to_child_ = -1;
  }
  if (pid_ > 0) {
    // Closing stdin is the polite shutdown; escalate if the child lingers.
    int status = 0;
    auto reaped = [&](int tries) {
      for (int i = 0; i < tries; ++i) {
        if (waitpid(pid_, &status, WNOHANG) != 0) return true;
        usleep(10'000);
      }
      return false;
    };
    if (!reaped(20)) {
      kill(pid_, SIGTERM);
      if (!reaped(50)) {
        kill(pid_, SIGKILL);
        waitpid(pid_, &status, 0);
      }
    }
    pid_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
}

}  // namespace gogap
