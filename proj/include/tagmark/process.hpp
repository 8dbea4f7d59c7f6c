#pragma once

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "tagmark/error.hpp"

extern "C" char** environ;

namespace tagmark {

/// A spawned child with stdio redirected to files (or /dev/null when unset).
/// The destructor kills and reaps anything still running.
class ChildProcess {
public:
  struct Stdio {
    std::filesystem::path in;
    std::filesystem::path out;
    std::filesystem::path err;
  };

  ChildProcess(const std::vector<std::string>& argv, const Stdio& stdio) {
    if (argv.empty()) throw Error("spawn: empty command");
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    auto redirect = [&actions](int fd, const std::filesystem::path& file, int flags) {
      const char* target = file.empty() ? "/dev/null" : file.c_str();
      posix_spawn_file_actions_addopen(&actions, fd, target, flags, 0644);
    };
    redirect(0, stdio.in, O_RDONLY);
    redirect(1, stdio.out, O_WRONLY | O_CREAT | O_TRUNC);
    redirect(2, stdio.err, O_WRONLY | O_CREAT | O_TRUNC);

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    int rc = posix_spawnp(&pid_, cargv[0], &actions, nullptr, cargv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw Error("spawn failed for '" + argv[0] + "': " + std::strerror(rc));
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() {
    if (!reaped_) {
      kill(pid_, SIGKILL);
      wait4(pid_, nullptr, 0, nullptr);
    }
  }

  pid_t pid() const { return pid_; }

  /// False once the child has exited and been reaped.
  bool running() {
    if (reaped_) return false;
    int status = 0;
    pid_t r = wait4(pid_, &status, WNOHANG, &usage_);
    if (r == pid_) {
      finish(status);
      return false;
    }
    return true;
  }

  /// Blocks until exit. Returns the exit code, or 128 plus the signal number
  /// for a signaled child.
  int wait() {
    if (!reaped_) {
      int status = 0;
      if (wait4(pid_, &status, 0, &usage_) != pid_)
        throw Error("wait failed for pid " + std::to_string(pid_));
      finish(status);
    }
    return exit_code_;
  }

  /// Current resident set in bytes from /proc, or nullopt once gone.
  std::optional<long> rss_bytes() const {
    std::ifstream statm("/proc/" + std::to_string(pid_) + "/statm");
    long total = 0, resident = 0;
    if (!(statm >> total >> resident)) return std::nullopt;
    return resident * page_size();
  }

  /// Kernel-reported peak resident set in bytes; valid after wait().
  long peak_rss_bytes() const { return usage_.ru_maxrss * 1024L; }

  static long page_size() {
    static const long s = sysconf(_SC_PAGESIZE);
    return s;
  }

private:
  void finish(int status) {
    reaped_ = true;
    exit_code_ = WIFEXITED(status) ? WEXITSTATUS(status)
                                   : 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  }

  pid_t pid_ = -1;
  bool reaped_ = false;
  int exit_code_ = -1;
  rusage usage_{};
};

/// Last portion of a text file, for error messages quoting a child's stderr.
inline std::string read_file_tail(const std::filesystem::path& file, std::size_t max_bytes = 2000) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return "";
  in.seekg(0, std::ios::end);
  auto size = static_cast<std::size_t>(in.tellg());
  auto keep = std::min(size, max_bytes);
  in.seekg(static_cast<std::streamoff>(size - keep));
  std::string tail(keep, '\0');
  in.read(tail.data(), static_cast<std::streamsize>(keep));
  while (!tail.empty() && (tail.back() == '\n' || tail.back() == '\r')) tail.pop_back();
  return tail;
}

}  // namespace tagmark
