// Copyright 2026 The Lexseq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexseq/extraction/ocr_backend.h"

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "lexseq/common/error.h"

extern char** environ;

namespace lexseq {
namespace {

class Pipe {
 public:
  Pipe() {
    if (pipe2(fds_, O_CLOEXEC) != 0) {
      throw OcrError(std::string("pipe failed: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    CloseRead();
    CloseWrite();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_end() const { return fds_[0]; }
  int write_end() const { return fds_[1]; }
  void CloseRead() { Close(fds_[0]); }
  void CloseWrite() { Close(fds_[1]); }

 private:
  static void Close(int& fd) {
    if (fd >= 0) close(fd);
    fd = -1;
  }
  int fds_[2] = {-1, -1};
};

}  // namespace

std::string ShellQuote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

CommandOutput RunShellCommand(const std::string& command) {
  Pipe out_pipe, err_pipe;
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, out_pipe.write_end(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe.write_end(), STDERR_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

  std::string shell = "/bin/sh", flag = "-c", script = command;
  std::array<char*, 4> argv = {shell.data(), flag.data(), script.data(), nullptr};
  pid_t pid = 0;
  int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw OcrError(std::string("cannot start /bin/sh: ") + std::strerror(rc));
  }
  out_pipe.CloseWrite();
  err_pipe.CloseWrite();

  CommandOutput output;
  std::array<pollfd, 2> fds = {{{out_pipe.read_end(), POLLIN, 0},
                                {err_pipe.read_end(), POLLIN, 0}}};
  std::array<std::string*, 2> sinks = {&output.stdout_text, &output.stderr_text};
  size_t open = 2;
  char buffer[8192];
  while (open > 0) {
    if (poll(fds.data(), fds.size(), -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (size_t k = 0; k < fds.size(); ++k) {
      if (fds[k].fd < 0 || fds[k].revents == 0) continue;
      ssize_t n = read(fds[k].fd, buffer, sizeof(buffer));
      if (n > 0) {
        sinks[k]->append(buffer, static_cast<size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        fds[k].fd = -1;
        --open;
      }
    }
  }

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    output.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    output.exit_code = 128 + WTERMSIG(status);
  }
  return output;
}

CommandOcrBackend::CommandOcrBackend(std::string command_template)
    : template_(std::move(command_template)) {
  if (template_.find(kPlaceholder) == std::string::npos) {
    throw ConfigError("OCR command template lacks the " +
                      std::string(kPlaceholder) + " placeholder");
  }
}

std::string CommandOcrBackend::Recognize(const std::filesystem::path& image) {
  std::string command;
  const std::string quoted = ShellQuote(image.string());
  size_t begin = 0;
  while (true) {
    size_t at = template_.find(kPlaceholder, begin);
    command.append(template_, begin,
                   at == std::string::npos ? std::string::npos : at - begin);
    if (at == std::string::npos) break;
    command += quoted;
    begin = at + kPlaceholder.size();
  }
  CommandOutput output = RunShellCommand(command);
  if (output.exit_code != 0) {
    std::string message = "OCR command exited with status " +
                           std::to_string(output.exit_code) + " for " +
                           image.string();
    if (!output.stderr_text.empty()) message += ": " + output.stderr_text;
    while (!message.empty() && (message.back() == '\n' || message.back() == '\r')) {
      message.pop_back();
    }
    throw OcrError(message);
  }
  return output.stdout_text;
}

std::unique_ptr<OcrBackend> MakeCommandOcrBackend(std::string command_template) {
  return std::make_unique<CommandOcrBackend>(std::move(command_template));
}

}  // namespace lexseq
