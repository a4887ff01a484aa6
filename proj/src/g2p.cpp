// src/g2p.cpp
//
// Copyright 2026  The ctcalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctcalign/g2p.hpp"

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "ctcalign/errors.hpp"

extern char** environ;

namespace ctcalign {

namespace {

constexpr const char* kInstallHint =
    "install espeak-ng (e.g. `apt install espeak-ng`) or point the "
    "ESPEAK_NG_PATH environment variable at the executable";

bool is_executable(const std::filesystem::path& p) {
  std::error_code ec;
  return std::filesystem::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
}

bool is_stress(const std::string& cp) { return cp == "ˈ" || cp == "ˌ"; }

}  // namespace

std::string resolve_espeak() {
  if (const char* env = std::getenv(kEspeakEnvVar); env && *env) {
    if (!is_executable(env))
      throw ExternalToolError(std::string(kEspeakEnvVar) + "='" + env +
                              "' is not an executable file; " + kInstallHint);
    return env;
  }
  if (const char* path = std::getenv("PATH")) {
    std::istringstream dirs(path);
    for (std::string dir; std::getline(dirs, dir, ':');) {
      const auto candidate = std::filesystem::path(dir.empty() ? "." : dir) / "espeak-ng";
      if (is_executable(candidate)) return candidate.string();
    }
  }
  throw ExternalToolError(std::string("espeak-ng not found; ") + kInstallHint);
}

std::string run_process(const std::vector<std::string>& argv) {
  if (argv.empty()) throw ExternalToolError("empty command line");
  int fds[2];
  if (::pipe(fds) != 0) throw ExternalToolError("pipe() failed");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, fds[0]);
  posix_spawn_file_actions_addclose(&actions, fds[1]);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(fds[1]);
  if (rc != 0) {
    ::close(fds[0]);
    throw ExternalToolError("cannot start '" + argv[0] + "': " + std::strerror(rc) +
                            "; " + kInstallHint);
  }

  std::string output;
  char buf[4096];
  for (;;) {
    const auto n = ::read(fds[0], buf, sizeof buf);
    if (n > 0) {
      output.append(buf, static_cast<std::size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      break;
    }
  }
  ::close(fds[0]);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw ExternalToolError("'" + argv[0] + "' failed with status " +
                            std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
  return output;
}

std::vector<std::string> tokenize_ipa(const std::string& raw,
                                      const std::set<std::string>& pauses) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(current);
    current.clear();
  };
  for (const auto& cp : utf8_codepoints(raw)) {
    if (cp == "_" || cp == " " || cp == "\t" || cp == "\n" || cp == "\r") {
      flush();
    } else if (pauses.count(cp)) {
      flush();
      out.push_back(cp);
    } else if (!is_stress(cp)) {
      current += cp;
    }
  }
  flush();
  return out;
}

TargetsFile phonemize(const std::string& text, const std::string& language,
                      const std::set<std::string>& pauses,
                      const std::string& executable) {
  TargetsFile result;
  result.text = text;
  std::string clause;
  auto run_clause = [&] {
    const auto first = clause.find_first_not_of(" \t\r\n");
    if (first != std::string::npos) {
      const auto last = clause.find_last_not_of(" \t\r\n");
      const auto raw = run_process({executable, "-q", "--ipa", "--sep=_", "-v", language,
                                    clause.substr(first, last - first + 1)});
      if (!result.g2p_raw.empty()) result.g2p_raw += '\n';
      result.g2p_raw += raw;
      for (auto& sym : tokenize_ipa(raw, pauses)) result.symbols.push_back(std::move(sym));
    }
    clause.clear();
  };
  for (const auto& cp : utf8_codepoints(text)) {
    if (pauses.count(cp)) {
      run_clause();
      result.symbols.push_back(cp);
    } else {
      clause += cp;
    }
  }
  run_clause();
  return result;
}

}  // namespace ctcalign
