// Copyright 2026 The QALS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qals/bridge.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <thread>

#include "qals/text.hpp"

namespace qals {

namespace wire {

std::vector<Triplet> request_triplets(const Weights& weights) {
  std::vector<Triplet> out;
  out.reserve(weights.linear.size() + weights.quadratic.size());
  for (const auto& [node, value] : weights.linear) out.push_back({node, node, value});
  for (const auto& [key, value] : weights.quadratic) {
    if (value != 0.0) out.push_back({key.first, key.second, value});
  }
  return out;
}

std::string encode_request(const Weights& weights) {
  std::string out;
  for (const auto& t : request_triplets(weights)) {
    out += std::to_string(t.row);
    out += '\n';
    out += std::to_string(t.col);
    out += '\n';
    out += format_real(t.value);
    out += '\n';
  }
  out += "#\n";
  return out;
}

std::vector<int> response_nodes(const std::vector<Triplet>& triplets) {
  std::vector<int> nodes;
  nodes.reserve(2 * triplets.size());
  for (const auto& t : triplets) {
    nodes.push_back(t.row);
    nodes.push_back(t.col);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

}  // namespace wire

BridgeSampler::BridgeSampler(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  // A dead child must surface as EPIPE on write, not kill this process.
  ::signal(SIGPIPE, SIG_IGN);
  start();
}

BridgeSampler::~BridgeSampler() { stop(); }

void BridgeSampler::start() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportError("pipe: " + std::string(std::strerror(errno)));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError("pipe: " + std::string(std::strerror(errno)));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw TransportError("fork: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    // Own process group, so the shell and anything it starts can be killed together.
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  child_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

void BridgeSampler::stop() noexcept {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (child_ > 0) {
    // Closing stdin ends a well-behaved server; give it a moment, then kill
    // whatever is left of its process group.
    int status = 0;
    bool exited = false;
    for (int i = 0; i < 50 && !exited; ++i) {
      exited = ::waitpid(child_, &status, WNOHANG) != 0;
      if (!exited) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(-child_, SIGKILL);
    if (!exited) ::waitpid(child_, &status, 0);
    child_ = -1;
  }
}

void BridgeSampler::write_all(std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(to_child_, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("write to sampler process failed: " + std::string(std::strerror(errno)));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

bool BridgeSampler::read_line(std::string& line) {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      buffer_.erase(0, nl + 1);
      return true;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw TransportError("timed out waiting for sampler response");
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw TransportError("poll failed: " + std::string(std::strerror(errno)));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("read failed: " + std::string(std::strerror(errno)));
    }
    if (n == 0) return false;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

SampleResult BridgeSampler::sample(const SamplerRequest& request) {
  validate_request(request);
  if (child_ < 0) throw TransportError("sampler process is not running");
  try {
    return exchange(request);
  } catch (const TransportError&) {
    // The stream can no longer be trusted to line up with requests.
    stop();
    throw;
  }
}

SampleResult BridgeSampler::exchange(const SamplerRequest& request) {
  const auto triplets = wire::request_triplets(request.weights);
  const auto nodes = wire::response_nodes(triplets);
  pollfd pending{from_child_, POLLIN, 0};
  if (!buffer_.empty() || ::poll(&pending, 1, 0) > 0) {
    throw TransportError("sampler process wrote output before receiving a request");
  }
  write_all(wire::encode_request(request.weights));

  SampleResult out;
  std::string line;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    bool ok = false;
    try {
      ok = read_line(line);
    } catch (const TransportError& e) {
      throw TransportError(std::string(e.what()) + " after " + std::to_string(i) + " of " +
                           std::to_string(nodes.size()) + " response lines");
    }
    if (!ok) {
      throw TransportError("sampler process closed its output after " + std::to_string(i) +
                           " of " + std::to_string(nodes.size()) + " response lines");
    }
    if (line != "0" && line != "1") {
      throw TransportError("response line " + std::to_string(i + 1) + " is '" + line +
                           "', expected 0 or 1");
    }
    out.assignment.emplace_hint(out.assignment.end(), nodes[i],
                                static_cast<std::uint8_t>(line == "1"));
  }
  if (!buffer_.empty()) {
    throw TransportError("sampler process sent more than " + std::to_string(nodes.size()) +
                         " response lines");
  }
  // Nodes that only carried zero couplers were not transmitted.
  for (int node : request.weights.nodes()) out.assignment.emplace(node, 0);
  out.energy = evaluate_binary(request.weights, out.assignment);
  return out;
}

}  // namespace qals
