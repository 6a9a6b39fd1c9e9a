// Copyright 2026 The colt Authors.
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

#ifndef COLT_SRC_HTTP_UTIL_H_
#define COLT_SRC_HTTP_UTIL_H_

#include <chrono>
#include <random>
#include <string>
#include <thread>

#include "colt/error.h"

namespace colt::internal {

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with '/'
};

inline SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidConfig, "URL needs a scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// Exponential backoff with jitter: base * 2^attempt + U[0, base).
inline void backoff_sleep(double base_seconds, int attempt) {
  if (base_seconds <= 0) return;
  thread_local std::mt19937 rng(std::random_device{}());
  std::uniform_real_distribution<double> jitter(0.0, base_seconds);
  double delay = base_seconds * static_cast<double>(1 << attempt) + jitter(rng);
  std::this_thread::sleep_for(std::chrono::duration<double>(delay));
}

}  // namespace colt::internal

#endif  // COLT_SRC_HTTP_UTIL_H_
