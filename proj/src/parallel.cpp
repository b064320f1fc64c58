// Copyright 2026 The lorentz-bg Authors
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

#include "lorentz_bg/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace lorentz_bg {
namespace {

int threads_from_env() {
  if (const char* env = std::getenv("LORENTZ_BG_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return 1;
}

std::atomic<int>& requested_threads() {
  static std::atomic<int> value{threads_from_env()};
  return value;
}

}  // namespace

int thread_count() { return requested_threads().load(std::memory_order_relaxed); }

void set_thread_count(int threads) {
  requested_threads().store(threads > 0 ? threads : 1, std::memory_order_relaxed);
}

}  // namespace lorentz_bg
