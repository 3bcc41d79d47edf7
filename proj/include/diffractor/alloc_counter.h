//
// Copyright 2026 The Diffractor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Heap accounting through replaced global operator new/delete. Counting is
// per thread and only active inside an AllocationScope, so the cost outside
// measurements is one thread-local load per allocation.
//
// Allocations that bypass operator new (direct malloc, e.g. Eigen's aligned
// temporaries) are not seen.

#ifndef DIFFRACTOR_ALLOC_COUNTER_H_
#define DIFFRACTOR_ALLOC_COUNTER_H_

#include <cstddef>
#include <cstdint>

namespace diffractor {

struct AllocationStats {
  // Bytes handed out, summed over every allocation.
  uint64_t allocated_bytes = 0;
  uint64_t allocation_count = 0;
  // High-water mark of live bytes above the level at scope entry.
  int64_t peak_live_bytes = 0;
  // Live bytes at scope exit relative to entry (retained memory).
  int64_t retained_bytes = 0;
};

class AllocationScope {
 public:
  AllocationScope();
  ~AllocationScope();
  AllocationScope(const AllocationScope&) = delete;
  AllocationScope& operator=(const AllocationScope&) = delete;

  // Snapshot of the counters so far.
  AllocationStats stats() const;

 private:
  bool previously_active_;
};

}  // namespace diffractor

#endif  // DIFFRACTOR_ALLOC_COUNTER_H_
