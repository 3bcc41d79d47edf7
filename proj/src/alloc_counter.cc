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

#include "diffractor/alloc_counter.h"

#include <malloc.h>

#include <algorithm>
#include <cstdlib>
#include <new>

namespace diffractor {
namespace {

struct Counters {
  bool active;
  uint64_t allocated;
  uint64_t count;
  int64_t live;
  int64_t peak;
};

thread_local constinit Counters counters{};

void OnAllocate(void* p) {
  if (!counters.active || p == nullptr) return;
  const auto size = static_cast<int64_t>(malloc_usable_size(p));
  counters.allocated += static_cast<uint64_t>(size);
  ++counters.count;
  counters.live += size;
  counters.peak = std::max(counters.peak, counters.live);
}

void OnFree(void* p) {
  if (!counters.active || p == nullptr) return;
  counters.live -= static_cast<int64_t>(malloc_usable_size(p));
}

void* Allocate(std::size_t size) {
  void* p = std::malloc(size == 0 ? 1 : size);
  OnAllocate(p);
  return p;
}

void* AllocateAligned(std::size_t size, std::align_val_t align) {
  const auto a = static_cast<std::size_t>(align);
  const std::size_t rounded = (std::max<std::size_t>(size, 1) + a - 1) / a * a;
  void* p = std::aligned_alloc(a, rounded);
  OnAllocate(p);
  return p;
}

void Release(void* p) {
  OnFree(p);
  std::free(p);
}

}  // namespace

AllocationScope::AllocationScope() : previously_active_(counters.active) {
  counters = Counters{true, 0, 0, 0, 0};
}

AllocationScope::~AllocationScope() { counters.active = previously_active_; }

AllocationStats AllocationScope::stats() const {
  AllocationStats s;
  s.allocated_bytes = counters.allocated;
  s.allocation_count = counters.count;
  s.peak_live_bytes = counters.peak;
  s.retained_bytes = counters.live;
  return s;
}

}  // namespace diffractor

void* operator new(std::size_t size) {
  if (void* p = diffractor::Allocate(size)) return p;
  throw std::bad_alloc();
}

void* operator new[](std::size_t size) {
  if (void* p = diffractor::Allocate(size)) return p;
  throw std::bad_alloc();
}

void* operator new(std::size_t size, const std::nothrow_t&) noexcept {
  return diffractor::Allocate(size);
}

void* operator new[](std::size_t size, const std::nothrow_t&) noexcept {
  return diffractor::Allocate(size);
}

void* operator new(std::size_t size, std::align_val_t align) {
  if (void* p = diffractor::AllocateAligned(size, align)) return p;
  throw std::bad_alloc();
}

void* operator new[](std::size_t size, std::align_val_t align) {
  if (void* p = diffractor::AllocateAligned(size, align)) return p;
  throw std::bad_alloc();
}

void* operator new(std::size_t size, std::align_val_t align,
                   const std::nothrow_t&) noexcept {
  return diffractor::AllocateAligned(size, align);
}

void* operator new[](std::size_t size, std::align_val_t align,
                     const std::nothrow_t&) noexcept {
  return diffractor::AllocateAligned(size, align);
}

void operator delete(void* p) noexcept { diffractor::Release(p); }
void operator delete[](void* p) noexcept { diffractor::Release(p); }
void operator delete(void* p, std::size_t) noexcept { diffractor::Release(p); }
void operator delete[](void* p, std::size_t) noexcept {
  diffractor::Release(p);
}
void operator delete(void* p, const std::nothrow_t&) noexcept {
  diffractor::Release(p);
}
void operator delete[](void* p, const std::nothrow_t&) noexcept {
  diffractor::Release(p);
}
void operator delete(void* p, std::align_val_t) noexcept {
  diffractor::Release(p);
}
void operator delete[](void* p, std::align_val_t) noexcept {
  diffractor::Release(p);
}
void operator delete(void* p, std::size_t, std::align_val_t) noexcept {
  diffractor::Release(p);
}
void operator delete[](void* p, std::size_t, std::align_val_t) noexcept {
  diffractor::Release(p);
}
void operator delete(void* p, std::align_val_t, const std::nothrow_t&) noexcept {
  diffractor::Release(p);
}
void operator delete[](void* p, std::align_val_t,
                       const std::nothrow_t&) noexcept {
  diffractor::Release(p);
}
