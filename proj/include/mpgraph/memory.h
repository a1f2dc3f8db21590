/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/memory.h
 * \brief Allocation accounting for feature storage and kernel scratch space.
 *
 * Every FeatureMatrix buffer, arg-extrema table and kernel-private
 * partial buffer is allocated through TrackedAllocator, so the process-wide
 * byte counters below see all of the auxiliary memory a kernel or a taped
 * computation uses. Graph topology arrays are not tracked.
 */
#ifndef MPGRAPH_MEMORY_H_
#define MPGRAPH_MEMORY_H_

#include <cstddef>
#include <memory>
#include <vector>

namespace mpg {
namespace memory {

/*! \brief Whether this build carries the accounting hook. Always true here. */
bool HookAvailable();

size_t CurrentBytes();
size_t PeakBytes();
/*! \brief Set the peak watermark back to the current byte count. */
void ResetPeak();

/*!
 * \brief Limit on live tracked bytes. 0 disables the limit.
 *  Exceeding it throws mpg::Error(kCapExceeded) from the allocation site.
 */
void SetCap(size_t bytes);
size_t Cap();

/*! \brief Called by TrackedAllocator; throws when the cap would be exceeded. */
void OnAllocate(size_t bytes);
void OnDeallocate(size_t bytes) noexcept;

/*!
 * \brief Measures peak bytes allocated above the level at construction.
 *  Only one probe should be live at a time since the watermark is global.
 */
class PeakProbe {
 public:
  PeakProbe();
  size_t PeakAuxBytes() const;

 private:
  size_t baseline_;
};

/*! \brief RAII cap setter. */
class ScopedCap {
 public:
  explicit ScopedCap(size_t bytes);
  ~ScopedCap();
  ScopedCap(const ScopedCap&) = delete;
  ScopedCap& operator=(const ScopedCap&) = delete;

 private:
  size_t previous_;
};

template <typename T>
struct TrackedAllocator {
  using value_type = T;

  TrackedAllocator() noexcept = default;
  template <typename U>
  TrackedAllocator(const TrackedAllocator<U>&) noexcept {}

  T* allocate(size_t n) {
    OnAllocate(n * sizeof(T));
    try {
      return std::allocator<T>{}.allocate(n);
    } catch (...) {
      OnDeallocate(n * sizeof(T));
      throw;
    }
  }
  void deallocate(T* p, size_t n) noexcept {
    std::allocator<T>{}.deallocate(p, n);
    OnDeallocate(n * sizeof(T));
  }

  template <typename U>
  bool operator==(const TrackedAllocator<U>&) const noexcept { return true; }
};

template <typename T>
using TrackedVector = std::vector<T, TrackedAllocator<T>>;

}  // namespace memory
}  // namespace mpg

#endif  // MPGRAPH_MEMORY_H_
