/*!
 *  Copyright (c) 2026 by Contributors
 * \file memory.cc
 * \brief Process-wide tracked byte counters.
 */
#include <mpgraph/base.h>
#include <mpgraph/memory.h>

#include <atomic>

namespace mpg {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kLookup: return "lookup";
    case ErrorCode::kDivideByZero: return "divide_by_zero";
    case ErrorCode::kInvalidStrategy: return "invalid_strategy";
    case ErrorCode::kState: return "state";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kCapExceeded: return "cap_exceeded";
    case ErrorCode::kCorrectness: return "correctness";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

namespace memory {
namespace {
std::atomic<size_t> g_current{0};
std::atomic<size_t> g_peak{0};
std::atomic<size_t> g_cap{0};
}  // namespace

bool HookAvailable() { return true; }

size_t CurrentBytes() { return g_current.load(std::memory_order_relaxed); }
size_t PeakBytes() { return g_peak.load(std::memory_order_relaxed); }

void ResetPeak() { g_peak.store(g_current.load()); }

void SetCap(size_t bytes) { g_cap.store(bytes); }
size_t Cap() { return g_cap.load(); }

void OnAllocate(size_t bytes) {
  const size_t now = g_current.fetch_add(bytes) + bytes;
  const size_t cap = g_cap.load(std::memory_order_relaxed);
  if (cap != 0 && now > cap) {
    g_current.fetch_sub(bytes);
    throw Error(ErrorCode::kCapExceeded,
                "tracked allocation of " + std::to_string(bytes) +
                    " bytes exceeds cap of " + std::to_string(cap) + " bytes");
  }
  size_t peak = g_peak.load(std::memory_order_relaxed);
  while (now > peak && !g_peak.compare_exchange_weak(peak, now)) {
  }
}

void OnDeallocate(size_t bytes) noexcept { g_current.fetch_sub(bytes); }

PeakProbe::PeakProbe() : baseline_(CurrentBytes()) { ResetPeak(); }

size_t PeakProbe::PeakAuxBytes() const {
  const size_t peak = PeakBytes();
  return peak > baseline_ ? peak - baseline_ : 0;
}

ScopedCap::ScopedCap(size_t bytes) : previous_(Cap()) { SetCap(bytes); }
ScopedCap::~ScopedCap() { SetCap(previous_); }

}  // namespace memory
}  // namespace mpg
