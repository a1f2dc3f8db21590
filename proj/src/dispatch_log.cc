/*!
 *  Copyright (c) 2026 by Contributors
 * \file dispatch_log.cc
 */
#include <mpgraph/dispatch_log.h>

#include <algorithm>
#include <atomic>
#include <mutex>

namespace mpg {

namespace {
std::mutex g_mu;
std::vector<DispatchCapture*> g_live;
std::atomic<int> g_live_count{0};
}  // namespace

std::string DispatchRecord::ToString() const {
  return kernel + "," + (graph_id < 0 ? std::string("-") : std::to_string(graph_id)) +
         "," + phi + "," + rho + "," + strategy + "," + std::to_string(rows) + "," +
         std::to_string(cols);
}

DispatchCapture::DispatchCapture() {
  std::lock_guard<std::mutex> lock(g_mu);
  g_live.push_back(this);
  g_live_count.fetch_add(1);
}

DispatchCapture::~DispatchCapture() {
  std::lock_guard<std::mutex> lock(g_mu);
  g_live.erase(std::remove(g_live.begin(), g_live.end(), this), g_live.end());
  g_live_count.fetch_sub(1);
}

std::vector<DispatchRecord> DispatchCapture::Records() const {
  std::lock_guard<std::mutex> lock(g_mu);
  return records_;
}

size_t DispatchCapture::Count() const {
  std::lock_guard<std::mutex> lock(g_mu);
  return records_.size();
}

void DispatchCapture::Clear() {
  std::lock_guard<std::mutex> lock(g_mu);
  records_.clear();
}

bool DispatchLoggingActive() { return g_live_count.load(std::memory_order_relaxed) > 0; }

void LogDispatch(DispatchRecord record) {
  if (!DispatchLoggingActive()) return;
  std::lock_guard<std::mutex> lock(g_mu);
  for (DispatchCapture* c : g_live) c->records_.push_back(record);
}

void WriteDispatchLog(const std::vector<DispatchRecord>& records, std::ostream& os) {
  for (const auto& r : records) os << r.ToString() << '\n';
}

}  // namespace mpg
