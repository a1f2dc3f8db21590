/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/dispatch_log.h
 * \brief Records of every kernel and dense op dispatched while a capture is
 *  active. Serialized as `kernel,graph_id,phi,rho,strategy,rows,cols`.
 */
#ifndef MPGRAPH_DISPATCH_LOG_H_
#define MPGRAPH_DISPATCH_LOG_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mpg {

struct DispatchRecord {
  /*! \brief "gspmm", "gsddmm", "dense" or an unfused op such as "gather". */
  std::string kernel;
  /*! \brief Graph orientation id; -1 when no graph is involved. */
  int64_t graph_id = -1;
  std::string phi;
  std::string rho;
  std::string strategy;
  uint64_t rows = 0;
  uint64_t cols = 0;

  std::string ToString() const;
};

/*!
 * \brief Collects dispatch records for its lifetime. Captures nest; each live
 *  capture sees every record. Thread-safe.
 */
class DispatchCapture {
 public:
  DispatchCapture();
  ~DispatchCapture();
  DispatchCapture(const DispatchCapture&) = delete;
  DispatchCapture& operator=(const DispatchCapture&) = delete;

  std::vector<DispatchRecord> Records() const;
  size_t Count() const;
  void Clear();

 private:
  friend void LogDispatch(DispatchRecord record);
  std::vector<DispatchRecord> records_;
};

/*! \brief Append to all live captures; a no-op when none is live. */
void LogDispatch(DispatchRecord record);
bool DispatchLoggingActive();

void WriteDispatchLog(const std::vector<DispatchRecord>& records, std::ostream& os);

}  // namespace mpg

#endif  // MPGRAPH_DISPATCH_LOG_H_
