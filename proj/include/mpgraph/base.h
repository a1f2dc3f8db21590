/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/base.h
 * \brief Common id types, error type and check macros.
 */
#ifndef MPGRAPH_BASE_H_
#define MPGRAPH_BASE_H_

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mpg {

using NodeId = uint32_t;
using EdgeId = uint32_t;

/*! \brief Marker for "no edge" in arg-extrema tables. */
inline constexpr uint32_t kInvalidId = std::numeric_limits<uint32_t>::max();

enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kShape = 2,
  kRange = 3,
  kLookup = 4,
  kDivideByZero = 5,
  kInvalidStrategy = 6,
  kState = 7,
  kIo = 8,
  kCapExceeded = 9,
  kCorrectness = 10,
  kInternal = 11,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mpg

/*!
 * \brief Throw mpg::Error with the given code when `cond` is false.
 *  The message argument is streamed, e.g. `"edge " << e << " out of range"`.
 */
#define MPG_CHECK(cond, code, msg)                          \
  do {                                                      \
    if (!(cond)) {                                          \
      std::ostringstream mpg_check_os_;                     \
      mpg_check_os_ << msg;                                 \
      throw ::mpg::Error((code), mpg_check_os_.str());      \
    }                                                       \
  } while (0)

/*! \brief Unconditionally throw mpg::Error. */
#define MPG_FAIL(code, msg)                                 \
  do {                                                      \
    std::ostringstream mpg_check_os_;                       \
    mpg_check_os_ << msg;                                   \
    throw ::mpg::Error((code), mpg_check_os_.str());        \
  } while (0)

#define MPG_CHECK_SHAPE(cond, msg) MPG_CHECK(cond, ::mpg::ErrorCode::kShape, msg)
#define MPG_CHECK_RANGE(cond, msg) MPG_CHECK(cond, ::mpg::ErrorCode::kRange, msg)
#define MPG_CHECK_ARG(cond, msg) \
  MPG_CHECK(cond, ::mpg::ErrorCode::kInvalidArgument, msg)

#endif  // MPGRAPH_BASE_H_
