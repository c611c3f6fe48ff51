#pragma once

#include <stdexcept>
#include <string>

namespace mironov {

enum class ErrorCode {
  RankDeficient,
  ZeroBasePoint,
  InvalidLevel,
  InvalidWeights,
  WrongGrassmannian,
  InvalidArgument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ZeroBasePoint: return "ZeroBasePoint";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::WrongGrassmannian: return "WrongGrassmannian";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mironov
