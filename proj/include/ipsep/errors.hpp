#pragma once

#include <stdexcept>
#include <string>

namespace ipsep {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct WindowError : Error { using Error::Error; };
struct ParamError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct FrameError : Error { using Error::Error; };
struct ScaleError : Error { using Error::Error; };
struct IOError : Error { using Error::Error; };

}  // namespace ipsep
