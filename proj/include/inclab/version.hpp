#pragma once

namespace inclab {

inline constexpr const char* kEngineVersion = "inclab 0.1.0";

}  // namespace inclab
