// Copyright 2026 The Panolux Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "panolux/error.hpp"

namespace panolux {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::index_out_of_range: return "index_out_of_range";
    case Errc::invalid_dimensions: return "invalid_dimensions";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::out_of_range: return "out_of_range";
    case Errc::too_few_shots: return "too_few_shots";
    case Errc::duplicate_exposure: return "duplicate_exposure";
    case Errc::mismatched_dimensions: return "mismatched_dimensions";
    case Errc::bad_magic: return "bad_magic";
    case Errc::unsupported_format: return "unsupported_format";
    case Errc::bad_resolution: return "bad_resolution";
    case Errc::truncated: return "truncated";
    case Errc::rle_overrun: return "rle_overrun";
    case Errc::unsupported_depth: return "unsupported_depth";
    case Errc::malformed: return "malformed";
    case Errc::encode_error: return "encode_error";
    case Errc::io_error: return "io_error";
    case Errc::underdetermined: return "underdetermined";
    case Errc::singular: return "singular";
    case Errc::non_monotone: return "non_monotone";
    case Errc::divergence: return "divergence";
  }
  return "unknown";
}

bool is_numerical(Errc code) noexcept {
  switch (code) {
    case Errc::underdetermined:
    case Errc::singular:
    case Errc::non_monotone:
    case Errc::divergence:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

Error::Error(Errc code, const std::string& what, std::size_t byte_offset)
    : std::runtime_error(what + " (at byte " + std::to_string(byte_offset) + ")"),
      code_(code),
      offset_(byte_offset) {}

}  // namespace panolux
