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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace panolux {

enum class Errc {
  // input validation
  index_out_of_range,
  invalid_dimensions,
  invalid_argument,
  out_of_range,
  // bracket validation
  too_few_shots,
  duplicate_exposure,
  mismatched_dimensions,
  // codecs
  bad_magic,
  unsupported_format,
  bad_resolution,
  truncated,
  rle_overrun,
  unsupported_depth,
  malformed,
  encode_error,
  io_error,
  // numerics
  underdetermined,
  singular,
  non_monotone,
  divergence,
};

std::string_view errc_name(Errc code) noexcept;

/// True for failures of a numerical procedure rather than of its inputs.
bool is_numerical(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Error(Errc code, const std::string& what, std::size_t byte_offset);

  Errc code() const noexcept { return code_; }
  /// Position in the input stream for decoder errors.
  std::optional<std::size_t> byte_offset() const noexcept { return offset_; }

 private:
  Errc code_;
  std::optional<std::size_t> offset_;
};

}  // namespace panolux
