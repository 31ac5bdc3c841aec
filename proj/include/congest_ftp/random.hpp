// Copyright 2026 The congest-ftp Authors
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

#include <cstdint>
#include <initializer_list>

namespace congest_ftp {

/// SplitMix64 finalizer. Used as the keyed pseudorandom function behind
/// vertex sampling and start-phase delays, so results are identical across
/// platforms and standard libraries.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed,
                                     std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t w : words) {
    h = splitmix64(h ^ splitmix64(w + 0x632be59bd9b4e019ULL));
  }
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Maps a 64-bit hash to [0, range) by multiply-shift.
constexpr std::uint64_t reduce_to_range(std::uint64_t h, std::uint64_t range) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * range) >> 64);
}

}  // namespace congest_ftp
