#pragma once

#include <cstdint>
#include <string_view>

namespace dwdm80 {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a over a byte string. Stable across platforms and runs.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// Seed for one work unit, derived from the root seed and a textual key such
/// as "series=ffe13/axis=12.5/trial=0". Resizing a sweep grid does not change
/// the seeds of points that stay in it.
std::uint64_t derive_seed(std::uint64_t root, std::string_view key) noexcept;

/// Cheap sub-stream derivation when a single unit needs several generators.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept;

}  // namespace dwdm80
