#pragma once

// Table cache: in-process memo plus an optional on-disk store under
// $OTTER_CACHE_DIR, using the text format of write_series.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "otter/series.hpp"

namespace otter::cache {

/// $OTTER_CACHE_DIR if set and non-empty.
std::optional<std::filesystem::path> directory();

/// Returns the series stored under `key`, computing and storing it on a miss.
/// Writers take an exclusive flock on `<key>.lock` and publish by rename, so
/// concurrent readers never observe a partial file.
ExactSeries load_or_compute(const std::string& key, const std::function<ExactSeries()>& compute);

/// Drops the in-process memo (the disk store is untouched).
void clear_memory();

}  // namespace otter::cache
