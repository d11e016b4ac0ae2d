#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace rotwalk::cli {

/// Worker count from the flag, else ROTWALK_WORKERS, else the hardware
/// concurrency. Throws ConfigError for values below 1.
std::size_t resolve_workers(std::optional<long> flag);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// thrown (by lowest index) is rethrown after all threads finish.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace rotwalk::cli
