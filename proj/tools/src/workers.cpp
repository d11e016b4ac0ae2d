#include "rotwalk/cli/workers.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string_view>
#include <thread>
#include <vector>

#include "rotwalk/error.hpp"

namespace rotwalk::cli {

std::size_t resolve_workers(std::optional<long> flag)
{
    if (flag)
    {
        if (*flag < 1)
            throw ConfigError("workers", "workers must be at least 1");
        return static_cast<std::size_t>(*flag);
    }
    if (const char* env = std::getenv("ROTWALK_WORKERS"); env && *env)
    {
        const std::string_view text(env);
        long value = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || end != text.data() + text.size() || value < 1)
            throw ConfigError("ROTWALK_WORKERS", "ROTWALK_WORKERS must be a positive integer");
        return static_cast<std::size_t>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn)
{
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::exception_ptr error;
    std::size_t error_index = n;

    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++)
        {
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(mutex);
                if (i < error_index)
                {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };

    const std::size_t count = std::min(workers, n);
    if (count <= 1)
        work();
    else
    {
        std::vector<std::thread> threads;
        threads.reserve(count);
        for (std::size_t t = 0; t < count; ++t)
            threads.emplace_back(work);
        for (auto& t : threads)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);
}

}  // namespace rotwalk::cli
