#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rotwalk/dynamics.hpp"
#include "rotwalk/error.hpp"
#include "rotwalk/langevin.hpp"

namespace rotwalk::cli {

/// Column names of the event log, one per CollisionEvent scalar.
extern const std::string_view event_header;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);
void append_double(std::string& out, double value);

/// Bad record in an input file; `record()` counts data lines from 1.
class InputError : public Error
{
  public:
    InputError(const std::filesystem::path& file, std::size_t record, const std::string& message);

    std::size_t record() const noexcept { return record_; }

  private:
    std::size_t record_;
};

/// Streams events to a CSV file, header first.
class EventWriter
{
  public:
    explicit EventWriter(const std::filesystem::path& path);

    void write(const CollisionEvent& ev);
    void close();

  private:
    std::ofstream out_;
    std::string line_;
};

void format_event(std::string& out, const CollisionEvent& ev);
CollisionEvent parse_event(std::string_view line);

/// Calls fn for every record of an event file, in order.
void for_each_event(const std::filesystem::path& path,
                    const std::function<void(const CollisionEvent&)>& fn);
std::vector<CollisionEvent> read_events(const std::filesystem::path& path);

/// Langevin samples as t,x1,x2,r.
extern const std::string_view langevin_header;
void format_langevin_sample(std::string& out, const LangevinSample& s);
std::vector<LangevinSample> read_langevin(const std::filesystem::path& path);

}  // namespace rotwalk::cli
