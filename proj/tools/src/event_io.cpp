#include "rotwalk/cli/event_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <system_error>

namespace rotwalk::cli {

const std::string_view event_header =
    "k,t_before,t_after,tau,x1,x2,x3,v_before1,v_before2,v_before3,v_after1,v_after2,v_after3,"
    "xi,delta1,delta2,delta3,eta1,eta2,eta3,u1,u2,u3,e_after1,e_after2,e_after3";

const std::string_view langevin_header = "t,x1,x2,r";

namespace {

constexpr std::size_t event_fields = 26;

void append_vec(std::string& out, const Vec3& v)
{
    for (double c : {v.x, v.y, v.z})
    {
        out.push_back(',');
        append_double(out, c);
    }
}

/// Splits a comma-separated line into exactly N doubles (the first may be an integer).
template<std::size_t N>
std::array<double, N> split_numbers(std::string_view line, std::int64_t* leading_integer)
{
    std::array<double, N> out{};
    std::size_t field = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true)
    {
        const char* comma = std::find(p, end, ',');
        if (field >= N)
            throw Error("expected " + std::to_string(N) + " fields");
        std::from_chars_result r{};
        if (field == 0 && leading_integer)
            r = std::from_chars(p, comma, *leading_integer);
        else
            r = std::from_chars(p, comma, out[field]);
        if (r.ec != std::errc{} || r.ptr != comma)
            throw Error("field " + std::to_string(field + 1) + " is not a number");
        ++field;
        if (comma == end)
            break;
        p = comma + 1;
    }
    if (field != N)
        throw Error("expected " + std::to_string(N) + " fields, found " + std::to_string(field));
    return out;
}

std::string_view trim_line(std::string_view line)
{
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.remove_suffix(1);
    return line;
}

}  // namespace

std::string format_double(double value)
{
    std::string s;
    append_double(s, value);
    return s;
}

void append_double(std::string& out, double value)
{
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    out.append(buf.data(), end);
}

InputError::InputError(const std::filesystem::path& file, std::size_t record,
                       const std::string& message)
    : Error(file.string() + ": record " + std::to_string(record) + ": " + message), record_(record)
{}

void format_event(std::string& out, const CollisionEvent& ev)
{
    out += std::to_string(ev.k);
    for (double d : {ev.t_before, ev.t_after, ev.tau})
    {
        out.push_back(',');
        append_double(out, d);
    }
    append_vec(out, ev.x);
    append_vec(out, ev.v_before);
    append_vec(out, ev.v_after);
    out.push_back(',');
    append_double(out, ev.xi);
    append_vec(out, ev.delta);
    append_vec(out, ev.eta);
    append_vec(out, ev.u);
    append_vec(out, ev.e_after);
}

CollisionEvent parse_event(std::string_view line)
{
    std::int64_t k = 0;
    const auto f = split_numbers<event_fields>(trim_line(line), &k);
    auto vec = [&](std::size_t i) { return Vec3{f[i], f[i + 1], f[i + 2]}; };
    CollisionEvent ev;
    ev.k = k;
    ev.t_before = f[1];
    ev.t_after = f[2];
    ev.tau = f[3];
    ev.x = vec(4);
    ev.v_before = vec(7);
    ev.v_after = vec(10);
    ev.xi = f[13];
    ev.delta = vec(14);
    ev.eta = vec(17);
    ev.u = vec(20);
    ev.e_after = vec(23);
    return ev;
}

EventWriter::EventWriter(const std::filesystem::path& path) : out_(path, std::ios::binary)
{
    if (!out_)
        throw Error("cannot write " + path.string());
    out_ << event_header << '\n';
    line_.reserve(1024);
}

void EventWriter::write(const CollisionEvent& ev)
{
    line_.clear();
    format_event(line_, ev);
    line_.push_back('\n');
    out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
}

void EventWriter::close()
{
    out_.close();
    if (out_.fail())
        throw Error("failed to finish writing event file");
}

void for_each_event(const std::filesystem::path& path,
                    const std::function<void(const CollisionEvent&)>& fn)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(path, 0, "cannot open");
    std::string line;
    if (!std::getline(in, line) || trim_line(line) != event_header)
        throw InputError(path, 0, "missing or unexpected header");
    std::size_t record = 0;
    while (std::getline(in, line))
    {
        ++record;
        CollisionEvent ev;
        try
        {
            ev = parse_event(line);
        }
        catch (const Error& e)
        {
            throw InputError(path, record, e.what());
        }
        fn(ev);
    }
}

std::vector<CollisionEvent> read_events(const std::filesystem::path& path)
{
    std::vector<CollisionEvent> events;
    for_each_event(path, [&](const CollisionEvent& ev) { events.push_back(ev); });
    return events;
}

void format_langevin_sample(std::string& out, const LangevinSample& s)
{
    append_double(out, s.t);
    for (double d : {s.x[0], s.x[1], s.radius()})
    {
        out.push_back(',');
        append_double(out, d);
    }
}

std::vector<LangevinSample> read_langevin(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(path, 0, "cannot open");
    std::string line;
    if (!std::getline(in, line) || trim_line(line) != langevin_header)
        throw InputError(path, 0, "missing or unexpected header");
    std::vector<LangevinSample> out;
    std::size_t record = 0;
    while (std::getline(in, line))
    {
        ++record;
        try
        {
            const auto f = split_numbers<4>(trim_line(line), nullptr);
            out.push_back({f[0], {f[1], f[2]}});
        }
        catch (const Error& e)
        {
            throw InputError(path, record, e.what());
        }
    }
    return out;
}

}  // namespace rotwalk::cli
