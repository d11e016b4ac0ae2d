#include "rotwalk/cli/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "rotwalk/error.hpp"

#ifndef ROTWALK_VERSION
#define ROTWALK_VERSION "unknown"
#endif

namespace rotwalk::cli {

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error("sha256 unavailable");
    std::array<char, 1 << 16> buf{};
    while (in)
    {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0)
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i)
    {
        std::array<char, 3> byte{};
        std::snprintf(byte.data(), byte.size(), "%02x", digest[i]);
        hex += byte.data();
    }
    return hex;
}

std::string utc_timestamp(std::chrono::system_clock::time_point when)
{
    const auto secs = std::chrono::time_point_cast<std::chrono::seconds>(when);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(when - secs).count();
    const std::time_t t = std::chrono::system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 40> buf{};
    const auto n = std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%S", &tm);
    std::array<char, 8> frac{};
    std::snprintf(frac.data(), frac.size(), ".%03dZ", static_cast<int>(ms));
    return std::string(buf.data(), n) + frac.data();
}

Manifest::Manifest(std::string command, const nlohmann::json& config,
                   std::filesystem::path out_dir)
    : out_dir_(std::move(out_dir))
{
    doc_["command"] = std::move(command);
    doc_["tool"] = "rotwalk";
    doc_["version"] = ROTWALK_VERSION;
    doc_["config"] = config;
    doc_["seed"] = config.at("seed");
    doc_["started"] = utc_timestamp(std::chrono::system_clock::now());
    doc_["result"] = nlohmann::json::object();
}

void Manifest::add_output(const std::filesystem::path& relative)
{
    outputs_.push_back(relative);
}

void Manifest::write()
{
    doc_["finished"] = utc_timestamp(std::chrono::system_clock::now());
    nlohmann::json files = nlohmann::json::array();
    for (const auto& rel : outputs_)
    {
        const auto full = out_dir_ / rel;
        files.push_back({{"path", rel.generic_string()},
                         {"sha256", sha256_file(full)},
                         {"bytes", std::filesystem::file_size(full)}});
    }
    doc_["outputs"] = std::move(files);
    std::ofstream out(out_dir_ / "manifest.json");
    out << doc_.dump(2) << '\n';
    if (!out)
        throw Error("cannot write manifest.json");
}

}  // namespace rotwalk::cli
