// SPDX-License-Identifier: Apache-2.0
#include <steerbench/llm/gateway.hpp>

#include <fmt/format.h>

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

namespace steerbench::llm
{

ReplayStore::ReplayStore(std::filesystem::path path): _path(std::move(path))
{
    std::ifstream in(_path);
    if (!in)
        return;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line))
    {
        ++number;
        if (line.empty())
            continue;
        nlohmann::json entry;
        try
        {
            entry = nlohmann::json::parse(line);
        }
        catch (const nlohmann::json::parse_error& e)
        {
            throw GatewayError(fmt::format("{}:{}: {}", _path.string(), number, e.what()));
        }
        if (!entry.is_object() || !entry.contains("hash") || !entry["hash"].is_string())
            throw GatewayError(fmt::format("{}:{}: entry has no \"hash\"", _path.string(), number));
        std::string hash = entry["hash"].get<std::string>();
        _entries[hash] = std::move(entry);
        ++_lines;
    }
}

std::optional<nlohmann::json> ReplayStore::find(const std::string& hash) const
{
    std::lock_guard lock(_mutex);
    auto it = _entries.find(hash);
    if (it == _entries.end())
        return std::nullopt;
    return it->second;
}

void ReplayStore::append(const nlohmann::json& entry)
{
    if (!entry.is_object() || !entry.contains("hash") || !entry["hash"].is_string())
        throw GatewayError("store entries need a string \"hash\"");
    std::string line = entry.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";

    std::lock_guard lock(_mutex);
    if (_path.has_parent_path())
        std::filesystem::create_directories(_path.parent_path());
    int fd = ::open(_path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0)
        throw GatewayError(fmt::format("cannot open {}: {}", _path.string(), std::strerror(errno)));
    const char* p = line.data();
    std::size_t left = line.size();
    while (left > 0)
    {
        ssize_t n = ::write(fd, p, left);
        if (n < 0 && errno == EINTR)
            continue;
        if (n <= 0)
        {
            int e = errno;
            ::close(fd);
            throw GatewayError(fmt::format("cannot append to {}: {}", _path.string(), std::strerror(e)));
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
    ::close(fd);
    _entries[entry["hash"].get<std::string>()] = entry;
    ++_lines;
}

std::size_t ReplayStore::size() const
{
    std::lock_guard lock(_mutex);
    return _lines;
}

} // namespace steerbench::llm
