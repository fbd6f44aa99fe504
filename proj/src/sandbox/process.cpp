// SPDX-License-Identifier: Apache-2.0
#include "process.hpp"

#include <steerbench/sandbox/sandbox.hpp>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <system_error>

extern char** environ;

namespace steerbench::sandbox::detail
{

namespace
{

    using Clock = std::chrono::steady_clock;

    class Fd
    {
    public:
        Fd() = default;
        explicit Fd(int fd): _fd(fd) {}
        ~Fd() { reset(); }
        Fd(Fd&& o) noexcept: _fd(o._fd) { o._fd = -1; }
        Fd& operator=(Fd&& o) noexcept
        {
            if (this != &o)
            {
                reset();
                _fd = o._fd;
                o._fd = -1;
            }
            return *this;
        }

        int get() const noexcept { return _fd; }
        void reset() noexcept
        {
            if (_fd >= 0)
                ::close(_fd);
            _fd = -1;
        }

    private:
        int _fd = -1;
    };

    std::array<Fd, 2> make_pipe()
    {
        int fds[2];
        if (::pipe2(fds, O_CLOEXEC) != 0)
            throw std::system_error(errno, std::generic_category(), "pipe2");
        return { Fd(fds[0]), Fd(fds[1]) };
    }

    [[noreturn]] void child_fail(int err_fd)
    {
        int e = errno;
        [[maybe_unused]] auto n = ::write(err_fd, &e, sizeof e);
        ::_exit(127);
    }

    struct Capture
    {
        Fd fd;
        std::string* sink;
        std::size_t cap;
    };

    // Returns false once the pipe reached EOF.
    bool drain(Capture& c)
    {
        char buf[8192];
        while (true)
        {
            ssize_t n = ::read(c.fd.get(), buf, sizeof buf);
            if (n > 0)
            {
                std::size_t room = c.cap > c.sink->size() ? c.cap - c.sink->size() : 0;
                c.sink->append(buf, std::min<std::size_t>(room, static_cast<std::size_t>(n)));
                continue;
            }
            if (n == 0)
                return false;
            if (errno == EINTR)
                continue;
            return errno == EAGAIN || errno == EWOULDBLOCK;
        }
    }

} // namespace

SpawnOutcome spawn_and_wait(const SpawnSpec& spec)
{
    if (spec.argv.empty())
        throw GuestUnavailable("empty guest command");

    std::vector<std::string> env_storage;
    for (char** e = environ; *e; ++e)
        env_storage.emplace_back(*e);
    for (const auto& kv: spec.extra_env)
        env_storage.push_back(kv);
    std::vector<char*> envp;
    for (auto& s: env_storage)
        envp.push_back(s.data());
    envp.push_back(nullptr);

    std::vector<std::string> argv_storage = spec.argv;
    std::vector<char*> argv;
    for (auto& s: argv_storage)
        argv.push_back(s.data());
    argv.push_back(nullptr);

    std::string cwd = spec.cwd.string();
    auto out_pipe = make_pipe();
    auto err_pipe = make_pipe();
    auto status_pipe = make_pipe();

    rlimit mem {};
    if (spec.memory_cap)
        mem.rlim_cur = mem.rlim_max = static_cast<rlim_t>(*spec.memory_cap);

    auto start = Clock::now();
    pid_t pid = ::fork();
    if (pid < 0)
        throw GuestUnavailable(std::string("fork failed: ") + std::strerror(errno));
    if (pid == 0)
    {
        int report = status_pipe[1].get();
        ::setpgid(0, 0);
        int null_fd = ::open("/dev/null", O_RDONLY);
        if (null_fd < 0 || ::dup2(null_fd, 0) < 0)
            child_fail(report);
        if (::dup2(out_pipe[1].get(), 1) < 0 || ::dup2(err_pipe[1].get(), 2) < 0)
            child_fail(report);
        if (!cwd.empty() && ::chdir(cwd.c_str()) != 0)
            child_fail(report);
        if (spec.memory_cap && ::setrlimit(RLIMIT_AS, &mem) != 0)
            child_fail(report);
        ::execvpe(argv[0], argv.data(), envp.data());
        child_fail(report);
    }
    ::setpgid(pid, pid);

    out_pipe[1].reset();
    err_pipe[1].reset();
    status_pipe[1].reset();

    int exec_errno = 0;
    ssize_t got;
    do
        got = ::read(status_pipe[0].get(), &exec_errno, sizeof exec_errno);
    while (got < 0 && errno == EINTR);
    if (got > 0)
    {
        ::waitpid(pid, nullptr, 0);
        throw GuestUnavailable("cannot start '" + spec.argv.front() + "': " + std::strerror(exec_errno));
    }

    SpawnOutcome outcome;
    std::array<Capture, 2> captures { Capture { std::move(out_pipe[0]), &outcome.out, spec.capture_cap },
                                      Capture { std::move(err_pipe[0]), &outcome.err, spec.capture_cap } };
    for (auto& c: captures)
        ::fcntl(c.fd.get(), F_SETFL, ::fcntl(c.fd.get(), F_GETFL) | O_NONBLOCK);

    bool reaped = false;
    bool term_sent = false;
    bool kill_sent = false;
    Clock::time_point ended;
    int status = 0;

    while (true)
    {
        auto now = Clock::now();
        if (!reaped)
        {
            pid_t r = ::waitpid(pid, &status, WNOHANG);
            if (r == pid)
            {
                reaped = true;
                ended = now;
                // leftover descendants
                ::killpg(pid, SIGKILL);
            }
        }
        bool open_pipes = captures[0].fd.get() >= 0 || captures[1].fd.get() >= 0;
        if (reaped && (!open_pipes || now - ended > std::chrono::seconds(1)))
            break;

        auto elapsed = now - start;
        if (!reaped && spec.soft_deadline && !term_sent && elapsed >= *spec.soft_deadline)
        {
            ::killpg(pid, SIGTERM);
            term_sent = true;
            outcome.soft_deadline_hit = true;
        }
        if (!reaped && !kill_sent && elapsed >= spec.hard_deadline)
        {
            ::killpg(pid, SIGKILL);
            kill_sent = true;
            outcome.hard_deadline_hit = true;
        }

        std::array<pollfd, 2> fds {};
        nfds_t nfds = 0;
        std::array<Capture*, 2> which {};
        for (auto& c: captures)
            if (c.fd.get() >= 0)
            {
                which[nfds] = &c;
                fds[nfds++] = { c.fd.get(), POLLIN, 0 };
            }
        int wait_ms = 10;
        if (nfds == 0)
            ::usleep(wait_ms * 1000);
        else if (::poll(fds.data(), nfds, wait_ms) > 0)
        {
            for (nfds_t i = 0; i < nfds; ++i)
                if (fds[i].revents & (POLLIN | POLLHUP | POLLERR))
                    if (!drain(*which[i]))
                        which[i]->fd.reset();
        }
    }

    outcome.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(ended - start).count();
    if (WIFEXITED(status))
        outcome.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        outcome.exit_code = -WTERMSIG(status);
    return outcome;
}

ScratchDir::ScratchDir()
{
    std::string pattern = (std::filesystem::temp_directory_path() / "steerbench-XXXXXX").string();
    if (!::mkdtemp(pattern.data()))
        throw std::system_error(errno, std::generic_category(), "mkdtemp");
    _path = pattern;
}

ScratchDir::~ScratchDir()
{
    std::error_code ec;
    std::filesystem::remove_all(_path, ec);
}

} // namespace steerbench::sandbox::detail
