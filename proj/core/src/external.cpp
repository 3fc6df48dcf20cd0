#include "clmea/external.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <csignal>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "clmea/errors.hpp"

namespace clmea {
namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) {
        tokens.push_back(t);
    }
    return tokens;
}

bool parse_double(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_int(const std::string& token, std::int64_t& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

std::string format_exact(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), ptr};
}

ExternalEvaluator::ExternalEvaluator(ExternalEvaluatorSpec spec) : spec_(std::move(spec)) {
    require(!spec_.command.empty(), "ExternalEvaluator: empty command");
    require(spec_.bounds.dim() >= 1, "ExternalEvaluator: bounds required");
    require(spec_.senses.empty() || spec_.senses.size() == spec_.num_objectives,
            "ExternalEvaluator: one sense per objective");

    // A child that exits early must surface as an error, not kill the parent.
    std::signal(SIGPIPE, SIG_IGN);

    int in_pipe[2];
    int out_pipe[2];
    if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0) {
        throw EvalFailure(std::string("cannot create pipes: ") + std::strerror(errno), 0);
    }
    const pid_t pid = fork();
    if (pid < 0) {
        throw EvalFailure(std::string("fork failed: ") + std::strerror(errno), 0);
    }
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        std::vector<char*> argv;
        for (auto& arg : spec_.command) {
            argv.push_back(arg.data());
        }
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];

    write_line("HELLO 1", 0);
    const auto tokens = split_tokens(read_line(0));
    std::int64_t m = 0;
    std::int64_t d = 0;
    if (tokens.size() != 3 || tokens[0] != "READY" || !parse_int(tokens[1], m) || !parse_int(tokens[2], d)) {
        terminate_child();
        throw ProtocolError("malformed handshake reply", 0);
    }
    if (static_cast<std::size_t>(m) != spec_.num_objectives || static_cast<std::size_t>(d) != spec_.bounds.dim()) {
        terminate_child();
        throw ProtocolError("handshake reports M=" + tokens[1] + " D=" + tokens[2] + ", expected M=" +
                                std::to_string(spec_.num_objectives) + " D=" + std::to_string(spec_.bounds.dim()),
                            0);
    }
}

ExternalEvaluator::~ExternalEvaluator() {
    if (pid_ > 0) {
        const std::string bye = "BYE\n";
        [[maybe_unused]] const auto n = ::write(to_child_, bye.data(), bye.size());
        close(to_child_);
        to_child_ = -1;
        // Give a well-behaved child a moment to exit on its own.
        for (int i = 0; i < 100; ++i) {
            int status = 0;
            if (waitpid(pid_, &status, WNOHANG) == pid_) {
                pid_ = -1;
                break;
            }
            usleep(10000);
        }
        terminate_child();
    }
    if (from_child_ >= 0) {
        close(from_child_);
    }
    if (to_child_ >= 0) {
        close(to_child_);
    }
}

void ExternalEvaluator::terminate_child() {
    if (pid_ > 0) {
        kill(pid_, SIGKILL);
        int status = 0;
        waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

void ExternalEvaluator::fail_from_exit(std::int64_t fe_index) {
    int status = 0;
    if (pid_ > 0) {
        waitpid(pid_, &status, 0);
        pid_ = -1;
    }
    if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
        throw ProtocolError("evaluator closed its output mid-protocol", fe_index);
    }
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    throw EvalFailure("evaluator exited with status " + std::to_string(code), fe_index);
}

void ExternalEvaluator::write_line(const std::string& line, std::int64_t fe_index) {
    if (pid_ <= 0) {
        throw EvalFailure("evaluator is not running", fe_index);
    }
    const std::string data = line + "\n";
    std::size_t written = 0;
    while (written < data.size()) {
        const ssize_t n = ::write(to_child_, data.data() + written, data.size() - written);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            fail_from_exit(fe_index);
        }
        written += static_cast<std::size_t>(n);
    }
}

std::string ExternalEvaluator::read_line(std::int64_t fe_index) {
    const auto deadline = std::chrono::steady_clock::now() + spec_.timeout;
    for (;;) {
        const auto newline = buffer_.find('\n');
        if (newline != std::string::npos) {
            std::string line = buffer_.substr(0, newline);
            buffer_.erase(0, newline + 1);
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            return line;
        }
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            terminate_child();
            throw EvalTimeout("evaluator did not answer within " + std::to_string(spec_.timeout.count()) + " ms",
                              fe_index);
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int ready = poll(&pfd, 1, static_cast<int>(remaining.count()));
        if (ready < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw EvalFailure(std::string("poll failed: ") + std::strerror(errno), fe_index);
        }
        if (ready == 0) {
            continue;
        }
        std::array<char, 4096> chunk{};
        const ssize_t n = ::read(from_child_, chunk.data(), chunk.size());
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw EvalFailure(std::string("read failed: ") + std::strerror(errno), fe_index);
        }
        if (n == 0) {
            fail_from_exit(fe_index);
        }
        buffer_.append(chunk.data(), static_cast<std::size_t>(n));
    }
}

ObjectiveVector ExternalEvaluator::evaluate(std::span<const double> x, std::int64_t fe_index) {
    require(x.size() == spec_.bounds.dim(), "external_evaluate: dimension mismatch");
    std::string request = "EVAL " + std::to_string(fe_index);
    for (const double v : x) {
        request += ' ';
        request += format_exact(v);
    }
    write_line(request, fe_index);

    const std::string reply = read_line(fe_index);
    const auto tokens = split_tokens(reply);
    const std::size_t m = spec_.num_objectives;
    std::int64_t echoed = 0;
    if (tokens.size() < 2 || tokens[0] != "OBJ" || !parse_int(tokens[1], echoed)) {
        throw ProtocolError("malformed reply '" + reply + "'", fe_index);
    }
    if (echoed != fe_index) {
        throw ProtocolError("reply for fe_index " + tokens[1], fe_index);
    }
    if (tokens.size() != m + 2) {
        throw ProtocolError("reply carries " + std::to_string(tokens.size() - 2) + " objectives, expected " +
                                std::to_string(m),
                            fe_index);
    }
    ObjectiveVector f(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (!parse_double(tokens[k + 2], f[k]) || !std::isfinite(f[k])) {
            throw ProtocolError("unparseable objective '" + tokens[k + 2] + "'", fe_index);
        }
        if (!spec_.senses.empty() && spec_.senses[k] == ObjectiveSense::kMaximize) {
            f[k] = -f[k];
        }
    }
    return f;
}

ExternalProblem::ExternalProblem(ExternalEvaluatorSpec spec) : evaluator_(std::move(spec)) {}

} // namespace clmea
