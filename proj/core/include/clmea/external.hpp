#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clmea/problems.hpp"
#include "clmea/types.hpp"

namespace clmea {

enum class ObjectiveSense { kMinimize, kMaximize };

/// How to launch and talk to an out-of-process objective evaluator.
struct ExternalEvaluatorSpec {
    std::vector<std::string> command;  // argv; command[0] is resolved via PATH
    std::size_t num_objectives = 2;
    BoundsBox bounds;
    std::chrono::milliseconds timeout{60000};
    std::vector<ObjectiveSense> senses;  // empty means all minimized
};

/// Formats a double so that parsing it back yields the identical value.
std::string format_exact(double value);

/// Child process speaking the line protocol
///
///     parent: HELLO 1                 child: READY <M> <D>
///     parent: EVAL <fe> <x1> .. <xD>  child: OBJ <fe> <f1> .. <fM>
///     parent: BYE
///
/// over its standard input and output. Maximized objectives are negated on
/// receipt. One request is in flight at a time.
class ExternalEvaluator {
public:
    /// Spawns the process and performs the handshake. Throws ProtocolError on a
    /// mismatched handshake, EvalTimeout/EvalFailure if the child misbehaves.
    explicit ExternalEvaluator(ExternalEvaluatorSpec spec);
    ~ExternalEvaluator();

    ExternalEvaluator(const ExternalEvaluator&) = delete;
    ExternalEvaluator& operator=(const ExternalEvaluator&) = delete;

    ObjectiveVector evaluate(std::span<const double> x, std::int64_t fe_index);

    const ExternalEvaluatorSpec& spec() const noexcept { return spec_; }
    bool alive() const noexcept { return pid_ > 0; }

private:
    void write_line(const std::string& line, std::int64_t fe_index);
    std::string read_line(std::int64_t fe_index);
    [[noreturn]] void fail_from_exit(std::int64_t fe_index);
    void terminate_child();

    ExternalEvaluatorSpec spec_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

inline ObjectiveVector external_evaluate(ExternalEvaluator& evaluator, std::span<const double> x,
                                         std::int64_t fe_index) {
    return evaluator.evaluate(x, fe_index);
}

class ExternalProblem final : public Problem {
public:
    explicit ExternalProblem(ExternalEvaluatorSpec spec);

    std::size_t num_objectives() const override { return evaluator_.spec().num_objectives; }
    const BoundsBox& bounds() const override { return evaluator_.spec().bounds; }
    std::string name() const override { return "external"; }
    ObjectiveVector evaluate(std::span<const double> x, std::int64_t fe_index) override {
        return evaluator_.evaluate(x, fe_index);
    }

private:
    ExternalEvaluator evaluator_;
};

} // namespace clmea
