#include "chessy/script.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "chessy/errors.hpp"
#include "chessy/transaction.hpp"

namespace chessy {

namespace {

std::uint64_t parse_u64_tok(const std::string& tok, int lineno) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(tok, &pos, 0);
        if (pos != tok.size())
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("script line " + std::to_string(lineno) + ": bad number '" + tok + "'");
    }
}

void check_size(std::uint64_t size, int lineno) {
    if (size < kMinTransferBytes || size > kMaxTransferBytes)
        throw EncodingBounds("script line " + std::to_string(lineno) + ": transfer size " +
                             std::to_string(size) + " outside 1..65536");
}

void validate_steps(const std::vector<Step>& steps) {
    for (const Step& s : steps) {
        if (const auto* r = std::get_if<ReadStep>(&s.v)) {
            if (r->size_bytes < kMinTransferBytes || r->size_bytes > kMaxTransferBytes)
                throw EncodingBounds("read size outside 1..65536");
        } else if (const auto* w = std::get_if<WriteStep>(&s.v)) {
            if (w->size_bytes < kMinTransferBytes || w->size_bytes > kMaxTransferBytes)
                throw EncodingBounds("write size outside 1..65536");
        } else if (const auto* l = std::get_if<LoopStep>(&s.v)) {
            validate_steps(l->body);
        }
    }
}

void print_steps(std::ostringstream& os, const std::vector<Step>& steps, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const Step& s : steps) {
        if (const auto* c = std::get_if<ComputeStep>(&s.v)) {
            os << pad << "compute " << c->cycles << "\n";
        } else if (const auto* r = std::get_if<ReadStep>(&s.v)) {
            os << pad << "read 0x" << std::hex << r->addr << std::dec << " " << r->size_bytes
               << "\n";
        } else if (const auto* w = std::get_if<WriteStep>(&s.v)) {
            os << pad << "write 0x" << std::hex << w->addr << std::dec << " " << w->size_bytes
               << " seed=" << w->seed << "\n";
        } else if (const auto* l = std::get_if<LoopStep>(&s.v)) {
            os << pad << "loop " << l->count << "\n";
            print_steps(os, l->body, indent + 1);
            os << pad << "end\n";
        }
    }
}

} // namespace

WorkloadScript parse_script(std::istream& in) {
    WorkloadScript script;
    std::vector<std::vector<Step>*> scope{&script.steps};
    std::vector<LoopStep*> open_loops;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op))
            continue;

        if (op == "compute") {
            std::string cycles;
            if (!(ls >> cycles))
                throw ConfigError("script line " + std::to_string(lineno) +
                                  ": compute needs a cycle count");
            scope.back()->push_back(Step{ComputeStep{parse_u64_tok(cycles, lineno)}});
        } else if (op == "read") {
            std::string addr, size;
            if (!(ls >> addr >> size))
                throw ConfigError("script line " + std::to_string(lineno) +
                                  ": read needs ADDR SIZE");
            ReadStep step{parse_u64_tok(addr, lineno), parse_u64_tok(size, lineno)};
            check_size(step.size_bytes, lineno);
            scope.back()->push_back(Step{step});
        } else if (op == "write") {
            std::string addr, size;
            if (!(ls >> addr >> size))
                throw ConfigError("script line " + std::to_string(lineno) +
                                  ": write needs ADDR SIZE [seed=N]");
            WriteStep step{parse_u64_tok(addr, lineno), parse_u64_tok(size, lineno), 0};
            check_size(step.size_bytes, lineno);
            std::string extra;
            if (ls >> extra) {
                if (extra.rfind("seed=", 0) != 0)
                    throw ConfigError("script line " + std::to_string(lineno) +
                                      ": expected seed=N, got '" + extra + "'");
                step.seed = parse_u64_tok(extra.substr(5), lineno);
            }
            scope.back()->push_back(Step{step});
        } else if (op == "loop") {
            std::string count;
            if (!(ls >> count))
                throw ConfigError("script line " + std::to_string(lineno) +
                                  ": loop needs a count");
            scope.back()->push_back(Step{LoopStep{parse_u64_tok(count, lineno), {}}});
            auto* loop = std::get_if<LoopStep>(&scope.back()->back().v);
            open_loops.push_back(loop);
            scope.push_back(&loop->body);
        } else if (op == "end") {
            if (open_loops.empty())
                throw ConfigError("script line " + std::to_string(lineno) +
                                  ": 'end' without open loop");
            open_loops.pop_back();
            scope.pop_back();
        } else {
            throw ConfigError("script line " + std::to_string(lineno) + ": unknown step '" + op +
                              "'");
        }

        std::string trailing;
        if (ls >> trailing)
            throw ConfigError("script line " + std::to_string(lineno) + ": trailing token '" +
                              trailing + "'");
    }
    if (!open_loops.empty())
        throw ConfigError("script ends inside an open loop");
    return script;
}

WorkloadScript load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open script '" + path + "'");
    return parse_script(in);
}

std::string to_text(const WorkloadScript& script) {
    std::ostringstream os;
    print_steps(os, script.steps, 0);
    return os.str();
}

void validate_script(const WorkloadScript& script) {
    validate_steps(script.steps);
}

ScriptCursor::ScriptCursor(const WorkloadScript& script) {
    stack_.push_back(Frame{&script.steps, 0, 0});
}

std::optional<PrimStep> ScriptCursor::next() {
    while (!stack_.empty()) {
        Frame& top = stack_.back();
        if (top.index >= top.steps->size()) {
            if (top.remaining_repeats > 0) {
                --top.remaining_repeats;
                top.index = 0;
                continue;
            }
            stack_.pop_back();
            continue;
        }
        const Step& step = (*top.steps)[top.index];
        ++top.index;
        if (const auto* c = std::get_if<ComputeStep>(&step.v))
            return PrimStep{*c};
        if (const auto* r = std::get_if<ReadStep>(&step.v))
            return PrimStep{*r};
        if (const auto* w = std::get_if<WriteStep>(&step.v))
            return PrimStep{*w};
        const auto& loop = std::get<LoopStep>(step.v);
        if (loop.count > 0 && !loop.body.empty())
            stack_.push_back(Frame{&loop.body, 0, loop.count - 1});
    }
    return std::nullopt;
}

} // namespace chessy
