#include "chessy/symbols.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "chessy/errors.hpp"

namespace chessy {

TargetLayout parse_symbols(std::istream& in) {
    TargetLayout layout;
    bool have_stub = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string name, addr_tok;
        if (!(ls >> name))
            continue;
        if (!(ls >> addr_tok))
            throw ConfigError("symbols line " + std::to_string(lineno) + ": expected NAME ADDRESS");
        std::uint64_t addr = 0;
        try {
            std::size_t pos = 0;
            addr = std::stoull(addr_tok, &pos, 0);
            if (pos != addr_tok.size())
                throw std::invalid_argument(addr_tok);
        } catch (const std::exception&) {
            throw ConfigError("symbols line " + std::to_string(lineno) + ": bad address '" +
                              addr_tok + "'");
        }
        if (name == "chessy_access") {
            layout.chessy_access = addr;
            have_stub = true;
        } else if (name == "mailbox") {
            layout.mailbox = addr;
        } else if (name == "mailbox_data") {
            layout.mailbox_data = addr;
        } else if (name == "mtime") {
            layout.mtime = addr;
        }
        // other symbols are allowed and ignored
    }
    if (!have_stub)
        throw ConfigError("symbol file does not define chessy_access");
    return layout;
}

TargetLayout load_symbols(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open symbol file '" + path + "'");
    return parse_symbols(in);
}

} // namespace chessy
