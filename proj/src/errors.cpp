#include "chessy/errors.hpp"

#include "chessy/hex.hpp"

namespace chessy {

BusError::BusError(std::uint64_t a)
    : Error("no peripheral mapped at 0x" + hex_u64(a)), addr(a) {}

namespace {
std::string exx(int c) {
    std::string s = "target error reply E";
    s.push_back(kHexDigits[(c >> 4) & 0xF]);
    s.push_back(kHexDigits[c & 0xF]);
    return s;
}
} // namespace

TargetError::TargetError(int c) : Error(exx(c)), code(c) {}

TargetError::TargetError(int c, const std::string& what) : Error(what), code(c) {}

} // namespace chessy
