#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace chessy {

/// Fixed target-side addresses of the co-emulation contract. The access stub
/// lives at a known address published through a symbol file; the mailbox,
/// its data buffer and the memory-mapped timer sit at platform constants.
struct TargetLayout {
    std::uint64_t chessy_access = 0x0000'1000; // breakpoint address of the access stub
    std::uint64_t mailbox = 0x8000'0000;       // 40-byte TransactionRecord
    std::uint64_t mailbox_data = 0x8000'0100;  // payload buffer
    std::uint64_t mtime = 0x0200'BFF8;         // CLINT machine timer, 8 bytes LE
};

/// Symbol file: `name address` per line, '#' comments. Recognized names
/// (chessy_access, mailbox, mailbox_data, mtime) override the defaults;
/// chessy_access is required.
TargetLayout parse_symbols(std::istream& in);
TargetLayout load_symbols(const std::string& path);

} // namespace chessy
