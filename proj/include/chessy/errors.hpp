#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chessy {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Transaction size outside the 1..65536 byte mailbox bound.
class EncodingBounds : public Error {
public:
    using Error::Error;
};

/// Mailbox bytes decode to an invalid TransactionRecord.
class MalformedMailbox : public Error {
public:
    using Error::Error;
};

/// A peripheral request violates the device contract (e.g. partial samples).
class MalformedRequest : public Error {
public:
    using Error::Error;
};

/// 64-bit time or size arithmetic would overflow.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Access to a bus address with no mapped peripheral.
class BusError : public Error {
public:
    explicit BusError(std::uint64_t addr);
    std::uint64_t addr;
};

/// Bad configuration: files, flags, map/script/symbol syntax.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Target reported a timestamp behind the simulation clock; the protocol
/// cannot produce this, so it signals a broken target or codec.
class TimeRegression : public Error {
public:
    using Error::Error;
};

/// Overhead is undefined because the baseline duration is zero.
class DegenerateBaseline : public Error {
public:
    using Error::Error;
};

// --- debugger-link errors -------------------------------------------------

/// Base class for transport-level failures on the debugger link.
class LinkError : public Error {
public:
    using Error::Error;
};

/// No data from the peer within the configured timeout.
class LinkTimeout : public LinkError {
public:
    using LinkError::LinkError;
};

/// Packet framing violated ($/# structure, stray bytes, RLE replies).
class FramingError : public LinkError {
public:
    using LinkError::LinkError;
};

/// Frame checksum does not match its payload.
class ChecksumMismatch : public LinkError {
public:
    using LinkError::LinkError;
};

/// The target answered a request with an Exx error reply (or rejected it as
/// unsupported).
class TargetError : public Error {
public:
    explicit TargetError(int code);
    TargetError(int code, const std::string& what);
    int code;
};

/// Stop reply payload is neither S../T.. nor W...
class UnknownStopReply : public Error {
public:
    using Error::Error;
};

} // namespace chessy
