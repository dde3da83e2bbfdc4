#pragma once

#include <stdexcept>
#include <string>

namespace bitsync {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PositionOutOfRange : Error {
    using Error::Error;
};
struct TooManyEdits : Error {
    using Error::Error;
};
struct NoCodeword : Error {
    using Error::Error;
};
struct DensityOutOfRange : Error {
    using Error::Error;
};
struct BadBurstLength : Error {
    using Error::Error;
};
struct EmptyWindow : Error {
    using Error::Error;
};
struct BurstHypothesisFailed : Error {
    using Error::Error;
};
struct ProtocolViolation : Error {
    using Error::Error;
};
struct TransportClosed : Error {
    using Error::Error;
};
struct FrameCorrupt : Error {
    using Error::Error;
};
struct UnknownVersion : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ParamOutOfRange : Error {
    using Error::Error;
};

} // namespace bitsync
