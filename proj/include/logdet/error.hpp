#pragma once

#include <stdexcept>
#include <string>

namespace logdet {

/// Library failure carrying a short machine-readable code such as
/// "dimension", "bad-config", "domain" or "mm-parse".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// The sketched matrix had fewer numerically independent directions than requested.
class RankDeficientError : public Error {
public:
    RankDeficientError(long achieved, long requested)
        : Error("rank-deficient", "achieved rank " + std::to_string(achieved) + " < requested " +
                                      std::to_string(requested)),
          achieved_(achieved) {}

    long achieved_rank() const noexcept { return achieved_; }

private:
    long achieved_;
};

} // namespace logdet
