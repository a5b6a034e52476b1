#pragma once

#include <stdexcept>
#include <string>

namespace negsym {

// Failure categories surfaced by the library. The CLI maps these onto
// process exit codes, so every throw site must pick the right one.
enum class Errc {
    file_not_found,
    unsupported_format,
    degenerate_image,
    zero_variance_image,
    too_few_samples,
    zero_variance_curve,
    near_gaussian_image,
    size_mismatch,
    invalid_spec,
    invalid_config,
    io_error,
    missing_image,
    malformed_manifest,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

    // Exit codes: 2 input error, 3 degenerate image, 4 near-Gaussian indeterminate.
    int exit_code() const noexcept {
        switch (code_) {
            case Errc::degenerate_image:
            case Errc::zero_variance_image:
                return 3;
            case Errc::near_gaussian_image:
                return 4;
            default:
                return 2;
        }
    }

private:
    Errc code_;
};

}  // namespace negsym
