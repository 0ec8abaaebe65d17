// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_ERRORS_HPP
#define K3SHIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace k3shim {

// Error taxonomy shared across the library.  Codes are stable identifiers;
// the CLI maps them onto exit statuses.
enum class errc {
    invalid_prime,
    not_recognized,
    degenerate_basis,
    no_square_root_at_point,
    not_k3,
    singular_model,
    smooth_fiber,
    internal_error,
    not_a_section,
    dependent_sections,
    invalid_assignment,
    precondition_violated,
    needs_renormalization,
    wrong_discriminant,
    degenerate_curve,
    singular_quartic,
    computation_mismatch,
    catalog_corrupt,
    verification_failed,
    bad_reduction,
    not_found,
    lift_stuck,
    invalid_argument,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_prime: return "InvalidPrime";
        case errc::not_recognized: return "NotRecognized";
        case errc::degenerate_basis: return "DegenerateBasis";
        case errc::no_square_root_at_point: return "NoSquareRootAtPoint";
        case errc::not_k3: return "NotK3";
        case errc::singular_model: return "SingularModel";
        case errc::smooth_fiber: return "SmoothFiber";
        case errc::internal_error: return "InternalError";
        case errc::not_a_section: return "NotASection";
        case errc::dependent_sections: return "DependentSections";
        case errc::invalid_assignment: return "InvalidAssignment";
        case errc::precondition_violated: return "PreconditionViolated";
        case errc::needs_renormalization: return "NeedsRenormalization";
        case errc::wrong_discriminant: return "WrongDiscriminant";
        case errc::degenerate_curve: return "DegenerateCurve";
        case errc::singular_quartic: return "SingularQuartic";
        case errc::computation_mismatch: return "ComputationMismatch";
        case errc::catalog_corrupt: return "CatalogCorrupt";
        case errc::verification_failed: return "VerificationFailed";
        case errc::bad_reduction: return "BadReduction";
        case errc::not_found: return "NotFound";
        case errc::lift_stuck: return "LiftStuck";
        case errc::invalid_argument: return "InvalidArgument";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace k3shim

#endif
