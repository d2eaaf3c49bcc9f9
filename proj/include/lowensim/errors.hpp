#pragma once

#include <stdexcept>
#include <string>

namespace lowensim {

// Exception taxonomy used across the toolkit. Each operation documents which
// of these it can throw; everything derives from Error so callers can catch
// coarsely at the CLI boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define LOWENSIM_DEFINE_ERROR(Name)                                            \
    struct Name : Error {                                                      \
        explicit Name(const std::string& what_arg) : Error(#Name ": " + what_arg) {} \
    }

LOWENSIM_DEFINE_ERROR(NotHermitian);
LOWENSIM_DEFINE_ERROR(NotUnitary);
LOWENSIM_DEFINE_ERROR(NotSelfInverse);
LOWENSIM_DEFINE_ERROR(EmptyProjection);
LOWENSIM_DEFINE_ERROR(DimMismatch);
LOWENSIM_DEFINE_ERROR(ShapeMismatch);
LOWENSIM_DEFINE_ERROR(NormExceeded);
LOWENSIM_DEFINE_ERROR(DomainError);
LOWENSIM_DEFINE_ERROR(EpsilonRange);
LOWENSIM_DEFINE_ERROR(FitFailed);
LOWENSIM_DEFINE_ERROR(CertificationFailed);
LOWENSIM_DEFINE_ERROR(SolverFailure);
LOWENSIM_DEFINE_ERROR(UnnormalizedPolynomial);
LOWENSIM_DEFINE_ERROR(MixedParity);
LOWENSIM_DEFINE_ERROR(NotRegular);
LOWENSIM_DEFINE_ERROR(Disconnected);
LOWENSIM_DEFINE_ERROR(TooLarge);
LOWENSIM_DEFINE_ERROR(DegenerateGroundState);
LOWENSIM_DEFINE_ERROR(StateNotLowEnergy);
LOWENSIM_DEFINE_ERROR(PreconditionViolated);
LOWENSIM_DEFINE_ERROR(ConfigInvalid);
LOWENSIM_DEFINE_ERROR(ExperimentFailed);

#undef LOWENSIM_DEFINE_ERROR

}  // namespace lowensim
