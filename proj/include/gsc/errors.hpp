#pragma once

#include <stdexcept>
#include <string>

namespace gsc {

/// Base class for all library errors. Subclasses name the contract that was
/// violated so callers and tests can catch a specific failure mode.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GSC_DEFINE_ERROR(NAME)                                    \
    class NAME : public Error {                                   \
    public:                                                       \
        explicit NAME(const std::string& msg) : Error(msg) {}     \
    }

// graph construction and spectral decomposition
GSC_DEFINE_ERROR(AsymmetricInputError);
GSC_DEFINE_ERROR(NegativeWeightError);
GSC_DEFINE_ERROR(NonzeroDiagonalError);
GSC_DEFINE_ERROR(IsolatedNodeError);
GSC_DEFINE_ERROR(DimensionMismatchError);
GSC_DEFINE_ERROR(InvalidPermutationError);
GSC_DEFINE_ERROR(ConvergenceFailureError);
GSC_DEFINE_ERROR(ConnectivityRetryExhaustedError);
GSC_DEFINE_ERROR(FileFormatError);

// wavelet banks
GSC_DEFINE_ERROR(DegenerateSpectrumError);
GSC_DEFINE_ERROR(SingularCubicSystemError);
GSC_DEFINE_ERROR(InvalidBankParameterError);
GSC_DEFINE_ERROR(ScaleOutOfRangeError);
GSC_DEFINE_ERROR(DomainMismatchError);
GSC_DEFINE_ERROR(ZeroFrameLowerBoundError);

// scattering
GSC_DEFINE_ERROR(PathBudgetExceededError);
GSC_DEFINE_ERROR(ConfigMismatchError);

// perturbation
GSC_DEFINE_ERROR(InfeasibleEpsError);
GSC_DEFINE_ERROR(TooLargeForExactError);

// classification
GSC_DEFINE_ERROR(EmptyDatasetError);
GSC_DEFINE_ERROR(SingleClassDatasetError);
GSC_DEFINE_ERROR(LengthMismatchError);

// corpus ingestion
GSC_DEFINE_ERROR(EmptyCorpusError);
GSC_DEFINE_ERROR(EmptyExcerptError);
GSC_DEFINE_ERROR(NoCooccurrencesError);
GSC_DEFINE_ERROR(InsufficientCorpusError);

// experiment configuration and execution
GSC_DEFINE_ERROR(ConfigError);
GSC_DEFINE_ERROR(DataError);
GSC_DEFINE_ERROR(BoundViolationError);

#undef GSC_DEFINE_ERROR

} // namespace gsc
