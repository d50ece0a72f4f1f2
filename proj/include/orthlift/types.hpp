#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace orthlift {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Cplx = std::complex<double>;

inline constexpr double PI = 3.141592653589793238462643383279502884;

enum class ErrorCode {
    NotSymmetric,
    OddDiagonal,
    Singular,
    ZeroVector,
    BoundTooLargeForBoxSearch,
    NotFoundWithinBound,
    NotInDualLattice,
    PoleAtNonPositiveInteger,
    PoleAtOne,
    UnderflowToZero,
    BranchResolutionAmbiguous,
    DecompositionFailure,
    ConvergenceMarginViolated,
    NodeCountTooSmall,
    IllConditionedSplit,
    RegularizationRequired,
    EvaluationAtPole,
    OrbitIdentificationUnavailable,
    NoCuspInK,
    ZeroDenominator,
    DegenerateFrame,
    RadiusTooSmallForTolerance,
    DivisorEnumerationOverflow,
    UsageError,
    InternalError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code(code) {}
    ErrorCode code;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, ErrorCode code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

// Deterministic pairwise tree reduction.  The result depends only on the
// order of `terms`, so callers that sort their terms get reproducible sums
// independent of how the terms were produced.
template <class T>
T pairwise_sum(std::vector<T> terms) {
    if (terms.empty()) return T{};
    while (terms.size() > 1) {
        std::size_t half = (terms.size() + 1) / 2;
        for (std::size_t i = 0; 2 * i + 1 < terms.size(); ++i) terms[i] = terms[2 * i] + terms[2 * i + 1];
        if (terms.size() % 2 == 1) terms[half - 1] = terms.back();
        terms.resize(half);
    }
    return terms[0];
}

inline double to_double(const Rat& r) {
    return r.convert_to<double>();
}

inline long to_long(const Int& n) {
    return n.convert_to<long>();
}

}  // namespace orthlift
