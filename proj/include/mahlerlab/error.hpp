#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

/* Base class for every error raised by the library.  Catching mahler::Error
   is enough to intercept any domain failure; std::exception still works. */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Input does not span a full-dimensional body (fewer than four affinely
   independent points in 3D, fewer than three in 2D). */
struct DegenerateInput : Error {
    using Error::Error;
};

/* An operation that needs the origin strictly inside the body was called on
   a body whose interior misses the origin. */
struct OriginNotInterior : Error {
    using Error::Error;
};

/* A direction argument was (numerically) the zero vector. */
struct ZeroDirection : Error {
    using Error::Error;
};

/* A polar or product evaluation was requested at a center that is not
   strictly interior. */
struct PointNotInterior : Error {
    using Error::Error;
};

/* An iterative solver exhausted its restart budget without meeting its
   convergence criteria. */
struct ConvergenceFailure : Error {
    using Error::Error;
};

/* A claimed orthogonal generator fails g g^T = E beyond tolerance. */
struct NotOrthogonal : Error {
    using Error::Error;
};

/* Group closure exceeded the hard element cap, i.e. the generators do not
   generate a (small) finite group. */
struct GroupTooLarge : Error {
    using Error::Error;
};

/* Name lookup failed (group family, catalog body, named cycle, ...). */
struct UnknownName : Error {
    using Error::Error;
};

/* A family parameter (cyclic order, seed count, ...) is out of range. */
struct BadOrder : Error {
    using Error::Error;
};

/* A point that must lie on the body's boundary does not (gauge != 1). */
struct NotOnBoundary : Error {
    using Error::Error;
};

/* A sector angle lies outside the open interval (0, pi). */
struct BadAngle : Error {
    using Error::Error;
};

/* The structural hypothesis of a checked inequality does not hold for the
   given data (e.g. the rotation relation between the two boundary pairs). */
struct HypothesisViolated : Error {
    using Error::Error;
};

/* A curve that must be closed is not. */
struct NotClosed : Error {
    using Error::Error;
};

/* A curve whose radial projection must be simple self-intersects or is
   otherwise unusable for patch extraction. */
struct SelfIntersecting : Error {
    using Error::Error;
};

/* The body is not invariant under the requested group. */
struct NotInvariant : Error {
    using Error::Error;
};

/* No certified bound chain exists for the requested group. */
struct UnsupportedGroup : Error {
    using Error::Error;
};

/* Malformed input file or string. */
struct ParseError : Error {
    using Error::Error;
};

} // namespace mahler
