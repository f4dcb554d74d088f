#pragma once

#include <stdexcept>
#include <string>

namespace hypconf {

// Base of every error thrown by the library. Callers that only care about
// "the input was unusable" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a scalar function (e.g. half_sinh(0)).
class DomainError : public Error {
public:
    using Error::Error;
};

// A triangle whose lengths do not close up (cosine outside [-1, 1]).
class DegenerateTriangle : public Error {
public:
    explicit DegenerateTriangle(const std::string& what, int triangle = -1)
        : Error(what), triangle_(triangle) {}
    int triangle() const { return triangle_; }

private:
    int triangle_;
};

// Four sides that admit no cyclic quadrilateral.
class InfeasibleQuad : public Error {
public:
    using Error::Error;
};

// The quadrilateral around an edge is not strictly convex, so the other
// diagonal does not lie inside it.
class FoldingQuad : public Error {
public:
    explicit FoldingQuad(const std::string& what, int edge = -1)
        : Error(what), edge_(edge) {}
    int edge() const { return edge_; }

private:
    int edge_;
};

// Malformed gluing data or metric; the message names the offending element.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Both sides of the edge belong to one triangle.
class UnflippableEdge : public Error {
public:
    explicit UnflippableEdge(const std::string& what, int edge = -1)
        : Error(what), edge_(edge) {}
    int edge() const { return edge_; }

private:
    int edge_;
};

// A flip algorithm exceeded its iteration cap.
class FlipLimitExceeded : public Error {
public:
    FlipLimitExceeded(const std::string& what, int worst_edge, double worst_excess)
        : Error(what), worst_edge_(worst_edge), worst_excess_(worst_excess) {}
    int worst_edge() const { return worst_edge_; }
    double worst_excess() const { return worst_excess_; }

private:
    int worst_edge_;
    double worst_excess_;
};

// Curvature target outside the admissible polytope, or a solver called on a
// surface that violates its hypothesis.
class InvalidTarget : public Error {
public:
    using Error::Error;
};

// Two inputs that cannot be related by this library (no shared flip ancestry).
class UnsupportedInput : public Error {
public:
    using Error::Error;
};

// API misuse, e.g. comparing lambda-lengths on different triangulations.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace hypconf
