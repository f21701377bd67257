#pragma once

#include <cstdint>
#include <limits>

namespace psearch {

// Absolute tolerance for every floating-point comparison in the library
// (distances, budgets, probabilities). Stated once, used globally.
inline constexpr double kTolerance = 1e-9;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool approx_leq(double a, double b) { return a <= b + kTolerance; }
inline bool approx_geq(double a, double b) { return a + kTolerance >= b; }
inline bool approx_eq(double a, double b) { return approx_leq(a, b) && approx_leq(b, a); }

// Outcome of a solver call. `ok` covers both optimal and heuristic hits;
// the rest name the specific way a solve can come back empty-handed.
enum class SolveStatus {
    ok,
    infeasible,            // target probability exceeds what the instance offers
    no_solution,           // restricted search space contains no feasible plan
    stuck,                 // constructive heuristic ran out of candidates
    not_uniform,           // instance violates the equal-cost/equal-probability precondition
    insufficient_vertices, // not enough vertices reachable to span the request
    limit_exceeded,        // expansion or wall-clock cap hit; best incumbent returned
};

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::ok: return "OK";
        case SolveStatus::infeasible: return "INFEASIBLE";
        case SolveStatus::no_solution: return "NO_SOLUTION";
        case SolveStatus::stuck: return "STUCK";
        case SolveStatus::not_uniform: return "NOT_UNIFORM";
        case SolveStatus::insufficient_vertices: return "INSUFFICIENT_VERTICES";
        case SolveStatus::limit_exceeded: return "LIMIT_EXCEEDED";
    }
    return "UNKNOWN";
}

// Caps shared by the branch-and-bound style solvers. A zero time limit
// means no wall-clock bound.
struct SearchLimits {
    std::uint64_t max_expansions = 10'000'000;
    int max_vertices = 64;
    double time_limit_ms = 0.0;
};

} // namespace psearch
