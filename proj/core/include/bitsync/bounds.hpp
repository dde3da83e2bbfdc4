#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace bitsync {

struct BoundReport {
    std::string name;
    double value = 0; // bits
    std::map<std::string, double> inputs;
    std::map<std::string, double> extras; // companion quantities (error prob, N21, ...)
};

// log2 C(n, t) via log-gamma (overflow-safe).
double log2_binomial(std::uint64_t n, std::uint64_t t);

// Exact big-integer log2 C(n, t); oracle for the lgamma path (n <= ~10^4).
double log2_binomial_exact(std::uint64_t n, std::uint64_t t);

// Q_t bound: number of supersequences reachable by t insertions into a
// length-m string, sum_{l=0..t} C(m+t, l). Exact; DomainError on overflow.
std::uint64_t count_insertions_supersequences(std::uint64_t m, std::uint64_t t);

// P_t lower bound from the run count: C(R - t + 1, t), 0 when out of range.
std::uint64_t deletion_lb_from_runs(std::uint64_t R, std::uint64_t t);

// Delta_{m,eps} = sqrt(2/(m-1) * ln(1/eps)).
double delta_m_eps(std::uint64_t m, double eps);

// Fundamental limits: log2 C(n, t) for deletions; the insertion variant uses
// m = n + t and the run-count floor (m/2)(1 - Delta_{m,eps}).
double min_bits_deletions(std::uint64_t n, std::uint64_t t);
double min_bits_insertions(std::uint64_t n, std::uint64_t t, double eps);

// N_burst(B) > B + log2 n.
double burst_lb(std::uint64_t n, std::uint64_t B);

// Theorem bound evaluators:
//   1: params n, t, c (c > 1.5)          -> E N12 bound; extras N21, Pe
//   2: params n, a, b, c_a, c_h          -> E N12 bound; extras N21, Pe
//   3: params n, B                       -> E N12 upper; extras lower, N21
BoundReport thm_bounds(int theorem, const std::map<std::string, double>& params);

} // namespace bitsync
