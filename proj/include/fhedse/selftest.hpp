// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fhedse {

struct CheckResult {
    CheckResult() = default;
    explicit CheckResult(std::string name) : name(std::move(name)) {}

    std::string name;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
    std::string detail;

    bool passed() const { return failures == 0; }
};

// Independent oracles. These evaluate the defining sums directly with their
// own 128-bit arithmetic; they share only the transform parameters (q, psi)
// with the implementation under test, never its code paths.

/// Direct O(n^2) negacyclic evaluation: out[k] = sum_j a[j] * psi^((2k+1)*j).
std::vector<std::uint32_t> oracle_negacyclic_dft(const std::vector<std::uint32_t>& a,
                                                 std::uint32_t q, std::uint32_t psi);

/// Schoolbook product in Z_q[x]/(x^n + 1).
std::vector<std::uint32_t> oracle_negacyclic_convolution(const std::vector<std::uint32_t>& a,
                                                         const std::vector<std::uint32_t>& b,
                                                         std::uint32_t q);

struct NttCheckOptions {
    std::vector<std::size_t> sizes = {4, 8, 16, 64, 256};
    std::size_t vectors = 50;
    std::uint64_t seed = 0;
    bool inject_fault = false;  // corrupts one four-step result; the suite must notice
};

std::vector<CheckResult> run_ntt_checks(const NttCheckOptions& options);

struct TransposeCheckOptions {
    std::vector<std::size_t> tile_sizes = {1, 2, 4, 8, 16, 32};
};

std::vector<CheckResult> run_transpose_checks(const TransposeCheckOptions& options);

struct RnsCheckOptions {
    std::uint64_t seed = 0;
    std::size_t random_cases = 10000;
};

std::vector<CheckResult> run_rns_checks(const RnsCheckOptions& options);

/// Scalar-vs-SIMD equivalence over randomized rows; a no-op single-backend
/// pass when only the scalar backend exists.
std::vector<CheckResult> run_kernel_checks(std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace fhedse
