// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "fhedse/modulus.hpp"

namespace fhedse {

/// How an n-point transform is decomposed across pipeline dimensions.
struct Factorization {
    enum class Kind { naive, four_step, three_step };

    Kind kind = Kind::naive;
    std::size_t t = 1;  // three_step only
    std::size_t r = 0;
    std::size_t c = 0;

    static Factorization naive() { return {}; }
    static Factorization four_step(std::size_t rows, std::size_t cols) {
        return {Kind::four_step, 1, rows, cols};
    }
    static Factorization three_step(std::size_t t, std::size_t rows, std::size_t cols) {
        return {Kind::three_step, t, rows, cols};
    }
};

namespace detail {

/// Per-stage twiddle tables for one cyclic transform size, built from an
/// explicit root so that row/column sub-transforms stay coherent with the
/// full transform they decompose.
struct CyclicStages {
    std::size_t size = 1;
    std::vector<std::vector<std::uint32_t>> fw, fw_shoup;
    std::vector<std::vector<std::uint32_t>> iv, iv_shoup;

    CyclicStages() = default;
    CyclicStages(std::size_t size, ZqElement root, const Modulus& m);

    void forward(std::uint32_t* data, const Modulus& m) const;
    void inverse(std::uint32_t* data, const Modulus& m) const;  // unscaled, times `size`
};

}  // namespace detail

/// Precomputed state for negacyclic transforms over Z_q[x]/(x^n + 1).
///
/// The 2n-th root psi defines the ring embedding; the cyclic core runs on
/// omega = psi^2. Four-step and three-step plans additionally carry the
/// sub-transform tables and the cached twisting-factor matrices.
///
/// Output orderings: ntt_forward returns natural (evaluation-index) order.
/// ntt_four_step and ntt_three_step return the column-major storage their
/// hardware dataflows produce; reorder_to_natural maps back for comparison.
/// Plans are immutable after construction and safe to share across threads.
class NttPlan {
public:
    NttPlan(std::size_t n, Modulus modulus, Factorization f = Factorization::naive());

    std::size_t n() const { return n_; }
    int log_n() const { return log_n_; }
    const Modulus& modulus() const { return modulus_; }
    const Factorization& factorization() const { return factorization_; }
    ZqElement root() const { return psi_; }

    friend std::vector<std::uint32_t> ntt_forward(const std::vector<std::uint32_t>&,
                                                  const NttPlan&);
    friend std::vector<std::uint32_t> ntt_inverse(const std::vector<std::uint32_t>&,
                                                  const NttPlan&);
    friend std::vector<std::uint32_t> ntt_four_step(const std::vector<std::uint32_t>&,
                                                    const NttPlan&);
    friend std::vector<std::uint32_t> ntt_three_step(const std::vector<std::uint32_t>&,
                                                     const NttPlan&);
    friend std::vector<std::uint32_t> window_ntt_forward(const struct PipelineWindow&,
                                                         const std::vector<std::uint32_t>&,
                                                         const NttPlan&);

private:
    void twist_forward(std::uint32_t* data) const;

    std::size_t n_;
    int log_n_;
    Modulus modulus_;
    Factorization factorization_;
    ZqElement psi_;
    ZqElement omega_;

    std::vector<std::uint32_t> psi_pow_, psi_pow_shoup_;
    std::vector<std::uint32_t> psi_inv_scaled_, psi_inv_scaled_shoup_;  // psi^-j * n^-1
    detail::CyclicStages full_;

    // four-step / three-step state
    detail::CyclicStages t_stage_, r_stage_, c_stage_;
    std::vector<std::uint32_t> twist_rc_, twist_rc_shoup_;    // F[c*R + k1] = omega_M^(c*k1)
    std::vector<std::uint32_t> twist_t_, twist_t_shoup_;      // F3[k1*M + m] = omega^(k1*m)
};

/// Negacyclic forward transform, natural output order.
std::vector<std::uint32_t> ntt_forward(const std::vector<std::uint32_t>& coeffs,
                                       const NttPlan& plan);

/// Exact inverse of ntt_forward.
std::vector<std::uint32_t> ntt_inverse(const std::vector<std::uint32_t>& values,
                                       const NttPlan& plan);

/// Row-NTT / twist / transpose / row-NTT dataflow; column-major output.
std::vector<std::uint32_t> ntt_four_step(const std::vector<std::uint32_t>& coeffs,
                                         const NttPlan& plan);

/// T-point, R-point, C-point stages with two twist boundaries.
std::vector<std::uint32_t> ntt_three_step(const std::vector<std::uint32_t>& coeffs,
                                          const NttPlan& plan);

/// Maps a four-step/three-step result back to ntt_forward's ordering.
std::vector<std::uint32_t> reorder_to_natural(const std::vector<std::uint32_t>& values,
                                              const NttPlan& plan);

/// pointwise product in the transform domain: inverse(forward(a) . forward(b))
std::vector<std::uint32_t> negacyclic_multiply(const std::vector<std::uint32_t>& a,
                                               const std::vector<std::uint32_t>& b,
                                               const NttPlan& plan);

/// A contiguous run of stages of a physical butterfly circuit. Entering at
/// stage `entry_stage` and leaving at `exit_stage` turns the 2^total_log_n
/// circuit into `lanes` independent transforms of size
/// 2^(exit_stage - entry_stage).
struct PipelineWindow {
    int total_log_n = 0;
    int entry_stage = 0;
    int exit_stage = 0;
    std::size_t lanes = 1;
};

/// Tail window of the physical circuit: entry at total - target so the lanes
/// are interleaved round-robin across the ports, as the multi-entrance
/// hardware exposes them. Throws TargetTooLarge if target > physical.
PipelineWindow decompose_pipeline(int physical_log_n, int target_log_n);

/// Runs the physical butterfly network restricted to the window over a
/// length-2^total_log_n vector; each lane comes out equal to ntt_forward of
/// that lane under lane_plan (size 2^(exit-entry)).
std::vector<std::uint32_t> window_ntt_forward(const PipelineWindow& window,
                                              const std::vector<std::uint32_t>& data,
                                              const NttPlan& lane_plan);

/// Physical index of member m of lane `lane` under a window.
std::size_t window_position(const PipelineWindow& window, std::size_t lane, std::size_t member);

}  // namespace fhedse
