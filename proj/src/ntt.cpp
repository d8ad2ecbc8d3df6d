// SPDX-License-Identifier: Apache-2.0
#include "fhedse/ntt.hpp"

#include <string>

#include "fhedse/kernels.hpp"

namespace fhedse {

namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

int log2_exact(std::size_t v) {
    int l = 0;
    while ((std::size_t(1) << l) < v) ++l;
    return l;
}

void bit_reverse_permute(std::uint32_t* data, std::size_t n) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
}

// table[i] = base^i alongside Shoup companions
void fill_power_table(std::vector<std::uint32_t>& pow, std::vector<std::uint32_t>& shoup,
                      ZqElement base, std::size_t count, const Modulus& m) {
    pow.resize(count);
    shoup.resize(count);
    ZqElement cur = 1;
    for (std::size_t i = 0; i < count; ++i) {
        pow[i] = cur;
        shoup[i] = m.shoup(cur);
        cur = m.mul(cur, base);
    }
}

}  // namespace

namespace detail {

CyclicStages::CyclicStages(std::size_t size, ZqElement root, const Modulus& m) : size(size) {
    const int stages = log2_exact(size);
    fw.resize(stages);
    fw_shoup.resize(stages);
    iv.resize(stages);
    iv_shoup.resize(stages);
    const ZqElement root_inv = size > 1 ? m.inv(root) : 1;
    for (int s = 0; s < stages; ++s) {
        const std::size_t half = std::size_t(1) << s;
        const std::size_t step = size >> (s + 1);  // exponent stride at this stage
        fw[s].resize(half);
        fw_shoup[s].resize(half);
        iv[s].resize(half);
        iv_shoup[s].resize(half);
        for (std::size_t j = 0; j < half; ++j) {
            ZqElement w = m.pow(root, std::uint64_t(j) * step);
            ZqElement wi = m.pow(root_inv, std::uint64_t(j) * step);
            fw[s][j] = w;
            fw_shoup[s][j] = m.shoup(w);
            iv[s][j] = wi;
            iv_shoup[s][j] = m.shoup(wi);
        }
    }
}

void CyclicStages::forward(std::uint32_t* data, const Modulus& m) const {
    bit_reverse_permute(data, size);
    for (std::size_t s = 0; s < fw.size(); ++s) {
        const std::size_t half = std::size_t(1) << s;
        const std::size_t len = half << 1;
        for (std::size_t b = 0; b < size; b += len) {
            kernels::butterfly_ct_table(data + b, data + b + half, fw[s].data(),
                                        fw_shoup[s].data(), half, m);
        }
    }
}

void CyclicStages::inverse(std::uint32_t* data, const Modulus& m) const {
    for (std::size_t s = fw.size(); s-- > 0;) {
        const std::size_t half = std::size_t(1) << s;
        const std::size_t len = half << 1;
        for (std::size_t b = 0; b < size; b += len) {
            kernels::butterfly_gs_table(data + b, data + b + half, iv[s].data(),
                                        iv_shoup[s].data(), half, m);
        }
    }
    bit_reverse_permute(data, size);
}

}  // namespace detail

NttPlan::NttPlan(std::size_t n, Modulus modulus, Factorization f)
    : n_(n), modulus_(modulus), factorization_(f) {
    if (!is_pow2(n)) throw BadSize("transform size must be a power of two: " + std::to_string(n));
    log_n_ = log2_exact(n);
    const Modulus& m = modulus_;

    psi_ = primitive_root_of_unity(2 * n, m);  // throws NoSuchRoot if 2n does not divide q-1
    omega_ = m.mul(psi_, psi_);

    fill_power_table(psi_pow_, psi_pow_shoup_, psi_, n, m);
    const ZqElement n_inv = m.inv(ZqElement(n % m.value()));
    const ZqElement psi_inv = m.inv(psi_);
    psi_inv_scaled_.resize(n);
    psi_inv_scaled_shoup_.resize(n);
    ZqElement cur = n_inv;
    for (std::size_t i = 0; i < n; ++i) {
        psi_inv_scaled_[i] = cur;
        psi_inv_scaled_shoup_[i] = m.shoup(cur);
        cur = m.mul(cur, psi_inv);
    }

    full_ = detail::CyclicStages(n, omega_, m);

    switch (f.kind) {
        case Factorization::Kind::naive:
            break;
        case Factorization::Kind::four_step: {
            if (!is_pow2(f.r) || !is_pow2(f.c) || f.r * f.c != n) {
                throw BadFactorization("four-step factors must be powers of two with R*C = n");
            }
            r_stage_ = detail::CyclicStages(f.r, m.pow(omega_, f.c), m);
            c_stage_ = detail::CyclicStages(f.c, m.pow(omega_, f.r), m);
            // F[c][k1] = omega^(c*k1), stored row-per-column for contiguous use
            twist_rc_.resize(n);
            twist_rc_shoup_.resize(n);
            for (std::size_t c = 0; c < f.c; ++c) {
                for (std::size_t k1 = 0; k1 < f.r; ++k1) {
                    ZqElement w = m.pow(omega_, std::uint64_t(c) * k1);
                    twist_rc_[c * f.r + k1] = w;
                    twist_rc_shoup_[c * f.r + k1] = m.shoup(w);
                }
            }
            break;
        }
        case Factorization::Kind::three_step: {
            if (!is_pow2(f.t) || !is_pow2(f.r) || !is_pow2(f.c) || f.t * f.r * f.c != n) {
                throw BadFactorization("three-step factors must be powers of two with T*R*C = n");
            }
            const std::size_t mdim = f.r * f.c;
            const ZqElement omega_m = m.pow(omega_, f.t);
            t_stage_ = detail::CyclicStages(f.t, m.pow(omega_, mdim), m);
            r_stage_ = detail::CyclicStages(f.r, m.pow(omega_m, f.c), m);
            c_stage_ = detail::CyclicStages(f.c, m.pow(omega_m, f.r), m);
            twist_t_.resize(n);
            twist_t_shoup_.resize(n);
            for (std::size_t k1 = 0; k1 < f.t; ++k1) {
                for (std::size_t mm = 0; mm < mdim; ++mm) {
                    ZqElement w = m.pow(omega_, std::uint64_t(k1) * mm);
                    twist_t_[k1 * mdim + mm] = w;
                    twist_t_shoup_[k1 * mdim + mm] = m.shoup(w);
                }
            }
            twist_rc_.resize(mdim);
            twist_rc_shoup_.resize(mdim);
            for (std::size_t c = 0; c < f.c; ++c) {
                for (std::size_t k1 = 0; k1 < f.r; ++k1) {
                    ZqElement w = m.pow(omega_m, std::uint64_t(c) * k1);
                    twist_rc_[c * f.r + k1] = w;
                    twist_rc_shoup_[c * f.r + k1] = m.shoup(w);
                }
            }
            break;
        }
    }
}

void NttPlan::twist_forward(std::uint32_t* data) const {
    kernels::mod_mul_table(data, data, psi_pow_.data(), psi_pow_shoup_.data(), n_, modulus_);
}

namespace {

// Shared core of the four-step dataflow on an already-twisted row of length
// R*C: R-point NTTs over strided columns, twist, transpose, C-point NTTs on
// contiguous rows. Output is column-major: position k1*C + k2 holds natural
// index k1 + R*k2.
void four_step_cyclic(std::uint32_t* data, std::size_t r, std::size_t c,
                      const detail::CyclicStages& r_stage, const detail::CyclicStages& c_stage,
                      const std::uint32_t* twist, const std::uint32_t* twist_shoup,
                      const Modulus& m) {
    const std::size_t n = r * c;
    std::vector<std::uint32_t> col(r);
    std::vector<std::uint32_t> buf(n);
    for (std::size_t cc = 0; cc < c; ++cc) {
        for (std::size_t rr = 0; rr < r; ++rr) col[rr] = data[rr * c + cc];
        r_stage.forward(col.data(), m);
        // twist row cc, then lay out transposed so the C-point pass is contiguous
        kernels::mod_mul_table(col.data(), col.data(), twist + cc * r, twist_shoup + cc * r, r,
                               m);
        for (std::size_t k1 = 0; k1 < r; ++k1) buf[k1 * c + cc] = col[k1];
    }
    for (std::size_t k1 = 0; k1 < r; ++k1) {
        c_stage.forward(buf.data() + k1 * c, m);
    }
    std::copy(buf.begin(), buf.end(), data);
}

}  // namespace

std::vector<std::uint32_t> ntt_forward(const std::vector<std::uint32_t>& coeffs,
                                       const NttPlan& plan) {
    if (coeffs.size() != plan.n()) {
        throw LengthMismatch("expected " + std::to_string(plan.n()) + " coefficients, got " +
                             std::to_string(coeffs.size()));
    }
    std::vector<std::uint32_t> out = coeffs;
    plan.twist_forward(out.data());
    plan.full_.forward(out.data(), plan.modulus());
    return out;
}

std::vector<std::uint32_t> ntt_inverse(const std::vector<std::uint32_t>& values,
                                       const NttPlan& plan) {
    if (values.size() != plan.n()) {
        throw LengthMismatch("expected " + std::to_string(plan.n()) + " values, got " +
                             std::to_string(values.size()));
    }
    std::vector<std::uint32_t> out = values;
    plan.full_.inverse(out.data(), plan.modulus());
    kernels::mod_mul_table(out.data(), out.data(), plan.psi_inv_scaled_.data(),
                           plan.psi_inv_scaled_shoup_.data(), plan.n(), plan.modulus());
    return out;
}

std::vector<std::uint32_t> ntt_four_step(const std::vector<std::uint32_t>& coeffs,
                                         const NttPlan& plan) {
    if (plan.factorization().kind != Factorization::Kind::four_step) {
        throw BadFactorization("plan does not carry a four-step factorization");
    }
    if (coeffs.size() != plan.n()) {
        throw LengthMismatch("expected " + std::to_string(plan.n()) + " coefficients");
    }
    std::vector<std::uint32_t> out = coeffs;
    plan.twist_forward(out.data());
    four_step_cyclic(out.data(), plan.factorization().r, plan.factorization().c, plan.r_stage_,
                     plan.c_stage_, plan.twist_rc_.data(), plan.twist_rc_shoup_.data(),
                     plan.modulus());
    return out;
}

std::vector<std::uint32_t> ntt_three_step(const std::vector<std::uint32_t>& coeffs,
                                          const NttPlan& plan) {
    if (plan.factorization().kind != Factorization::Kind::three_step) {
        throw BadFactorization("plan does not carry a three-step factorization");
    }
    if (coeffs.size() != plan.n()) {
        throw LengthMismatch("expected " + std::to_string(plan.n()) + " coefficients");
    }
    const Factorization& f = plan.factorization();
    const std::size_t mdim = f.r * f.c;
    const Modulus& m = plan.modulus();

    std::vector<std::uint32_t> out = coeffs;
    plan.twist_forward(out.data());

    // T-point NTTs over stride-M columns, gathered row-per-k1
    std::vector<std::uint32_t> col(f.t);
    std::vector<std::uint32_t> buf(plan.n());
    for (std::size_t mm = 0; mm < mdim; ++mm) {
        for (std::size_t tt = 0; tt < f.t; ++tt) col[tt] = out[tt * mdim + mm];
        plan.t_stage_.forward(col.data(), m);
        for (std::size_t k1 = 0; k1 < f.t; ++k1) buf[k1 * mdim + mm] = col[k1];
    }
    // first synchronization boundary: twist, then an M-point four-step per row
    for (std::size_t k1 = 0; k1 < f.t; ++k1) {
        std::uint32_t* row = buf.data() + k1 * mdim;
        kernels::mod_mul_table(row, row, plan.twist_t_.data() + k1 * mdim,
                               plan.twist_t_shoup_.data() + k1 * mdim, mdim, m);
        four_step_cyclic(row, f.r, f.c, plan.r_stage_, plan.c_stage_, plan.twist_rc_.data(),
                         plan.twist_rc_shoup_.data(), m);
    }
    return buf;
}

std::vector<std::uint32_t> reorder_to_natural(const std::vector<std::uint32_t>& values,
                                              const NttPlan& plan) {
    if (values.size() != plan.n()) throw LengthMismatch("reorder_to_natural: size mismatch");
    const Factorization& f = plan.factorization();
    std::vector<std::uint32_t> out(values.size());
    switch (f.kind) {
        case Factorization::Kind::naive:
            out = values;
            break;
        case Factorization::Kind::four_step:
            for (std::size_t k1 = 0; k1 < f.r; ++k1) {
                for (std::size_t k2 = 0; k2 < f.c; ++k2) {
                    out[k1 + f.r * k2] = values[k1 * f.c + k2];
                }
            }
            break;
        case Factorization::Kind::three_step: {
            const std::size_t mdim = f.r * f.c;
            for (std::size_t k1 = 0; k1 < f.t; ++k1) {
                for (std::size_t j1 = 0; j1 < f.r; ++j1) {
                    for (std::size_t j2 = 0; j2 < f.c; ++j2) {
                        out[k1 + f.t * j1 + f.t * f.r * j2] = values[k1 * mdim + j1 * f.c + j2];
                    }
                }
            }
            break;
        }
    }
    return out;
}

std::vector<std::uint32_t> negacyclic_multiply(const std::vector<std::uint32_t>& a,
                                               const std::vector<std::uint32_t>& b,
                                               const NttPlan& plan) {
    std::vector<std::uint32_t> fa = ntt_forward(a, plan);
    std::vector<std::uint32_t> fb = ntt_forward(b, plan);
    kernels::mod_mul(fa.data(), fa.data(), fb.data(), plan.n(), plan.modulus());
    return ntt_inverse(fa, plan);
}

PipelineWindow decompose_pipeline(int physical_log_n, int target_log_n) {
    if (physical_log_n < 0 || target_log_n < 0) {
        throw BadSize("pipeline window sizes must be non-negative");
    }
    if (target_log_n > physical_log_n) {
        throw TargetTooLarge("target 2^" + std::to_string(target_log_n) +
                             " exceeds physical circuit 2^" + std::to_string(physical_log_n));
    }
    PipelineWindow w;
    w.total_log_n = physical_log_n;
    w.entry_stage = physical_log_n - target_log_n;
    w.exit_stage = physical_log_n;
    w.lanes = std::size_t(1) << (physical_log_n - target_log_n);
    return w;
}

std::size_t window_position(const PipelineWindow& w, std::size_t lane, std::size_t member) {
    const std::size_t entry_mask = (std::size_t(1) << w.entry_stage) - 1;
    const std::size_t low = lane & entry_mask;
    const std::size_t high = lane >> w.entry_stage;
    return low | (member << w.entry_stage) | (high << w.exit_stage);
}

std::vector<std::uint32_t> window_ntt_forward(const PipelineWindow& w,
                                              const std::vector<std::uint32_t>& data,
                                              const NttPlan& lane_plan) {
    const std::size_t physical = std::size_t(1) << w.total_log_n;
    const int target_log = w.exit_stage - w.entry_stage;
    const std::size_t target = std::size_t(1) << target_log;
    if (w.entry_stage < 0 || w.exit_stage > w.total_log_n || w.entry_stage > w.exit_stage) {
        throw InvariantViolation("malformed pipeline window");
    }
    if (data.size() != physical) {
        throw LengthMismatch("window input must match the physical circuit size");
    }
    if (lane_plan.n() != target) {
        throw LengthMismatch("lane plan size does not match the window's sub-transform");
    }
    const Modulus& m = lane_plan.modulus();
    std::vector<std::uint32_t> out = data;

    // Data preparation at the entry ports: per-lane psi twist, then the
    // in-lane bit-reversal the butterfly wiring expects.
    for (std::size_t lane = 0; lane < w.lanes; ++lane) {
        for (std::size_t mm = 0; mm < target; ++mm) {
            std::size_t p = window_position(w, lane, mm);
            out[p] = m.mul(out[p], lane_plan.psi_pow_[mm]);
        }
        for (std::size_t i = 1, j = 0; i < target; ++i) {
            std::size_t bit = target >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) {
                std::swap(out[window_position(w, lane, i)], out[window_position(w, lane, j)]);
            }
        }
    }

    // Physical stages entry..exit-1. Every index pairs with its partner at
    // distance 2^s; the twiddle is the sub-transform twiddle selected by the
    // index bits inside the window.
    for (int s = w.entry_stage; s < w.exit_stage; ++s) {
        const int sigma = s - w.entry_stage;
        const std::size_t dist = std::size_t(1) << s;
        const std::size_t half_mask = (std::size_t(1) << sigma) - 1;
        for (std::size_t i = 0; i < physical; ++i) {
            if ((i & dist) != 0) continue;
            const std::size_t j = (i >> w.entry_stage) & half_mask;
            const ZqElement tw = lane_plan.full_.fw[std::size_t(sigma)][j];
            auto [u, v] = butterfly_ct(out[i], out[i + dist], tw, m);
            out[i] = u;
            out[i + dist] = v;
        }
    }
    return out;
}

}  // namespace fhedse
