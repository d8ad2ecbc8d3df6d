// SPDX-License-Identifier: Apache-2.0
#include "fhedse/selftest.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fhedse/biguint.hpp"
#include "fhedse/kernels.hpp"
#include "fhedse/ntt.hpp"
#include "fhedse/rns.hpp"
#include "fhedse/transpose.hpp"

namespace fhedse {

namespace {

std::uint64_t omulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    return std::uint64_t((unsigned __int128)a * b % q);
}

std::uint64_t opowmod(std::uint64_t b, std::uint64_t e, std::uint64_t q) {
    std::uint64_t r = 1 % q;
    b %= q;
    while (e) {
        if (e & 1) r = omulmod(r, b, q);
        b = omulmod(b, b, q);
        e >>= 1;
    }
    return r;
}

std::vector<std::uint32_t> random_vector(std::mt19937_64& rng, std::size_t n, std::uint32_t q) {
    std::uniform_int_distribution<std::uint32_t> dist(0, q - 1);
    std::vector<std::uint32_t> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

// Moduli for one transform size: a classic small NTT prime and a large one
// found by search. 7681 = 15 * 2^9 + 1 supports n <= 256.
std::vector<std::uint32_t> check_moduli(std::size_t n) {
    std::vector<std::uint32_t> qs;
    if (n <= 256) qs.push_back(7681);
    qs.push_back(std::uint32_t(find_ntt_moduli(1, std::max<std::uint64_t>(n, 256))[0].value()));
    return qs;
}

Factorization square_four_step(std::size_t n) {
    std::size_t r = 1;
    while (r * r < n) r <<= 1;
    return Factorization::four_step(r, n / r);
}

Factorization some_three_step(std::size_t n) {
    if (n < 8) return Factorization::three_step(1, 2, n / 2);
    std::size_t t = 2;
    std::size_t rest = n / t;
    std::size_t r = 1;
    while (r * r < rest) r <<= 1;
    return Factorization::three_step(t, r, rest / r);
}

}  // namespace

std::vector<std::uint32_t> oracle_negacyclic_dft(const std::vector<std::uint32_t>& a,
                                                 std::uint32_t q, std::uint32_t psi) {
    const std::size_t n = a.size();
    std::vector<std::uint32_t> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t acc = 0;
        const std::uint64_t step = 2 * k + 1;
        for (std::size_t j = 0; j < n; ++j) {
            std::uint64_t w = opowmod(psi, std::uint64_t(j) * step % (2 * n), q);
            acc = (acc + omulmod(a[j], w, q)) % q;
        }
        out[k] = std::uint32_t(acc);
    }
    return out;
}

std::vector<std::uint32_t> oracle_negacyclic_convolution(const std::vector<std::uint32_t>& a,
                                                         const std::vector<std::uint32_t>& b,
                                                         std::uint32_t q) {
    const std::size_t n = a.size();
    std::vector<std::uint64_t> acc(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::uint64_t p = omulmod(a[i], b[j], q);
            std::size_t k = i + j;
            if (k < n) {
                acc[k] = (acc[k] + p) % q;
            } else {
                acc[k - n] = (acc[k - n] + q - p) % q;  // x^n = -1
            }
        }
    }
    return std::vector<std::uint32_t>(acc.begin(), acc.end());
}

std::vector<CheckResult> run_ntt_checks(const NttCheckOptions& opt) {
    std::vector<CheckResult> results;
    CheckResult direct{"naive_matches_direct_oracle"};
    CheckResult four{"four_step_matches_naive"};
    CheckResult three{"three_step_matches_naive"};
    CheckResult conv{"convolution_theorem"};
    CheckResult round{"forward_inverse_roundtrip"};

    bool fault_left = opt.inject_fault;
    for (std::size_t n : opt.sizes) {
        for (std::uint32_t q : check_moduli(n)) {
            Modulus m(q);
            NttPlan naive(n, m);
            NttPlan fourp(n, m, square_four_step(n));
            NttPlan threep(n, m, some_three_step(n));
            std::mt19937_64 rng(opt.seed ^ (n * 0x9e3779b97f4a7c15ull) ^ q);
            for (std::size_t v = 0; v < opt.vectors; ++v) {
                auto x = random_vector(rng, n, q);
                auto ref = ntt_forward(x, naive);

                ++direct.cases;
                if (ref != oracle_negacyclic_dft(x, q, naive.root())) ++direct.failures;

                ++four.cases;
                auto f4 = reorder_to_natural(ntt_four_step(x, fourp), fourp);
                if (fault_left) {
                    f4[0] ^= 1;
                    fault_left = false;
                }
                if (f4 != ref) ++four.failures;

                ++three.cases;
                if (reorder_to_natural(ntt_three_step(x, threep), threep) != ref) {
                    ++three.failures;
                }

                ++round.cases;
                if (ntt_inverse(ref, naive) != x) ++round.failures;

                ++conv.cases;
                auto y = random_vector(rng, n, q);
                if (negacyclic_multiply(x, y, naive) !=
                    oracle_negacyclic_convolution(x, y, q)) {
                    ++conv.failures;
                }
            }
        }
    }

    // Multi-entrance/exit windows: every (physical, target) pair up to 2^8
    // must reproduce independent small transforms on interleaved lanes.
    CheckResult window{"window_lanes_independent"};
    {
        Modulus m(7681);
        std::mt19937_64 rng(opt.seed + 1);
        for (int p = 1; p <= 8; ++p) {
            for (int t = 0; t <= p; ++t) {
                PipelineWindow w = decompose_pipeline(p, t);
                NttPlan lane_plan(std::size_t(1) << t, m);
                auto data = random_vector(rng, std::size_t(1) << p, 7681);
                auto got = window_ntt_forward(w, data, lane_plan);
                for (std::size_t lane = 0; lane < w.lanes; ++lane) {
                    std::vector<std::uint32_t> in(lane_plan.n()), expect;
                    for (std::size_t mm = 0; mm < lane_plan.n(); ++mm) {
                        in[mm] = data[window_position(w, lane, mm)];
                    }
                    expect = ntt_forward(in, lane_plan);
                    ++window.cases;
                    for (std::size_t mm = 0; mm < lane_plan.n(); ++mm) {
                        if (got[window_position(w, lane, mm)] != expect[mm]) {
                            ++window.failures;
                            break;
                        }
                    }
                }
            }
        }
    }

    results = {direct, four, three, conv, round, window};
    return results;
}

std::vector<CheckResult> run_transpose_checks(const TransposeCheckOptions& opt) {
    std::vector<CheckResult> results;

    CheckResult tile{"l1_tile_transpose"};
    CheckResult invol{"l1_involution"};
    CheckResult rate{"l1_full_pipelining"};
    for (std::size_t d : opt.tile_sizes) {
        const std::size_t tiles = 3;
        PortStream in = make_tile_stream(kL1Ports, d, tiles);
        L1Result res = l1_transpose(in, d);
        const std::size_t bands = kL1Ports / d;
        for (std::size_t f = 0; f < res.out.frames.size(); ++f) {
            for (std::size_t p = 0; p < kL1Ports; ++p) {
                ++tile.cases;
                const auto& slot = res.out.frames[f][p];
                if (!slot.has_value()) {
                    ++tile.failures;
                    continue;
                }
                const std::size_t band = p / d;
                const std::uint32_t expect_tile =
                    std::uint32_t((f / d) * bands + band);
                // (r, c) emerges at position (c, r)
                if (slot->tile != expect_tile || slot->row != std::uint32_t(p % d) ||
                    slot->col != std::uint32_t(f % d)) {
                    ++tile.failures;
                }
            }
        }

        ++invol.cases;
        L1Result twice = l1_transpose(res.out, d);
        if (!(twice.out.frames == in.frames)) ++invol.failures;

        ++rate.cases;
        if (res.last_out - res.first_out != in.frames.size() + kL1Ports - 2) ++rate.failures;
    }

    CheckResult routes{"static_routing_formulas"};
    {
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < 128; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                ++routes.cases;
                std::size_t g = route_l2(i, j);
                if (g != 4 * i + j || !seen.insert(g).second) ++routes.failures;
            }
        }
        if (seen.size() != 512) ++routes.failures;
        seen.clear();
        for (std::size_t i = 0; i < 256; ++i) {
            for (std::size_t j = 0; j < 8; ++j) {
                ++routes.cases;
                std::size_t g = route_l3(i, j);
                if (g != 8 * i + j || !seen.insert(g).second) ++routes.failures;
            }
        }
        if (seen.size() != 2048) ++routes.failures;
    }

    CheckResult dist{"distribute_partition"};
    {
        // 8192-point shallow stream as a 128x64 matrix, one column per frame
        PortStream cols(128, 64);
        for (std::size_t c = 0; c < 64; ++c) {
            for (std::size_t r = 0; r < 128; ++r) {
                cols.frames[c][r] = TransposeElement{0, std::uint32_t(r), std::uint32_t(c), 0};
            }
        }
        auto parts = distribute(cols, WiringMode::shallow, 8192);
        std::size_t total = 0;
        for (std::size_t cl = 0; cl < parts.size(); ++cl) {
            for (const auto& frame : parts[cl].frames) {
                for (const auto& slot : frame) {
                    ++dist.cases;
                    if (!slot || slot->col % 4 != cl) ++dist.failures;
                    ++total;
                }
            }
        }
        if (total != 8192) ++dist.failures;
        // column 5 lands in cluster 1
        ++dist.cases;
        bool found = false;
        for (const auto& frame : parts[1].frames) {
            if (frame[0] && frame[0]->col == 5) found = true;
        }
        if (!found) ++dist.failures;
        // deep mode: 64 columns round-robin over 8 clusters
        auto deep_parts = distribute(cols, WiringMode::deep, 8192);
        ++dist.cases;
        for (const auto& part : deep_parts) {
            if (part.frames.size() != 8) ++dist.failures;
        }
    }

    CheckResult bijection{"distribute_l1_route_bijection"};
    {
        // full shallow path: distribute columns, L1-transpose each cluster's
        // 32-port blocks, then follow the static L2 wiring; every tag must
        // appear exactly once on the global ports. 128 columns give each
        // cluster a full 32x32 tile per block.
        PortStream cols(128, 128);
        std::uint32_t tag = 0;
        for (auto& frame : cols.frames) {
            for (auto& slot : frame) slot = TransposeElement{tag / 128, tag % 128, 0, tag}, ++tag;
        }
        auto parts = distribute(cols, WiringMode::shallow, 128 * 128);
        std::set<std::uint64_t> seen;
        std::set<std::size_t> ports_used;
        for (std::size_t cl = 0; cl < parts.size(); ++cl) {
            for (std::size_t block = 0; block < 4; ++block) {
                PortStream sub(kL1Ports, parts[cl].frames.size());
                for (std::size_t f = 0; f < sub.frames.size(); ++f) {
                    for (std::size_t p = 0; p < kL1Ports; ++p) {
                        sub.frames[f][p] = parts[cl].frames[f][block * kL1Ports + p];
                    }
                }
                L1Result lr = l1_transpose(sub, kL1Ports);
                for (std::size_t f = 0; f < lr.out.frames.size(); ++f) {
                    for (std::size_t p = 0; p < kL1Ports; ++p) {
                        ++bijection.cases;
                        if (!lr.out.frames[f][p]) {
                            ++bijection.failures;
                            continue;
                        }
                        std::size_t global = route_l2(block * kL1Ports + p, cl);
                        ports_used.insert(global);
                        if (!seen.insert(lr.out.frames[f][p]->payload).second) {
                            ++bijection.failures;
                        }
                    }
                }
            }
        }
        if (seen.size() != 128 * 128) ++bijection.failures;
        if (ports_used.size() != 512) ++bijection.failures;
    }

    results = {tile, invol, rate, routes, dist, bijection};
    return results;
}

std::vector<CheckResult> run_rns_checks(const RnsCheckOptions& opt) {
    std::vector<CheckResult> results;
    std::mt19937_64 rng(opt.seed);

    CheckResult roundtrip{"crt_roundtrip"};
    {
        RnsBasis basis({97, 101, 103});
        const BigUint q_total = basis.product();
        const std::size_t bits = q_total.bit_length();
        for (std::size_t c = 0; c < 1000; ++c) {
            BigUint x;
            do {
                x = BigUint();
                for (std::size_t b = 0; b < bits; ++b) {
                    if (rng() & 1) x.set_bit(b);
                }
            } while (x >= q_total);
            auto poly = rns_decompose({x}, basis);
            ++roundtrip.cases;
            if (!(crt_reconstruct(poly)[0] == x)) ++roundtrip.failures;
        }
    }

    CheckResult example{"bconv_small_example"};
    {
        RnsBasis src({5, 7});
        RnsBasis dst({11});
        auto poly = rns_decompose({BigUint(12)}, src);
        auto out = bconv(poly, dst);
        ++example.cases;
        if (out.row(0)[0] != 1) ++example.failures;
    }

    CheckResult range{"bconv_error_multiple_of_q"};
    {
        RnsBasis src({97, 101, 103});
        RnsBasis dst({11, 13});
        const BigUint q_total = src.product();
        const std::size_t bits = q_total.bit_length();
        const std::size_t levels = src.size();
        for (std::size_t c = 0; c < opt.random_cases; ++c) {
            BigUint x;
            do {
                x = BigUint();
                for (std::size_t b = 0; b < bits; ++b) {
                    if (rng() & 1) x.set_bit(b);
                }
            } while (x >= q_total);
            auto out = bconv(rns_decompose({x}, src), dst);
            ++range.cases;
            // out == x + e*Q (mod p_j) for one e in [0, levels), all rows
            bool ok = true;
            for (std::size_t j = 0; j < dst.size(); ++j) {
                const std::uint32_t pj = dst[j].value();
                const std::uint32_t x_mod = x.mod_small(pj);
                const std::uint32_t q_mod = q_total.mod_small(pj);
                bool row_ok = false;
                for (std::uint32_t e = 0; e < levels; ++e) {
                    std::uint32_t expect =
                        std::uint32_t((std::uint64_t(x_mod) + std::uint64_t(e) * q_mod) % pj);
                    if (out.row(j)[0] == expect) {
                        row_ok = true;
                        break;
                    }
                }
                ok = ok && row_ok;
            }
            if (!ok) ++range.failures;
        }
    }

    results = {roundtrip, example, range};
    return results;
}

std::vector<CheckResult> run_kernel_checks(std::uint64_t seed) {
    std::vector<CheckResult> results;
    CheckResult eq{"simd_matches_scalar"};
#if defined(FHEDSE_HAVE_AVX2)
    if (kernels::avx2_available()) {
        std::mt19937_64 rng(seed);
        const std::vector<std::uint32_t> qs = {17, 97, 7681, 12289, 2013265921u, 4293918721u};
        const std::vector<std::size_t> lens = {0, 1, 3, 7, 8, 9, 16, 31, 64, 1000};
        for (std::uint32_t qv : qs) {
            Modulus m(qv);
            for (std::size_t len : lens) {
                auto a = random_vector(rng, len, qv);
                auto b = random_vector(rng, len, qv);
                std::uniform_int_distribution<std::uint32_t> dist(0, qv - 1);
                std::uint32_t w = dist(rng);
                std::vector<std::uint32_t> ws(len), wss(len);
                for (std::size_t i = 0; i < len; ++i) {
                    ws[i] = dist(rng);
                    wss[i] = m.shoup(ws[i]);
                }
                auto cmp = [&](auto&& scalar_fn, auto&& avx_fn) {
                    ++eq.cases;
                    if (scalar_fn() != avx_fn()) ++eq.failures;
                };
                using V = std::vector<std::uint32_t>;
                cmp([&] { V o(len); kernels::scalar::mod_add(o.data(), a.data(), b.data(), len, m); return o; },
                    [&] { V o(len); kernels::avx2::mod_add(o.data(), a.data(), b.data(), len, m); return o; });
                cmp([&] { V o(len); kernels::scalar::mod_sub(o.data(), a.data(), b.data(), len, m); return o; },
                    [&] { V o(len); kernels::avx2::mod_sub(o.data(), a.data(), b.data(), len, m); return o; });
                cmp([&] { V o(len); kernels::scalar::mod_mul(o.data(), a.data(), b.data(), len, m); return o; },
                    [&] { V o(len); kernels::avx2::mod_mul(o.data(), a.data(), b.data(), len, m); return o; });
                cmp([&] { V o(len); kernels::scalar::mod_mul_table(o.data(), a.data(), ws.data(), wss.data(), len, m); return o; },
                    [&] { V o(len); kernels::avx2::mod_mul_table(o.data(), a.data(), ws.data(), wss.data(), len, m); return o; });
                cmp([&] { V o(len); kernels::scalar::mod_mul_const(o.data(), a.data(), w, m.shoup(w), len, m); return o; },
                    [&] { V o(len); kernels::avx2::mod_mul_const(o.data(), a.data(), w, m.shoup(w), len, m); return o; });
                cmp([&] { V o = b; kernels::scalar::mod_mac_const(o.data(), a.data(), w, m.shoup(w), len, m); return o; },
                    [&] { V o = b; kernels::avx2::mod_mac_const(o.data(), a.data(), w, m.shoup(w), len, m); return o; });
                cmp([&] { V lo = a, hi = b; kernels::scalar::butterfly_ct_table(lo.data(), hi.data(), ws.data(), wss.data(), len, m); lo.insert(lo.end(), hi.begin(), hi.end()); return lo; },
                    [&] { V lo = a, hi = b; kernels::avx2::butterfly_ct_table(lo.data(), hi.data(), ws.data(), wss.data(), len, m); lo.insert(lo.end(), hi.begin(), hi.end()); return lo; });
                cmp([&] { V lo = a, hi = b; kernels::scalar::butterfly_gs_table(lo.data(), hi.data(), ws.data(), wss.data(), len, m); lo.insert(lo.end(), hi.begin(), hi.end()); return lo; },
                    [&] { V lo = a, hi = b; kernels::avx2::butterfly_gs_table(lo.data(), hi.data(), ws.data(), wss.data(), len, m); lo.insert(lo.end(), hi.begin(), hi.end()); return lo; });
            }
        }
    } else {
        eq.cases = 1;
        eq.detail = "avx2 not available at runtime; scalar-only";
    }
#else
    eq.cases = 1;
    eq.detail = "built without an AVX2 backend; scalar-only";
#endif
    results.push_back(eq);
    return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed(); });
}

}  // namespace fhedse
