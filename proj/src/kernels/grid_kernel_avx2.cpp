// Compiled with -mavx2 -mfma; only entered after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "cpulse/errors.hpp"
#include "cpulse/kernels/grid_kernel.hpp"

namespace cpulse::kernels {

namespace {

// Cephes sin/cos: three-part pi/4 reduction and degree-6 minimax polynomials on [0, pi/4].
constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDp1 = 7.85398125648498535156e-1;
constexpr double kDp2 = 3.77489470793079817668e-8;
constexpr double kDp3 = 2.69515142907905952645e-15;

constexpr std::array<double, 6> kSinCoef{1.58962301576546568060e-10, -2.50507477628578072866e-8,
                                         2.75573136213857245213e-6,  -1.98412698295895385996e-4,
                                         8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr std::array<double, 6> kCosCoef{-1.13585365213876817300e-11, 2.08757008419747316778e-9,
                                         -2.75573141792967388112e-7,  2.48015872888517045348e-5,
                                         -1.38888888888730564116e-3,  4.16666666666665929218e-2};

inline __m256d horner(__m256d x, const std::array<double, 6>& c) {
    __m256d r = _mm256_set1_pd(c[0]);
    for (std::size_t k = 1; k < c.size(); ++k) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[k]));
    return r;
}

// x - m * floor(x / m) for non-negative integral x.
inline __m256d mod_floor(__m256d x, double m) {
    const __m256d mm = _mm256_set1_pd(m);
    return _mm256_fnmadd_pd(_mm256_floor_pd(_mm256_div_pd(x, mm)), mm, x);
}

inline void sincos_pd(__m256d x, __m256d& sin_out, __m256d& cos_out) {
    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    const __m256d ax = _mm256_andnot_pd(sign_bit, x);
    __m256d sin_sign = _mm256_and_pd(x, sign_bit);

    __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
    __m256d j = mod_floor(y, 8.0);
    const __m256d odd = mod_floor(j, 2.0);
    y = _mm256_add_pd(y, odd);
    j = mod_floor(_mm256_add_pd(j, odd), 8.0);

    const __m256d upper = _mm256_cmp_pd(j, _mm256_set1_pd(3.5), _CMP_GT_OQ);
    j = _mm256_sub_pd(j, _mm256_and_pd(upper, _mm256_set1_pd(4.0)));
    sin_sign = _mm256_xor_pd(sin_sign, _mm256_and_pd(upper, sign_bit));
    const __m256d second_half = _mm256_cmp_pd(j, _mm256_set1_pd(1.5), _CMP_GT_OQ);
    const __m256d cos_sign = _mm256_xor_pd(_mm256_and_pd(upper, sign_bit), _mm256_and_pd(second_half, sign_bit));

    __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp1), ax);
    z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp2), z);
    z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDp3), z);
    const __m256d zz = _mm256_mul_pd(z, z);

    const __m256d ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), horner(zz, kSinCoef), z);
    const __m256d pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), horner(zz, kCosCoef),
                                       _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

    const __m256d swap = _mm256_and_pd(_mm256_cmp_pd(j, _mm256_set1_pd(0.5), _CMP_GT_OQ),
                                       _mm256_cmp_pd(j, _mm256_set1_pd(2.5), _CMP_LT_OQ));
    sin_out = _mm256_xor_pd(_mm256_blendv_pd(ps, pc, swap), sin_sign);
    cos_out = _mm256_xor_pd(_mm256_blendv_pd(pc, ps, swap), cos_sign);
}

struct PulseConsts {
    double half_flip;
    double cos_phase;
    double sin_phase;
};

}  // namespace

void grid_avx2(const GridProblem& problem, std::span<double> out) {
    const std::size_t nr = problem.rfs.size();
    if (out.size() != problem.offsets.size() * nr) throw PreconditionError("grid output has the wrong size");
    if (nr == 0) return;

    std::vector<PulseConsts> pulses;
    pulses.reserve(problem.sequence.size());
    for (const Pulse& p : problem.sequence) pulses.push_back({0.5 * p.flip, std::cos(p.phase), std::sin(p.phase)});

    const __m256d tw = _mm256_set1_pd(problem.target.w());
    const __m256d tx = _mm256_set1_pd(problem.target.x());
    const __m256d ty = _mm256_set1_pd(problem.target.y());
    const __m256d tz = _mm256_set1_pd(problem.target.z());
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

    alignas(32) std::array<double, 4> rf_lane{};
    alignas(32) std::array<double, 4> result{};

    for (std::size_t i = 0; i < problem.offsets.size(); ++i) {
        const __m256d fo = _mm256_set1_pd(problem.offsets[i]);
        const __m256d fo2 = _mm256_mul_pd(fo, fo);
        for (std::size_t j = 0; j < nr; j += 4) {
            const std::size_t lanes = std::min<std::size_t>(4, nr - j);
            for (std::size_t l = 0; l < 4; ++l) rf_lane[l] = problem.rfs[j + std::min(l, lanes - 1)];
            const __m256d f1 = _mm256_load_pd(rf_lane.data());

            const __m256d field = _mm256_sqrt_pd(_mm256_fmadd_pd(f1, f1, fo2));
            const __m256d nonzero = _mm256_cmp_pd(field, zero, _CMP_GT_OQ);
            const __m256d inv = _mm256_and_pd(nonzero, _mm256_div_pd(one, field));
            const __m256d f1n = _mm256_mul_pd(f1, inv);
            const __m256d fon = _mm256_mul_pd(fo, inv);

            __m256d qw = one, qx = zero, qy = zero, qz = zero;
            for (const PulseConsts& p : pulses) {
                __m256d s, c;
                sincos_pd(_mm256_mul_pd(_mm256_set1_pd(p.half_flip), field), s, c);
                const __m256d sxy = _mm256_mul_pd(s, f1n);
                const __m256d pw = c;
                const __m256d px = _mm256_mul_pd(sxy, _mm256_set1_pd(p.cos_phase));
                const __m256d py = _mm256_mul_pd(sxy, _mm256_set1_pd(p.sin_phase));
                const __m256d pz = _mm256_mul_pd(s, fon);

                // q <- p * q (p acts after q).
                const __m256d nw = _mm256_sub_pd(
                    _mm256_fmsub_pd(pw, qw, _mm256_mul_pd(px, qx)), _mm256_fmadd_pd(py, qy, _mm256_mul_pd(pz, qz)));
                const __m256d nx = _mm256_add_pd(
                    _mm256_fmadd_pd(pw, qx, _mm256_mul_pd(px, qw)), _mm256_fmsub_pd(py, qz, _mm256_mul_pd(pz, qy)));
                const __m256d ny = _mm256_add_pd(
                    _mm256_fmsub_pd(pw, qy, _mm256_mul_pd(px, qz)), _mm256_fmadd_pd(py, qw, _mm256_mul_pd(pz, qx)));
                const __m256d nz = _mm256_add_pd(
                    _mm256_fmadd_pd(pw, qz, _mm256_mul_pd(px, qy)), _mm256_fmsub_pd(pz, qw, _mm256_mul_pd(py, qx)));
                qw = nw;
                qx = nx;
                qy = ny;
                qz = nz;
            }

            const __m256d norm2 = _mm256_fmadd_pd(
                qw, qw, _mm256_fmadd_pd(qx, qx, _mm256_fmadd_pd(qy, qy, _mm256_mul_pd(qz, qz))));
            const __m256d d =
                _mm256_fmadd_pd(qw, tw, _mm256_fmadd_pd(qx, tx, _mm256_fmadd_pd(qy, ty, _mm256_mul_pd(qz, tz))));
            const __m256d f = _mm256_min_pd(one, _mm256_div_pd(_mm256_and_pd(d, abs_mask), _mm256_sqrt_pd(norm2)));
            _mm256_store_pd(result.data(), f);
            for (std::size_t l = 0; l < lanes; ++l) out[i * nr + j + l] = result[l];
        }
    }
}

namespace detail {

void sincos_avx2(std::span<const double> x, std::span<double> s, std::span<double> c) {
    if (s.size() != x.size() || c.size() != x.size()) throw PreconditionError("sincos_avx2 span sizes differ");
    alignas(32) std::array<double, 4> in{}, so{}, co{};
    for (std::size_t i = 0; i < x.size(); i += 4) {
        const std::size_t lanes = std::min<std::size_t>(4, x.size() - i);
        for (std::size_t l = 0; l < 4; ++l) in[l] = l < lanes ? x[i + l] : 0.0;
        __m256d vs, vc;
        sincos_pd(_mm256_load_pd(in.data()), vs, vc);
        _mm256_store_pd(so.data(), vs);
        _mm256_store_pd(co.data(), vc);
        for (std::size_t l = 0; l < lanes; ++l) {
            s[i + l] = so[l];
            c[i + l] = co[l];
        }
    }
}

}  // namespace detail

}  // namespace cpulse::kernels
